import numpy as np
import pytest

from prodhardy import (
    DyadicInterval,
    DyadicRectangle,
    LiftEngine,
    SampledFunction2D,
    band_nodes,
    continuous_transform_values,
    convolve_psi_y,
    lift_family,
    psi_y_kernel,
    rect_slices,
    s_function,
    s_r_squared,
    sample_function,
    window_grid,
)


def character(grid, xi):
    return sample_function(
        lambda x, y: np.exp(1j * (xi[0] * x + xi[1] * y)), grid)


def interior_slice(grid, y, pad=2):
    m1 = int(np.ceil(y[0] / grid.cell[0])) + pad
    m2 = int(np.ceil(y[1] / grid.cell[1])) + pad
    return (slice(m1, -m1), slice(m2, -m2))


class TestKernel:
    def test_unit_scales_match_profile_tensor(self, profile):
        grid = window_grid(-1.0, 1.0, 256)
        k = psi_y_kernel(profile, (1.0, 1.0), grid, discretization="pointwise")
        expected = np.outer(profile.evaluate(grid.x1), profile.evaluate(grid.x2))
        assert np.array_equal(k.values.real, expected)
        assert np.max(np.abs(k.values.imag)) == 0.0

    def test_support(self, profile):
        grid = window_grid(-2.0, 2.0, 256)
        k = psi_y_kernel(profile, (0.5, 1.0), grid)
        x_out = np.abs(grid.x1) > 0.5 + grid.cell[0]
        assert np.max(np.abs(k.values[x_out, :])) == 0.0

    def test_axis_cancellation(self, profile):
        # zero integral along every row and column (cell-average kernels)
        grid = window_grid(-1.0, 1.0, 256)
        k = psi_y_kernel(profile, (0.5, 0.25), grid)
        assert np.max(np.abs(k.values.sum(axis=0) * k.cell[0])) < 1e-10
        assert np.max(np.abs(k.values.sum(axis=1) * k.cell[1])) < 1e-10

    def test_l1_mass_scale_free_on_proportional_grids(self, profile):
        # change of variables: on grids proportional to the scale the mass
        # sums are identical term by term
        masses = []
        for y in (1.0, 0.5, 0.25):
            n = 512
            h = 2 * y / n
            grid = window_grid(-y, y, n)
            k = psi_y_kernel(profile, (y, y), grid)
            masses.append(float(np.sum(np.abs(k.values))) * h * h)
        assert abs(masses[0] - masses[1]) < 1e-8
        assert abs(masses[0] - masses[2]) < 1e-8

    def test_l1_mass_on_fixed_grid_near_profile_mass(self, profile):
        # fixed-grid sums agree with the continuum mass at quadrature order
        grid = window_grid(-1.0, 1.0, 512)
        k = psi_y_kernel(profile, (0.5, 0.5), grid)
        mass = float(np.sum(np.abs(k.values))) * k.cell[0] * k.cell[1]
        x = np.linspace(-1, 1, 1 << 16)
        l1_profile = float(np.trapezoid(np.abs(profile.evaluate(x)), x)) ** 2
        assert abs(mass - l1_profile) / l1_profile < 1e-3

    def test_under_resolution_rejected(self, profile):
        with pytest.raises(ValueError, match="resolve"):
            psi_y_kernel(profile, (0.01, 1.0), window_grid(-1.0, 1.0, 64))


class TestConvolution:
    def test_constant_annihilated_in_interior(self, profile):
        grid = window_grid(-2.0, 2.0, 256)
        const = sample_function(lambda x, y: 3.0 - 1.0j + 0 * x * y, grid)
        lift = convolve_psi_y(const, profile, (1.0, 0.5))
        sl = interior_slice(grid, (1.0, 0.5))
        assert np.max(np.abs(lift.values[sl])) < 1e-12

    def test_character_eigenvalue_via_sampled_kernel(self, profile):
        # the discrete eigenvalue is exactly (2 pi)^2 times the continuous
        # transform of the sampled kernel at the character frequency
        grid = window_grid(-2.0, 2.0, 256)
        xi = (2.5, -1.5)
        y = (1.0, 0.5)
        lam = character(grid, xi)
        lift = convolve_psi_y(lam, profile, y)
        kgrid = window_grid(-2.0, 2.0, 256)
        kern = psi_y_kernel(profile, y, kgrid)
        eig = (2 * np.pi) ** 2 * continuous_transform_values(
            kern, np.array([xi[0]]), np.array([xi[1]]))[0, 0]
        sl = interior_slice(grid, y)
        X1, X2 = np.meshgrid(grid.x1, grid.x2, indexing="ij")
        expected = np.exp(1j * (xi[0] * X1 + xi[1] * X2)) * eig
        err = np.max(np.abs(lift.values[sl] - expected[sl]))
        assert err / abs(eig) < 1e-10

    def test_character_eigenvalue_vs_continuum(self, profile):
        # against the continuum transform the error is quadrature-order
        grid = window_grid(-2.0, 2.0, 512)
        xi = (2.5, -1.5)
        y = (1.0, 0.5)
        lam = character(grid, xi)
        lift = convolve_psi_y(lam, profile, y)
        pred = (2 * np.pi) ** 2 * float(
            profile.transform(np.array([y[0] * xi[0]]))[0]
            * profile.transform(np.array([y[1] * xi[1]]))[0])
        sl = interior_slice(grid, y)
        X1, X2 = np.meshgrid(grid.x1, grid.x2, indexing="ij")
        expected = np.exp(1j * (xi[0] * X1 + xi[1] * X2)) * pred
        err = np.max(np.abs(lift.values[sl] - expected[sl]))
        assert err / abs(pred) < 2e-4

    def test_linearity_exact(self, profile, rng):
        grid = window_grid(-2.0, 2.0, 128)
        a = character(grid, (1.0, 2.0))
        b = character(grid, (-0.5, 1.5))
        combo = a.with_values(2.0 * a.values + (1.0 - 1.0j) * b.values)
        y = (0.5, 0.5)
        la = convolve_psi_y(a, profile, y).values
        lb = convolve_psi_y(b, profile, y).values
        lc = convolve_psi_y(combo, profile, y).values
        scale = np.max(np.abs(lc)) + 1e-30
        assert np.max(np.abs(lc - 2.0 * la - (1.0 - 1.0j) * lb)) / scale < 1e-12

    def test_scale_below_resolution_rejected(self, profile):
        grid = window_grid(-2.0, 2.0, 64)
        lam = character(grid, (1.0, 0.0))
        with pytest.raises(ValueError, match="resolution"):
            convolve_psi_y(lam, profile, (0.05, 1.0))

    def test_scale_beyond_window_rejected(self, profile):
        grid = window_grid(-2.0, 2.0, 64)
        lam = character(grid, (1.0, 0.0))
        with pytest.raises(ValueError, match="window"):
            convolve_psi_y(lam, profile, (8.0, 1.0))


class TestSFunction:
    def test_zero_input(self, profile):
        grid = window_grid(-2.0, 2.0, 128)
        zero = sample_function(lambda x, y: 0j * x * y, grid)
        fam = lift_family(zero, profile, 0.25, 1.0, 4)
        assert s_function(fam, (0.0, 0.0)) == 0.0

    def test_character_constant_across_interior(self, profile):
        grid = window_grid(-2.0, 2.0, 256)
        lam = character(grid, (2.5, 2.5))
        fam = lift_family(lam, profile, 0.25, 0.5, 5)
        values = [s_function(fam, (x, y))
                  for x in (-0.6, 0.0, 0.6) for y in (-0.6, 0.0, 0.6)]
        spread = (max(values) - min(values)) / max(values)
        assert spread < 0.02

    def test_translation_covariance(self, profile):
        grid = window_grid(-2.0, 2.0, 256)
        h = grid.cell[0]
        delta = 16 * h

        def field(x, y):
            return np.exp(1j * (1.5 * x - y)) + 0.5 * np.exp(1j * (0.5 * x + 2 * y))

        lam = sample_function(field, grid)
        lam_shift = sample_function(lambda x, y: field(x - delta, y - delta), grid)
        fam = lift_family(lam, profile, 0.25, 0.5, 4)
        fam_shift = lift_family(lam_shift, profile, 0.25, 0.5, 4)
        a = s_function(fam, (0.1, -0.2))
        b = s_function(fam_shift, (0.1 + delta, -0.2 + delta))
        assert b == pytest.approx(a, rel=1e-10)


class TestSRSquared:
    def unit_rect(self, px=0, py=0, scale=0):
        return DyadicRectangle(DyadicInterval(scale, px), DyadicInterval(scale, py))

    def test_zero_input(self, profile):
        grid = window_grid(-2.0, 2.0, 128)
        zero = sample_function(lambda x, y: 0j * x * y, grid)
        assert s_r_squared(zero, profile, self.unit_rect()) == 0.0

    def test_additivity_same_scale(self, profile):
        grid = window_grid(-4.0, 4.0, 256)
        lam = character(grid, (1.5, -2.0))
        r1 = self.unit_rect(0, 0)
        r2 = self.unit_rect(1, 0)
        eng = LiftEngine(lam, profile)
        n_y = 5
        total = (s_r_squared(lam, profile, r1, n_y, eng)
                 + s_r_squared(lam, profile, r2, n_y, eng))
        # oracle: same band, union of the two tiles
        y1, w1 = band_nodes(1.0, n_y)
        y2, w2 = band_nodes(1.0, n_y)
        sl1 = rect_slices(lam, r1)
        sl2 = rect_slices(lam, r2)
        h2 = lam.cell[0] * lam.cell[1]
        union = 0.0
        for i in range(n_y):
            for j in range(n_y):
                lift = eng.lift_values(y1[i], y2[j])
                union += w1[i] * w2[j] * h2 * (
                    float(np.sum(np.abs(lift[sl1]) ** 2))
                    + float(np.sum(np.abs(lift[sl2]) ** 2)))
        assert total == pytest.approx(union, rel=1e-13)

    def test_character_analytic_oracle(self, profile):
        # |lift| is constant for a character, so the box energy reduces to
        # |R| times the band integral of the squared eigenvalue
        grid = window_grid(-2.0, 2.0, 512)
        xi = (2.5, -1.5)
        lam = character(grid, xi)
        r = self.unit_rect(0, 0)
        n_y = 6
        value = s_r_squared(lam, profile, r, n_y)
        y1, w1 = band_nodes(1.0, n_y)
        y2, w2 = band_nodes(1.0, n_y)
        oracle = 0.0
        for i in range(n_y):
            for j in range(n_y):
                eig = (2 * np.pi) ** 2 * float(
                    profile.transform(np.array([y1[i] * xi[0]]))[0]
                    * profile.transform(np.array([y2[j] * xi[1]]))[0])
                oracle += w1[i] * w2[j] * r.area * eig ** 2
        assert value == pytest.approx(oracle, rel=1e-3)

    def test_band_not_covered_rejected(self, profile):
        # side 1/8 = 2 cells is aligned, but its scale band sits below the
        # kernel resolution floor
        grid = window_grid(-2.0, 2.0, 64)
        lam = character(grid, (1.0, 0.0))
        tiny = DyadicRectangle(DyadicInterval(-3, 0), DyadicInterval(0, 0))
        with pytest.raises(ValueError, match="resolution"):
            s_r_squared(lam, profile, tiny)

    def test_misaligned_rectangle_rejected(self, profile):
        grid = window_grid(-2.0, 2.0, 96)  # cell 1/24
        lam = character(grid, (1.0, 0.0))
        bad = DyadicRectangle(DyadicInterval(-4, 1), DyadicInterval(0, 0))
        with pytest.raises(ValueError, match="aligned"):
            rect_slices(lam, bad)
