import numpy as np
import pytest

from prodhardy import (
    DyadicInterval,
    DyadicRectangle,
    IdentityError,
    OpenSetMask,
    carleson_box_energy,
    factored_functional,
    factored_vs_spectral,
    projection_sum_energy,
    rectangle_projection,
    sample_function,
    spectral_box_functional,
    symbol_sup_functional,
    wavelet_scale_identity,
    window_grid,
)
from prodhardy.corpus import plane_trig_fixture

UNIT_SQUARE = OpenSetMask.square(0, 1)


@pytest.fixture()
def fixture_lam(rng):
    return plane_trig_fixture(rng, window_grid(-2.0, 2.0, 128))


class TestBoxEnergy:
    def test_zero_input(self, profile):
        zero = sample_function(lambda x, y: 0j * x * y, window_grid(-2.0, 2.0, 128))
        rep = carleson_box_energy(zero, profile, UNIT_SQUARE, 2, n_y=4)
        assert rep.value == 0.0

    def test_no_rectangle_warns(self, profile, fixture_lam):
        omega = OpenSetMask(-5, [(0, 0)])
        rep = carleson_box_energy(fixture_lam, profile, omega, 2, n_y=4)
        assert rep.value == 0.0 and rep.warning is not None

    def test_enlarged_mask_rescales(self, profile):
        # a fine far-away cell adds area but admits no new rectangle at
        # rectangle scales above the cell size
        lam = plane_trig_fixture(np.random.default_rng(4),
                                 window_grid(-2.0, 2.0, 128))
        fine = [(i, j) for i in range(8) for j in range(8)]  # [0,1)^2 at 1/8
        omega = OpenSetMask(-3, fine)
        bigger = OpenSetMask(-3, fine + [(12, 3)])
        a = carleson_box_energy(lam, profile, omega, 2, n_y=4)
        b = carleson_box_energy(lam, profile, bigger, 2, n_y=4)
        assert len(a.per_rectangle) == len(b.per_rectangle)
        assert b.value == pytest.approx(a.value * omega.area / bigger.area,
                                        rel=1e-12)

    def test_homogeneity(self, profile, fixture_lam):
        scaled = fixture_lam.with_values((2.0 - 1.0j) * fixture_lam.values)
        a = carleson_box_energy(fixture_lam, profile, UNIT_SQUARE, 1, n_y=4)
        b = carleson_box_energy(scaled, profile, UNIT_SQUARE, 1, n_y=4)
        assert b.value == pytest.approx(abs(2.0 - 1.0j) ** 2 * a.value, rel=1e-12)


class TestSpectralBox:
    def test_identity_holds_on_fixtures(self, profile, rng):
        for _ in range(3):
            lam = plane_trig_fixture(rng, window_grid(-2.0, 2.0, 128))
            rep = spectral_box_functional(lam, profile, UNIT_SQUARE, 2, n_y=4)
            assert rep.max_residual < 1e-12

    def test_value_is_sqrt_of_box_energy(self, profile, fixture_lam):
        box = carleson_box_energy(fixture_lam, profile, UNIT_SQUARE, 2, n_y=4)
        spec = spectral_box_functional(fixture_lam, profile, UNIT_SQUARE, 2, n_y=4)
        assert spec.value == pytest.approx(np.sqrt(box.value), rel=1e-12)

    def test_constant_input_zero(self, profile):
        const = sample_function(lambda x, y: 5.0 + 0j * x * y,
                                window_grid(-2.0, 2.0, 128))
        rep = spectral_box_functional(const, profile, UNIT_SQUARE, 1, n_y=4)
        assert rep.value < 1e-10

    def test_truncated_window_reports_dropped(self, profile, fixture_lam):
        full = spectral_box_functional(fixture_lam, profile, UNIT_SQUARE, 1, n_y=4)
        trunc = spectral_box_functional(fixture_lam, profile, UNIT_SQUARE, 1,
                                        n_y=4, window=2)
        assert trunc.dropped_bound > 0
        total_full = full.value ** 2 * full.omega_area
        total_trunc = trunc.value ** 2 * trunc.omega_area
        assert total_trunc + trunc.dropped_bound == pytest.approx(
            total_full, rel=1e-10)

    def test_tolerance_violation_raises(self, profile, fixture_lam):
        with pytest.raises(IdentityError, match="residual"):
            spectral_box_functional(fixture_lam, profile, UNIT_SQUARE, 1,
                                    n_y=4, tol=1e-18)

    def test_homogeneity(self, profile, fixture_lam):
        scaled = fixture_lam.with_values(3.0 * fixture_lam.values)
        a = spectral_box_functional(fixture_lam, profile, UNIT_SQUARE, 1, n_y=4)
        b = spectral_box_functional(scaled, profile, UNIT_SQUARE, 1, n_y=4)
        assert b.value == pytest.approx(3.0 * a.value, rel=1e-12)


class TestSymbolSup:
    def test_identity_symbol_bit_identical(self, profile, fixture_lam):
        base = spectral_box_functional(fixture_lam, profile, UNIT_SQUARE, 1, n_y=4)
        rep = symbol_sup_functional(fixture_lam, profile, UNIT_SQUARE, 1,
                                    [("one", np.ones(fixture_lam.shape))], n_y=4)
        assert rep.values[0][1] == base.value
        assert rep.base_value == base.value

    def test_zero_symbol(self, profile, fixture_lam):
        rep = symbol_sup_functional(fixture_lam, profile, UNIT_SQUARE, 1,
                                    [("zero", np.zeros(fixture_lam.shape))], n_y=4)
        assert rep.max_value < 1e-12

    def test_family_max_dominates_identity(self, profile, fixture_lam):
        spec = np.fft.fft2(fixture_lam.values)
        mod = np.abs(spec)
        phases = np.where(mod > 0, spec / np.where(mod > 0, mod, 1.0), 1.0)
        rep = symbol_sup_functional(
            fixture_lam, profile, UNIT_SQUARE, 1,
            [("one", np.ones(fixture_lam.shape)), ("phases", phases)], n_y=4)
        assert rep.max_value >= rep.base_value

    def test_oversized_symbol_rejected(self, profile, fixture_lam):
        with pytest.raises(ValueError, match="unit ball"):
            symbol_sup_functional(fixture_lam, profile, UNIT_SQUARE, 1,
                                  [("big", 1.5 * np.ones(fixture_lam.shape))],
                                  n_y=4)

    def test_callable_symbol(self, profile, fixture_lam):
        rep = symbol_sup_functional(
            fixture_lam, profile, UNIT_SQUARE, 1,
            [("lowpass", lambda x1, x2: 1.0 * ((np.abs(x1) < 2) & (np.abs(x2) < 2)))],
            n_y=4)
        assert rep.max_value >= 0


class TestScaleIdentity:
    def test_all_indices_and_scales(self, profile):
        pairs = ((1.0, 1.0), (0.25, 1.0), (0.0625, 0.25))
        for k in (1, 2, 4):
            for l in (1, 2, 4):
                rep = wavelet_scale_identity(profile, k, l, pairs, tol=1e-5)
                assert rep.lhs_spread < 1e-5
                for row in rep.rows:
                    assert row.residual < 1e-5

    def test_negative_index_uses_modulus(self, profile):
        a = wavelet_scale_identity(profile, 2, 3, ((1.0, 1.0),))
        b = wavelet_scale_identity(profile, -2, -3, ((1.0, 1.0),))
        assert a.rhs == b.rhs
        assert a.rows[0].lhs == b.rows[0].lhs

    def test_zero_index_degenerate(self, profile):
        rep = wavelet_scale_identity(profile, 0, 1, ((1.0, 1.0),))
        assert rep.rhs == 0.0 and rep.rows[0].lhs == 0.0


class TestFactored:
    def test_constant_input_zero(self, profile):
        const = sample_function(lambda x, y: 2.0 + 0j * x * y,
                                window_grid(-2.0, 2.0, 128))
        rep = factored_functional(const, profile, UNIT_SQUARE, 1)
        assert rep.value < 1e-12

    def test_constant_shift_invariance(self, profile, fixture_lam):
        shifted = fixture_lam.with_values(fixture_lam.values + (4.0 - 2.0j))
        a = factored_functional(fixture_lam, profile, UNIT_SQUARE, 1)
        b = factored_functional(shifted, profile, UNIT_SQUARE, 1)
        assert b.value == pytest.approx(a.value, rel=1e-9)

    def test_on_lattice_character_single_term(self, profile):
        # frequency (2 pi k0, 2 pi l0) sits on the unit rectangle's lattice,
        # so depth 0 sees exactly |R| W(k0, l0) / |Omega|
        k0, l0 = 2, 1
        lam = sample_function(
            lambda x, y: np.exp(1j * 2 * np.pi * (k0 * x + l0 * y)),
            window_grid(-2.0, 2.0, 128))
        rep = factored_functional(lam, profile, UNIT_SQUARE, 0)
        expected = np.sqrt(profile.band_weight(k0, l0))
        assert rep.value == pytest.approx(expected, rel=1e-9)

    def test_homogeneity(self, profile, fixture_lam):
        scaled = fixture_lam.with_values(-2.0j * fixture_lam.values)
        a = factored_functional(fixture_lam, profile, UNIT_SQUARE, 1)
        b = factored_functional(scaled, profile, UNIT_SQUARE, 1)
        assert b.value == pytest.approx(2.0 * a.value, rel=1e-12)

    def test_comparison_report(self, profile, fixture_lam):
        rep = factored_vs_spectral(fixture_lam, profile, UNIT_SQUARE, 1, n_y=4)
        assert rep.ratio > 0
        assert rep.convention_scaled_ratio == pytest.approx(
            rep.ratio * (2 * np.pi) ** 2, rel=1e-15)
        assert rep.max_identity_residual < 1e-12


class TestProjection:
    def test_zero_input(self, profile):
        zero = sample_function(lambda x, y: 0j * x * y, window_grid(-2.0, 2.0, 128))
        rep = projection_sum_energy(zero, profile, UNIT_SQUARE, 1, n_y=3)
        assert rep.projection_value == 0.0 and rep.box_value == 0.0

    def test_far_separated_rectangles_nearly_orthogonal(self, profile, rng):
        lam = plane_trig_fixture(rng, window_grid(-8.0, 8.0, 512))
        r1 = DyadicRectangle(DyadicInterval(0, 0), DyadicInterval(0, 0))
        r2 = DyadicRectangle(DyadicInterval(0, 5), DyadicInterval(0, 5))
        h2 = lam.cell[0] * lam.cell[1]
        p1 = rectangle_projection(lam, profile, r1, n_y=3)
        p2 = rectangle_projection(lam, profile, r2, n_y=3)
        cross = h2 * abs(np.sum(p1 * np.conj(p2)))
        n1 = h2 * np.sum(np.abs(p1) ** 2)
        n2 = h2 * np.sum(np.abs(p2) ** 2)
        total = h2 * np.sum(np.abs(p1 + p2) ** 2)
        assert cross < 0.1 * min(n1, n2)
        assert total == pytest.approx(n1 + n2, rel=0.1)

    def test_ratio_recorded(self, profile, fixture_lam):
        rep = projection_sum_energy(fixture_lam, profile, UNIT_SQUARE, 1, n_y=3)
        assert rep.projection_value > 0 and rep.box_value > 0
        assert np.isfinite(rep.ratio)
