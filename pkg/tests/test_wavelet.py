import numpy as np
import pytest

from prodhardy import build_psi
from prodhardy.wavelet import WaveletProfile, log_nodes


class TestProfileInvariants:
    def test_evenness_exact(self, profile):
        assert profile.evenness_defect() == 0.0

    def test_mean_zero(self, profile):
        assert abs(profile.mean()) < 1e-10

    def test_support_boundary(self, profile):
        assert profile.psi[0] == 0.0 and profile.psi[-1] == 0.0
        assert np.all(profile.evaluate(np.array([-1.5, 1.5, 2.0])) == 0.0)

    def test_normalization_independent_quadrature(self, profile):
        assert abs(profile.normalization_check(refine=3) - 1.0) < 1e-6

    def test_smoothness_diagnostics(self, profile):
        # interior second differences stay near the true curvature bound;
        # the one-sided edge derivative vanishes like the grid step
        assert np.isfinite(profile.second_difference_bound())
        assert profile.second_difference_bound() < 1e4
        assert profile.edge_derivative() < 10 * profile.step * 500

    def test_samples_match_closed_form(self, profile):
        assert np.max(np.abs(profile.psi - profile.evaluate(profile.x))) == 0.0


class TestBuildErrors:
    def test_too_few_points(self):
        with pytest.raises(ValueError, match="points"):
            build_psi(n_points=513)

    def test_even_count_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            build_psi(n_points=2048)


class TestTransform:
    def test_zero_at_origin(self, profile):
        assert abs(profile.transform(np.array([0.0]))[0]) < 1e-12

    def test_even_in_s(self, profile):
        s = np.array([0.7, 1.3, 9.0])
        plus = profile.transform(s)
        minus = profile.transform(-s)
        assert np.max(np.abs(plus - minus)) < 1e-15

    def test_cubic_decay(self, profile):
        # one degree of smoothness at the edge: |psi_hat| <= 2|psi''(1)|/(2 pi s^3)
        s = np.array([40.0, 80.0, 160.0, 320.0])
        envelope = 2 * abs(profile.norm_const * 384.0) / (2 * np.pi)
        vals = np.abs(profile.transform(s)) * s ** 3
        assert np.all(vals < 1.5 * envelope)


class TestBandWeights:
    def test_zero_index_is_zero(self, profile):
        assert profile.band_integral_1d(0) == 0.0
        assert profile.band_weight(0, 3) == 0.0
        assert profile.band_weight(3, 0) == 0.0

    def test_even_in_index(self, profile):
        assert profile.band_integral_1d(-2) == profile.band_integral_1d(2)

    def test_positive_and_decaying(self, profile):
        vals = [profile.band_integral_1d(k) for k in (1, 2, 4, 8, 16)]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_product_structure(self, profile):
        assert profile.band_weight(2, 3) == pytest.approx(
            profile.band_integral_1d(2) * profile.band_integral_1d(3), rel=1e-15)

    def test_dilated_band_matches(self, profile):
        for k in (1, 2, 4):
            for length in (1.0, 0.25):
                lhs = profile.dilated_band_integral(k, length, 4096)
                assert lhs == pytest.approx(profile.band_integral_1d(k), rel=1e-5)


class TestSerialization:
    def test_roundtrip(self, profile, tmp_path):
        profile.ensure_band_weights(3)
        path = tmp_path / "profile.json"
        profile.save_json(path)
        loaded = WaveletProfile.load_json(path)
        assert np.array_equal(loaded.psi, profile.psi)
        assert loaded.norm_const == profile.norm_const
        assert loaded.band_integral_1d(2) == profile.band_integral_1d(2)
        assert abs(loaded.normalization_check() - 1.0) < 1e-6

    def test_loaded_profile_interpolates(self, profile, tmp_path):
        path = tmp_path / "profile.json"
        profile.save_json(path)
        loaded = WaveletProfile.load_json(path)
        pts = np.array([0.123456, -0.654321, 0.999])
        assert np.max(np.abs(loaded.evaluate(pts) - profile.evaluate(pts))) < 1e-5


def test_log_nodes_quadrature():
    # integral of s^2 ds/s over [1, 4] = (16 - 1)/2
    s, w = log_nodes(1.0, 4.0, 20001)
    assert float(np.sum(s ** 2 * w)) == pytest.approx(7.5, rel=1e-8)
    with pytest.raises(ValueError):
        log_nodes(0.0, 1.0, 8)
