import numpy as np
import pytest
from scipy.special import gammaln

from bifr.catalog import (
    BANDED_INVERSE_METHODS,
    DomainError,
    FactorizationSpec,
    Method,
    binomial_coeffs_neg,
    binomial_coeffs_pos,
    gamma_bifr_inverse,
    inverse_bandwidth,
    inverse_coeffs,
    strategy_coeffs,
)
from bifr.toeplitz import identity_coeffs, ltt_multiply


def closed_form_neg(gamma, m):
    """Oracle: c_j = Gamma(gamma + j) / (Gamma(gamma) * j!) via log-gamma."""
    j = np.arange(m)
    return np.exp(gammaln(gamma + j) - gammaln(gamma) - gammaln(j + 1))


def closed_form_pos(gamma, m):
    """Oracle: |c_j| = Gamma(j - gamma) / (Gamma(-gamma) ... ); use the
    ratio form j>=1: |c_j| = gamma * Gamma(j - gamma) / (Gamma(1 - gamma) * j!)."""
    out = np.empty(m)
    out[0] = 1.0
    j = np.arange(1, m)
    mag = gamma * np.exp(gammaln(j - gamma) - gammaln(1.0 - gamma) - gammaln(j + 1))
    out[1:] = -mag
    return out


class TestCoefficientSeries:
    @pytest.mark.parametrize("gamma", [0.05, 0.3, 0.5, 0.7, 0.95])
    def test_neg_series_closed_form(self, gamma):
        got = binomial_coeffs_neg(gamma, 200)
        np.testing.assert_allclose(got, closed_form_neg(gamma, 200), rtol=1e-12)

    @pytest.mark.parametrize("gamma", [0.05, 0.3, 0.5, 0.7, 0.95])
    def test_pos_series_closed_form(self, gamma):
        got = binomial_coeffs_pos(gamma, 200)
        np.testing.assert_allclose(got, closed_form_pos(gamma, 200), rtol=1e-12)

    def test_half_hand_values(self):
        np.testing.assert_allclose(
            binomial_coeffs_pos(0.5, 4), [1.0, -0.5, -0.125, -0.0625], rtol=0, atol=0
        )
        np.testing.assert_allclose(
            binomial_coeffs_neg(0.5, 4), [1.0, 0.5, 0.375, 0.3125], rtol=0, atol=0
        )

    def test_first_entry_is_exact_gamma(self):
        for gamma in (0.1, 0.35, 0.77):
            assert binomial_coeffs_neg(gamma, 2)[1] == gamma
            assert binomial_coeffs_pos(gamma, 2)[1] == -gamma

    def test_neg_positive_decreasing(self):
        c = binomial_coeffs_neg(0.4, 500)
        assert np.all(c > 0)
        assert np.all(np.diff(c) <= 0)

    def test_pos_signs(self):
        c = binomial_coeffs_pos(0.4, 500)
        assert c[0] == 1.0
        assert np.all(c[1:] < 0)

    def test_gamma_domain(self):
        for bad in (-0.1, 0.0, 1.0, 1.5):
            with pytest.raises(DomainError):
                binomial_coeffs_neg(bad, 4)
        # boundary values allowed only through the explicit escape hatch
        assert binomial_coeffs_pos(1.0, 3, _allow_boundary=True)[1] == -1.0


class TestSpecValidation:
    def test_gamma_required(self):
        with pytest.raises(DomainError):
            FactorizationSpec(method=Method.GAMMA_BIFR, n=8, bandwidth=2)
        with pytest.raises(DomainError):
            FactorizationSpec(method=Method.GAMMA_BIFR, n=8, gamma=1.2, bandwidth=2)

    def test_bandwidth_range(self):
        with pytest.raises(DomainError):
            FactorizationSpec(method=Method.BISR, n=8, bandwidth=9)
        with pytest.raises(DomainError):
            FactorizationSpec(method=Method.BISR, n=8, bandwidth=0)
        FactorizationSpec(method=Method.BISR, n=8, bandwidth=1)  # degenerate band ok

    def test_bisr_fixes_gamma(self):
        with pytest.raises(DomainError):
            FactorizationSpec(method=Method.BISR, n=8, gamma=0.3, bandwidth=2)

    def test_lambda_range(self):
        with pytest.raises(DomainError):
            FactorizationSpec(method=Method.DP_LAMBDA_CGD, n=8, lam=1.0)
        FactorizationSpec(method=Method.DP_LAMBDA_CGD, n=8, lam=0.0)

    def test_inv_decay_offset(self):
        with pytest.raises(DomainError):
            FactorizationSpec(method=Method.INV_DECAY, n=8, c=-2.0, bandwidth=4)
        FactorizationSpec(method=Method.INV_DECAY, n=8, c=-1.0 / 3.0, bandwidth=4)


class TestFactorizations:
    def spec(self, **kw):
        return FactorizationSpec(**kw)

    def test_inverse_structure(self):
        spec = self.spec(method=Method.GAMMA_BIFR, n=5, gamma=0.5, bandwidth=3)
        np.testing.assert_array_equal(
            gamma_bifr_inverse(spec).coeffs, [1.0, -0.5, -0.125, 0.0, 0.0]
        )

    def test_strategy_hand_values(self):
        spec = self.spec(method=Method.GAMMA_BIFR, n=5, gamma=0.5, bandwidth=3)
        np.testing.assert_allclose(
            strategy_coeffs(spec).coeffs,
            [1.0, 0.5, 0.375, 0.25, 0.171875],
            rtol=0,
            atol=1e-16,
        )

    @pytest.mark.parametrize(
        "spec_kw",
        [
            dict(method=Method.GAMMA_BIFR, n=24, gamma=0.3, bandwidth=5),
            dict(method=Method.BISR, n=24, bandwidth=4),
            dict(method=Method.DP_LAMBDA_CGD, n=24, lam=0.6),
            dict(method=Method.GAMMA_BFR, n=24, gamma=0.7, bandwidth=6),
            dict(method=Method.INV_DECAY, n=24, c=-0.05, bandwidth=6),
            dict(method=Method.IDENTITY, n=24),
        ],
    )
    def test_strategy_times_inverse_is_identity(self, spec_kw):
        spec = self.spec(**spec_kw)
        prod = ltt_multiply(strategy_coeffs(spec), inverse_coeffs(spec))
        np.testing.assert_allclose(
            prod.coeffs, identity_coeffs(spec.n).coeffs, atol=1e-12
        )

    def test_unbanded_head_matches_series(self):
        # inside the band the strategy equals the untruncated series
        spec = self.spec(method=Method.GAMMA_BIFR, n=32, gamma=0.4, bandwidth=10)
        head = strategy_coeffs(spec).coeffs[:10]
        np.testing.assert_array_equal(head, binomial_coeffs_neg(0.4, 10))

    @pytest.mark.parametrize("lam", [0.0, 0.1, 0.35, 0.9])
    def test_lambda_cgd_is_geometric_and_matches_band2(self, lam):
        n = 64
        geo = strategy_coeffs(self.spec(method=Method.DP_LAMBDA_CGD, n=n, lam=lam))
        np.testing.assert_allclose(geo.coeffs, lam ** np.arange(n), rtol=1e-12)
        if lam > 0.0:
            band2 = strategy_coeffs(
                self.spec(method=Method.GAMMA_BIFR, n=n, gamma=lam, bandwidth=2)
            )
            np.testing.assert_array_equal(geo.coeffs, band2.coeffs)

    def test_bisr_equals_half_exponent(self):
        a = strategy_coeffs(self.spec(method=Method.BISR, n=128, bandwidth=8))
        b = strategy_coeffs(
            self.spec(method=Method.GAMMA_BIFR, n=128, gamma=0.5, bandwidth=8)
        )
        np.testing.assert_array_equal(a.coeffs, b.coeffs)

    def test_bfr_is_truncated_series(self):
        spec = self.spec(method=Method.GAMMA_BFR, n=12, gamma=0.6, bandwidth=4)
        c = strategy_coeffs(spec).coeffs
        np.testing.assert_array_equal(c[:4], binomial_coeffs_neg(0.6, 4))
        assert np.all(c[4:] == 0.0)

    def test_inv_decay_band(self):
        spec = self.spec(method=Method.INV_DECAY, n=8, c=-0.1, bandwidth=4)
        c = strategy_coeffs(spec).coeffs
        np.testing.assert_allclose(c[:4], [1.0, 0.9, 0.4, 1.0 / 3.0 - 0.1])
        assert np.all(c[4:] == 0.0)

    def test_strategy_nonneg_nonincreasing(self):
        for gamma in (0.1, 0.5, 0.9):
            spec = self.spec(method=Method.GAMMA_BIFR, n=200, gamma=gamma, bandwidth=7)
            c = strategy_coeffs(spec).coeffs
            assert np.all(c >= 0)
            assert np.all(np.diff(c) <= 1e-15)

    def test_inverse_bandwidth(self):
        assert inverse_bandwidth(self.spec(method=Method.IDENTITY, n=8)) == 1
        assert inverse_bandwidth(self.spec(method=Method.DP_LAMBDA_CGD, n=8, lam=0.0)) == 1
        assert inverse_bandwidth(self.spec(method=Method.DP_LAMBDA_CGD, n=8, lam=0.3)) == 2
        assert (
            inverse_bandwidth(self.spec(method=Method.BISR, n=8, bandwidth=5)) == 5
        )
        with pytest.raises(DomainError):
            inverse_bandwidth(self.spec(method=Method.GAMMA_BFR, n=8, gamma=0.5, bandwidth=2))

    def test_banded_inverse_set(self):
        assert Method.GAMMA_BFR not in BANDED_INVERSE_METHODS
        assert Method.INV_DECAY not in BANDED_INVERSE_METHODS
        assert Method.GAMMA_BIFR in BANDED_INVERSE_METHODS
