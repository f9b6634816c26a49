import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from oracles import u11_by_quadrature
from mlrabi.errors import DomainError
from mlrabi.rmt import (
    COMPLEX_GINIBRE,
    Ensemble,
    SvDistribution,
    cdf_lambda1,
    largest_singular_values,
    log_tricomi_u,
    mass_lambda1,
    min_kappa1,
    moment_lambda1,
    pdf_kappa1,
    pdf_lambda1,
    sample_ginibre,
    tricomi_u,
    variance_lambda1,
)

mpmath.mp.dps = 40


# ---------------------------------------------------------------- Tricomi U


def _mp_log_u(a, b, x):
    return float(mpmath.log(mpmath.hyperu(a, b, x)))


@pytest.mark.parametrize(
    "a,b,x",
    [(0.5, 1.5, 0.3), (2.0, 0.5, 1.0), (3.3, 7.1, 12.0), (79.6595, 81.1595, 150.0),
     (79.6595, 81.6595, 900.0), (46.446, 48.446, 40.0), (1.0, 1.0, 1e-3), (5.0, -2.5, 4.0)],
)
def test_tricomi_against_mpmath(a, b, x):
    ref = _mp_log_u(a, b, x)
    assert abs(log_tricomi_u(a, b, x) - ref) <= 1e-10 * max(1.0, abs(ref))


@given(st.floats(40, 85), st.floats(0.5, 2.0), st.floats(1.0, 3000.0))
def test_tricomi_moment_range_property(a, db, x):
    # relative error of U itself equals the absolute error of log U
    ref = _mp_log_u(a, a + 1 + db, x)
    assert abs(log_tricomi_u(a, a + 1 + db, x) - ref) <= 1e-9


def test_tricomi_known_values():
    assert abs(tricomi_u(2, 3, 3) - 1 / 9) <= 1e-14
    ref = u11_by_quadrature(1.0)
    assert abs(ref - 0.596347362323194) < 1e-12
    assert abs(tricomi_u(1, 1, 1) - ref) <= 1e-12 * ref


def test_tricomi_large_x_asymptote():
    assert abs(tricomi_u(2, 3, 1e6) * 1e12 - 1) <= 1e-4


@pytest.mark.parametrize("a,x", [(0.0, 1.0), (-1.0, 2.0), (1.0, 0.0), (1.0, -3.0), (math.nan, 1.0)])
def test_tricomi_domain(a, x):
    with pytest.raises(DomainError):
        tricomi_u(a, 1.0, x)


# ---------------------------------------------------------------- distributions


def test_distribution_scaling():
    d = SvDistribution.for_size(5, 7)
    mu = (math.sqrt(5) + math.sqrt(7)) ** 2
    assert d.mu == pytest.approx(mu, rel=1e-15)
    assert d.rho == pytest.approx(math.sqrt(mu) * (1 / math.sqrt(5) + 1 / math.sqrt(7)) ** (1 / 3), rel=1e-15)
    r = SvDistribution.for_size(5, 7, Ensemble.REAL)
    assert r.mu == pytest.approx((math.sqrt(4.5) + math.sqrt(6.5)) ** 2, rel=1e-15)


def test_min_kappa1_sign_boundary():
    # mu - alpha rho changes sign between n = 15 and n = 16 for square complex matrices
    assert min_kappa1(SvDistribution.for_size(15, 15)) < 0
    assert min_kappa1(SvDistribution.for_size(16, 16)) > 0
    assert min_kappa1(SvDistribution.for_size(17, 17)) > 0
    d = SvDistribution.for_size(4, 9)
    assert min_kappa1(d) == d.mu - COMPLEX_GINIBRE.alpha * d.rho


@pytest.mark.parametrize("n", [2, 5, 16, 40])
def test_change_of_variables(n):
    d = SvDistribution.for_size(n, n)
    centre = 2 * math.sqrt(n)
    for y in np.linspace(0.5 * centre, 1.5 * centre, 7):
        p1, pk = pdf_lambda1(d, y), pdf_kappa1(d, y * y)
        assert p1 == pytest.approx(2 * y * pk, rel=1e-10, abs=0)


def test_pdf_support():
    d = SvDistribution.for_size(40, 40)
    assert pdf_lambda1(d, 0.0) == 0.0
    assert pdf_lambda1(d, 0.99 * d.lower_support) == 0.0
    assert pdf_kappa1(d, min_kappa1(d) - 1.0) == 0.0
    small = SvDistribution.for_size(3, 3)
    assert small.lower_support == 0.0
    assert pdf_kappa1(small, -1.0) == 0.0 and pdf_kappa1(small, 1.0) > 0
    with pytest.raises(DomainError):
        pdf_lambda1(d, math.inf)


@pytest.mark.parametrize("ens", list(Ensemble))
@pytest.mark.parametrize("n", [20, 50, 100])
def test_unit_measure_without_clamping(n, ens):
    d = SvDistribution.for_size(n, n, ens)
    val, _ = integrate.quad(lambda y: pdf_lambda1(d, y), d.lower_support, np.inf, epsabs=0, epsrel=1e-12, limit=200)
    assert abs(val - 1) <= 1e-6


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_mass_matches_quadrature(n):
    d = SvDistribution.for_size(n, n)
    val = integrate.quad(lambda y: pdf_lambda1(d, y), 0, 4 * math.sqrt(n) + 5, epsrel=1e-12, limit=200)[0]
    assert val == pytest.approx(mass_lambda1(d), abs=1e-9)
    assert float(cdf_lambda1(d, 1e3)) == pytest.approx(mass_lambda1(d), abs=1e-12)


def test_cdf_is_monotone():
    d = SvDistribution.for_size(6, 6)
    y = np.linspace(0, 10, 200)
    c = cdf_lambda1(d, y)
    assert np.all(np.diff(c) >= -1e-15) and c[0] == 0.0


# ---------------------------------------------------------------- moments


def _quad_moment(d, l):
    """Integral of y^l pdf_lambda1 over its support, split at the bulk of the density."""
    f = lambda y: y**l * pdf_lambda1(d, y)
    centre = math.sqrt(max(d.mu - 1.8 * d.rho, d.lower_support ** 2 + 1e-6))
    opts = dict(epsabs=0, epsrel=1e-12, limit=400)
    return integrate.quad(f, d.lower_support, centre, **opts)[0] + integrate.quad(f, centre, np.inf, **opts)[0]


@pytest.mark.parametrize("n", [17, 30, 100])
@pytest.mark.parametrize("l", [0, 1, 2, 3])
def test_moment_matches_quadrature(n, l):
    d = SvDistribution.for_size(n, n)
    assert moment_lambda1(d, l) == pytest.approx(_quad_moment(d, l), rel=1e-6)


@pytest.mark.parametrize("n", [2, 5, 10])
def test_odd_moment_on_clamped_support(n):
    # the principal-branch value's real part is the clamped-support integral
    d = SvDistribution.for_size(n, n)
    assert moment_lambda1(d, 1) == pytest.approx(_quad_moment(d, 1), rel=1e-8)


def test_odd_moment_principal_branch_oracle():
    d = SvDistribution.for_size(2, 2)
    p = d.params
    base = mpmath.mpf(d.mu) / d.rho - p.alpha  # negative
    val = (mpmath.power(d.rho, 0.5) / mpmath.power(p.theta, p.k) * mpmath.power(base, 0.5 + p.k)
           * mpmath.hyperu(p.k, 1.5 + p.k, base / p.theta))
    assert moment_lambda1(d, 1) == pytest.approx(float(mpmath.re(val)), rel=1e-8)


def test_moment_closed_form_against_mpmath():
    d = SvDistribution.for_size(30, 30)
    p = d.params
    x = mpmath.mpf(d.mu) / d.rho - p.alpha
    ref = mpmath.sqrt(d.rho) / mpmath.power(p.theta, p.k) * mpmath.power(x, 0.5 + p.k) * mpmath.hyperu(
        p.k, 1.5 + p.k, x / p.theta)
    assert moment_lambda1(d, 1) == pytest.approx(float(ref), rel=1e-10)


def test_moment_zero_and_errors():
    d = SvDistribution.for_size(4, 4)
    assert moment_lambda1(d, 0) == 1.0
    with pytest.raises(DomainError):
        moment_lambda1(d, -1)


@pytest.mark.parametrize("n", [17, 25, 60])
def test_variance_identity(n):
    d = SvDistribution.for_size(n, n)
    var = variance_lambda1(d)
    ref = moment_lambda1(d, 2) - moment_lambda1(d, 1) ** 2
    assert var == pytest.approx(ref, rel=1e-8)


def test_variance_decreases_with_n():
    v = [variance_lambda1(SvDistribution.for_size(n, n)) for n in range(5, 60, 5)]
    assert np.all(np.diff(v) < 0)


def test_variance_against_monte_carlo():
    d = SvDistribution.for_size(30, 30)
    draws = largest_singular_values(30, 30, 1000, seed=5)
    assert abs(variance_lambda1(d) / draws.var(ddof=1) - 1) < 0.25


def test_mean_at_moderate_size_against_monte_carlo():
    d = SvDistribution.for_size(50, 50)
    draws = largest_singular_values(50, 50, 1000, seed=9)
    se = draws.std(ddof=1) / math.sqrt(draws.size)
    assert abs(moment_lambda1(d, 1) - draws.mean()) < 3 * se


# ---------------------------------------------------------------- sampling


def test_complex_ginibre_moments():
    z = sample_ginibre(1000, 1000, Ensemble.COMPLEX, seed=1)
    assert abs(np.mean(np.abs(z) ** 2) - 1) < 0.01
    assert abs(np.mean(z.real ** 2) - 0.5) < 0.01
    assert abs(np.mean(z)) < 3 / math.sqrt(z.size)


def test_real_ginibre_moments():
    z = sample_ginibre(500, 500, "real", seed=2)
    assert z.dtype == np.float64
    assert abs(z.var() - 1) < 0.01


def test_sampling_is_deterministic_and_stream_separated():
    a = sample_ginibre(3, 4, seed=7, stream=2)
    assert np.array_equal(a, sample_ginibre(3, 4, seed=7, stream=2))
    assert not np.array_equal(a, sample_ginibre(3, 4, seed=7, stream=3))
    assert not np.array_equal(a, sample_ginibre(3, 4, seed=8, stream=2))
    draws = largest_singular_values(3, 4, 10, seed=7)
    assert draws[2] == np.linalg.svd(a, compute_uv=False)[0]


def test_sampling_errors():
    with pytest.raises(DomainError):
        sample_ginibre(0, 2)
    with pytest.raises(ValueError):
        sample_ginibre(2, 2, "quaternion")
