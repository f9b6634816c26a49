"""Largest-singular-value statistics of Ginibre coupling matrices.

The largest Wishart eigenvalue kappa_1 is modelled as a scaled and shifted
Gamma variable, kappa_1 = mu + rho * (G - alpha) with G ~ Gamma(k, theta),
and lambda_1 = sqrt(kappa_1).  Everything that involves Gamma(k) or
theta**k is evaluated in the log domain.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special, stats

from .errors import DomainError, PrecisionError


class Ensemble(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class EnsembleParams:
    ensemble: Ensemble
    k: float
    theta: float
    alpha: float
    a1: float
    a2: float


REAL_GINIBRE = EnsembleParams(Ensemble.REAL, 46.446, 0.186054, 9.84801, -0.5, -0.5)
COMPLEX_GINIBRE = EnsembleParams(Ensemble.COMPLEX, 79.6595, 0.101037, 9.81961, 0.0, 0.0)


def ensemble_params(ensemble: Ensemble | str) -> EnsembleParams:
    return REAL_GINIBRE if Ensemble(ensemble) is Ensemble.REAL else COMPLEX_GINIBRE


@dataclass(frozen=True)
class SvDistribution:
    params: EnsembleParams
    n: int
    m: int
    mu: float
    rho: float
    lower_support: float

    @classmethod
    def for_size(cls, n: int, m: int, ensemble: Ensemble | str = Ensemble.COMPLEX) -> "SvDistribution":
        p = ensemble_params(ensemble)
        if n < 1 or m < 1:
            raise DomainError(f"matrix size must be positive, got {n}x{m}")
        sn, sm = math.sqrt(n + p.a1), math.sqrt(m + p.a2)
        mu = (sn + sm) ** 2
        rho = math.sqrt(mu) * (1.0 / sn + 1.0 / sm) ** (1.0 / 3.0)
        c = mu - p.alpha * rho
        return cls(p, n, m, mu, rho, math.sqrt(c) if c > 0 else 0.0)

    @property
    def scale(self) -> float:
        """Gamma scale of kappa_1, rho * theta."""
        return self.rho * self.params.theta


def min_kappa1(dist: SvDistribution) -> float:
    """Left edge mu - alpha * rho of the Gamma law; negative for small matrices."""
    return dist.mu - dist.params.alpha * dist.rho


def _gamma_floor(dist: SvDistribution) -> float:
    """Lower limit of the Gamma variable G implied by the clamped support kappa_1 > max(c, 0)."""
    c = min_kappa1(dist)
    return max(-c, 0.0) / dist.rho


# ---------------------------------------------------------------- sampling


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for (seed, stream); results do not depend on worker count."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(stream),)))


def sample_ginibre(
    n: int, m: int, ensemble: Ensemble | str = Ensemble.COMPLEX, seed: int = 0, stream: int = 0
) -> np.ndarray:
    """n x m Ginibre matrix: real N(0, 1) entries, or X + iY with X, Y ~ N(0, 1/2)."""
    if n < 1 or m < 1:
        raise DomainError(f"matrix size must be positive, got {n}x{m}")
    rng = rng_for(seed, stream)
    if Ensemble(ensemble) is Ensemble.REAL:
        return rng.standard_normal((n, m))
    z = rng.standard_normal((2, n, m)) * math.sqrt(0.5)
    return z[0] + 1j * z[1]


def largest_singular_values(
    n: int, m: int, trials: int, ensemble: Ensemble | str = Ensemble.COMPLEX, seed: int = 0
) -> np.ndarray:
    """Monte Carlo draws of lambda_1, trial t using stream t."""
    return np.array(
        [np.linalg.svd(sample_ginibre(n, m, ensemble, seed, t), compute_uv=False)[0] for t in range(trials)]
    )


# ---------------------------------------------------------------- densities


def _check_finite(v: float) -> float:
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"argument must be finite, got {v!r}")
    return v


def _log_kappa_density(dist: SvDistribution, z: float) -> float:
    p = dist.params
    s = (z - dist.mu) / dist.rho + p.alpha
    if s <= 0.0 or z <= 0.0:
        return -math.inf
    return (
        -math.log(dist.rho) - p.k * math.log(p.theta) - special.gammaln(p.k)
        + (p.k - 1.0) * math.log(s) - s / p.theta
    )


def pdf_kappa1(dist: SvDistribution, z: float) -> float:
    """Shifted Gamma density of kappa_1, zero outside z > max(mu - alpha rho, 0)."""
    return math.exp(_log_kappa_density(dist, _check_finite(z)))


def pdf_lambda1(dist: SvDistribution, y: float) -> float:
    """Density of lambda_1 = sqrt(kappa_1), i.e. 2 y f_kappa1(y^2) on y > lower_support."""
    y = _check_finite(y)
    if y <= dist.lower_support or y <= 0.0:
        return 0.0
    return 2.0 * y * math.exp(_log_kappa_density(dist, y * y))


def cdf_lambda1(dist: SvDistribution, y) -> np.ndarray:
    """Integral of pdf_lambda1 from 0 to y (closed form through the regularised gamma).

    The density is not renormalised after support clamping, so the limit
    at infinity is ``mass_lambda1(dist)``.
    """
    y = np.asarray(y, dtype=float)
    p = dist.params
    c = min_kappa1(dist)
    g = np.where(y > dist.lower_support, (y * y - c) / dist.rho, 0.0)
    lower = special.gammainc(p.k, _gamma_floor(dist) / p.theta)
    return np.where(y > dist.lower_support, special.gammainc(p.k, g / p.theta) - lower, 0.0)


def mass_lambda1(dist: SvDistribution) -> float:
    """Total probability carried by pdf_lambda1; below 1 when the support is clamped."""
    return float(special.gammaincc(dist.params.k, _gamma_floor(dist) / dist.params.theta))


def ks_distance(samples: np.ndarray, dist: SvDistribution) -> float:
    """Kolmogorov-Smirnov distance between samples of lambda_1 and cdf_lambda1."""
    return float(stats.kstest(np.asarray(samples), lambda y: cdf_lambda1(dist, y)).statistic)


# ---------------------------------------------------------------- Tricomi U

TRICOMI_RTOL = 1e-8
_LOG_FLOOR = 745.0  # exp(-745) underflows double precision


def log_tricomi_u(a: float, b: float, x: float) -> float:
    """log U(a, b, x) for a > 0, x > 0.

    Uses U = Gamma(a)^-1 int_0^inf exp(-x t) t^(a-1) (1+t)^(b-a-1) dt with
    t = exp(u); the integrand is normalised by its peak value so no partial
    product leaves double range.
    """
    a, b, x = (_check_finite(v) for v in (a, b, x))
    if a <= 0.0 or x <= 0.0:
        raise DomainError(f"tricomi_u needs a > 0 and x > 0, got a={a}, x={x}")
    c = b - a - 1.0

    def psi(u):
        return -x * math.exp(u) + a * u + c * _log1pexp(u)

    def dpsi(u):
        e = math.exp(u)
        return -x * e + a + c * e / (1.0 + e) if u < 700 else -math.inf

    # dpsi -> a > 0 as u -> -inf and -> -inf as u -> +inf
    lo, hi = math.log(a / x) - 1.0, math.log(a / x) + 1.0
    while dpsi(lo) <= 0.0:
        lo -= 2.0 * (1.0 + abs(lo))
    while dpsi(hi) >= 0.0:
        hi += 1.0 + abs(hi)
    u_star = optimize.brentq(dpsi, lo, hi, xtol=1e-14, rtol=1e-15)
    peak = psi(u_star)

    def drop(u):
        return psi(u) - peak + _LOG_FLOOR

    left = u_star - 1.0
    while drop(left) > 0.0:
        left = u_star - 2.0 * (u_star - left)
    right = u_star + 1.0
    while drop(right) > 0.0:
        right = u_star + 2.0 * (right - u_star)
    left = optimize.brentq(drop, left, u_star)
    right = optimize.brentq(drop, u_star, right)

    def integrand(u):
        return math.exp(psi(u) - peak)

    # split at a few curvature widths so quad sees the peak
    width = _curvature_width(psi, u_star)
    pts = sorted({left, right, *[u_star + f * width for f in (-8, -2, 0, 2, 8) if left < u_star + f * width < right]})
    total, err = 0.0, 0.0
    for u0, u1 in zip(pts[:-1], pts[1:]):
        val, e = integrate.quad(integrand, u0, u1, epsabs=0.0, epsrel=1e-13, limit=200)
        total += val
        err += e
    if not total > 0.0 or err > TRICOMI_RTOL * total:
        raise PrecisionError(f"U({a}, {b}, {x}) quadrature error {err / max(total, 1e-300):.2e}")
    return peak + math.log(total) - special.gammaln(a)


def tricomi_u(a: float, b: float, x: float) -> float:
    """Tricomi's confluent hypergeometric function U(a, b, x), principal branch, x > 0."""
    return math.exp(log_tricomi_u(a, b, x))


def _log1pexp(u: float) -> float:
    return u + math.log1p(math.exp(-u)) if u > 0 else math.log1p(math.exp(u))


def _curvature_width(psi, u0: float) -> float:
    h = 1e-4 * max(1.0, abs(u0))
    curv = (psi(u0 + h) - 2.0 * psi(u0) + psi(u0 - h)) / (h * h)
    return 1.0 / math.sqrt(-curv) if curv < 0 else 1.0


# ---------------------------------------------------------------- moments


def moment_lambda1(dist: SvDistribution, l: int) -> float:
    """E[lambda_1^l] = rho^(l/2) theta^-k (mu/rho - alpha)^(l/2+k) U(k, l/2+k+1, (mu/rho - alpha)/theta).

    When mu - alpha rho <= 0 the expression is read on the principal branch
    and its real part is returned: for even l that is the Gamma polynomial
    moment E[(kappa_1)^(l/2)], for odd l it equals the integral of
    y^l pdf_lambda1(y) over the clamped support y > 0.
    """
    if l < 0 or int(l) != l:
        raise DomainError(f"moment order must be a non-negative integer, got {l}")
    l = int(l)
    if l == 0:
        return 1.0
    p = dist.params
    c = min_kappa1(dist)
    if l % 2 == 0:
        return _even_moment(dist, l // 2)
    if c > 0:
        x = (dist.mu / dist.rho - p.alpha) / p.theta
        log_m = (
            0.5 * l * math.log(dist.rho) - p.k * math.log(p.theta)
            + (0.5 * l + p.k) * math.log(dist.mu / dist.rho - p.alpha)
            + log_tricomi_u(p.k, 0.5 * l + p.k + 1.0, x)
        )
        return math.exp(log_m)
    return _clamped_odd_moment(dist, l)


def _even_moment(dist: SvDistribution, j: int) -> float:
    """E[(c + rho G)^j] with G ~ Gamma(k, theta), expanded binomially."""
    p = dist.params
    c = min_kappa1(dist)
    total = 0.0
    for i in range(j + 1):
        gamma_moment = math.exp(special.gammaln(p.k + i) - special.gammaln(p.k)) * (dist.rho * p.theta) ** i
        total += math.comb(j, i) * c ** (j - i) * gamma_moment
    return total


def _clamped_odd_moment(dist: SvDistribution, l: int) -> float:
    p = dist.params
    c = min_kappa1(dist)
    t0 = -c / dist.scale  # Gamma(k, 1) variable t with kappa_1 = c + rho theta t
    law = stats.gamma(p.k)

    def integrand(t):
        return (c + dist.scale * t) ** (0.5 * l) * law.pdf(t)

    sd = math.sqrt(p.k)
    pts = sorted({t0, *[p.k + f * sd for f in (-6, -2, 0, 2, 6) if p.k + f * sd > t0]})
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        total += integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-12, limit=200)[0]
    total += integrate.quad(integrand, pts[-1], np.inf, epsabs=0.0, epsrel=1e-12, limit=200)[0]
    return total


def variance_lambda1(dist: SvDistribution) -> float:
    """Var[lambda_1] = rho (theta k - alpha) + mu - E[lambda_1]^2."""
    p = dist.params
    second = dist.rho * (p.theta * p.k - p.alpha) + dist.mu
    return second - moment_lambda1(dist, 1) ** 2
