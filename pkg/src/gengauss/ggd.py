"""Generalized Gaussian distribution: densities, CF/MGF, moments, cumulants.

Parameterized by location mu, standard deviation sigma and shape alpha, with
density proportional to exp(-(lam*|x - mu|)^alpha) where
lam = sqrt(G(3/alpha)/G(1/alpha)) / sigma makes sigma the true standard
deviation.  alpha = 2 is Gaussian, alpha = 1 Laplacian, alpha -> inf uniform.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .specfun import (
    SQRT_PI,
    ContourConfig,
    DivergentConfigurationError,
    FoxHSpec,
    QuadratureConvergenceError,
    fox_h,
    regularized_upper_gamma,
)

__all__ = [
    "GGDParams",
    "CumulantTable",
    "MGFDivergenceError",
    "ggd_pdf",
    "q_alpha",
    "ggd_cdf",
    "ggd_cf",
    "ggd_mgf",
    "ggd_moment",
    "ggd_cumulant",
    "ggd_kurtosis",
    "ggd_sample",
    "cumulant_table",
    "cumulant_from_even_moments",
    "cf_hspec",
]


class MGFDivergenceError(ValueError):
    """MGF requested outside its convergence region."""


@dataclass(frozen=True)
class GGDParams:
    """One generalized Gaussian law (location, standard deviation, shape)."""

    mu: float
    sigma: float
    alpha: float

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha}")
        if not math.isfinite(self.log_lam0):
            raise ValueError(f"shape alpha={self.alpha} overflows the scale coefficient")

    @property
    def log_lam0(self):
        """log of the unit-variance scale sqrt(G(3/a)/G(1/a))."""
        return 0.5 * (gammaln(3.0 / self.alpha) - gammaln(1.0 / self.alpha))

    @property
    def lam0(self):
        return math.exp(self.log_lam0)

    @property
    def lam(self):
        return self.lam0 / self.sigma

    def centered(self):
        return self if self.mu == 0.0 else GGDParams(0.0, self.sigma, self.alpha)


def ggd_pdf(p, x):
    """Density at x (scalar or array)."""
    x = np.asarray(x, dtype=float)
    a = p.alpha
    log_pref = math.log(a) + p.log_lam0 - math.log(p.sigma) - math.log(2.0) - gammaln(1.0 / a)
    out = np.exp(log_pref - np.abs(p.lam * (x - p.mu)) ** a)
    return float(out) if out.ndim == 0 else out


def q_alpha(alpha, x):
    """Tail probability of the standard (zero-mean, unit-variance) law.

    For x >= 0 this is the regularized upper gamma integral at 1/alpha;
    negative arguments use q(x) = 1 - q(-x).
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    x = np.asarray(x, dtype=float)
    lam0_a = math.exp(alpha * 0.5 * (gammaln(3.0 / alpha) - gammaln(1.0 / alpha)))
    tail = 0.5 * regularized_upper_gamma(1.0 / alpha, lam0_a * np.abs(x) ** alpha)
    out = np.where(x >= 0, tail, 1.0 - tail)
    return float(out) if out.ndim == 0 else out


def ggd_cdf(p, x):
    """Distribution function at x (scalar or array)."""
    x = np.asarray(x, dtype=float)
    out = 1.0 - q_alpha(p.alpha, (x - p.mu) / p.sigma)
    return float(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=256)
def cf_hspec(alpha):
    """H-function block of the characteristic function for shape alpha."""
    return FoxHSpec(
        m=1,
        n=1,
        p=1,
        q=2,
        upper=((1.0 - 1.0 / alpha, 2.0 / alpha),),
        lower=((0.0, 1.0), (0.5, 1.0)),
    )


def cf_h_argument(p, t):
    """Argument fed to the CF H-function block: sigma^2 G(1/a) t^2 / (4 G(3/a))."""
    return p.sigma ** 2 * math.exp(-2.0 * p.log_lam0) * t * t / 4.0


def ggd_cf(p, t, cfg=None):
    """Characteristic function at t.

    Shapes alpha >= 1 evaluate the H-function contour integral; smaller
    shapes (where the kernel loses its convergent power series) and any
    contour failure fall back to the direct cosine-transform quadrature.
    """
    if t == 0:
        return complex(1.0)
    if p.alpha >= 1.0:
        try:
            h = fox_h(cf_hspec(p.alpha), cf_h_argument(p, t), cfg)
            value = SQRT_PI * math.exp(-gammaln(1.0 / p.alpha)) * h
            return complex(math.cos(t * p.mu), math.sin(t * p.mu)) * value
        except (QuadratureConvergenceError, DivergentConfigurationError):
            pass
    from . import oracle

    return oracle.cf_quadrature(p, t)


def _mgf_log_integrand(x, t, lam, alpha):
    # log cosh(t x) - (lam x)^alpha, overflow-safe for large |t x|
    tx = np.abs(t * x)
    return tx + np.log1p(np.exp(-2.0 * tx)) - math.log(2.0) - (lam * x) ** alpha


def ggd_mgf(p, t):
    """Moment generating function at t.

    The convergence region is probed numerically: if the exponent of the
    integrand is still growing at ever larger radii, the MGF diverges there
    and MGFDivergenceError is raised.
    """
    if t == 0:
        return 1.0
    lam, a = p.lam, p.alpha
    peak = 0.0
    if a > 1.0:
        # interior maximum of |t| x - (lam x)^a
        x_star = (abs(t) / (a * lam ** a)) ** (1.0 / (a - 1.0))
        peak = max(peak, float(_mgf_log_integrand(x_star, t, lam, a)))
    x_hi = 2.0 * p.sigma
    for _ in range(60):
        probe = _mgf_log_integrand(x_hi, t, lam, a)
        peak = max(peak, float(probe))
        if probe < peak - 60.0 and abs(t) * x_hi < (lam * x_hi) ** a:
            break
        x_hi *= 2.0
        if x_hi > 1e9 * p.sigma:
            raise MGFDivergenceError(
                f"MGF diverges at t={t} for shape alpha={a} (integrand does not decay)"
            )
    val, _ = integrate.quad(
        lambda x: math.exp(_mgf_log_integrand(x, t, lam, a) - peak),
        0.0,
        x_hi,
        limit=400,
        epsabs=1e-13,
        epsrel=1e-11,
    )
    log_pref = math.log(a) + math.log(lam) - gammaln(1.0 / a)
    return math.exp(t * p.mu + peak + log_pref + math.log(val))


def _require_zero_mean(p, what):
    if p.mu != 0.0:
        raise ValueError(f"{what} uses the zero-mean convention; got mu={p.mu}")


def ggd_moment(p, order):
    """Raw moment E[X^order] for a zero-mean law; odd orders vanish."""
    if order < 0 or order != int(order):
        raise ValueError(f"order must be a non-negative integer, got {order}")
    _require_zero_mean(p, "ggd_moment")
    order = int(order)
    if order == 0:
        return 1.0
    if order % 2 == 1:
        return 0.0
    n = order // 2
    a = p.alpha
    lg1, lg3 = gammaln(1.0 / a), gammaln(3.0 / a)
    return p.sigma ** order * math.exp(
        n * (lg1 - lg3) + (gammaln((order + 1.0) / a) - lg1)
    )


def _multiplicity_vectors(n):
    """All (m_1,...,m_n) with sum(j * m_j) == n."""
    out = []

    def rec(j, remaining, acc):
        if j > n:
            if remaining == 0:
                out.append(tuple(acc))
            return
        if remaining == 0:
            out.append(tuple(acc) + (0,) * (n - j + 1))
            return
        for mj in range(remaining // j + 1):
            rec(j + 1, remaining - j * mj, acc + [mj])

    rec(1, n, [])
    return out


def cumulant_from_even_moments(even_moments, order):
    """Even cumulant of a symmetric law from its even moments.

    ``even_moments[j-1]`` must hold the raw moment of order 2j.  The
    composite-derivative partition sum is accumulated with exact rational
    coefficients, so feeding Fraction moments yields an exact Fraction.
    """
    if order % 2 != 0 or order <= 0:
        raise ValueError("partition sum is defined for positive even orders")
    n = order // 2
    total = 0 * even_moments[0]
    for mult in _multiplicity_vectors(n):
        m_total = sum(mult)
        coeff = Fraction(math.factorial(order) * math.factorial(m_total - 1))
        prod = 1
        for j, mj in enumerate(mult, start=1):
            if mj == 0:
                continue
            coeff /= math.factorial(mj) * math.factorial(2 * j) ** mj
            prod = prod * even_moments[j - 1] ** mj
        total += (-1) ** m_total * coeff * prod
    return -total


def ggd_cumulant(p, order):
    """Cumulant of a zero-mean law; odd orders vanish, even orders come from
    the partition sum over the scaled even moments."""
    if order <= 0 or order != int(order):
        raise ValueError(f"order must be a positive integer, got {order}")
    _require_zero_mean(p, "ggd_cumulant")
    order = int(order)
    if order % 2 == 1:
        return 0.0
    if order > 16:
        raise ValueError("cumulants are supported up to order 16")
    moments = [ggd_moment(p, 2 * j) for j in range(1, order // 2 + 1)]
    return float(cumulant_from_even_moments(moments, order))


@dataclass(frozen=True)
class CumulantTable:
    """Even cumulants k_2, k_4, ..., k_order of one law (odd ones are zero)."""

    order: int
    values: tuple

    def __post_init__(self):
        if self.order % 2 != 0 or self.order <= 0:
            raise ValueError("order cap must be a positive even integer")
        if len(self.values) != self.order // 2:
            raise ValueError("expected one value per even order up to the cap")


def cumulant_table(p, order):
    return CumulantTable(
        order=order, values=tuple(ggd_cumulant(p, 2 * j) for j in range(1, order // 2 + 1))
    )


def ggd_kurtosis(p_or_alpha):
    """Excess kurtosis G(1/a)G(5/a)/G(3/a)^2 - 3; independent of mu, sigma."""
    a = p_or_alpha.alpha if isinstance(p_or_alpha, GGDParams) else float(p_or_alpha)
    if a <= 0:
        raise ValueError(f"alpha must be positive, got {a}")
    return math.exp(gammaln(1.0 / a) + gammaln(5.0 / a) - 2.0 * gammaln(3.0 / a)) - 3.0


def ggd_sample(p, count, seed):
    """Deterministic i.i.d. draws via the gamma-variate transform.

    G ~ Gamma(1/alpha, 1) and an equiprobable sign give
    mu + sign * G^(1/alpha) / lam.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    rng = np.random.default_rng(seed)
    g = rng.gamma(1.0 / p.alpha, 1.0, size=count)
    sign = rng.integers(0, 2, size=count) * 2 - 1
    return p.mu + sign * g ** (1.0 / p.alpha) / p.lam
