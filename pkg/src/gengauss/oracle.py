"""Brute-force reference routes: convolution, CF quadrature, CF inversion, MC.

Everything here favors correctness over speed; these are the ground-truth
paths the closed forms are tested against, and the fallbacks used where the
contour evaluations are routed away from (small shapes, the central window
of the sum density).
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import gammaln, roots_legendre

from .ggd import ggd_pdf, ggd_sample
from .specfun import QuadratureConvergenceError

__all__ = [
    "GridSpec",
    "OracleReport",
    "McStatistics",
    "conv_pdf",
    "cf_quadrature",
    "cf_quadrature_centered",
    "pdf_by_cf_inversion",
    "mc_statistics",
    "compare_on_grid",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform evaluation grid."""

    lo: float
    hi: float
    points: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.points < 2:
            raise ValueError(f"need at least 2 points, got {self.points}")

    def values(self):
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class OracleReport:
    """Reference-vs-comparison values on a grid with their error summary."""

    grid: GridSpec
    reference_values: tuple
    comparison_values: tuple
    max_abs_err: float
    max_rel_err: float

    def __post_init__(self):
        if len(self.reference_values) != len(self.comparison_values):
            raise ValueError("reference and comparison lengths differ")
        if self.max_abs_err < 0 or self.max_rel_err < 0:
            raise ValueError("error summaries must be non-negative")


def compare_on_grid(grid, reference, comparison):
    ref = np.asarray(reference, dtype=float)
    cmp_ = np.asarray(comparison, dtype=float)
    abs_err = np.abs(ref - cmp_)
    scale = np.maximum(np.abs(ref), 1e-300)
    return OracleReport(
        grid=grid,
        reference_values=tuple(ref),
        comparison_values=tuple(cmp_),
        max_abs_err=float(abs_err.max()),
        max_rel_err=float((abs_err / scale).max()),
    )


def conv_pdf(s, z):
    """Density of the sum at z by adaptive quadrature of the convolution.

    The domain covers twelve component deviations around both density peaks
    (the peak of f_X and the point where f_Y's argument vanishes), with
    breakpoints at the two cusp locations.
    """
    z = float(z)

    def integrand(x):
        return ggd_pdf(s.x, x) * ggd_pdf(s.y, z - x)

    lo = min(s.x.mu - 12.0 * s.x.sigma, z - s.y.mu - 12.0 * s.y.sigma)
    hi = max(s.x.mu + 12.0 * s.x.sigma, z - s.y.mu + 12.0 * s.y.sigma)
    pts = sorted(p for p in (s.x.mu, z - s.y.mu) if lo < p < hi)
    val, err, *rest = integrate.quad(
        integrand, lo, hi, points=pts or None, limit=400,
        epsabs=1e-10, epsrel=1e-9, full_output=True,
    )
    if err > 1e-6 * max(val, 1e-12):
        raise QuadratureConvergenceError(
            f"convolution quadrature error {err:.2e} too large at z={z}"
        )
    return float(val)


# ---------------------------------------------------------------------------
# oscillatory cosine transform of exp(-u^alpha)
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = roots_legendre(16)


def _panel_integrals(f, edges):
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    xs = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    return half * (f(xs) @ _GL_WEIGHTS)


def _graded_edges(x_end, n_geo=60):
    """Panel edges on [0, x_end] refined geometrically toward the origin,
    where the integrand's derivative is unbounded for shapes below one."""
    geo = x_end * 2.0 ** -np.arange(n_geo, -1, -1.0)
    return np.concatenate(([0.0], geo))


def _alternating_tail(terms, tol):
    """Repeated-averaging acceleration of an alternating segment sequence."""
    s = np.cumsum(terms)
    prev = float(s[-1])
    err = abs(prev)
    while s.size > 1:
        s = 0.5 * (s[:-1] + s[1:])
        err = abs(float(s[-1]) - prev)
        prev = float(s[-1])
        if err <= 0.25 * tol:
            break
    return prev, err


def _exp_cos_transform(alpha, omega, tol=1e-12):
    """integral over u >= 0 of cos(omega u) exp(-u^alpha).

    Segments between consecutive cosine zeros alternate in sign with a
    decreasing envelope; slowly decaying tails (heavy shapes) are summed by
    series acceleration instead of brute truncation.
    """
    u_max = 46.0 ** (1.0 / alpha)

    def f(u):
        return np.cos(omega * u) * np.exp(-np.abs(u) ** alpha)

    if omega == 0.0:
        edges = _graded_edges(u_max)
        return float(np.sum(_panel_integrals(f, edges)))

    half_period = math.pi / omega
    first_zero = 0.5 * half_period
    if first_zero >= u_max:
        edges = _graded_edges(u_max)
        return float(np.sum(_panel_integrals(f, edges)))

    total = float(np.sum(_panel_integrals(f, _graded_edges(first_zero))))

    max_segments = 500_000
    block = 256
    terms = []
    k = 0
    while k < max_segments:
        n_here = min(block, max_segments - k)
        edges = first_zero + half_period * np.arange(k, k + n_here + 1)
        # early segments sit close to the origin relative to their length;
        # split them so the fixed-order panels stay accurate
        splits = 4 if k == 0 else 1
        if splits > 1:
            fine = np.concatenate(
                [np.linspace(edges[i], edges[i + 1], splits + 1)[:-1] for i in range(n_here)]
                + [edges[-1:]]
            )
            vals = _panel_integrals(f, fine).reshape(n_here, splits).sum(axis=1)
        else:
            vals = _panel_integrals(f, edges)
        terms.extend(vals.tolist())
        k += n_here
        if edges[-1] >= u_max or abs(terms[-1]) < 0.01 * tol:
            return total + float(np.sum(terms))
        if len(terms) >= 48 and abs(terms[-1]) > 0.5 * abs(terms[-48]):
            # envelope is now slowly varying: accelerate the alternating tail
            head = float(np.sum(terms[:-48]))
            tail, err = _alternating_tail(np.array(terms[-48:]), tol)
            if err > tol:
                raise QuadratureConvergenceError(
                    f"cosine-transform acceleration stalled (residual {err:.2e}) "
                    f"for alpha={alpha}, omega={omega}"
                )
            return total + head + tail
    raise QuadratureConvergenceError(
        f"cosine transform needed more than {max_segments} segments "
        f"(alpha={alpha}, omega={omega})"
    )


def cf_quadrature_centered(p, t):
    """Real-valued CF of the centered law by direct cosine quadrature."""
    if t == 0:
        return 1.0
    omega = abs(t) / p.lam
    val = _exp_cos_transform(p.alpha, omega)
    return p.alpha * math.exp(-gammaln(1.0 / p.alpha)) * val


def cf_quadrature(p, t):
    """Characteristic function at t by direct cosine-transform quadrature."""
    if t == 0:
        return complex(1.0)
    return cmath.exp(1j * t * p.mu) * cf_quadrature_centered(p, t)


# ---------------------------------------------------------------------------
# density by CF inversion
# ---------------------------------------------------------------------------

class _InversionTable:
    """Panel table of the sum's centered CF, shared across query points.

    The product CF is sampled once on Gauss-Legendre panels; each query then
    costs one weighted cosine dot product.  The table extends itself until
    the queried tail bound is met.
    """

    # panels must resolve cos(t * dist) for the largest queried distance;
    # 16-node panels are solid up to about 8 radians per panel
    MAX_DIST_SIGMA = 16.0

    def __init__(self, s):
        self.s = s
        self.h = 8.0 / (self.MAX_DIST_SIGMA * s.sigma)
        self.t_end = 0.0
        self.nodes = np.empty(0)
        self.weighted = np.empty(0)
        self.psi_end = 1.0
        self._extend(max(64, int(round(40.0 / (s.sigma * self.h)))))

    def _psi(self, t):
        return cf_quadrature_centered(self.s.x, t) * cf_quadrature_centered(self.s.y, t)

    def _extend(self, n_panels):
        edges = self.t_end + self.h * np.arange(n_panels + 1)
        half, mid = 0.5 * self.h, 0.5 * (edges[:-1] + edges[1:])
        xs = (mid[:, None] + half * _GL_NODES[None, :]).ravel()
        vals = np.array([self._psi(t) for t in xs])
        w = np.tile(_GL_WEIGHTS * half, n_panels)
        self.nodes = np.concatenate([self.nodes, xs])
        self.weighted = np.concatenate([self.weighted, w * vals])
        self.t_end = float(edges[-1])
        self.psi_end = max(abs(vals[-8:]).max(), 1e-300)

    def _tail_bound(self, dist):
        # oscillatory bound 2 psi(T)/dist, or psi(T) T for the untwisted case
        if dist * self.t_end > 4.0:
            return 2.0 * self.psi_end / dist
        return self.psi_end * self.t_end

    def query(self, z, tol=1e-7):
        dist = abs(z - self.s.mu)
        if dist > self.MAX_DIST_SIGMA * self.s.sigma:
            raise ValueError(
                f"query {z} outside the inversion table design range "
                f"({self.MAX_DIST_SIGMA} standard deviations)"
            )
        while self._tail_bound(dist) > 0.3 * tol * math.pi:
            if self.nodes.size > 600_000:
                raise QuadratureConvergenceError(
                    f"CF inversion tail not under {tol:.1e} after "
                    f"{self.nodes.size} nodes (t_end={self.t_end:.1f})"
                )
            self._extend(256)
        return float(np.dot(self.weighted, np.cos(self.nodes * dist))) / math.pi


@lru_cache(maxsize=16)
def _inversion_table(s):
    return _InversionTable(s)


def pdf_by_cf_inversion(s, z, tol=1e-7):
    """Density of the sum at z by cosine inversion of the product CF."""
    return _inversion_table(s).query(float(z), tol)


# ---------------------------------------------------------------------------
# Monte Carlo statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class McStatistics:
    count: int
    seed: int
    mean: float
    mean_se: float
    variance: float
    variance_se: float
    m4: float
    m4_se: float
    kurtosis: float
    kurtosis_se: float
    cdf_points: tuple
    cdf_values: tuple
    cdf_se: tuple


def mc_statistics(s, count, seed, cdf_points=()):
    """Seeded Monte Carlo statistics of the sum with standard errors."""
    if count < 10_000:
        raise ValueError(f"count must be at least 10000, got {count}")
    root = np.random.SeedSequence(seed)
    sx, sy = root.spawn(2)
    zs = ggd_sample(s.x, count, int(sx.generate_state(1)[0])) + ggd_sample(
        s.y, count, int(sy.generate_state(1)[0])
    )
    n = float(count)
    mean = float(zs.mean())
    d = zs - mean
    m2 = float(np.mean(d ** 2))
    m4 = float(np.mean(d ** 4))
    m6 = float(np.mean(d ** 6))
    m8 = float(np.mean(d ** 8))
    var_m2 = (m4 - m2 ** 2) / n
    var_m4 = (m8 - m4 ** 2) / n
    cov_24 = (m6 - m2 * m4) / n
    kurt = m4 / m2 ** 2 - 3.0
    var_kurt = (
        var_m4 / m2 ** 4
        + 4.0 * m4 ** 2 * var_m2 / m2 ** 6
        - 4.0 * m4 * cov_24 / m2 ** 5
    )
    pts = tuple(float(q) for q in cdf_points)
    if pts:
        sorted_z = np.sort(zs)
        ranks = np.searchsorted(sorted_z, np.array(pts), side="right")
        fvals = ranks / n
        fse = np.sqrt(np.maximum(fvals * (1.0 - fvals), 1e-12) / n)
    else:
        fvals = np.empty(0)
        fse = np.empty(0)
    return McStatistics(
        count=count,
        seed=seed,
        mean=mean,
        mean_se=math.sqrt(m2 / n),
        variance=m2 * n / (n - 1.0),
        variance_se=math.sqrt(max(var_m2, 0.0)),
        m4=m4,
        m4_se=math.sqrt(max(var_m4, 0.0)),
        kurtosis=kurt,
        kurtosis_se=math.sqrt(max(var_kurt, 0.0)),
        cdf_points=pts,
        cdf_values=tuple(float(v) for v in fvals),
        cdf_se=tuple(float(v) for v in fse),
    )
