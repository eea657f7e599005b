"""Fox H function and bivariate Fox H function via Mellin-Barnes quadrature.

The univariate evaluator integrates the gamma-product kernel along a
vertical contour Re(s) = c placed strictly between the left pole cluster
(from the numerator lower-group gammas) and the right pole cluster (from
the numerator upper-group gammas), with trapezoid nodes and automatic node
doubling.  Configurations without exponential decay along vertical lines
are routed to a residue (power-series) evaluation instead.

The bivariate evaluator iterates the same construction over two coupled
contours; the outer gamma factors tie the two integration variables
together through their sum.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gamma as _gamma_real
from scipy.special import gammainc, gammaincc, gammaln, rgamma

from . import _kernels

__all__ = [
    "GammaPoleError",
    "PoleSeparationError",
    "DivergentConfigurationError",
    "QuadratureConvergenceError",
    "ContourConfig",
    "FoxHSpec",
    "BivFoxHSpec",
    "ln_gamma_complex",
    "upper_incomplete_gamma",
    "fox_h",
    "fox_h_with_error",
    "biv_fox_h",
    "biv_fox_h_with_error",
]

SQRT_PI = math.sqrt(math.pi)


class GammaPoleError(ValueError):
    """log-gamma requested at a non-positive integer."""


class PoleSeparationError(ValueError):
    """No vertical contour separates the left and right pole clusters."""


class DivergentConfigurationError(ValueError):
    """Parameter configuration admits no convergent evaluation path."""


class QuadratureConvergenceError(RuntimeError):
    """Contour quadrature failed to meet the requested tolerance."""


def ln_gamma_complex(z):
    """Principal-branch log-gamma for complex scalar or array input.

    ``exp`` of the result reproduces the gamma function; the branch is the
    analytic continuation off the cut (-inf, 0].  Raises GammaPoleError at
    non-positive integers.
    """
    arr = np.asarray(z, dtype=np.complex128)
    bad = (arr.imag == 0.0) & (arr.real <= 0.0) & (arr.real == np.floor(arr.real))
    if np.any(bad):
        raise GammaPoleError("log-gamma pole at non-positive integer argument")
    out = _kernels.lngamma(arr)
    if np.ndim(z) == 0 and not isinstance(out, complex):
        return complex(out)
    return out


def upper_incomplete_gamma(a, x):
    """Upper incomplete gamma integral from x to infinity of t^(a-1) e^(-t)."""
    if a <= 0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0:
        raise ValueError(f"lower limit must be non-negative, got {x}")
    return float(np.exp(gammaln(a)) * gammaincc(a, x))


def regularized_upper_gamma(a, x):
    """Gamma(a, x) / Gamma(a); overflow-safe for large Gamma(a)."""
    if a <= 0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    out = gammaincc(a, np.maximum(x, 0.0))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class ContourConfig:
    """Quadrature controls for the Mellin-Barnes contours.

    node_count   starting trapezoid node count on the full contour
    half_length  truncation of the contour at Im(s) = +/- half_length
    shift_policy "midpoint" (center of the pole-free gap) or a float giving
                 the abscissa directly
    tol          absolute tolerance for the refinement loop
    """

    node_count: int = 512
    half_length: float = 40.0
    shift_policy: "str | float" = "midpoint"
    tol: float = 1e-8
    max_refinements: int = 6

    def __post_init__(self):
        if self.node_count < 64:
            raise ValueError("node_count must be at least 64")
        if self.half_length <= 0:
            raise ValueError("half_length must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


_DEFAULT_CFG = ContourConfig()


def _freeze_pairs(pairs):
    return tuple((float(a), float(b)) for a, b in pairs)


@dataclass(frozen=True)
class FoxHSpec:
    """Order quadruple and gamma coefficients of an H^{m,n}_{p,q} function.

    ``upper`` holds the p pairs (a_j, A_j), ``lower`` the q pairs (b_j, B_j).
    The kernel is

        prod_{j<=m} G(b_j + B_j s) prod_{j<=n} G(1 - a_j - A_j s)
        -----------------------------------------------------------  z^{-s}
        prod_{j>n} G(a_j + A_j s)  prod_{j>m} G(1 - b_j - B_j s)

    integrated over a vertical contour separating the poles of the two
    numerator groups.
    """

    m: int
    n: int
    p: int
    q: int
    upper: tuple = ()
    lower: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", _freeze_pairs(self.upper))
        object.__setattr__(self, "lower", _freeze_pairs(self.lower))
        if not (0 <= self.n <= self.p and 0 <= self.m <= self.q):
            raise ValueError(f"invalid orders m={self.m} n={self.n} p={self.p} q={self.q}")
        if len(self.upper) != self.p or len(self.lower) != self.q:
            raise ValueError("coefficient counts must match declared orders")
        if any(A <= 0 for _, A in self.upper) or any(B <= 0 for _, B in self.lower):
            raise ValueError("all scale coefficients must be strictly positive")
        if self.left_pole_max >= self.right_pole_min:
            raise PoleSeparationError(
                f"left poles reach {self.left_pole_max} but right poles start at "
                f"{self.right_pole_min}: no separating contour exists"
            )

    @property
    def left_pole_max(self):
        """Rightmost pole of the numerator lower-group gammas."""
        if self.m == 0:
            return -math.inf
        return max(-b / B for b, B in self.lower[: self.m])

    @property
    def right_pole_min(self):
        """Leftmost pole of the numerator upper-group gammas."""
        if self.n == 0:
            return math.inf
        return min((1.0 - a) / A for a, A in self.upper[: self.n])

    @property
    def delta(self):
        """sum(B_j) - sum(A_j); sign selects the convergent power series."""
        return sum(B for _, B in self.lower) - sum(A for _, A in self.upper)

    @property
    def astar(self):
        """Exponential decay coefficient of the kernel along vertical lines."""
        up = sum(A for _, A in self.upper[: self.n]) - sum(
            A for _, A in self.upper[self.n :]
        )
        low = sum(B for _, B in self.lower[: self.m]) - sum(
            B for _, B in self.lower[self.m :]
        )
        return up + low

    def swapped(self):
        """Equivalent spec in 1/z: H^{n,m}_{q,p} with reflected coefficients."""
        return FoxHSpec(
            m=self.n,
            n=self.m,
            p=self.q,
            q=self.p,
            upper=tuple((1.0 - b, B) for b, B in self.lower),
            lower=tuple((1.0 - a, A) for a, A in self.upper),
        )

    def _arrays(self):
        au = np.array([a for a, _ in self.upper], dtype=np.float64)
        Au = np.array([A for _, A in self.upper], dtype=np.float64)
        bl = np.array([b for b, _ in self.lower], dtype=np.float64)
        Bl = np.array([B for _, B in self.lower], dtype=np.float64)
        return au, Au, bl, Bl


def _abscissa(spec, policy):
    if isinstance(policy, (int, float)):
        return float(policy)
    lo, hi = spec.left_pole_max, spec.right_pole_min
    if math.isinf(lo) and math.isinf(hi):
        return 0.5
    if math.isinf(hi):
        return lo + 1.0
    if math.isinf(lo):
        return hi - 1.0
    return 0.5 * (lo + hi)


def classify_contour(spec):
    """Evaluation route for a spec: 'quadrature', 'series' or 'series-inverted'."""
    if spec.astar > 0:
        return "quadrature"
    if spec.delta > 0:
        return "series"
    if spec.delta < 0:
        return "series-inverted"
    raise DivergentConfigurationError(
        "kernel has no exponential decay along vertical contours (a* <= 0) and "
        "no convergent residue series (delta == 0)"
    )


@lru_cache(maxsize=128)
def _line_table(spec, c, half_length, n_nodes):
    """Contour nodes, trapezoid-weighted kernel values and boundary magnitude."""
    T = np.linspace(-half_length, half_length, n_nodes + 1)
    au, Au, bl, Bl = spec._arrays()
    kern = _kernels.hkernel_line(c, T, au, Au, spec.n, bl, Bl, spec.m)
    w = np.ones(T.size)
    w[0] = w[-1] = 0.5
    kern = kern * w
    boundary = max(abs(kern[0]), abs(kern[-1]))
    return T, kern, boundary


def _quad_level(spec, z, c, half_length, n_nodes):
    T, kern, boundary = _line_table(spec, c, half_length, n_nodes)
    step = T[1] - T[0]
    phase = np.exp(-(c + 1j * T) * math.log(z))
    total = np.dot(kern, phase) * step / (2.0 * math.pi)
    tail = boundary * (z ** -c) * step  # magnitude-scale of the truncated tail
    return total, tail


def _fox_h_quadrature(spec, z, cfg):
    c = _abscissa(spec, cfg.shift_policy)
    rate = 0.5 * math.pi * spec.astar
    n = cfg.node_count
    prev, _ = _quad_level(spec, z, c, cfg.half_length, n)
    for _ in range(cfg.max_refinements):
        n *= 2
        cur, tail_scale = _quad_level(spec, z, c, cfg.half_length, n)
        err = abs(cur - prev)
        if err <= cfg.tol:
            tail = tail_scale / max(rate, 1e-3)
            est = err + tail + 1e-15
            if abs(cur.imag) > max(cfg.tol, 1e-9 * abs(cur.real)):
                raise QuadratureConvergenceError(
                    f"imaginary residue {cur.imag:.3e} exceeds tolerance "
                    f"{cfg.tol:.1e} (value should be real)"
                )
            return float(cur.real), float(est)
        prev = cur
    raise QuadratureConvergenceError(
        f"contour quadrature did not converge to {cfg.tol:.1e} after "
        f"{cfg.max_refinements} node doublings (last change {err:.3e}); "
        "increase node_count or half_length"
    )


def _fox_h_series(spec, z, cfg):
    """Sum of residues at the left poles (valid when delta > 0)."""
    au, Au, bl, Bl = spec._arrays()
    seen = []
    total = 0.0
    last = math.inf
    small_streak = 0
    for k in range(0, 400):
        layer = 0.0
        layer_mag = 0.0
        for j in range(spec.m):
            s = -(bl[j] + k) / Bl[j]
            for other in seen:
                if abs(other - s) < 1e-10:
                    raise DivergentConfigurationError(
                        "coincident left poles: higher-order residues are not supported"
                    )
            seen.append(s)
            term = (-1.0) ** k / (math.factorial(k) * Bl[j])
            for i in range(spec.m):
                if i != j:
                    term *= _gamma_real(bl[i] + Bl[i] * s)
            for i in range(spec.m, spec.q):
                term *= rgamma(1.0 - bl[i] - Bl[i] * s)
            for i in range(spec.n):
                term *= _gamma_real(1.0 - au[i] - Au[i] * s)
            for i in range(spec.n, spec.p):
                term *= rgamma(au[i] + Au[i] * s)
            term *= z ** (-s)
            layer += term
            layer_mag = max(layer_mag, abs(term))
        total += layer
        if layer_mag <= 0.01 * cfg.tol * max(1.0, abs(total)):
            small_streak += 1
            if small_streak >= 3:
                return float(total), float(layer_mag + 1e-16)
        else:
            small_streak = 0
        if not math.isfinite(layer_mag):
            break
        last = layer_mag
    raise QuadratureConvergenceError(
        f"residue series did not converge (last layer magnitude {last:.3e})"
    )


def fox_h_with_error(spec, z, cfg=None):
    """Evaluate H[z] returning (value, estimated absolute error)."""
    if z <= 0:
        raise ValueError(f"argument must be positive, got {z}")
    cfg = cfg or _DEFAULT_CFG
    route = classify_contour(spec)
    if route == "quadrature":
        return _fox_h_quadrature(spec, z, cfg)
    if route == "series":
        return _fox_h_series(spec, z, cfg)
    return _fox_h_series(spec.swapped(), 1.0 / z, cfg)


def fox_h(spec, z, cfg=None):
    """Numerical value of the Fox H function at a positive real argument."""
    return fox_h_with_error(spec, z, cfg)[0]


# ---------------------------------------------------------------------------
# bivariate Fox H
# ---------------------------------------------------------------------------

def _freeze_triples(triples):
    return tuple((float(a), float(b), float(c)) for a, b, c in triples)


@dataclass(frozen=True)
class BivFoxHSpec:
    """Two-variable H function with coupled outer gamma factors.

    ``outer`` holds triples (c_j, C_j, C'_j); the first ``outer_num`` of them
    enter the kernel as Gamma(1 - c_j - C_j s - C'_j w) in the numerator and
    the rest as Gamma(c_j + C_j s + C'_j w) in the denominator.  ``inner1``
    and ``inner2`` are ordinary FoxHSpec blocks acting on s (argument x) and
    w (argument y), with the same z^{-s} kernel convention.
    """

    outer: tuple
    inner1: FoxHSpec
    inner2: FoxHSpec
    outer_num: int = 1

    def __post_init__(self):
        object.__setattr__(self, "outer", _freeze_triples(self.outer))
        if not (0 <= self.outer_num <= len(self.outer)):
            raise ValueError("outer_num must index into the outer triples")
        if any(C <= 0 or Cp <= 0 for _, C, Cp in self.outer):
            raise ValueError("all outer scale coefficients must be strictly positive")

    @property
    def orders(self):
        """(m,n,p,q) blocks in the conventional three-group ordering."""
        return (
            (0, self.outer_num, len(self.outer), 0),
            (self.inner1.m, self.inner1.n, self.inner1.p, self.inner1.q),
            (self.inner2.m, self.inner2.n, self.inner2.p, self.inner2.q),
        )

    def _rates(self):
        outer_bal = sum(C for _, C, _ in self.outer[: self.outer_num]) - sum(
            C for _, C, _ in self.outer[self.outer_num :]
        )
        outer_bal_p = sum(Cp for _, _, Cp in self.outer[: self.outer_num]) - sum(
            Cp for _, _, Cp in self.outer[self.outer_num :]
        )
        return (
            0.5 * math.pi * (self.inner1.astar + outer_bal),
            0.5 * math.pi * (self.inner2.astar + outer_bal_p),
        )

    def _uniform_outer(self):
        return all(C == Cp for _, C, Cp in self.outer)


@lru_cache(maxsize=64)
def _biv_abscissae(spec):
    """Contour abscissae (c1, c2) maximizing the pole-free clearance."""
    lo1, hi1 = spec.inner1.left_pole_max, spec.inner1.right_pole_min
    lo2, hi2 = spec.inner2.left_pole_max, spec.inner2.right_pole_min
    lo1 = -1.0 if math.isinf(lo1) else lo1
    lo2 = -1.0 if math.isinf(lo2) else lo2
    hi1 = lo1 + 2.0 if math.isinf(hi1) else hi1
    hi2 = lo2 + 2.0 if math.isinf(hi2) else hi2

    def clearance(c1, c2):
        d = min(c1 - lo1, hi1 - c1, c2 - lo2, hi2 - c2)
        for a, C, Cp in spec.outer[: spec.outer_num]:
            margin = (1.0 - a) - C * c1 - Cp * c2
            d = min(d, margin / max(C, Cp))
        return d

    grid1 = np.linspace(lo1, hi1, 41)[1:-1]
    grid2 = np.linspace(lo2, hi2, 41)[1:-1]
    best, best_c = -math.inf, (np.nan, np.nan)
    for c1 in grid1:
        for c2 in grid2:
            d = clearance(c1, c2)
            if d > best:
                best, best_c = d, (float(c1), float(c2))
    if best <= 0:
        raise PoleSeparationError(
            "no contour pair clears the outer and inner pole constraints"
        )
    return best_c


@lru_cache(maxsize=64)
def _biv_tables(spec, c1, c2, half_length, n_nodes):
    """Weighted inner kernels plus the outer factor on the index-sum grid."""
    T = np.linspace(-half_length, half_length, n_nodes + 1)
    au1, Au1, bl1, Bl1 = spec.inner1._arrays()
    au2, Au2, bl2, Bl2 = spec.inner2._arrays()
    k1 = _kernels.hkernel_line(c1, T, au1, Au1, spec.inner1.n, bl1, Bl1, spec.inner1.m)
    k2 = _kernels.hkernel_line(c2, T, au2, Au2, spec.inner2.n, bl2, Bl2, spec.inner2.m)
    w = np.ones(T.size)
    w[0] = w[-1] = 0.5
    k1 = k1 * w
    k2 = k2 * w

    if spec._uniform_outer():
        # C_j == C'_j: the outer factor depends on s and w only through
        # s + w, so it collapses onto the (2N+1)-point index-sum grid.
        Tu = np.linspace(-2 * half_length, 2 * half_length, 2 * n_nodes + 1)
        ao = np.array([a for a, _, _ in spec.outer], dtype=np.float64)
        Co = np.array([C for _, C, _ in spec.outer], dtype=np.float64)
        P = _kernels.hkernel_line(
            c1 + c2, Tu, ao, Co, spec.outer_num, np.empty(0), np.empty(0), 0
        )
    else:
        # General outer coupling: dense (N+1)^2 evaluation, flattened so the
        # reduction can still index it as P[j * (N+1) + k].
        S = c1 + 1j * T
        W = c2 + 1j * T
        acc = np.zeros((T.size, T.size), dtype=np.complex128)
        for j, (a, C, Cp) in enumerate(spec.outer):
            arg = (1.0 - a) - C * S[:, None] - Cp * W[None, :]
            if j < spec.outer_num:
                acc += _kernels.lngamma_np(arg)
            else:
                acc -= _kernels.lngamma_np(1.0 - arg)
        P = np.exp(acc)
    return T, k1, k2, P


def _biv_level(spec, x, y, c1, c2, half_length, n_nodes):
    T, k1, k2, P = _biv_tables(spec, c1, c2, half_length, n_nodes)
    step = T[1] - T[0]
    U = k1 * np.exp(-(c1 + 1j * T) * math.log(x))
    V = k2 * np.exp(-(c2 + 1j * T) * math.log(y))
    if P.ndim == 1:
        total = _kernels.biv_reduce(U, V, P)
    else:
        total = complex(U @ (P @ V))
    total *= (step / (2.0 * math.pi)) ** 2
    umax, vmax = np.abs(U).max(), np.abs(V).max()
    edge = 0.0
    if umax > 0 and vmax > 0:
        edge = max(abs(U[0]), abs(U[-1])) / umax + max(abs(V[0]), abs(V[-1])) / vmax
    return total, edge


def biv_fox_h_with_error(spec, x, y, cfg=None):
    """Evaluate the two-variable H function, returning (value, error estimate)."""
    if x <= 0 or y <= 0:
        raise ValueError(f"arguments must be positive, got ({x}, {y})")
    cfg = cfg or _DEFAULT_CFG
    r1, r2 = spec._rates()
    if r1 <= 0 or r2 <= 0:
        raise DivergentConfigurationError(
            f"no exponential contour decay for the inner blocks (rates {r1:.3g}, {r2:.3g})"
        )
    c1, c2 = _biv_abscissae(spec)
    n = cfg.node_count
    prev, _ = _biv_level(spec, x, y, c1, c2, cfg.half_length, n)
    for _ in range(cfg.max_refinements):
        n *= 2
        cur, edge = _biv_level(spec, x, y, c1, c2, cfg.half_length, n)
        err = abs(cur - prev)
        if err <= cfg.tol:
            est = err + edge * abs(cur) + 1e-15
            if abs(cur.imag) > max(cfg.tol, 1e-9 * abs(cur.real)):
                raise QuadratureConvergenceError(
                    f"imaginary residue {cur.imag:.3e} exceeds tolerance {cfg.tol:.1e}"
                )
            return float(cur.real), float(est)
        prev = cur
    raise QuadratureConvergenceError(
        f"double contour quadrature did not converge to {cfg.tol:.1e} after "
        f"{cfg.max_refinements} node doublings (last change {err:.3e})"
    )


def biv_fox_h(spec, x, y, cfg=None):
    """Numerical value of the bivariate Fox H function at positive arguments."""
    return biv_fox_h_with_error(spec, x, y, cfg)[0]
