"""Hot numeric kernels: complex log-gamma and Mellin-Barnes contour sums.

Two interchangeable backends provide the same arithmetic:

* a numba ``@njit`` backend (default when numba imports cleanly), and
* a pure-numpy backend.

Set ``GENGAUSS_NUMBA=0`` in the environment to force the numpy path; any
other value (or an absent variable) selects numba when it is available.
``benchmarks/bench_backends.py`` times the two side by side.
"""

import cmath
import os

import numpy as np

__all__ = [
    "NUMBA_ENABLED",
    "backend_name",
    "lngamma",
    "lngamma_np",
    "hkernel_line",
    "hkernel_line_np",
    "biv_reduce",
    "biv_reduce_np",
]

# Lanczos approximation, g = 7, 9 coefficients (Godfrey's set).  Relative
# accuracy ~1e-15 for Re z >= 0.5; arguments left of that line are shifted up
# with ln G(z) = ln G(z+1) - log z, which preserves the principal branch off
# the cut (-inf, 0].
_LANCZOS_G = 7.0
_LANCZOS = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_HALF_LOG_TWO_PI = 0.9189385332046727417803297364


def _want_numba():
    flag = os.environ.get("GENGAUSS_NUMBA", "auto").strip().lower()
    if flag in ("0", "false", "off", "no", "numpy"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _want_numba()


def backend_name():
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# pure-numpy backend
# ---------------------------------------------------------------------------

def lngamma_np(z):
    """Principal-branch log-gamma of a complex array (vectorized Lanczos)."""
    z = np.array(z, dtype=np.complex128, copy=True)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    shift = np.zeros(z.shape, dtype=np.complex128)
    mask = z.real < 0.5
    while mask.any():
        shift[mask] -= np.log(z[mask])
        z[mask] += 1.0
        mask = z.real < 0.5
    w = z - 1.0
    series = np.full(z.shape, _LANCZOS[0], dtype=np.complex128)
    for i in range(1, 9):
        series += _LANCZOS[i] / (w + i)
    t = w + _LANCZOS_G + 0.5
    out = _HALF_LOG_TWO_PI + (w + 0.5) * np.log(t) - t + np.log(series) + shift
    return out[0] if scalar else out


def hkernel_line_np(c, T, au, Au, n_up, bl, Bl, m_low):
    """Gamma-product kernel of a Mellin-Barnes integrand along s = c + iT.

    Numerator: Gamma(b_j + B_j s) for j < m_low and Gamma(1 - a_j - A_j s)
    for j < n_up; remaining coefficients feed the denominator.
    """
    s = c + 1j * np.asarray(T, dtype=np.float64)
    acc = np.zeros(s.shape, dtype=np.complex128)
    for j in range(bl.size):
        if j < m_low:
            acc += lngamma_np(bl[j] + Bl[j] * s)
        else:
            acc -= lngamma_np(1.0 - bl[j] - Bl[j] * s)
    for j in range(au.size):
        if j < n_up:
            acc += lngamma_np(1.0 - au[j] - Au[j] * s)
        else:
            acc -= lngamma_np(au[j] + Au[j] * s)
    return np.exp(acc)


def biv_reduce_np(U, V, P):
    """sum_{j,k} U[j] V[k] P[j+k] with len(P) == len(U) + len(V) - 1."""
    if U.size * V.size <= (1 << 18):
        conv = np.convolve(U, V)
    else:
        from scipy.signal import fftconvolve

        conv = fftconvolve(U, V)
    return complex(np.dot(conv, P))


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    from numba import njit

    @njit(cache=True)
    def _lngamma_scalar(z):
        shift = 0.0 + 0.0j
        while z.real < 0.5:
            shift -= cmath.log(z)
            z += 1.0
        w = z - 1.0
        series = complex(_LANCZOS[0])
        for i in range(1, 9):
            series += _LANCZOS[i] / (w + i)
        t = w + _LANCZOS_G + 0.5
        return _HALF_LOG_TWO_PI + (w + 0.5) * cmath.log(t) - t + cmath.log(series) + shift

    @njit(cache=True)
    def _lngamma_array_nb(z):
        out = np.empty(z.shape, dtype=np.complex128)
        for i in range(z.size):
            out[i] = _lngamma_scalar(z[i])
        return out

    def lngamma(z):
        z = np.asarray(z, dtype=np.complex128)
        if z.ndim == 0:
            return complex(_lngamma_scalar(complex(z)))
        return _lngamma_array_nb(np.ascontiguousarray(z))

    @njit(cache=True)
    def _hkernel_line_nb(c, T, au, Au, n_up, bl, Bl, m_low):
        out = np.empty(T.size, dtype=np.complex128)
        for i in range(T.size):
            s = complex(c, T[i])
            acc = 0.0 + 0.0j
            for j in range(bl.size):
                if j < m_low:
                    acc += _lngamma_scalar(bl[j] + Bl[j] * s)
                else:
                    acc -= _lngamma_scalar(1.0 - bl[j] - Bl[j] * s)
            for j in range(au.size):
                if j < n_up:
                    acc += _lngamma_scalar(1.0 - au[j] - Au[j] * s)
                else:
                    acc -= _lngamma_scalar(au[j] + Au[j] * s)
            out[i] = cmath.exp(acc)
        return out

    def hkernel_line(c, T, au, Au, n_up, bl, Bl, m_low):
        return _hkernel_line_nb(
            float(c),
            np.ascontiguousarray(T, dtype=np.float64),
            np.ascontiguousarray(au, dtype=np.float64),
            np.ascontiguousarray(Au, dtype=np.float64),
            int(n_up),
            np.ascontiguousarray(bl, dtype=np.float64),
            np.ascontiguousarray(Bl, dtype=np.float64),
            int(m_low),
        )

    @njit(cache=True)
    def _biv_reduce_nb(U, V, P):
        # Skip contour nodes whose kernel magnitude is negligible; the
        # integrands decay exponentially toward the truncation ends.
        umax = 0.0
        for j in range(U.size):
            a = abs(U[j])
            if a > umax:
                umax = a
        vmax = 0.0
        for k in range(V.size):
            a = abs(V[k])
            if a > vmax:
                vmax = a
        uth = umax * 1e-20
        vth = vmax * 1e-20
        j0, j1 = 0, U.size
        while j0 < j1 and abs(U[j0]) < uth:
            j0 += 1
        while j1 > j0 and abs(U[j1 - 1]) < uth:
            j1 -= 1
        k0, k1 = 0, V.size
        while k0 < k1 and abs(V[k0]) < vth:
            k0 += 1
        while k1 > k0 and abs(V[k1 - 1]) < vth:
            k1 -= 1
        total = 0.0 + 0.0j
        for j in range(j0, j1):
            uj = U[j]
            row = 0.0 + 0.0j
            for k in range(k0, k1):
                row += V[k] * P[j + k]
            total += uj * row
        return total

    def biv_reduce(U, V, P):
        return complex(
            _biv_reduce_nb(
                np.ascontiguousarray(U),
                np.ascontiguousarray(V),
                np.ascontiguousarray(P),
            )
        )

else:
    lngamma = lngamma_np
    hkernel_line = hkernel_line_np
    biv_reduce = biv_reduce_np
