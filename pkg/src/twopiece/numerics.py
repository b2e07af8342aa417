"""Special functions and numerical kernels shared by the rest of the package.

The standard normal CDF comes from the Cephes ``ndtr`` routine (via scipy),
the quantile is a rational approximation polished by Halley steps, and
quadrature is an adaptive Gauss-Legendre scheme that maps infinite ranges
onto finite ones.  Quadrature is used as an independent check on the closed
forms elsewhere in the package; nothing on a hot path calls it.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, special

from .errors import DomainError, MaxIterations, NoSignChange, ToleranceNotReached

__all__ = [
    "QuadratureSpec",
    "RootBracket",
    "std_normal_pdf",
    "std_normal_cdf",
    "std_normal_quantile",
    "integrate",
    "find_root",
    "minimize",
    "ln_gamma",
    "regularized_gamma_p",
    "regularized_gamma_q",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty bracket [{self.lo}, {self.hi}]")


def _as_output(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


def std_normal_pdf(z):
    z = np.asarray(z, dtype=float)
    return _as_output(np.exp(-0.5 * z * z) / SQRT_2PI, z)


def std_normal_cdf(z):
    """Standard normal distribution function, elementwise."""
    z = np.asarray(z, dtype=float)
    return _as_output(special.ndtr(z), z)


def _std_normal_sf(z):
    return special.ndtr(-z)


# Acklam's rational approximation, relative error about 1.15e-9 before polishing
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758276161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _acklam(p):
    x = np.empty_like(p)
    lo = p < _P_LOW
    hi = p > 1.0 - _P_LOW
    mid = ~(lo | hi)

    q = p[mid] - 0.5
    r = q * q
    num = ((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    x[mid] = num * q / den

    for mask, tail, sign in ((lo, p[lo], 1.0), (hi, 1.0 - p[hi], -1.0)):
        q = np.sqrt(-2.0 * np.log(tail))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        x[mask] = sign * num / den
    return x


def std_normal_quantile(p):
    """Inverse of the standard normal distribution function.

    Parameters
    ----------
    p : float or array_like
        Probabilities strictly inside (0, 1).

    Returns
    -------
    float or ndarray
        ``z`` with ``std_normal_cdf(z) == p`` to about machine precision.

    Raises
    ------
    DomainError
        If any ``p`` lies outside the open unit interval.
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0.0) & (p_arr < 1.0))):
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    flat = np.atleast_1d(p_arr).astype(float).ravel()
    x = _acklam(flat)
    upper = flat > 0.5
    for _ in range(2):
        # Halley steps; the upper half works with tail areas to keep precision
        err = np.where(upper, (1.0 - flat) - _std_normal_sf(x), special.ndtr(x) - flat)
        u = err * SQRT_2PI * np.exp(0.5 * x * x)
        x = x - u / (1.0 + 0.5 * x * u)
    x = x.reshape(p_arr.shape)
    return _as_output(x, p_arr)


# Gauss-Legendre pair used for the local error estimate
_GL_LO = np.polynomial.legendre.leggauss(15)
_GL_HI = np.polynomial.legendre.leggauss(31)


def _eval(f, x):
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    return y


def _transformed(f, lo, hi):
    """Return (g, a, b) such that the integral of f over (lo, hi) equals that of g over (a, b)."""
    if math.isfinite(lo) and math.isfinite(hi):
        return f, lo, hi
    if math.isfinite(lo):
        def g(t):
            return _eval(f, lo + t / (1.0 - t)) / (1.0 - t) ** 2
        return g, 0.0, 1.0
    if math.isfinite(hi):
        def g(t):
            return _eval(f, hi - t / (1.0 - t)) / (1.0 - t) ** 2
        return g, 0.0, 1.0
    raise AssertionError("doubly infinite ranges are split before transforming")


def _panel(g, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    (x_lo, w_lo), (x_hi, w_hi) = _GL_LO, _GL_HI
    coarse = half * np.dot(w_lo, _eval(g, mid + half * x_lo))
    fine = half * np.dot(w_hi, _eval(g, mid + half * x_hi))
    return fine, abs(fine - coarse)


def integrate(
    f: Callable,
    lo: float,
    hi: float,
    spec: QuadratureSpec | None = None,
    points: Sequence[float] = (),
) -> float:
    """Adaptive quadrature of ``f`` over ``(lo, hi)``; either limit may be infinite.

    ``f`` is called with numpy arrays of abscissae.  ``points`` lists
    interior locations where ``f`` has kinks or jumps; the range is split
    there so that no panel straddles them.  Infinite pieces are mapped to
    ``[0, 1)`` with ``x = a + t / (1 - t)``.

    Raises
    ------
    ToleranceNotReached
        When the requested accuracy is not reached within
        ``spec.max_subdivisions`` bisections.
    """
    spec = spec or QuadratureSpec()
    if not lo < hi:
        raise DomainError(f"integration range ({lo}, {hi}) is empty")

    cuts = sorted(p for p in points if lo < p < hi)
    if not math.isfinite(lo) and not math.isfinite(hi) and not cuts:
        cuts = [0.0]
    edges = [lo, *cuts, hi]

    # entries: (-error, tiebreak, a, b, value, integrand); largest error pops first
    heap = []
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        g, ta, tb = _transformed(f, a, b)
        value, err = _panel(g, ta, tb)
        heap.append((-err, i, ta, tb, value, g))
    heapq.heapify(heap)
    counter = len(heap)

    for _ in range(spec.max_subdivisions):
        total = sum(item[4] for item in heap)
        error = -sum(item[0] for item in heap)
        if error <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            return float(total)
        neg_err, _, a, b, _, g = heapq.heappop(heap)
        m = 0.5 * (a + b)
        for ca, cb in ((a, m), (m, b)):
            value, err = _panel(g, ca, cb)
            heapq.heappush(heap, (-err, counter, ca, cb, value, g))
            counter += 1

    total = sum(item[4] for item in heap)
    error = -sum(item[0] for item in heap)
    if error <= max(spec.abs_tol, spec.rel_tol * abs(total)):
        return float(total)
    raise ToleranceNotReached(
        f"estimated error {error:.3g} after {spec.max_subdivisions} subdivisions"
    )


def find_root(f: Callable[[float], float], bracket, tol: float = 1e-14, maxiter: int = 200) -> float:
    """Root of a scalar function that changes sign over ``bracket``.

    Brent's method: inverse quadratic interpolation safeguarded by bisection,
    so every iterate stays inside the bracket.
    """
    if not isinstance(bracket, RootBracket):
        bracket = RootBracket(*bracket)
    f_lo, f_hi = f(bracket.lo), f(bracket.hi)
    if f_lo == 0.0:
        return float(bracket.lo)
    if f_hi == 0.0:
        return float(bracket.hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoSignChange(
            f"f({bracket.lo})={f_lo:.3g} and f({bracket.hi})={f_hi:.3g} have the same sign"
        )
    root, info = optimize.brentq(
        f, bracket.lo, bracket.hi, xtol=tol, rtol=4 * np.finfo(float).eps,
        maxiter=maxiter, full_output=True, disp=False,
    )
    if not info.converged:
        raise MaxIterations(f"root finder stopped after {info.iterations} iterations")
    return float(root)


def minimize(f: Callable, start, tol: float = 1e-10, maxiter: int = 20000, step=None) -> np.ndarray:
    """Derivative-free minimization with the Nelder-Mead simplex.

    The initial simplex uses ``step`` along each axis (default: 10% of the
    coordinate, or 0.1 for zero coordinates) so that starting at the origin
    does not produce a degenerate simplex.
    """
    x0 = np.atleast_1d(np.asarray(start, dtype=float))
    if not np.isfinite(f(x0)):
        raise DomainError("objective is not finite at the starting point")
    if step is None:
        step = np.where(x0 != 0.0, 0.1 * np.abs(x0), 0.1)
    step = np.broadcast_to(np.asarray(step, dtype=float), x0.shape)
    simplex = np.vstack([x0, x0 + np.diag(step)])
    res = optimize.minimize(
        f, x0, method="Nelder-Mead",
        options={
            "initial_simplex": simplex, "xatol": tol, "fatol": tol,
            "maxiter": maxiter, "maxfev": 2 * maxiter,
        },
    )
    if not res.success:
        raise MaxIterations(res.message)
    return res.x


def ln_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def regularized_gamma_p(a, x):
    """Regularized lower incomplete gamma function P(a, x)."""
    return special.gammainc(a, x)


def regularized_gamma_q(a, x):
    """Regularized upper incomplete gamma function Q(a, x) = 1 - P(a, x)."""
    return special.gammaincc(a, x)
