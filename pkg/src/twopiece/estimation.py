"""Fitting the two-piece normal: method of moments, maximum likelihood, symmetry test.

Method of moments
-----------------
With s = sigma2 - sigma1, P = sigma1 sigma2 and b = sqrt(2/pi) the first
three population moments are

    mean = mu + b s
    var  = (1 - b^2) s^2 + P
    mu3  = b s ((2 b^2 - 1) s^2 + P)

Eliminating P with the variance leaves a cubic in s alone,

    b (3 b^2 - 2) s^3 + b var s - mu3 = 0,

so s (and hence the mean-mode distance b s) comes from the cubic, P from
the variance and mu from the mean.  Because 3 b^2 - 2 < 0 the left side is
increasing on the admissible range P > 0, so at most one root is usable.

Maximum likelihood
------------------
For fixed mu let S1 and S2 be the sums of squared deviations from mu to the
left and right of mu.  The likelihood equations for the scales then solve
in closed form,

    sigma1 = S1^(1/3) sqrt((S1^(1/3) + S2^(1/3)) / n),   likewise sigma2,

and the profile log-likelihood is a decreasing function of
g(mu) = S1^(1/3) + S2^(1/3).  The fit is a one-dimensional search for the
minimum of g.  The likelihood has a kink in mu at every observation, which
is why nothing here uses derivatives.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize, stats

from .core import SQRT_2_OVER_PI, TwoPieceNormal
from .errors import DegenerateData, InfeasibleSkewness, NoPositiveScales, TwoPieceError
from .numerics import minimize

__all__ = [
    "SampleStats",
    "SymmetryTest",
    "FitResult",
    "HALF_NORMAL_SKEWNESS",
    "fit_moments",
    "log_likelihood",
    "normal_log_likelihood",
    "fit_ml",
    "symmetry_test",
    "fisher_information",
]

log = logging.getLogger(__name__)

_B = SQRT_2_OVER_PI
_B2 = 2.0 / math.pi

# Moment skewness of the half-normal (sigma1 -> 0 with s = 1, P = 0): the
# attainable skewness of the family is the open interval (-this, +this).
HALF_NORMAL_SKEWNESS = _B * (2.0 * _B2 - 1.0) / (1.0 - _B2) ** 1.5

MIN_DISTINCT_ML = 10
LR_CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class SampleStats:
    """Sample mean and central moments (divisor n)."""

    n: int
    mean: float
    m2: float
    m3: float
    m4: Optional[float] = None

    def __post_init__(self):
        if self.n < 3:
            raise DegenerateData(f"need at least 3 observations, got {self.n}")
        if not self.m2 > 0:
            raise DegenerateData(f"second central moment must be positive, got {self.m2}")

    @classmethod
    def from_data(cls, data) -> "SampleStats":
        x = _as_data(data)
        mean = x.mean()
        dev = x - mean
        return cls(len(x), float(mean), float(np.mean(dev ** 2)), float(np.mean(dev ** 3)),
                   float(np.mean(dev ** 4)))

    @classmethod
    def from_distribution(cls, d: TwoPieceNormal, n: int = 10**6) -> "SampleStats":
        """Population moments dressed up as sample statistics."""
        return cls(n, d.mean(), d.variance(), d.third_central_moment(), d.fourth_central_moment())

    @property
    def skewness(self) -> float:
        return self.m3 / self.m2 ** 1.5


@dataclass(frozen=True)
class SymmetryTest:
    statistic: float
    p_value: float


@dataclass
class FitResult:
    params: TwoPieceNormal
    method: str
    log_likelihood: Optional[float] = None
    converged: bool = True
    iterations: int = 0
    symmetry_test: Optional[SymmetryTest] = None
    standard_errors: Optional[tuple] = None
    diagnostics: dict = field(default_factory=dict)


def _as_data(data) -> np.ndarray:
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise DegenerateData("empty dataset")
    if not np.all(np.isfinite(x)):
        raise DegenerateData("dataset contains non-finite values")
    return x


def _scales_from_gap(s: float, product: float) -> tuple[float, float]:
    """sigma1, sigma2 from their difference s and product; avoids cancellation."""
    r = math.sqrt(s * s + 4.0 * product)
    if s >= 0:
        sigma2 = 0.5 * (r + s)
        return product / sigma2, sigma2
    sigma1 = 0.5 * (r - s)
    return sigma1, product / sigma1


def _cubic_roots(var: float, mu3: float) -> list[float]:
    coeffs = [_B * (3.0 * _B2 - 2.0), 0.0, _B * var, -mu3]
    roots = [r.real for r in np.roots(coeffs) if abs(r.imag) <= 1e-9 * max(1.0, abs(r))]
    polished = []
    for s in roots:
        for _ in range(3):
            value = (coeffs[0] * s * s + coeffs[2]) * s + coeffs[3]
            slope = 3.0 * coeffs[0] * s * s + coeffs[2]
            if slope == 0.0:
                break
            s -= value / slope
        polished.append(s)
    return polished


def fit_moments(stats_or_data) -> FitResult:
    """Method-of-moments fit from ``SampleStats`` (or raw data).

    Raises
    ------
    InfeasibleSkewness
        If the moment skewness is not strictly inside the half-normal bounds.
    NoPositiveScales
        If no root of the cubic gives two positive scales.
    """
    data = None
    if isinstance(stats_or_data, SampleStats):
        st = stats_or_data
    else:
        data = _as_data(stats_or_data)
        st = SampleStats.from_data(data)

    skew = st.skewness
    if not abs(skew) < HALF_NORMAL_SKEWNESS:
        raise InfeasibleSkewness(
            f"sample skewness {skew:.6g} outside (-{HALF_NORMAL_SKEWNESS:.6g}, {HALF_NORMAL_SKEWNESS:.6g})"
        )

    diagnostics = {"skewness": skew}
    if st.m3 == 0.0:
        sd = math.sqrt(st.m2)
        params = TwoPieceNormal(st.mean, sd, sd)
    else:
        candidates = []
        for s in _cubic_roots(st.m2, st.m3):
            product = st.m2 - (1.0 - _B2) * s * s
            if product <= 0 or np.sign(s) != np.sign(st.m3):
                continue
            sigma1, sigma2 = _scales_from_gap(s, product)
            if sigma1 > 0 and sigma2 > 0:
                candidates.append(TwoPieceNormal(st.mean - _B * s, sigma1, sigma2))
        if not candidates:
            raise NoPositiveScales("no root of the moment cubic gives positive scales")
        if len(candidates) > 1:
            log.warning("moment cubic has %d admissible roots", len(candidates))
            diagnostics["admissible_roots"] = len(candidates)
            if st.m4 is not None:
                sample_kurtosis = st.m4 / st.m2 ** 2
                candidates.sort(key=lambda d: abs(d.kurtosis() - sample_kurtosis))
        params = candidates[0]

    ll = log_likelihood(params, data) if data is not None else None
    return FitResult(params, "moments", log_likelihood=ll, converged=True, iterations=0,
                     diagnostics=diagnostics)


def log_likelihood(d: TwoPieceNormal, data) -> float:
    x = _as_data(data)
    y = x - d.mu
    left = y <= 0
    quad = np.sum(y[left] ** 2) / (2.0 * d.sigma1 ** 2) + np.sum(y[~left] ** 2) / (2.0 * d.sigma2 ** 2)
    return float(len(x) * math.log(d.peak) - quad)


def normal_log_likelihood(data) -> float:
    """Maximized log-likelihood of the normal model (the sigma1 = sigma2 submodel)."""
    x = _as_data(data)
    n = len(x)
    var = np.mean((x - x.mean()) ** 2)
    return float(-0.5 * n * (math.log(2.0 * math.pi * var) + 1.0))


def fisher_information(d: TwoPieceNormal) -> np.ndarray:
    """Expected information per observation for (mu, sigma1, sigma2)."""
    s1, s2 = d.sigma1, d.sigma2
    c = 1.0 / (s1 + s2)
    return np.array([
        [1.0 / (s1 * s2), -2.0 * _B * c / s1, 2.0 * _B * c / s2],
        [-2.0 * _B * c / s1, 3.0 * c / s1 - c * c, -c * c],
        [2.0 * _B * c / s2, -c * c, 3.0 * c / s2 - c * c],
    ])


class _Profile:
    """Profile objective g(mu) on standardized, sorted data using prefix sums."""

    def __init__(self, z: np.ndarray):
        self.z = z
        self.n = len(z)
        self.c1 = np.concatenate([[0.0], np.cumsum(z)])
        self.c2 = np.concatenate([[0.0], np.cumsum(z * z)])
        self.evaluations = 0

    def sums(self, mu):
        mu = np.asarray(mu, dtype=float)
        k = np.searchsorted(self.z, mu, side="right")
        c1, c2, n = self.c1, self.c2, self.n
        s1 = c2[k] - 2.0 * mu * c1[k] + k * mu * mu
        s2 = (c2[-1] - c2[k]) - 2.0 * mu * (c1[-1] - c1[k]) + (n - k) * mu * mu
        return np.maximum(s1, 0.0), np.maximum(s2, 0.0)

    def __call__(self, mu):
        self.evaluations += np.size(mu)
        s1, s2 = self.sums(mu)
        return np.cbrt(s1) + np.cbrt(s2)

    def scales(self, mu: float) -> tuple[float, float]:
        s1, s2 = self.sums(mu)
        a, b = float(np.cbrt(s1)), float(np.cbrt(s2))
        factor = math.sqrt((a + b) / self.n)
        return a * factor, b * factor


def _search_profile(z: np.ndarray, n_refine: int = 5):
    """Minimize the profile objective over the interior of the data range.

    Returns (mu, profile, converged, at_boundary); ``at_boundary`` is set when
    the objective at the smallest or largest observation (a half-normal fit)
    beats every interior point, i.e. the likelihood has no interior maximum.
    """
    profile = _Profile(z)
    distinct = np.unique(z)
    # midpoints between order statistics, plus the sample mean (0 after
    # standardizing) so the normal fit is always a candidate
    grid = np.unique(np.concatenate([0.5 * (distinct[1:] + distinct[:-1]), [0.0]]))
    values = profile(grid)

    best_i = int(np.argmin(values))
    best_mu, best_val = float(grid[best_i]), float(values[best_i])
    converged = True
    for i in np.argsort(values)[:n_refine]:
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, len(grid) - 1)]
        if hi <= lo:
            continue
        res = optimize.minimize_scalar(lambda m: float(profile(m)), bounds=(lo, hi),
                                       method="bounded", options={"xatol": 1e-12})
        profile.evaluations += res.nfev
        if res.fun < best_val:
            best_mu, best_val = float(res.x), float(res.fun)
        converged &= bool(res.success)

    at_boundary = bool(np.min(profile(distinct[[0, -1]])) < best_val)
    return best_mu, profile, converged, at_boundary


def fit_ml(data, test_symmetry: bool = False) -> FitResult:
    """Maximum-likelihood fit of the two-piece normal.

    The profile objective is evaluated on the midpoints between order
    statistics (plus the sample mean), the best few grid cells are refined by
    bounded Brent search, and the result is polished by a joint Nelder-Mead
    run over (mu, log sigma1, log sigma2).  ``converged`` is False if any
    stage fails or if the likelihood keeps increasing towards a half-normal
    fit at the edge of the data, which is common for small samples.

    Standard errors come from the expected information at the estimate.  The
    likelihood is not twice differentiable in mu, so the one for mu rests on
    the direct asymptotic argument rather than the usual regularity
    conditions; treat it as approximate.

    Raises
    ------
    DegenerateData
        Fewer than ten distinct values.
    """
    x = _as_data(data)
    n = len(x)
    n_distinct = len(np.unique(x))
    if n_distinct < MIN_DISTINCT_ML:
        raise DegenerateData(f"need at least {MIN_DISTINCT_ML} distinct values, got {n_distinct}")

    loc = float(x.mean())
    scale = float(x.std())
    z = np.sort((x - loc) / scale)

    mu_z, profile, converged, at_boundary = _search_profile(z)
    s1_z, s2_z = profile.scales(mu_z)
    iterations = profile.evaluations
    diagnostics = {"profile_evaluations": profile.evaluations, "boundary": at_boundary}

    params_z = TwoPieceNormal(mu_z, s1_z, s2_z)
    if at_boundary:
        # the likelihood increases towards a half-normal at the edge of the
        # data; the best interior point is reported but not as converged
        converged = False
    else:
        start_ll = log_likelihood(params_z, z)

        def objective(v):
            return -log_likelihood(TwoPieceNormal(v[0], math.exp(v[1]), math.exp(v[2])), z) / n

        start = np.array([mu_z, math.log(s1_z), math.log(s2_z)])
        try:
            v = minimize(objective, start, tol=1e-12, step=[0.01, 0.01, 0.01])
            polished = TwoPieceNormal(v[0], math.exp(v[1]), math.exp(v[2]))
            improvement = log_likelihood(polished, z) - start_ll
            diagnostics["polish_improvement"] = improvement
            if improvement > 1e-8 * max(1.0, abs(start_ll)):
                log.info("joint polish improved the profile fit by %.3g", improvement)
                params_z = polished
        except TwoPieceError as exc:
            diagnostics["polish_error"] = str(exc)
            converged = False

    params = TwoPieceNormal(loc + scale * params_z.mu, scale * params_z.sigma1, scale * params_z.sigma2)
    ll = log_likelihood(params, x)
    try:
        cov = np.linalg.inv(fisher_information(params)) / n
        ses = tuple(float(v) for v in np.sqrt(np.diag(cov)))
    except np.linalg.LinAlgError:
        ses = None

    result = FitResult(params, "maximum-likelihood", log_likelihood=ll, converged=converged,
                       iterations=iterations, standard_errors=ses, diagnostics=diagnostics)
    if test_symmetry:
        result.symmetry_test = _lr_test(ll, normal_log_likelihood(x))
    return result


def _lr_test(ll_full: float, ll_null: float) -> SymmetryTest:
    statistic = 2.0 * (ll_full - ll_null)
    if statistic < 0:
        if statistic < -LR_CLAMP_TOL * max(1.0, abs(ll_null)):
            warnings.warn(f"two-piece fit below the normal fit by {-statistic / 2:.3g}; "
                          "check convergence", RuntimeWarning)
        statistic = 0.0
    p_value = 1.0 if statistic == 0.0 else float(stats.chi2.sf(statistic, 1))
    return SymmetryTest(statistic, p_value)


def symmetry_test(data) -> SymmetryTest:
    """Likelihood-ratio test of sigma1 = sigma2 against chi-squared(1)."""
    return fit_ml(data, test_symmetry=True).symmetry_test
