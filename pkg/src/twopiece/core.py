"""The two-piece normal distribution.

Density
    f(x) = A exp(-(x - mu)^2 / (2 sigma1^2))  for x <= mu
    f(x) = A exp(-(x - mu)^2 / (2 sigma2^2))  for x >= mu
with A = 2 / (sqrt(2 pi) (sigma1 + sigma2)).

Moments about the mode follow from the half-normal pieces: with
w1 = sigma1 / (sigma1 + sigma2) the left piece is mu - sigma1 |Z| and the
right piece is mu + sigma2 |Z|, so

    E[(X - mu)^k] = (sigma2^(k+1) + (-1)^k sigma1^(k+1)) E|Z|^k / (sigma1 + sigma2).

Writing s = sigma2 - sigma1, P = sigma1 sigma2 and b = sqrt(2 / pi):

    mean     = mu + b s
    variance = (1 - b^2) s^2 + P
    mu3      = b s ((4 / pi - 1) s^2 + P)
    mu4      = 3 var^2 + s^2 ((3 - 8/pi) P + (8/pi - 24/pi^2) s^2)
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParameters
from .numerics import SQRT_2PI, std_normal_cdf, std_normal_quantile

__all__ = ["TwoPieceNormal", "MomentSummary", "SQRT_2_OVER_PI"]

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
# E|Z|^k for Z standard normal, k = 0..4
_ABS_NORMAL_MOMENTS = (1.0, SQRT_2_OVER_PI, 1.0, 2.0 * SQRT_2_OVER_PI, 3.0)


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


def _check_probability(p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0.0) & (p_arr < 1.0))):
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    return p_arr


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    third_central_moment: float
    kurtosis: float
    mass_left: float
    skew_ratio: float

    @property
    def skewness(self) -> float:
        """Moment coefficient of skewness, mu3 / variance^1.5."""
        return self.third_central_moment / self.variance ** 1.5


@dataclass(frozen=True)
class TwoPieceNormal:
    """Two-piece normal distribution with mode ``mu`` and piece scales ``sigma1`` (left), ``sigma2`` (right).

    All evaluation methods accept scalars or arrays and return the same kind.

    Examples
    --------
    >>> d = TwoPieceNormal(0.0, 1.0, 2.0)
    >>> round(d.cdf(0.0), 12)
    0.333333333333
    """

    mu: float = 0.0
    sigma1: float = 1.0
    sigma2: float = 1.0

    def __post_init__(self):
        for name in ("mu", "sigma1", "sigma2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        if not (self.sigma1 > 0 and self.sigma2 > 0):
            raise InvalidParameters(
                f"sigma1 and sigma2 must be positive, got {self.sigma1}, {self.sigma2}"
            )

    @property
    def peak(self) -> float:
        """Density at the mode, the constant A."""
        return 2.0 / (SQRT_2PI * (self.sigma1 + self.sigma2))

    @property
    def mass_left(self) -> float:
        return self.sigma1 / (self.sigma1 + self.sigma2)

    @property
    def skew_ratio(self) -> float:
        return (self.sigma2 - self.sigma1) / (self.sigma2 + self.sigma1)

    def _scale_at(self, x):
        return np.where(x <= self.mu, self.sigma1, self.sigma2)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        z = (x - self.mu) / self._scale_at(x)
        return _scalar_or_array(self.peak * np.exp(-0.5 * z * z), x)

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        z = (x - self.mu) / self._scale_at(x)
        return _scalar_or_array(math.log(self.peak) - 0.5 * z * z, x)

    def cdf(self, x):
        """Distribution function, built by scaling standard normal probabilities on each piece."""
        x = np.asarray(x, dtype=float)
        s1, s2 = self.sigma1, self.sigma2
        total = s1 + s2
        left = (2.0 * s1 / total) * std_normal_cdf((x - self.mu) / s1)
        # right piece written with the upper tail to keep precision far right
        right = 1.0 - (2.0 * s2 / total) * std_normal_cdf(-(x - self.mu) / s2)
        return _scalar_or_array(np.where(x <= self.mu, left, right), x)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        s1, s2 = self.sigma1, self.sigma2
        total = s1 + s2
        left = 1.0 - (2.0 * s1 / total) * std_normal_cdf((x - self.mu) / s1)
        right = (2.0 * s2 / total) * std_normal_cdf(-(x - self.mu) / s2)
        return _scalar_or_array(np.where(x <= self.mu, left, right), x)

    def quantile(self, p):
        """Inverse distribution function.

        Probabilities up to the left-piece mass map through the left piece,
        the rest through the right piece; the boundary itself goes left.
        """
        p = _check_probability(p)
        s1, s2 = self.sigma1, self.sigma2
        total = s1 + s2
        in_left = p <= s1 / total
        # clip keeps the unused branch inside (0, 1); np.where evaluates both
        beta = np.clip(p * total / (2.0 * s1), 1e-300, 0.5)
        upper_tail = np.clip((1.0 - p) * total / (2.0 * s2), 1e-300, 0.5)
        x_left = self.mu + s1 * std_normal_quantile(beta)
        x_right = self.mu - s2 * std_normal_quantile(upper_tail)
        return _scalar_or_array(np.where(in_left, x_left, x_right), p)

    ppf = quantile

    def raw_moment_about_mode(self, k: int) -> float:
        """E[(X - mu)^k] for k = 0..4."""
        s1, s2 = self.sigma1, self.sigma2
        return (s2 ** (k + 1) + (-1) ** k * s1 ** (k + 1)) * _ABS_NORMAL_MOMENTS[k] / (s1 + s2)

    def mean(self) -> float:
        return self.mu + SQRT_2_OVER_PI * (self.sigma2 - self.sigma1)

    def variance(self) -> float:
        s = self.sigma2 - self.sigma1
        return (1.0 - 2.0 / math.pi) * s * s + self.sigma1 * self.sigma2

    def third_central_moment(self) -> float:
        s = self.sigma2 - self.sigma1
        return SQRT_2_OVER_PI * s * ((4.0 / math.pi - 1.0) * s * s + self.sigma1 * self.sigma2)

    def fourth_central_moment(self) -> float:
        return 3.0 * self.variance() ** 2 + self._excess_numerator()

    def _excess_numerator(self) -> float:
        # mu4 - 3 var^2 = s^2 ((3 - 8/pi) P + (8/pi - 24/pi^2) s^2)
        s = self.sigma2 - self.sigma1
        product = self.sigma1 * self.sigma2
        return s * s * ((3.0 - 8.0 / math.pi) * product
                        + (8.0 / math.pi - 24.0 / math.pi ** 2) * s * s)

    def kurtosis(self) -> float:
        """Moment ratio beta2 = mu4 / variance^2; exactly 3 when the scales are equal."""
        return 3.0 + self._excess_numerator() / self.variance() ** 2

    def moments(self) -> MomentSummary:
        return MomentSummary(
            mean=self.mean(),
            variance=self.variance(),
            third_central_moment=self.third_central_moment(),
            kurtosis=self.kurtosis(),
            mass_left=self.mass_left,
            skew_ratio=self.skew_ratio,
        )

    def median(self) -> float:
        return self.quantile(0.5)

    def central_values(self) -> tuple[float, float, float]:
        """(mean, median, mode)."""
        return self.mean(), self.median(), self.mu

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw ``n`` values: a piece is picked with probability equal to its mass,
        then a half-normal deviate is scaled by that piece's sigma."""
        if n < 0:
            raise DomainError(f"sample size must be non-negative, got {n}")
        go_left = rng.random(n) < self.mass_left
        z = np.abs(rng.standard_normal(n))
        return np.where(go_left, self.mu - self.sigma1 * z, self.mu + self.sigma2 * z)

    def to_split_parameterization(self) -> tuple[float, float]:
        """Return ``(scale, gamma)`` of the equivalent split-normal distribution."""
        return math.sqrt(self.sigma1 * self.sigma2), math.sqrt(self.sigma2 / self.sigma1)

    @classmethod
    def from_split_parameterization(cls, location: float, scale: float, gamma: float) -> "TwoPieceNormal":
        return cls(location, scale / gamma, scale * gamma)

    def mirror(self) -> "TwoPieceNormal":
        """Distribution of 2 mu - X."""
        return TwoPieceNormal(self.mu, self.sigma2, self.sigma1)
