"""Generalizations of the two-piece normal.

``FechnerFamily``
    Barnard's four-parameter family.  The right piece is
    K exp(-0.5 ((x - mu) / sigma)^a) and the left piece uses scale sigma / M,
    so M > 1 pushes mass to the right.  ``a = 2`` is the two-piece normal
    with sigma1 = sigma / M, sigma2 = sigma; ``a = 1`` is the asymmetric
    Laplace.  Integrating each piece gives

        K = 1 / (sigma (1 + 1/M) 2^(1/a) Gamma(1 + 1/a))

    and the left-piece mass 1 / (1 + M).

``SplitDistribution``
    Any symmetric unimodal base density f, skewed by gamma > 0:
    K f(gamma u) for u <= 0 and K f(u / gamma) for u >= 0, where
    u = (x - location) / scale and K = 2 / (gamma + 1/gamma).  The mass
    left of the location is 1 / (1 + gamma^2).  A normal base with
    scale sqrt(sigma1 sigma2) and gamma = sqrt(sigma2 / sigma1) reproduces
    the two-piece normal exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special

from .core import TwoPieceNormal
from .errors import DomainError, InvalidParameters
from .numerics import (
    ln_gamma,
    find_root,
    regularized_gamma_p,
    regularized_gamma_q,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
)

__all__ = [
    "FechnerFamily",
    "SymmetricBase",
    "SplitDistribution",
    "split_normal",
    "split_t",
    "split_from_two_piece",
]


def _out(value, like):
    return float(value) if np.ndim(like) == 0 else value


def _check_probability(p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0.0) & (p_arr < 1.0))):
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    return p_arr


def _require_finite_positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise InvalidParameters(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class FechnerFamily:
    mu: float = 0.0
    sigma: float = 1.0
    M: float = 1.0
    a: float = 2.0

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise InvalidParameters(f"mu must be finite, got {self.mu}")
        _require_finite_positive("sigma", self.sigma)
        _require_finite_positive("M", self.M)
        if not (math.isfinite(self.a) and self.a >= 1.0):
            raise InvalidParameters(f"a must satisfy 1 <= a < inf, got {self.a}")

    @property
    def left_scale(self) -> float:
        return self.sigma / self.M

    @property
    def log_norm_const(self) -> float:
        a = self.a
        return -(math.log(self.sigma) + math.log1p(1.0 / self.M)
                 + math.log(2.0) / a + ln_gamma(1.0 + 1.0 / a))

    @property
    def norm_const(self) -> float:
        """K, the density at the mode."""
        return math.exp(self.log_norm_const)

    @property
    def mass_left(self) -> float:
        return 1.0 / (1.0 + self.M)

    def _scaled_distance(self, x):
        y = x - self.mu
        # x == mu takes the right branch; both give zero there
        return np.where(y < 0, -y / self.left_scale, y / self.sigma)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        t = self._scaled_distance(x)
        return _out(self.norm_const * np.exp(-0.5 * t ** self.a), x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        t = self._scaled_distance(x)
        shape = 1.0 / self.a
        g = 0.5 * t ** self.a
        w_left = self.mass_left
        left = w_left * regularized_gamma_q(shape, g)
        right = w_left + (1.0 - w_left) * regularized_gamma_p(shape, g)
        return _out(np.where(x < self.mu, left, right), x)

    def quantile(self, p):
        """Inverse CDF by bracketed root finding.

        The bracket starts one scale either side of the mode and doubles
        until the target probability is enclosed.
        """
        p_arr = _check_probability(p)
        out = np.array([self._quantile_scalar(float(q)) for q in np.atleast_1d(p_arr).ravel()])
        return _out(out.reshape(p_arr.shape), p_arr)

    def _quantile_scalar(self, p: float) -> float:
        def objective(x):
            return self.cdf(x) - p

        width = max(self.sigma, self.left_scale)
        lo, hi = self.mu - width, self.mu + width
        while objective(lo) > 0:
            lo = self.mu - 2.0 * (self.mu - lo)
        while objective(hi) < 0:
            hi = self.mu + 2.0 * (hi - self.mu)
        return find_root(objective, (lo, hi), tol=1e-15 * max(1.0, abs(self.mu)) + 1e-300)

    def raw_moment_about_mode(self, k: int) -> float:
        a = self.a
        piece = math.exp(k / a * math.log(2.0) + ln_gamma((k + 1) / a) - ln_gamma(1.0 / a))
        w_left = self.mass_left
        return piece * ((1.0 - w_left) * self.sigma ** k + (-1) ** k * w_left * self.left_scale ** k)

    def mean(self) -> float:
        return self.mu + self.raw_moment_about_mode(1)

    def variance(self) -> float:
        m1 = self.raw_moment_about_mode(1)
        return self.raw_moment_about_mode(2) - m1 * m1

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if n < 0:
            raise DomainError(f"sample size must be non-negative, got {n}")
        go_left = rng.random(n) < self.mass_left
        # |x - mu| / scale = (2 G)^(1/a) with G ~ Gamma(1/a)
        t = (2.0 * rng.standard_gamma(1.0 / self.a, n)) ** (1.0 / self.a)
        return np.where(go_left, self.mu - self.left_scale * t, self.mu + self.sigma * t)

    def to_two_piece(self) -> TwoPieceNormal:
        if self.a != 2.0:
            raise DomainError("only the a = 2 member is a two-piece normal")
        return TwoPieceNormal(self.mu, self.left_scale, self.sigma)

    @classmethod
    def from_two_piece(cls, d: TwoPieceNormal) -> "FechnerFamily":
        return cls(d.mu, d.sigma2, d.sigma2 / d.sigma1, 2.0)


@dataclass(frozen=True)
class SymmetricBase:
    """Symmetric unimodal density on the real line: the standard normal or Student-t.

    ``nu`` is ignored for the normal.
    """

    kind: str = "normal"
    nu: Optional[float] = None
    _log_t_const: float = field(init=False, repr=False, compare=False, default=0.0)

    def __post_init__(self):
        if self.kind == "normal":
            return
        if self.kind != "t":
            raise InvalidParameters(f"unknown base kind {self.kind!r}")
        if self.nu is None:
            raise InvalidParameters("student-t base needs degrees of freedom nu")
        _require_finite_positive("nu", self.nu)
        nu = float(self.nu)
        log_c = ln_gamma((nu + 1) / 2) - ln_gamma(nu / 2) - 0.5 * math.log(nu * math.pi)
        object.__setattr__(self, "_log_t_const", log_c)

    @classmethod
    def normal(cls) -> "SymmetricBase":
        return cls("normal")

    @classmethod
    def student_t(cls, nu: float) -> "SymmetricBase":
        return cls("t", float(nu))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "normal":
            return std_normal_pdf(x)
        nu = self.nu
        return _out(np.exp(self._log_t_const - 0.5 * (nu + 1) * np.log1p(x * x / nu)), x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "normal":
            return std_normal_cdf(x)
        return _out(special.stdtr(self.nu, x), x)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if self.kind == "normal":
            return std_normal_quantile(p)
        return _out(special.stdtrit(self.nu, p), p)

    def abs_moment(self, k: int) -> float:
        """E|B|^k for a base draw B."""
        if self.kind == "normal":
            return math.exp(0.5 * k * math.log(2.0) + ln_gamma((k + 1) / 2) - 0.5 * math.log(math.pi))
        nu = self.nu
        if k >= nu:
            raise DomainError(f"student-t with nu={nu} has no finite moment of order {k}")
        return math.exp(0.5 * k * math.log(nu) + ln_gamma((k + 1) / 2) + ln_gamma((nu - k) / 2)
                        - 0.5 * math.log(math.pi) - ln_gamma(nu / 2))

    def sample_abs(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "normal":
            return np.abs(rng.standard_normal(n))
        return np.abs(rng.standard_t(self.nu, n))

    def __str__(self):
        return "normal" if self.kind == "normal" else f"t({self.nu:g})"


@dataclass(frozen=True)
class SplitDistribution:
    base: SymmetricBase = field(default_factory=SymmetricBase.normal)
    gamma: float = 1.0
    location: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        _require_finite_positive("gamma", self.gamma)
        _require_finite_positive("scale", self.scale)
        if not math.isfinite(self.location):
            raise InvalidParameters(f"location must be finite, got {self.location}")

    @property
    def norm_const(self) -> float:
        return 2.0 / (self.gamma + 1.0 / self.gamma)

    @property
    def mass_left(self) -> float:
        return 1.0 / (1.0 + self.gamma ** 2)

    def _u(self, x):
        return (x - self.location) / self.scale

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        u = self._u(x)
        g = self.gamma
        arg = np.where(u <= 0, g * u, u / g)
        return _out(self.norm_const / self.scale * self.base.density(arg), x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        u = self._u(x)
        g, k = self.gamma, self.norm_const
        left = (k / g) * self.base.cdf(g * u)
        # 1 - K gamma (1 - F(u / gamma)), with the tail taken by symmetry
        right = 1.0 - k * g * self.base.cdf(-u / g)
        return _out(np.where(u <= 0, left, right), x)

    def quantile(self, p):
        p = _check_probability(p)
        g, k = self.gamma, self.norm_const
        in_left = p <= self.mass_left
        left_arg = np.clip(p * g / k, 1e-300, 0.5)
        tail_arg = np.clip((1.0 - p) / (k * g), 1e-300, 0.5)
        u = np.where(in_left, self.base.quantile(left_arg) / g, -g * self.base.quantile(tail_arg))
        return _out(self.location + self.scale * u, p)

    def raw_moment_about_location(self, k: int) -> float:
        g = self.gamma
        return (self.scale ** k * 0.5 * self.norm_const * self.base.abs_moment(k)
                * (g ** (k + 1) + (-1) ** k * g ** -(k + 1)))

    def mean(self) -> float:
        return self.location + self.raw_moment_about_location(1)

    def variance(self) -> float:
        m1 = self.raw_moment_about_location(1)
        return self.raw_moment_about_location(2) - m1 * m1

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if n < 0:
            raise DomainError(f"sample size must be non-negative, got {n}")
        go_left = rng.random(n) < self.mass_left
        b = self.base.sample_abs(rng, n)
        return np.where(go_left,
                        self.location - (self.scale / self.gamma) * b,
                        self.location + self.scale * self.gamma * b)

    def mirror(self) -> "SplitDistribution":
        """Distribution of 2 location - X, i.e. gamma replaced by 1 / gamma."""
        return SplitDistribution(self.base, 1.0 / self.gamma, self.location, self.scale)

    def to_two_piece(self) -> TwoPieceNormal:
        if self.base.kind != "normal":
            raise DomainError("only a normal base gives a two-piece normal")
        return TwoPieceNormal.from_split_parameterization(self.location, self.scale, self.gamma)


def split_normal(gamma: float, location: float = 0.0, scale: float = 1.0) -> SplitDistribution:
    return SplitDistribution(SymmetricBase.normal(), gamma, location, scale)


def split_t(nu: float, gamma: float, location: float = 0.0, scale: float = 1.0) -> SplitDistribution:
    return SplitDistribution(SymmetricBase.student_t(nu), gamma, location, scale)


def split_from_two_piece(d: TwoPieceNormal) -> SplitDistribution:
    scale, gamma = d.to_split_parameterization()
    return split_normal(gamma, d.mu, scale)
