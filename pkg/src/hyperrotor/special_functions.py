"""Gamma-family helpers and orthonormal Gegenbauer polynomials.

Ratios of gamma functions grow past the float range long before the
quantum numbers of interest do, so everything that multiplies gammas is
carried as a :class:`LogSigned` pair (log of the magnitude plus a sign).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "LogSigned",
    "PolySpec",
    "log_gamma",
    "pochhammer_logsigned",
    "jacobi_norm",
    "gegenbauer_orthonormal",
    "gegenbauer_orthonormal_derivative",
]


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


@dataclass(frozen=True)
class LogSigned:
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``sign == 0`` means the value is exactly zero and ``log_magnitude`` is
    ignored (kept at ``-inf`` by convention).
    """

    log_magnitude: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")

    @classmethod
    def zero(cls) -> "LogSigned":
        return cls(-math.inf, 0)

    @classmethod
    def one(cls) -> "LogSigned":
        return cls(0.0, 1)

    @classmethod
    def from_float(cls, x: float) -> "LogSigned":
        if x == 0:
            return cls.zero()
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    @property
    def value(self) -> float:
        """Linear-space value; may overflow to ``inf`` for huge magnitudes."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            return self.sign * math.inf

    def __float__(self) -> float:
        return self.value

    def __mul__(self, other: "LogSigned") -> "LogSigned":
        if not isinstance(other, LogSigned):
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return LogSigned.zero()
        return LogSigned(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    def __truediv__(self, other: "LogSigned") -> "LogSigned":
        if not isinstance(other, LogSigned):
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by an exact zero")
        if self.sign == 0:
            return LogSigned.zero()
        return LogSigned(self.log_magnitude - other.log_magnitude, self.sign * other.sign)

    def __pow__(self, p: float) -> "LogSigned":
        if self.sign == 0:
            if p > 0:
                return LogSigned.zero()
            raise ZeroDivisionError("non-positive power of an exact zero")
        if self.sign < 0:
            if float(p).is_integer():
                return LogSigned(self.log_magnitude * p, -1 if int(p) % 2 else 1)
            raise DomainError("non-integer power of a negative number")
        return LogSigned(self.log_magnitude * p, 1)


@dataclass(frozen=True)
class PolySpec:
    """Degree ``n`` and parameter ``lam`` of an orthonormal Gegenbauer polynomial."""

    degree: int
    lam: float

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise DomainError(f"degree must be a non-negative integer, got {self.degree!r}")
        if not self.lam > -0.5:
            raise DomainError(f"lambda must exceed -1/2, got {self.lam!r}")


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"log_gamma needs x > 0, got {x!r}")
    return math.lgamma(x)


def _gamma_sign(x: float) -> int:
    # sign of Gamma(x) for x not a non-positive integer
    if x > 0:
        return 1
    return -1 if math.ceil(-x) % 2 else 1


def pochhammer_logsigned(a: float, k: int) -> LogSigned:
    """Rising factorial ``(a)_k = a (a+1) ... (a+k-1)`` in log-signed form."""
    k = int(k)
    if k < 0:
        raise DomainError("Pochhammer order must be non-negative")
    if k == 0:
        return LogSigned.one()
    if a > 0:
        return LogSigned(math.lgamma(a + k) - math.lgamma(a), 1)
    if float(a).is_integer():
        # (a)_k = (-1)^k (-a)! / (-a-k)!  while the product stays clear of zero
        if k > -a:
            return LogSigned.zero()
        mag = math.lgamma(1 - a) - math.lgamma(1 - a - k)
        return LogSigned(mag, -1 if k % 2 else 1)
    mag = math.lgamma(a + k) - math.lgamma(a)
    return LogSigned(mag, _gamma_sign(a + k) * _gamma_sign(a))


def jacobi_norm(n: int, alpha: float, beta: float) -> LogSigned:
    """Norm ``d_n`` of the Jacobi polynomial ``P_n^(alpha, beta)``.

    ``d_n**2`` is the integral of ``P_n**2 (1-x)**alpha (1+x)**beta`` over
    [-1, 1].  The ``n = 0`` case uses ``(ab+1) Gamma(ab+1) = Gamma(ab+2)``
    so that ``alpha + beta = -1`` is not a removable singularity.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"Jacobi parameters must exceed -1, got ({alpha!r}, {beta!r})")
    ab = alpha + beta
    log_sq = (ab + 1) * math.log(2.0) + math.lgamma(n + alpha + 1) + math.lgamma(n + beta + 1)
    if n == 0:
        log_sq -= math.lgamma(ab + 2)
    else:
        log_sq -= math.lgamma(n + 1) + math.log(2 * n + ab + 1) + math.lgamma(n + ab + 1)
    return LogSigned(0.5 * log_sq, 1)


def _check_unit_interval(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("Gegenbauer argument must lie in [-1, 1]")
    return x


def jacobi_symmetric(n: int, a: float, x):
    """Classical ``P_n^(a, a)(x)`` by the three-term recurrence (vectorised)."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev
    p = (a + 1.0) * x
    for k in range(2, n + 1):
        s = 2 * k + 2 * a
        # general Jacobi recurrence with alpha = beta, so the alpha^2 - beta^2 term drops
        c_x = (s - 1) * s * (s - 2)
        c_prev = 2 * (k + a - 1) ** 2 * s
        c_new = 2 * k * (k + 2 * a) * (s - 2)
        p_prev, p = p, (c_x * x * p - c_prev * p_prev) / c_new
    return p


def gegenbauer_orthonormal(spec: PolySpec, x):
    """Orthonormal Gegenbauer polynomial with weight ``(1-x^2)^(lam-1/2)``.

    Uses the symmetric Jacobi form ``P_n^(a,a)`` with ``a = lam - 1/2`` and
    divides by its log-space norm. Accepts scalars or arrays.
    """
    x = _check_unit_interval(x)
    a = spec.lam - 0.5
    p = jacobi_symmetric(spec.degree, a, x)
    out = p * math.exp(-jacobi_norm(spec.degree, a, a).log_magnitude)
    return out if out.ndim else float(out)


def gegenbauer_orthonormal_derivative(spec: PolySpec, x):
    """d/dx of :func:`gegenbauer_orthonormal`.

    Uses ``d/dx P_n^(a,a) = (n + 2a + 1)/2 * P_{n-1}^(a+1,a+1)``.
    """
    x = _check_unit_interval(x)
    n = spec.degree
    if n == 0:
        out = np.zeros_like(x)
        return out if out.ndim else 0.0
    a = spec.lam - 0.5
    dp = 0.5 * (n + 2 * a + 1) * jacobi_symmetric(n - 1, a + 1, x)
    out = dp * math.exp(-jacobi_norm(n, a, a).log_magnitude)
    return out if out.ndim else float(out)
