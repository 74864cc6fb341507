"""Exact entropic moments for integer order via power linearization.

The constant term of ``[P_n^(a,b)]^r`` expanded in ``P_i^(g,d)`` is

    c(r, n, a, b, g, d) = binom(n+a, n)^r
        sum_{j_1..j_r} (g+1)_J / (g+d+2)_J * prod_i t_{j_i},   J = sum j_i

with ``t_j = (-n)_j (a+b+n+1)_j / ((a+1)_j j!)``.  The summand depends on
the multi-index only through the product of ``t`` and the total ``J``, so
the r-fold sum is the contraction of the coefficients of ``P(z)^r`` (with
``P(z) = sum_j t_j z^j``) against ``(g+1)_K / (g+d+2)_K``.

The ``t_j`` alternate in sign and reach ~1e55 at n = 80 while the result is
O(1), so no floating-point accumulation survives. Everything below runs in
exact rational arithmetic (python integers after clearing denominators),
and only the final ratio is taken to log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

from .quantum_state import HyperState, factorize, validate
from .special_functions import LogSigned, jacobi_norm

__all__ = [
    "SDParams",
    "MomentValue",
    "UnsupportedOrderError",
    "sd_coefficient",
    "beta0",
    "entropic_moment_exact",
]

# rounding per unit of log magnitude when an exact ratio or lgamma goes to log space
_ROUNDING = 4 * np.finfo(float).eps


class UnsupportedOrderError(ValueError):
    """The exact path only serves integer orders q >= 1."""


def _exact(x) -> Fraction:
    # float -> Fraction is exact (dyadic); half-integers stay small
    if isinstance(x, Rational):
        return Fraction(x)
    return Fraction(float(x))


@dataclass(frozen=True)
class SDParams:
    r: int
    n: int
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction

    def __init__(self, r, n, alpha, beta, gamma, delta):
        if int(r) != r or r < 1:
            raise ValueError(f"r must be a positive integer, got {r!r}")
        if int(n) != n or n < 0:
            raise ValueError(f"n must be a non-negative integer, got {n!r}")
        vals = [_exact(v) for v in (alpha, beta, gamma, delta)]
        if any(v <= -1 for v in vals):
            raise ValueError("alpha, beta, gamma, delta must all exceed -1")
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "n", int(n))
        for name, v in zip(("alpha", "beta", "gamma", "delta"), vals):
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class MomentValue:
    value: LogSigned
    q: int
    state: HyperState
    rel_error: float = 0.0

    @property
    def linear(self) -> float:
        return self.value.value


def _clear_denominators(coeffs: list[Fraction]) -> tuple[list[int], int]:
    den = math.lcm(*(c.denominator for c in coeffs))
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def _poly_power(coeffs: list[int], r: int) -> np.ndarray:
    base = np.array(coeffs, dtype=object)
    out = np.array([1], dtype=object)
    while r:
        if r & 1:
            out = np.convolve(out, base)
        r >>= 1
        if r:
            base = np.convolve(base, base)
    return out


def _log_fraction(x: Fraction) -> LogSigned:
    if x == 0:
        return LogSigned.zero()
    # math.log accepts arbitrarily large ints
    return LogSigned(math.log(abs(x.numerator)) - math.log(x.denominator), 1 if x > 0 else -1)


@lru_cache(maxsize=4096)
def _sd_exact(p: SDParams) -> Fraction:
    n, a, b, g, d = p.n, p.alpha, p.beta, p.gamma, p.delta
    t = [Fraction(1)]
    for j in range(n):
        t.append(t[-1] * (j - n) * (a + b + n + 1 + j) / ((a + 1 + j) * (j + 1)))
    ints, den = _clear_denominators(t)
    e = _poly_power(ints, p.r)

    w = [Fraction(1)]
    for k in range(len(e) - 1):
        w.append(w[-1] * (g + 1 + k) / (g + d + 2 + k))
    w_ints, w_den = _clear_denominators(w)
    total = sum(int(ek) * wk for ek, wk in zip(e, w_ints))

    binom = Fraction(1)
    for i in range(n):
        binom = binom * (a + 1 + i) / (i + 1)
    return binom ** p.r * Fraction(total, w_den * den ** p.r)


def sd_coefficient(p: SDParams) -> LogSigned:
    """Constant linearization coefficient ``c(r, n, alpha, beta, gamma, delta)``."""
    return _log_fraction(_sd_exact(p))


def _factor_at(state: HyperState, j: int):
    factors = factorize(state)
    if not 1 <= j <= len(factors):
        raise IndexError(f"factor index {j} outside 1..{len(factors)} for D={state.dimension}")
    return factors[j - 1]


def _beta0_params(f, q: int) -> SDParams:
    # Jacobi parameters are half-integers; keep them exact
    a = Fraction(f.mu_next) + Fraction(int(2 * f.alpha), 2) - Fraction(1, 2)
    g = q * Fraction(f.mu_next) + Fraction(int(2 * f.alpha), 2) - Fraction(1, 2)
    return SDParams(2 * q, f.degree, a, a, g, g)


def beta0(j: int, q: int, state: HyperState) -> LogSigned:
    """Constant coefficient of the 2q-th power of the j-th polar factor's polynomial."""
    validate(state)
    if int(q) != q or q < 1:
        raise UnsupportedOrderError(f"beta0 needs integer q >= 1, got {q!r}")
    return sd_coefficient(_beta0_params(_factor_at(state, j), int(q)))


def entropic_moment_exact(state: HyperState, q: int) -> MomentValue:
    """W_q of the state's density for integer ``q >= 1`` via linearization."""
    validate(state)
    if isinstance(q, bool) or float(q) != int(q) or q < 1:
        raise UnsupportedOrderError(
            f"exact entropic moments need integer q >= 1, got {q!r}; use the quadrature path"
        )
    q = int(q)
    if q == 1:
        return MomentValue(LogSigned.one(), 1, state, 0.0)

    total = LogSigned(-(q - 1) * math.log(2 * math.pi), 1)
    # lgamma rounding is relative to the log, so the budget scales with |log|
    log_budget = 1.0 + abs(total.log_magnitude)
    for f in factorize(state):
        p = _beta0_params(f, q)
        a = float(p.alpha)
        g = float(p.gamma)
        parts = (sd_coefficient(p), jacobi_norm(0, g, g) ** 2, jacobi_norm(f.degree, a, a) ** (2 * q))
        total = total * parts[0] * parts[1] / parts[2]
        log_budget += sum(1.0 + abs(x.log_magnitude) for x in parts)
    if total.sign != 1:
        raise ArithmeticError(f"non-positive entropic moment for {state} at q={q}")
    return MomentValue(total, q, state, log_budget * _ROUNDING)
