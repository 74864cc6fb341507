"""Hyperspherical-harmonic states and their Rakhmanov densities.

A state of the D-dimensional rigid rotator is labelled by the chain
``l = mu_1 >= mu_2 >= ... >= mu_{D-2} >= |mu_{D-1}| = |m|``.  Its density
|Y|^2 factorises into one Gegenbauer factor per polar angle, and every
measure in this package is built from those factors.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .special_functions import DomainError, PolySpec, gegenbauer_orthonormal

__all__ = [
    "StateError",
    "HyperState",
    "DensityFactor",
    "validate",
    "factorize",
    "density_eval",
    "parse_state",
    "iter_states",
]


class StateError(ValueError):
    """Hyperquantum numbers that do not form an admissible chain.

    ``index`` is the 1-based position in the chain of the first offending
    entry (``None`` for shape errors).
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class HyperState:
    dimension: int
    mu: tuple[int, ...]

    def __init__(self, dimension: int, mu: Sequence[int]):
        object.__setattr__(self, "dimension", int(dimension))
        object.__setattr__(self, "mu", tuple(int(v) for v in mu))

    @property
    def l(self) -> int:  # noqa: E743
        return self.mu[0]

    @property
    def m(self) -> int:
        return self.mu[-1]

    def mirrored(self) -> "HyperState":
        """Same state with ``m -> -m``."""
        return HyperState(self.dimension, self.mu[:-1] + (-self.mu[-1],))

    def literal(self) -> str:
        return f"{self.dimension}:" + ",".join(str(v) for v in self.mu)

    def __str__(self) -> str:
        return self.literal()


@dataclass(frozen=True)
class DensityFactor:
    """One polar factor ``[C_n^lam(cos t)]^2 (sin t)^sin_power`` of the density.

    ``alpha`` is the solid-angle exponent half-weight ``(D - j - 1)/2``; the
    1-D probability density of the factor is the above times
    ``(sin t)^(2 alpha)``.
    """

    index: int
    degree: int
    lam: float
    sin_power: int
    alpha: float

    @property
    def poly(self) -> PolySpec:
        return PolySpec(self.degree, self.lam)

    @property
    def mu_next(self) -> int:
        """``|mu_{j+1}|`` as used by this factor."""
        return self.sin_power // 2

    @property
    def jacobi_a(self) -> float:
        """Symmetric Jacobi parameter of the polynomial, ``lam - 1/2``."""
        return self.lam - 0.5


def validate(state: HyperState) -> HyperState:
    """Return ``state`` unchanged if its chain is admissible, else raise StateError."""
    d = state.dimension
    if d < 2:
        raise StateError(f"dimension must be at least 2, got {d}")
    if len(state.mu) != d - 1:
        raise StateError(f"D={d} needs {d - 1} quantum numbers, got {len(state.mu)}")
    if d == 2:
        return state
    mu = state.mu
    for i in range(d - 3):
        if mu[i] < mu[i + 1]:
            raise StateError(
                f"chain violated at index {i + 2}: mu_{i + 1}={mu[i]} < mu_{i + 2}={mu[i + 1]}",
                index=i + 2,
            )
    if mu[d - 3] < abs(mu[d - 2]):
        raise StateError(
            f"chain violated at index {d - 1}: mu_{d - 2}={mu[d - 3]} < |mu_{d - 1}|={abs(mu[d - 2])}",
            index=d - 1,
        )
    return state


def factorize(state: HyperState) -> list[DensityFactor]:
    """Polar factors of the density; empty for D = 2."""
    validate(state)
    d = state.dimension
    mu = list(state.mu)
    mu[-1] = abs(mu[-1])
    factors = []
    for j in range(1, d - 1):
        alpha = (d - j - 1) / 2
        nxt = mu[j]
        factors.append(
            DensityFactor(index=j, degree=mu[j - 1] - nxt, lam=alpha + nxt, sin_power=2 * nxt, alpha=alpha)
        )
    return factors


def density_eval(state: HyperState, angles: Sequence[float]) -> float:
    """Rakhmanov density |Y|^2 at the hyperspherical angles ``angles``.

    The solid-angle weight is not included; it belongs to the measure.
    """
    d = state.dimension
    angles = [float(t) for t in angles]
    if len(angles) != d - 1:
        raise DomainError(f"D={d} needs {d - 1} angles, got {len(angles)}")
    for t in angles[:-1]:
        if not 0.0 <= t <= math.pi:
            raise DomainError(f"polar angle {t} outside [0, pi]")
    if not 0.0 <= angles[-1] < 2 * math.pi:
        raise DomainError(f"azimuth {angles[-1]} outside [0, 2 pi)")
    rho = 1.0 / (2 * math.pi)
    for f, t in zip(factorize(state), angles):
        c = gegenbauer_orthonormal(f.poly, np.clip(math.cos(t), -1.0, 1.0))
        rho *= c * c * math.sin(t) ** f.sin_power
    return rho


_LITERAL = re.compile(r"^\s*(\d+)\s*:\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*$")


def parse_state(text: str) -> HyperState:
    """Parse ``"D:l,mu_2,...,m"`` (e.g. ``"3:2,1"``) into a validated state."""
    match = _LITERAL.match(text)
    if not match:
        raise StateError(f"cannot parse state literal {text!r}; expected 'D:l,...,m'")
    d = int(match.group(1))
    mu = [int(v) for v in match.group(2).split(",")]
    return validate(HyperState(d, mu))


def iter_states(dimension: int, l_max: int, l_min: int = 0) -> Iterator[HyperState]:
    """Every admissible state of the given dimension with ``l_min <= l <= l_max``.

    Ordered by ``l`` then lexicographically down the chain, ``+m`` before ``-m``.
    D = 2 yields ``m = 0, 1, -1, 2, -2, ...`` with ``|m| <= l_max``.
    """
    if dimension < 2:
        raise StateError(f"dimension must be at least 2, got {dimension}")
    if dimension == 2:
        for m in range(l_min, l_max + 1):
            yield HyperState(2, (m,))
            if m:
                yield HyperState(2, (-m,))
        return

    def chains(top: int, depth: int):
        if depth == 1:
            for m in range(top + 1):
                yield (m,)
                if m:
                    yield (-m,)
            return
        for v in range(top + 1):
            for rest in chains(v, depth - 1):
                yield (v,) + rest

    for l in range(l_min, l_max + 1):  # noqa: E741
        for rest in chains(l, dimension - 2):
            yield HyperState(dimension, (l,) + rest)
