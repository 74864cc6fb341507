"""Fisher information in closed form and the entropy/complexity measures built on it.

Entropic moments come from the exact linearization path for integer q and
from quadrature otherwise (``path`` overrides the choice).  Composite
measures propagate first-order absolute errors from their ingredients.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Literal

from .entropies import (
    DEFAULT_SPEC,
    QuadratureSpec,
    ScalarResult,
    entropic_moment_quadrature,
    shannon_entropy,
)
from .linearization import UnsupportedOrderError, entropic_moment_exact
from .quantum_state import HyperState, validate
from .special_functions import DomainError

__all__ = [
    "MeasureReport",
    "fisher_closed",
    "entropic_moment",
    "renyi_entropy",
    "tsallis_entropy",
    "renyi_power_entropy",
    "disequilibrium",
    "complexity_fisher_renyi",
    "complexity_fisher_shannon",
    "complexity_lmc",
    "measure_report",
]

Path = Literal["exact", "quadrature"]

_INV_2PIE = 1.0 / (2 * math.pi * math.e)
_ROUND = 4 * sys.float_info.epsilon


def fisher_closed(state: HyperState) -> ScalarResult:
    """F = 4L(L+1) - 2|m|(2L+1) - (D-1)(D-3) with L = l + (D-3)/2."""
    validate(state)
    d = state.dimension
    l = abs(state.l) if d == 2 else state.l  # noqa: E741
    big_l = l + (d - 3) / 2
    m = abs(state.m)
    value = 4 * big_l * (big_l + 1) - 2 * m * (2 * big_l + 1) - (d - 1) * (d - 3)
    return ScalarResult(float(value), 0.0, "closed-form")


def _choose_path(q: float, path: Path | None) -> Path:
    if path is None:
        return "exact" if float(q).is_integer() and q >= 1 else "quadrature"
    if path not in ("exact", "quadrature"):
        raise ValueError(f"unknown path {path!r}")
    return path


@lru_cache(maxsize=8192)
def _moment(state: HyperState, q: float, path: Path, spec: QuadratureSpec) -> ScalarResult:
    if path == "exact":
        if not float(q).is_integer():
            raise UnsupportedOrderError(f"the exact path needs integer q, got {q!r}")
        mv = entropic_moment_exact(state, int(q))
        v = mv.linear
        return ScalarResult(v, abs(v) * mv.rel_error, "exact")
    return entropic_moment_quadrature(state, q, spec)


def entropic_moment(
    state: HyperState, q: float, path: Path | None = None, spec: QuadratureSpec = DEFAULT_SPEC
) -> ScalarResult:
    validate(state)
    if not q > 0:
        raise DomainError(f"q must be positive, got {q!r}")
    return _moment(state, float(q), _choose_path(q, path), spec)


@lru_cache(maxsize=8192)
def _shannon(state: HyperState, spec: QuadratureSpec) -> ScalarResult:
    return shannon_entropy(state, spec)


def _check_order(q: float) -> None:
    if not q > 0:
        raise DomainError(f"q must be positive, got {q!r}")
    if q == 1:
        raise ValueError("q = 1 is the Shannon limit; call shannon_entropy instead")


def renyi_entropy(
    state: HyperState, q: float, path: Path | None = None, spec: QuadratureSpec = DEFAULT_SPEC
) -> ScalarResult:
    """R_q = log(W_q) / (1 - q)."""
    _check_order(q)
    w = entropic_moment(state, q, path, spec)
    value = math.log(w.value) / (1 - q)
    # rounding in W and in the log is amplified by 1/|1-q| near the Shannon limit
    err = (w.abs_error / w.value + _ROUND) / abs(1 - q) + _ROUND * abs(value)
    return ScalarResult(value, err, w.method, w.converged)


def tsallis_entropy(
    state: HyperState, q: float, path: Path | None = None, spec: QuadratureSpec = DEFAULT_SPEC
) -> ScalarResult:
    """T_q = (1 - W_q) / (q - 1)."""
    _check_order(q)
    w = entropic_moment(state, q, path, spec)
    return ScalarResult((1 - w.value) / (q - 1), w.abs_error / abs(q - 1), w.method, w.converged)


def renyi_power_entropy(
    state: HyperState, q: float, path: Path | None = None, spec: QuadratureSpec = DEFAULT_SPEC
) -> ScalarResult:
    """J_q = exp(2 R_q / D) / (2 pi e), D being the rotator dimension."""
    r = renyi_entropy(state, q, path, spec)
    k = 2.0 / state.dimension
    value = _INV_2PIE * math.exp(k * r.value)
    return ScalarResult(value, value * k * r.abs_error, r.method, r.converged)


def disequilibrium(state: HyperState, path: Path | None = None, spec: QuadratureSpec = DEFAULT_SPEC) -> ScalarResult:
    """Second entropic moment W_2 (average density height)."""
    return entropic_moment(state, 2, path, spec)


def complexity_fisher_renyi(
    state: HyperState, q: float, path: Path | None = None, spec: QuadratureSpec = DEFAULT_SPEC
) -> ScalarResult:
    f = fisher_closed(state)
    j = renyi_power_entropy(state, q, path, spec)
    return ScalarResult(f.value * j.value, abs(f.value) * j.abs_error, j.method, j.converged)


def complexity_fisher_shannon(state: HyperState, spec: QuadratureSpec = DEFAULT_SPEC) -> ScalarResult:
    f = fisher_closed(state)
    s = _shannon(validate(state), spec)
    k = 2.0 / state.dimension
    power = _INV_2PIE * math.exp(k * s.value)
    return ScalarResult(f.value * power, abs(f.value) * power * k * s.abs_error, s.method, s.converged)


def complexity_lmc(state: HyperState, path: Path | None = None, spec: QuadratureSpec = DEFAULT_SPEC) -> ScalarResult:
    """C_LMC = W_2 * exp(S); exact W_2 by default, S always by quadrature."""
    w2 = disequilibrium(state, path, spec)
    s = _shannon(validate(state), spec)
    es = math.exp(s.value)
    err = es * w2.abs_error + w2.value * es * s.abs_error
    return ScalarResult(w2.value * es, err, s.method, w2.converged and s.converged)


@dataclass
class MeasureReport:
    state: HyperState
    fisher: ScalarResult
    shannon: ScalarResult
    disequilibrium: ScalarResult
    c_fs: ScalarResult
    c_lmc: ScalarResult
    renyi: dict[float, ScalarResult] = field(default_factory=dict)
    tsallis: dict[float, ScalarResult] = field(default_factory=dict)
    c_fr: dict[float, ScalarResult] = field(default_factory=dict)

    def results(self) -> Iterable[ScalarResult]:
        yield from (self.fisher, self.shannon, self.disequilibrium, self.c_fs, self.c_lmc)
        for table in (self.renyi, self.tsallis, self.c_fr):
            yield from table.values()

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.results())

    def as_dict(self) -> dict:
        def table(t):
            return {_q_key(q): r.as_dict() for q, r in t.items()}

        return {
            "state": self.state.literal(),
            "fisher": self.fisher.as_dict(),
            "shannon": self.shannon.as_dict(),
            "renyi": table(self.renyi),
            "tsallis": table(self.tsallis),
            "disequilibrium": self.disequilibrium.as_dict(),
            "c_fs": self.c_fs.as_dict(),
            "c_fr": table(self.c_fr),
            "c_lmc": self.c_lmc.as_dict(),
        }


def _q_key(q: float) -> str:
    return str(int(q)) if float(q).is_integer() else repr(float(q))


def measure_report(
    state: HyperState,
    qs: Iterable[float] = (2.0,),
    path: Path | None = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> MeasureReport:
    """Every measure for one state.  ``q = 1`` entries take the Shannon values."""
    validate(state)
    shannon = _shannon(state, spec)
    report = MeasureReport(
        state=state,
        fisher=fisher_closed(state),
        shannon=shannon,
        disequilibrium=disequilibrium(state, path, spec),
        c_fs=complexity_fisher_shannon(state, spec),
        c_lmc=complexity_lmc(state, path, spec),
    )
    for q in qs:
        q = float(q)
        if q == 1:
            report.renyi[q] = shannon
            report.tsallis[q] = shannon
            report.c_fr[q] = report.c_fs
            continue
        report.renyi[q] = renyi_entropy(state, q, path, spec)
        report.tsallis[q] = tsallis_entropy(state, q, path, spec)
        report.c_fr[q] = complexity_fisher_renyi(state, q, path, spec)
    return report
