"""Closed-form entropic moments and an independent brute-force integrator.

The catalog holds known closed forms for special families of states.
Transcribed formulas can carry typos, so each case must reproduce
``W_1 = 1`` on its whole probe grid before it may act as an oracle; cases
that fail are quarantined and reported, never consulted.

:func:`brute_force_Wq` shares no integration code with
:mod:`hyperrotor.entropies`: it integrates in the polar angle itself with
Gauss-Legendre panels between the polynomial's zeros (located by bracketing
and Brent's method), and evaluates polynomials through
``scipy.special.eval_jacobi``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import eval_jacobi, gammaln

from .entropies import ScalarResult
from .quantum_state import HyperState, iter_states, validate
from .special_functions import LogSigned, jacobi_norm

__all__ = [
    "ClosedFormCase",
    "CATALOG",
    "quarantined",
    "closed_form_Wq",
    "brute_force_Wq",
    "AuditEntry",
    "AuditReport",
    "audit_catalog",
]

AUDIT_TOL = 1e-7
NORMALIZATION_TOL = 1e-12

_LOG2 = math.log(2.0)
_LOGPI = math.log(math.pi)
_LG = math.lgamma


@dataclass(frozen=True)
class ClosedFormCase:
    id: str
    applies: Callable[[HyperState], bool]
    log_value: Callable[[HyperState, float], float]
    provenance: str
    # dimensions probed by the audit; general-D cases list several
    dims: tuple[int, ...] = (3,)

    def evaluate(self, state: HyperState, q: float) -> LogSigned:
        return LogSigned(self.log_value(state, q), 1)


def _abs_mu(state: HyperState) -> tuple[int, ...]:
    return state.mu[:-1] + (abs(state.mu[-1]),)


def _is(d: int, pattern: Callable[[tuple[int, ...]], bool]):
    def applies(state: HyperState) -> bool:
        return state.dimension == d and pattern(_abs_mu(state))

    return applies


def _log_d2(n: int, a: float) -> float:
    return 2.0 * jacobi_norm(n, a, a).log_magnitude


# --- D = 3 -----------------------------------------------------------------


def _d3_00(s, q):
    return (2 - 2 * q) * _LOG2 + (1 - q) * _LOGPI


def _d3_10(s, q):
    return (2 - 2 * q) * _LOG2 + q * math.log(3) + (1 - q) * _LOGPI - math.log(2 * q + 1)


def _d3_ll(s, q):
    l = s.l  # noqa: E741
    head = (1 - q) * math.log(2 * math.pi)
    a = (2 * q * l + 1) * _LOG2 + 2 * _LG(q * l + 1) - math.log(2 * q * l + 1) - _LG(2 * q * l + 1)
    b = math.log(2 * l + 1) + _LG(2 * l + 1) - (2 * l + 1) * _LOG2 - 2 * _LG(l + 1)
    return head + a + q * b


def _d3_l_lm1(s, q):
    l = s.l  # noqa: E741
    head = (1 - q) * math.log(2 * math.pi) + 2 * q * math.log(l)
    g = _LG(q + 0.5) + _LG(q * (l - 1) + 1.5) - 0.5 * _LOGPI - _LG(q * l + 1.5)
    return head + g + _log_d2(0, q * (l - 1)) - q * _log_d2(1, l - 1)


# --- D = 2 -----------------------------------------------------------------


def _d2(s, q):
    return (1 - q) * math.log(2 * math.pi)


# --- D = 4 -----------------------------------------------------------------


def _d4_000(s, q):
    return (1 - q) * _LOG2 + (2 - 2 * q) * _LOGPI


def _d4_100(s, q):
    return (1 + q) * _LOG2 + (1.5 - 2 * q) * _LOGPI + _LG(0.5 + q) - _LG(2 + q)


def _d4_lll(s, q):
    l = s.l  # noqa: E741
    return (1 - q) * math.log(2 * math.pi**2) + q * math.log(l + 1) - math.log(l * q + 1)


def _d4_l_lm1_lm1(s, q):
    l = s.l  # noqa: E741
    return (
        _LOG2
        + (1.5 - 2 * q) * _LOGPI
        + q * math.log(l * (l + 1))
        + _LG(q + 0.5)
        + _LG(q * (l - 1) + 1)
        - _LG(l * q + 2)
    )


def _d4_l_lm1_lm2(poly: Callable[[int], int]):
    def log_value(s, q):
        l = s.l  # noqa: E741
        return (
            (1 + q) * _LOG2
            + (1 - 2 * q) * _LOGPI
            + q * math.log(poly(l))
            + 2 * _LG(q + 0.5)
            + _LG(q * (l - 2) + 1)
            - _LG(l * q + 2)
        )

    return log_value


# --- general D -------------------------------------------------------------


def _dD_zero(s, q):
    d = s.dimension
    out = (1 - q) * math.log(2 * math.pi) + (d - 1) * (d - 2) * (1 - q) / 2 * _LOG2
    out += (q - 1) * _LG(d - 1)
    for j in range(1, d - 1):
        out += (2 - 2 * q) * _LG((d - j) / 2) - (1 - q) * _LG(d - j - 1)
    return out


def _dD_all_l(s, q):
    d, l = s.dimension, s.l
    out = (1 - q) * math.log(2 * math.pi) + (d - 1) * (d - 2) * (1 - q) / 2 * _LOG2
    # rising factorials (x)_{D-2} with x > 0
    out += q * (_LG(2 * l + 1 + d - 2) - _LG(2 * l + 1))
    out -= _LG(2 * q * l + 1 + d - 2) - _LG(2 * q * l + 1)
    for j in range(1, d - 1):
        out += 2 * _LG(q * l + (d - j) / 2) - _LG(2 * q * l + d - j - 1)
        out += q * (_LG(2 * l + d - j - 1) - 2 * _LG(l + (d - j) / 2))
    return out


CATALOG: tuple[ClosedFormCase, ...] = (
    ClosedFormCase("d3_00", _is(3, lambda mu: mu == (0, 0)), _d3_00, "D=3, l=m=0"),
    ClosedFormCase("d3_10", _is(3, lambda mu: mu == (1, 0)), _d3_10, "D=3, l=1, m=0"),
    ClosedFormCase("d3_ll", _is(3, lambda mu: mu[0] == mu[1]), _d3_ll, "D=3, |m|=l"),
    ClosedFormCase(
        "d3_l_lm1", _is(3, lambda mu: mu[0] >= 1 and mu[1] == mu[0] - 1), _d3_l_lm1, "D=3, |m|=l-1"
    ),
    ClosedFormCase("d2", lambda s: s.dimension == 2, _d2, "D=2, any m", dims=(2,)),
    ClosedFormCase("d4_000", _is(4, lambda mu: mu == (0, 0, 0)), _d4_000, "D=4, all zero", dims=(4,)),
    ClosedFormCase("d4_100", _is(4, lambda mu: mu == (1, 0, 0)), _d4_100, "D=4, mu=(1,0,0)", dims=(4,)),
    ClosedFormCase(
        "d4_lll", _is(4, lambda mu: mu[0] == mu[1] == mu[2]), _d4_lll, "D=4, mu=(l,l,l)", dims=(4,)
    ),
    ClosedFormCase(
        "d4_l_lm1_lm1",
        _is(4, lambda mu: mu[0] >= 1 and mu[1] == mu[2] == mu[0] - 1),
        _d4_l_lm1_lm1,
        "D=4, mu=(l,l-1,l-1)",
        dims=(4,),
    ),
    ClosedFormCase(
        "d4_l_lm1_lm2",
        _is(4, lambda mu: mu[0] >= 2 and mu[1] == mu[0] - 1 and mu[2] == mu[0] - 2),
        _d4_l_lm1_lm2(lambda l: l * (l * l + 1)),
        "D=4, mu=(l,l-1,l-2), factor (l(l^2+1))^q as transcribed",
        dims=(4,),
    ),
    ClosedFormCase(
        "d4_l_lm1_lm2_corrected",
        _is(4, lambda mu: mu[0] >= 2 and mu[1] == mu[0] - 1 and mu[2] == mu[0] - 2),
        _d4_l_lm1_lm2(lambda l: l * (l * l - 1)),
        "D=4, mu=(l,l-1,l-2), factor (l(l^2-1))^q (sign-corrected)",
        dims=(4,),
    ),
    ClosedFormCase(
        "dD_zero",
        lambda s: all(v == 0 for v in s.mu),
        _dD_zero,
        "any D, all quantum numbers zero",
        dims=(2, 3, 4, 5, 6),
    ),
    ClosedFormCase(
        "dD_all_l",
        lambda s: s.dimension >= 3 and len(set(_abs_mu(s))) == 1,
        _dD_all_l,
        "any D >= 3, all quantum numbers equal to l",
        dims=(3, 4, 5, 6),
    ),
)

_PROBE_L_MAX = 8


def _probe_states(case: ClosedFormCase, l_max: int) -> list[HyperState]:
    return [s for d in case.dims for s in iter_states(d, l_max) if case.applies(s)]


def normalization_defect(case: ClosedFormCase, l_max: int = _PROBE_L_MAX) -> float:
    """Largest |W_1 - 1| of the case over its probe states (0.0 if none apply)."""
    worst = 0.0
    for s in _probe_states(case, l_max):
        worst = max(worst, abs(math.expm1(case.log_value(s, 1.0))))
    return worst


@lru_cache(maxsize=1)
def quarantined() -> frozenset[str]:
    """Ids of catalog cases that fail the W_1 = 1 identity."""
    return frozenset(c.id for c in CATALOG if normalization_defect(c) > NORMALIZATION_TOL)


def closed_form_Wq(state: HyperState, q: float) -> ScalarResult | None:
    """First applicable trusted catalog value, or None when no case applies."""
    validate(state)
    bad = quarantined()
    for case in CATALOG:
        if case.id in bad or not case.applies(state):
            continue
        v = math.exp(case.log_value(state, float(q)))
        return ScalarResult(v, 0.0, "closed-form")
    return None


def applicable_cases(state: HyperState, include_quarantined: bool = False) -> list[ClosedFormCase]:
    bad = set() if include_quarantined else quarantined()
    return [c for c in CATALOG if c.id not in bad and c.applies(state)]


# --- brute force -------------------------------------------------------------


def _normalized_poly(n: int, a: float):
    # orthonormal w.r.t. (1-x^2)^a on [-1, 1]; the norm is written out independently
    log_h = (
        (2 * a + 1) * _LOG2
        + 2 * gammaln(n + a + 1)
        - gammaln(n + 1)
        - gammaln(n + 2 * a + 1)
        - math.log(2 * n + 2 * a + 1)
    )
    scale = math.exp(-0.5 * log_h)
    return lambda x: scale * eval_jacobi(n, a, a, x)


def _theta_zeros(poly: Callable, n: int) -> list[float]:
    if n == 0:
        return []
    grid = np.linspace(0.0, math.pi, 64 * (n + 1) + 1)
    vals = poly(np.cos(grid))
    roots = []
    for t0, t1, v0, v1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if v0 == 0.0:
            roots.append(t0)
        elif v0 * v1 < 0:
            roots.append(brentq(lambda t: poly(math.cos(t)), t0, t1, xtol=1e-15, rtol=1e-15))
    if len(roots) != n:
        raise ArithmeticError(f"found {len(roots)} zeros for a degree-{n} polynomial")
    return roots


def _panel_sum(fn: Callable, edges: Sequence[float], nodes: int) -> float:
    x, w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        total += half * float(np.dot(w, fn(0.5 * (a + b) + half * x)))
    return total


def brute_force_Wq(state: HyperState, q: float, nodes: int = 48) -> ScalarResult:
    """Reference W_q from polar-angle Gauss-Legendre panels split at the zeros.

    The error bound is the change when every panel's node count is doubled.
    """
    validate(state)
    q = float(q)
    d = state.dimension
    mu = list(_abs_mu(state))
    log_value = (1 - q) * math.log(2 * math.pi)
    rel_err = 0.0
    for j in range(1, d - 1):
        alpha = (d - j - 1) / 2
        n = mu[j - 1] - mu[j]
        a = mu[j] + alpha - 0.5
        poly = _normalized_poly(n, a)
        power = 2 * q * mu[j] + 2 * alpha

        def fn(t, poly=poly, power=power):
            return np.abs(poly(np.cos(t))) ** (2 * q) * np.sin(t) ** power

        edges = [0.0, *_theta_zeros(poly, n), math.pi]
        coarse = _panel_sum(fn, edges, nodes)
        fine = _panel_sum(fn, edges, 2 * nodes)
        log_value += math.log(fine)
        rel_err += abs(fine - coarse) / fine
    value = math.exp(log_value)
    return ScalarResult(value, value * rel_err, "quadrature")


# --- audit -------------------------------------------------------------------


@dataclass
class AuditEntry:
    case: str
    state: str
    q: float
    expected: float
    got: float
    rel_error: float
    verdict: str
    suspected_typo: bool = False


@dataclass
class AuditReport:
    entries: list[AuditEntry] = field(default_factory=list)
    quarantined: list[str] = field(default_factory=list)
    tolerance: float = AUDIT_TOL

    @property
    def failures(self) -> list[AuditEntry]:
        return [e for e in self.entries if e.verdict == "fail"]

    @property
    def mismatches(self) -> list[AuditEntry]:
        """Entries beyond tolerance, including those of quarantined cases."""
        return [e for e in self.entries if e.rel_error > self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return json.dumps(
            {
                "passed": self.passed,
                "tolerance": self.tolerance,
                "quarantined": self.quarantined,
                "checked": len(self.entries),
                "mismatches": [asdict(e) for e in self.mismatches],
                "entries": [asdict(e) for e in self.entries],
            },
            indent=2,
        )

    def to_text(self) -> str:
        lines = [f"catalog audit: {len(self.entries)} checks, tolerance {self.tolerance:g}"]
        for e in self.mismatches:
            flag = " [suspected typo]" if e.suspected_typo else ""
            lines.append(
                f"  {e.verdict.upper():11s} {e.case} {e.state} q={e.q:g} "
                f"expected={e.expected:.15g} got={e.got:.15g} rel={e.rel_error:.2e}{flag}"
            )
        for cid in self.quarantined:
            lines.append(f"  quarantined: {cid} (fails W_1 = 1)")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def audit_catalog(l_max: int = 8, q_grid: Iterable[float] = (1.0, 2.0, 3.0, 2.5)) -> AuditReport:
    """Check every catalog case at q = 1 and against :func:`brute_force_Wq`.

    Quarantined cases are still checked; their mismatches are reported with
    ``verdict="quarantined"`` and the suspected-typo flag instead of failing.
    """
    bad = quarantined()
    qs = sorted({1.0, *(float(q) for q in q_grid)})
    report = AuditReport(quarantined=sorted(bad))
    for case in CATALOG:
        for s in _probe_states(case, l_max):
            for q in qs:
                expected = math.exp(case.log_value(s, q))
                got = 1.0 if q == 1.0 else brute_force_Wq(s, q).value
                rel = abs(expected - got) / abs(got)
                if rel <= AUDIT_TOL:
                    verdict = "pass"
                elif case.id in bad:
                    verdict = "quarantined"
                else:
                    verdict = "fail"
                report.entries.append(
                    AuditEntry(case.id, s.literal(), q, expected, got, rel, verdict, case.id in bad and rel > AUDIT_TOL)
                )
    return report
