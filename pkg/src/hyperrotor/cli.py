"""hyperrotor command line: single-state reports, figure sweeps and validation.

    hyperrotor report --state 3:1,0 --q 2 --q 3
    hyperrotor sweep --mode fs_vs_m --out fs_vs_m.csv
    hyperrotor sweep --mode all --out figures/
    hyperrotor validate --l-max 6 --dim 3 --dim 4 --dim 5

Exit codes: 0 success, 2 input error, 3 I/O error, 4 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Sequence

from .entropies import QuadratureSpec, ScalarResult
from .measures import (
    complexity_fisher_renyi,
    complexity_fisher_shannon,
    complexity_lmc,
    entropic_moment,
    measure_report,
)
from .oracle import audit_catalog
from .quantum_state import HyperState, StateError, iter_states, parse_state, validate
from .special_functions import DomainError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IO = 3
EXIT_VALIDATION = 4

CSV_HEADER = ("D", "l", "m", "q", "measure", "value", "err", "method")

FIGURE_MODES = (
    "fs_vs_m",
    "fs_vs_l",
    "fs_diag",
    "fr_vs_m",
    "fr_vs_l",
    "fr_diag",
    "lmc_vs_m",
    "lmc_vs_l",
    "lmc_diag",
)

# default grids per figure family: (l values for *_vs_m, m values for *_vs_l,
# a offsets for *_diag, l cap for *_vs_l, l cap for *_diag)
_FAMILY_DEFAULTS = {
    "fs": ((10, 20, 50, 80), (0, 1, 2, 5), (0, 1, 2), 80, 80),
    "fr": ((10, 20, 50), (0, 1, 2, 5), (0, 1, 2), 60, 60),
    "lmc": ((10, 20, 50, 80), (0, 1, 2, 5), (0, 1, 2), 80, 60),
}

_MEASURE_NAMES = {"fs": "c_fs", "fr": "c_fr", "lmc": "c_lmc"}


class InputError(Exception):
    pass


def fmt(value: float) -> str:
    """Locale-free decimal with at most 15 significant digits."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".15g")


@dataclass
class SweepSpec:
    mode: str
    l_values: tuple[int, ...] = ()
    m_values: tuple[int, ...] = ()
    a_values: tuple[int, ...] = ()
    l_max: int | None = None
    q: float = 2.0
    dimension: int = 3
    states: tuple[HyperState, ...] = ()
    measures: tuple[str, ...] = field(default=("fs", "fr", "lmc"))

    def __post_init__(self):
        if self.mode != "custom" and self.mode not in FIGURE_MODES:
            raise InputError(f"unknown sweep mode {self.mode!r}")
        if self.l_max is not None and self.l_max < 0:
            raise InputError("--l-max must be non-negative")
        if not self.q > 0:
            raise InputError(f"q must be positive, got {self.q}")
        for name, vals in (("--l", self.l_values), ("--m", self.m_values), ("--a", self.a_values)):
            if any(v < 0 for v in vals):
                raise InputError(f"{name} values must be non-negative")

    @property
    def family(self) -> str:
        return self.mode.split("_", 1)[0]

    def grid(self) -> list[HyperState]:
        """States in deterministic emission order."""
        if self.mode == "custom":
            return self._custom_grid()
        vs_m_l, vs_l_m, diag_a, cap_l, cap_diag = _FAMILY_DEFAULTS[self.family]
        kind = self.mode.split("_", 1)[1]
        out: list[HyperState] = []
        if kind == "vs_m":
            for l in self.l_values or vs_m_l:  # noqa: E741
                out.extend(HyperState(3, (l, m)) for m in range(l + 1))
        elif kind == "vs_l":
            cap = cap_l if self.l_max is None else self.l_max
            for m in self.m_values or vs_l_m:
                out.extend(HyperState(3, (l, m)) for l in range(m, cap + 1))
        else:
            cap = cap_diag if self.l_max is None else self.l_max
            for a in self.a_values or diag_a:
                out.extend(HyperState(3, (l, l - a)) for l in range(a, cap + 1))
        if not out:
            raise InputError(f"sweep {self.mode} has an empty grid")
        return out

    def _custom_grid(self) -> list[HyperState]:
        if self.states:
            return [validate(s) for s in self.states]
        if self.l_values:
            ls = self.l_values
        elif self.l_max is not None:
            ls = tuple(range(self.l_max + 1))
        else:
            raise InputError("custom sweep needs --state, --l or --l-max")
        if self.dimension != 3:
            states = [s for s in iter_states(self.dimension, max(ls)) if s.l in ls]
        else:
            states = [HyperState(3, (l, m)) for l in ls for m in range(l + 1)]  # noqa: E741
        if self.m_values:
            states = [s for s in states if abs(s.m) in self.m_values]
        if not states:
            raise InputError("custom sweep has an empty grid")
        return states


Row = tuple[int, int, int, str, str, float, float, str]


def _row(state: HyperState, q: str, measure: str, r: ScalarResult) -> Row:
    return (state.dimension, state.l, state.m, q, measure, r.value, r.abs_error, r.method)


def sweep_rows(
    spec: SweepSpec, path: str | None, qspec: QuadratureSpec, warn: Callable[[str], None]
) -> Iterator[Row]:
    families = spec.measures if spec.mode == "custom" else (spec.family,)
    qs = fmt(spec.q)
    for state in spec.grid():
        for fam in families:
            if fam == "fs":
                r = complexity_fisher_shannon(state, qspec)
                q_col = ""
            elif fam == "lmc":
                r = complexity_lmc(state, path, qspec)
                q_col = ""
            elif spec.q == 1:
                r = complexity_fisher_shannon(state, qspec)
                q_col = qs
            else:
                r = complexity_fisher_renyi(state, spec.q, path, qspec)
                q_col = qs
            if not r.converged:
                warn(f"{state} {_MEASURE_NAMES[fam]}: quadrature did not reach the requested tolerance")
            yield _row(state, q_col, _MEASURE_NAMES[fam], r)


def render(rows: Sequence[Row], fmt_name: str) -> str:
    if fmt_name == "json":
        records = [
            {
                "D": d,
                "l": l,
                "m": m,
                "q": float(q) if q else None,
                "measure": meas,
                "value": float(fmt(v)),
                "err": float(fmt(e)),
                "method": meth,
            }
            for d, l, m, q, meas, v, e, meth in rows  # noqa: E741
        ]
        return json.dumps(records, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for d, l, m, q, meas, v, e, meth in rows:  # noqa: E741
        w.writerow((d, l, m, q, meas, fmt(v), fmt(e), meth))
    return buf.getvalue()


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _quadrature_spec(args) -> QuadratureSpec:
    kw = {}
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    if args.max_nodes is not None:
        kw["max_nodes"] = args.max_nodes
    try:
        return QuadratureSpec(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# --- commands ----------------------------------------------------------------


def cmd_report(args) -> int:
    if not args.state:
        raise InputError("report needs --state")
    if len(args.state) > 1:
        raise InputError("report takes a single --state")
    state = parse_state(args.state[0])
    qs = args.q or [2.0]
    for q in qs:
        if not q > 0:
            raise InputError(f"q must be positive, got {q}")
        if q == 1:
            print("note: q = 1 entries report the Shannon limit", file=sys.stderr)
    report = measure_report(state, qs, args.force_path, _quadrature_spec(args))
    if not report.converged:
        _warn(f"{state}: some quadratures did not reach the requested tolerance")
    _write(json.dumps(report.as_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def _sweep_spec(args, mode: str) -> SweepSpec:
    q = 2.0
    if args.q:
        if len(args.q) > 1:
            raise InputError("sweep takes a single --q")
        q = args.q[0]
    if q == 1 and (mode.startswith("fr") or mode == "custom"):
        print("note: q = 1 is the Shannon limit; C_FR rows carry C_FS values", file=sys.stderr)
    states = tuple(parse_state(s) for s in args.state or ())
    return SweepSpec(
        mode=mode,
        l_values=tuple(args.l or ()),
        m_values=tuple(args.m or ()),
        a_values=tuple(args.a or ()),
        l_max=args.l_max,
        q=q,
        dimension=args.dim[0] if args.dim else 3,
        states=states,
    )


def cmd_sweep(args) -> int:
    if not args.mode:
        raise InputError("sweep needs --mode")
    qspec = _quadrature_spec(args)
    if args.mode == "all":
        if not args.out:
            raise InputError("--mode all needs --out DIRECTORY")
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for mode in FIGURE_MODES:
            rows = list(sweep_rows(_sweep_spec(args, mode), args.force_path, qspec, _warn))
            _write(render(rows, args.format), str(outdir / f"{mode}.{args.format}"))
        return EXIT_OK
    spec = _sweep_spec(args, args.mode)
    rows = list(sweep_rows(spec, args.force_path, qspec, _warn))
    _write(render(rows, args.format), args.out)
    return EXIT_OK


def _cross_check(dims: Sequence[int], l_max: int, qs: Sequence[float], qspec: QuadratureSpec) -> list[dict]:
    """Exact vs quadrature moments on every state; only failures are returned."""
    bad = []
    for d in dims:
        for s in iter_states(d, l_max):
            for q in qs:
                if not float(q).is_integer():
                    continue
                ex = entropic_moment(s, q, "exact", qspec).value
                qu = entropic_moment(s, q, "quadrature", qspec).value
                if q == 1:
                    tol, rel = 1e-10, max(abs(ex - 1.0), abs(qu - 1.0))
                else:
                    tol, rel = 1e-8, abs(ex - qu) / abs(ex)
                if rel > tol:
                    bad.append({"state": s.literal(), "q": q, "exact": ex, "quadrature": qu, "rel_error": rel})
    return bad


def cmd_validate(args) -> int:
    l_max = 6 if args.l_max is None else args.l_max
    if l_max < 0:
        raise InputError("--l-max must be non-negative")
    dims = args.dim or [3, 4, 5]
    if any(d < 2 for d in dims):
        raise InputError("dimensions must be at least 2")
    qs = args.q or [1.0, 2.0, 3.0]
    if any(not q > 0 for q in qs):
        raise InputError("q values must be positive")
    qspec = _quadrature_spec(args)
    audit = audit_catalog(l_max, qs)
    cross = _cross_check(dims, l_max, qs, qspec)
    ok = audit.passed and not cross
    summary = {
        "passed": ok,
        "l_max": l_max,
        "dimensions": list(dims),
        "q": list(qs),
        "catalog": json.loads(audit.to_json()),
        "path_mismatches": cross,
    }
    if args.format != "json":
        # the JSON summary still goes to --out; the text digest to stderr
        print(audit.to_text(), file=sys.stderr)
    summary["catalog"].pop("entries")
    _write(json.dumps(summary, indent=2) + "\n", args.out)
    print("validation " + ("passed" if ok else "FAILED"), file=sys.stderr)
    return EXIT_OK if ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperrotor", description="Entropy and complexity measures of hyperspherical harmonics")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--state", action="append", help="state literal D:l,...,m (repeatable for custom sweeps)")
    common.add_argument("--q", action="append", type=float, help="entropic order (repeatable)")
    common.add_argument("--out", help="output file (directory for --mode all); stdout if omitted")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    common.add_argument("--max-nodes", type=int, help="quadrature node cap")
    common.add_argument("--force-path", choices=("exact", "quadrature"), help="entropic-moment path override")
    common.add_argument("--l-max", type=int, help="upper l bound")
    common.add_argument("--dim", action="append", type=int, help="dimension D (repeatable for validate)")

    sub.add_parser("report", parents=[common], help="all measures for one state, as JSON")

    sw = sub.add_parser("sweep", parents=[common], help="figure-reproduction grids as CSV/JSON")
    sw.add_argument("--mode", choices=FIGURE_MODES + ("custom", "all"))
    sw.add_argument("--l", type=int, action="append", help="fixed l values (*_vs_m, custom)")
    sw.add_argument("--m", type=int, action="append", help="fixed m values (*_vs_l, custom)")
    sw.add_argument("--a", type=int, action="append", help="offsets a in m = l - a (*_diag)")

    sub.add_parser("validate", parents=[common], help="catalog audit and exact/quadrature cross-check")
    return ap


_COMMANDS = {"report": cmd_report, "sweep": cmd_sweep, "validate": cmd_validate}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, 0 on --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (InputError, StateError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
