"""Command-line driver.

Every command builds a :class:`Report` (tables of exact values plus named
verdicts) and renders it either as aligned text or as JSON; both renderings
come from the same cell values, so their numbers agree.

Exit codes: 0 all verdicts pass, 1 some verification failed, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import ExitStack
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, TextIO, Tuple

from . import faults
from .cone import cdga_check, quotient_check
from .equivalence import ainfty_map_check, modified_complex_check, sdr_check
from .exterior import LieModel, validate
from .filtered import check_p, stasheff_check
from .homology import (cohomology, cohomology_maps_check, cone_complex, cyclic_check, derham_complex,
                       filtered_complex, gysin_check, pairing_matrix, pairing_representatives, potential_phi)
from .identities import DEFAULT_SAMPLES, DEFAULT_SEED, TUPLE_BUDGET
from .lefschetz import sl2_check
from .models import ModelFileError, format_rational, load_model, parse_element
from .report import IdentityReport

SUITES = ("sl2", "stasheff", "ainfty-map", "sdr", "cyclic", "gysin", "cone")
COMPLEXES = ("derham", "filtered", "cone")


class InputError(ValueError):
    pass


def cell(v):
    """JSON-ready cell: rationals become ``"p/q"`` strings, nothing becomes a float."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else format_rational(v)
    return str(v)


def cell_text(v) -> str:
    v = cell(v)
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


@dataclass
class Report:
    command: str
    model: str
    p: Optional[int] = None
    seed: Optional[int] = None
    tables: List[dict] = field(default_factory=list)
    verdicts: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v["pass"] for v in self.verdicts)

    def table(self, title: str, headers: Sequence[str], rows) -> None:
        self.tables.append({"title": title, "headers": list(headers), "rows": [[cell(c) for c in r] for r in rows]})

    def verdict(self, name: str, passed: bool, counterexample: Optional[dict] = None) -> None:
        v = {"name": name, "pass": bool(passed)}
        if counterexample is not None:
            v["counterexample"] = counterexample
        self.verdicts.append(v)

    def add_identity_report(self, rep: IdentityReport) -> None:
        rows = [[r.name, r.mode, r.checked, r.pruned, r.failure_count] for r in rep.results]
        where = "" if rep.p is None else f", p = {rep.p}"
        self.table(f"{rep.suite} suite{where}", ["identity", "mode", "checked", "pruned", "failures"], rows)
        for t in rep.tables:
            self.table(t["title"], t["headers"], t["rows"])
        for r in rep.results:
            cx = r.failures[0] if r.failures else None
            self.verdict(f"{rep.suite}/{r.name}", r.passed,
                         {"inputs": list(cx.inputs), "residual": cx.residual} if cx else None)
        self.notes.extend(f"{rep.suite}: {note}" for note in rep.notes)

    def as_dict(self) -> dict:
        out = {"command": self.command, "model": self.model, "p": self.p}
        if self.seed is not None:
            out["seed"] = self.seed
        out["tables"] = self.tables
        out["verdicts"] = self.verdicts
        if self.notes:
            out["notes"] = self.notes
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        head = [f"command: {self.command}", f"model: {self.model}"]
        if self.p is not None:
            head.append(f"p: {self.p}")
        if self.seed is not None:
            head.append(f"seed: {self.seed}")
        lines = ["  ".join(head)]
        for t in self.tables:
            lines.append("")
            lines.append(f"== {t['title']} ==")
            grid = [list(t["headers"])] + [[cell_text(c) for c in r] for r in t["rows"]]
            widths = [max(len(r[i]) for r in grid) for i in range(len(grid[0]))]
            for r in grid:
                lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if self.verdicts:
            lines.append("")
        for v in self.verdicts:
            line = f"{'PASS' if v['pass'] else 'FAIL'} {v['name']}"
            cx = v.get("counterexample")
            if cx:
                line += f"  counterexample: inputs=({', '.join(cx['inputs'])}) residual={cx['residual']}"
            lines.append(line)
        for note in self.notes:
            lines.append(f"NOTE {note}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _model(spec: str, check: bool = True) -> LieModel:
    try:
        return load_model(spec, check)
    except ModelFileError as exc:
        raise InputError(str(exc)) from None


def _p(m: LieModel, p: int) -> int:
    try:
        check_p(m, p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return p


def cmd_validate(args) -> Report:
    m = _model(args.model, check=False)
    rep = Report("validate", m.name)
    vr = validate(m)
    rep.table("model", ["dim", "n", "omega"], [[m.dim, m.n, str(m.omega)]])
    rep.table("structure equations", ["generator", "d"], [[f"e{i}", str(f)] for i, f in enumerate(m.structure, 1)])
    rep.table("validation checks", ["check", "passed", "detail"], [[c.name, c.passed, c.detail] for c in vr.checks])
    for c in vr.checks:
        rep.verdict(f"validate/{c.name}", c.passed,
                    None if c.passed else {"inputs": [m.name], "residual": c.detail})
    return rep


def cmd_cohomology(args) -> Report:
    m = _model(args.model)
    p = _p(m, args.p)
    if args.complex == "derham":
        cx, rep = derham_complex(m), Report("cohomology", m.name)
    elif args.complex == "filtered":
        cx, rep = filtered_complex(m, p), Report("cohomology", m.name, p)
    else:
        cx, rep = cone_complex(m, p), Report("cohomology", m.name, p)
    h = cohomology(cx)
    rows = [[k, h.dims[k], "; ".join(str(x) for x in h.elements.get(k, []))] for k in sorted(h.dims)]
    rep.table(f"cohomology of {cx.name}", ["degree", "dim", "representatives"], rows)
    return rep


def cmd_pairing(args) -> Report:
    m = _model(args.model)
    p = _p(m, args.p)
    top = 2 * (m.n + p) + 1
    if not 0 <= args.degree <= top:
        raise InputError(f"degree {args.degree} outside 0..{top}")
    pm = pairing_matrix(p, m, args.degree)
    left = pairing_representatives(p, m, pm.degree)
    right = pairing_representatives(p, m, pm.dual_degree)
    rep = Report("pairing", m.name, p)
    rep.table(f"pairing matrix, degree {pm.degree} x degree {pm.dual_degree}",
              ["representative"] + [str(b) for b in right],
              [[str(a)] + list(row) for a, row in zip(left, pm.rows)])
    rows, cols = pm.shape
    rep.table("rank", ["degree", "dual degree", "rows", "columns", "rank"],
              [[pm.degree, pm.dual_degree, rows, cols, pm.rank]])
    rep.verdict("pairing/full_rank", pm.full_rank,
                None if pm.full_rank else {"inputs": [f"degree {pm.degree}"],
                                           "residual": f"rank {pm.rank} on a {rows}x{cols} matrix"})
    return rep


def cmd_potential(args) -> Report:
    m = _model(args.model)
    p = _p(m, args.p)
    try:
        xs = parse_element(args.element, m, p)
    except ModelFileError as exc:
        raise InputError(str(exc)) from None
    res = potential_phi(xs)
    rep = Report("potential", m.name, p)
    rep.table("potential terms", ["l", "inputs", "value"], [[l, ", ".join(ins), v] for l, ins, v in res.terms])
    rep.table("potential", ["value", "nonzero terms", "dropped by degree"], [[res.value, len(res.terms), res.dropped]])
    return rep


def run_suite(name: str, m: LieModel, p: int, samples: int, seed: int, budget: int = TUPLE_BUDGET) -> List[IdentityReport]:
    if name == "sl2":
        return [sl2_check(m)]
    if name == "stasheff":
        return [stasheff_check(p, m, samples=samples, seed=seed, budget=budget)]
    if name == "ainfty-map":
        return [ainfty_map_check(p, m, samples=samples, seed=seed, budget=budget)]
    if name == "sdr":
        return [sdr_check(p, m)]
    if name == "cyclic":
        return [cyclic_check(p, m, samples=samples, seed=seed, budget=budget)]
    if name == "gysin":
        return [gysin_check(p, m), cohomology_maps_check(p, m)]
    if name == "cone":
        out = [cdga_check(m, p)]
        if p >= 1:
            out.append(quotient_check(m, p))
        if p == 0:
            out.append(modified_complex_check(m))
        return out
    raise InputError(f"unknown suite {name!r}")


def cmd_verify(args) -> Report:
    m = _model(args.model)
    p = _p(m, args.p)
    if args.samples <= 0:
        raise InputError("--samples must be positive")
    try:
        with ExitStack() as stack:
            stack.enter_context(faults.inject(*args.inject))
            rep = Report("verify", m.name, p, seed=args.seed)
            names = list(SUITES) if args.suite == "all" else [args.suite]
            for name in names:
                try:
                    reports = run_suite(name, m, p, args.samples, args.seed)
                except AssertionError as exc:
                    rep.verdict(f"{name}/internal", False, {"inputs": [], "residual": str(exc)})
                    continue
                for r in reports:
                    rep.add_identity_report(r)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return rep


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table", help="output format")

    parser = argparse.ArgumentParser(prog="fpcone", description="Filtered A-infinity algebras and cone cdgas "
                                     "on invariant-form models of symplectic nilmanifolds.")
    sub = parser.add_subparsers(dest="command", required=True)
    model_help = "builtin model name (kt4, t4, t6, nil6) or path to a model file"

    p = sub.add_parser("validate", parents=[common], help="check a model's structure equations and omega")
    p.add_argument("model", help=model_help)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions and representatives")
    p.add_argument("model", help=model_help)
    p.add_argument("--complex", choices=COMPLEXES, default="filtered")
    p.add_argument("--p", type=int, default=0)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("model", help=model_help)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="tuples drawn when a suite samples")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--inject", action="append", default=[], metavar="FAULT", choices=sorted(faults.KNOWN_FAULTS),
                   help="activate a deliberate fault (mutation testing); repeatable")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pairing", parents=[common], help="pairing matrix on cohomology representatives")
    p.add_argument("model", help=model_help)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_pairing)

    p = sub.add_parser("potential", parents=[common], help="evaluate the potential on an element file")
    p.add_argument("model", help=model_help)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--element", required=True, help="JSON element file")
    p.set_defaults(func=cmd_potential)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> Tuple[int, Optional[Report]]:
    """Parse ``argv``, execute, print the report; returns ``(exit code, report)``."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    try:
        rep = args.func(args)
    except InputError as exc:
        parser.print_usage(stderr)
        print(f"fpcone: error: {exc}", file=stderr)
        return 2, None
    print(rep.to_json() if args.format == "json" else rep.to_text(), file=stdout)
    return (0 if rep.passed else 1), rep


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
