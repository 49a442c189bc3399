"""Command-line front end: ``qspeedup <verb> [options]``.

Exit status is 0 on success, 1 on domain errors (and on a failing acceptance
run), 2 on usage errors such as unknown flags or family names.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from . import acceptance
from .algorithms import (
    grover_iterate,
    quantum_query_count,
    run_extended,
    simon_sample_loop,
)
from .errors import CapacityError, DegenerateProblemError, DomainError
from .families import BUILTIN_NAMES, FunctionFamily, builtin, parse_family
from .histories import assign_phases, enumerate_histories, history_table, sum_histories
from .query import RuleVerdict, check_fifty_percent_rule
from .readout import conditional_x_states, synthesize_readout
from .state import TOL, StateVector, VPreparation, bits, canonical_phase, conditional_distribution
from .kernels import backend

VERBS = ("simulate", "rule", "histories", "synthesize", "grover", "simon", "report")


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _complex(z: complex) -> str:
    return f"({_fmt(z.real)}, {_fmt(z.imag)})"


def resolve_family(args: argparse.Namespace) -> FunctionFamily:
    if args.file:
        path = Path(args.file)
        if not path.is_file():
            raise UsageError(f"no such family file: {args.file}")
        return parse_family(path.read_text(encoding="utf-8"))
    if not args.family:
        raise UsageError("--family or --file is required")
    name = re.sub(r"[()\s]", "", args.family.lower())
    if name not in BUILTIN_NAMES:
        raise UsageError(f"unknown family {args.family!r}; built-ins: {', '.join(BUILTIN_NAMES)}")
    return builtin(name)


def emit_state(state: StateVector, title: str, out: TextIO) -> None:
    state = canonical_phase(state)
    names = state.layout.names
    out.write(f"# {title}; global phase: first nonzero amplitude real positive\n")
    out.write("#" + "\t".join(names) + "\tamplitude\n")
    for i, amp in enumerate(state.amplitudes):
        out.write("\t".join(state.basis_labels(i)) + f"\t{_complex(amp)}\n")


def _correlated(state: StateVector, family: FunctionFamily, label_map, tol: float) -> bool:
    labels = family.readout_labels()
    cond = conditional_distribution(state, "K", "X")
    return all(dist.get(label_map.get(labels[k], ""), 0.0) >= 1 - tol for k, dist in cond.items())


def cmd_simulate(args: argparse.Namespace, out: TextIO) -> int:
    family = resolve_family(args)
    report = run_extended(family)
    stages = list(report.states) if args.steps else ["final"]
    if args.emit == "table":
        cond = conditional_distribution(report.states["final"], "K", "X")
        out.write("k\t" + "\t".join(f"P(X={bits(x, family.x_bits)})" for x in range(1 << family.x_bits)) + "\n")
        for k, dist in cond.items():
            row = [_fmt(dist.get(bits(x, family.x_bits), 0.0)) for x in range(1 << family.x_bits)]
            out.write(k + "\t" + "\t".join(row) + "\n")
    else:
        for stage in stages:
            emit_state(report.states[stage], f"{family.name} {stage}", out)
    verdict = _correlated(report.states["final"], family, report.readout.label_map, args.tol)
    out.write(f"# quantum_queries {report.quantum_queries}; K-X correlated: {'yes' if verdict else 'no'}\n")
    return 0


def _rule(family: FunctionFamily, mode: str | None) -> RuleVerdict:
    return check_fifty_percent_rule(family, quantum_query_count(family), mode)


def cmd_rule(args: argparse.Namespace, out: TextIO) -> int:
    verdict = _rule(resolve_family(args), args.mode)
    if args.emit == "tsv":
        out.write(RuleVerdict.TSV_HEADER + "\n" + verdict.tsv() + "\n")
    else:
        out.write(verdict.short() + "\n")
    for flag in verdict.flags:
        out.write(f"# flag: {flag}\n")
    return 0


def cmd_histories(args: argparse.Namespace, out: TextIO) -> int:
    family = resolve_family(args)
    bundle = assign_phases(enumerate_histories(family, args.mode), VPreparation.antisymmetric())
    if args.emit == "state":
        emit_state(sum_histories(bundle, "initial"), f"{family.name} histories, initial", out)
        emit_state(sum_histories(bundle, "after_evaluation"), f"{family.name} histories, after evaluation", out)
    else:
        out.write("\n".join(history_table(bundle)) + "\n")
    return 0


def cmd_synthesize(args: argparse.Namespace, out: TextIO) -> int:
    family = resolve_family(args)
    evaluated = run_extended(family).states["evaluated"]
    readout = synthesize_readout(conditional_x_states(evaluated, family))
    out.write(f"# readout for {family.name}, rows indexed by target X string\n")
    for row in readout.matrix:
        out.write("\t".join(_complex(z) for z in row) + "\n")
    out.write("# label_map\n")
    for label, target in sorted(readout.label_map.items()):
        out.write(f"{label}\t{target}\n")
    return 0


def cmd_grover(args: argparse.Namespace, out: TextIO) -> int:
    n = args.n if args.n is not None else 2
    report = grover_iterate(n, args.iterations)
    out.write("iteration\tP(X=k|K=k)\n")
    for t, p in enumerate(report.probabilities):
        out.write(f"{t}\t{_fmt(p)}\n")
    out.write(f"# quantum_queries {report.quantum_queries}\n")
    return 0


def cmd_simon(args: argparse.Namespace, out: TextIO) -> int:
    n = args.n if args.n is not None else 2
    seed = args.seed if args.seed is not None else 0
    res = simon_sample_loop(n, seed)
    out.write(f"standard\tk={res.k_label}\th={res.period}\tqueries={res.queries}\tseed={seed}\n")
    for s in res.samples:
        out.write(f"sample\t{s.outcome}\n")
    if n == 2:
        optimal = run_extended(builtin("simon2"), VPreparation.antisymmetric())
        out.write(f"optimal\tqueries={optimal.quantum_queries}\tcorrelated={'yes' if optimal.correlated else 'no'}\n")
    return 0


def speedup_rows(mode: str | None = None) -> list[str]:
    rows = [RuleVerdict.TSV_HEADER]
    for name in BUILTIN_NAMES:
        family = builtin(name)
        try:
            rows.append(_rule(family, mode).tsv())
        except (CapacityError, DegenerateProblemError) as exc:
            rows.append(f"{name}\t-\tn/a\tn/a\tn/a\t{quantum_query_count(family)}\tn/a ({exc})")
    return rows


def cmd_report(args: argparse.Namespace, out: TextIO) -> int:
    if not args.all and not (args.family or args.file):
        raise UsageError("report needs --all or a family")
    if not args.all:
        verdict = _rule(resolve_family(args), args.mode)
        out.write(RuleVerdict.TSV_HEADER + "\n" + verdict.tsv() + "\n")
        return 0
    out.write(f"# minimax backend: {backend()}\n")
    results = acceptance.run_all(args.seed)
    for r in results:
        out.write(r.line() + "\n")
    out.write("\n".join(speedup_rows(args.mode)) + "\n")
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "simulate": cmd_simulate,
    "rule": cmd_rule,
    "histories": cmd_histories,
    "synthesize": cmd_synthesize,
    "grover": cmd_grover,
    "simon": cmd_simon,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qspeedup", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb)
        p.add_argument("--family")
        p.add_argument("--file")
        p.add_argument("--mode", choices=("bit", "row"))
        p.add_argument("--steps", action="store_true", help="print every stage, not just the final state")
        p.add_argument("--emit", choices=("state", "table", "tsv"))
        p.add_argument("--iterations", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--tol", type=float, default=TOL)
        if verb == "report":
            p.add_argument("--all", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    np.set_printoptions(precision=6, suppress=True)
    try:
        return COMMANDS[args.verb](args, out)
    except UsageError as exc:
        err.write(f"qspeedup {args.verb}: usage error: {exc}\n")
        return 2
    except DomainError as exc:
        where = f" ({args.family or args.file})" if (args.family or args.file) else ""
        err.write(f"qspeedup {args.verb}{where}: {type(exc).__name__}: {exc}\n")
        return 1
