"""Command-line front end: ``lpbn <command> FILE [options]``.

Exit status: 0 success, 1 unreadable or malformed input, 2 a budget ran
out (partial output is still printed), 3 an internal soundness failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import bn, oracle
from .analyzer import METHODS, AnalysisOptions, analyze, solve
from .errors import BudgetExceeded, SoundnessError
from .fixpoint import DEFAULT_LFP_BUDGET, least_fixpoint, lfp_program
from .program import ParseError, Program, format_program, parse_program
from .sgraph import (
    DEFAULT_CYCLE_BUDGET,
    dependence_graph,
    positive_dependence_graph,
    to_dot,
)

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_UNSOUND = 0, 1, 2, 3
COMMANDS = ("analyze", "solve", "supported", "fixpoints", "lfp", "export", "oracle")


@dataclass
class RunConfig:
    command: str
    input: str
    fmt: str = "human"
    cycle_budget: int = DEFAULT_CYCLE_BUDGET
    fp_budget: int = bn.DEFAULT_FP_BUDGET
    lfp_budget: int = DEFAULT_LFP_BUDGET
    solve_cap: int = 20
    ig_mode: str = "semantic"
    ig_cap: int = bn.DEFAULT_SUPPORT_CAP
    solve: bool = False
    method: str = "fixedpoint-filter"
    graph: str = "dg"
    oracle_kind: str = "stable"

    def __post_init__(self):
        for name in ("cycle_budget", "fp_budget", "lfp_budget", "solve_cap", "ig_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name.replace('_', '-')} must be positive")


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _default_budget(default: int) -> int:
    env = os.environ.get("LPBN_BUDGET")
    if env:
        try:
            return _positive_int(env)
        except (ValueError, argparse.ArgumentTypeError):
            raise SystemExit(f"lpbn: LPBN_BUDGET must be a positive integer, got {env!r}")
    return default


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="program file, or - for stdin")
    common.add_argument("--format", dest="fmt", choices=("human", "json"), default="human")
    common.add_argument("--cycle-budget", type=_positive_int, default=_default_budget(DEFAULT_CYCLE_BUDGET),
                        help="max simple cycles examined by positive-cycle detection")
    common.add_argument("--fp-budget", type=_positive_int, default=_default_budget(bn.DEFAULT_FP_BUDGET),
                        help="max search nodes for fixed-point enumeration")
    common.add_argument("--lfp-budget", type=_positive_int, default=_default_budget(DEFAULT_LFP_BUDGET),
                        help="max quasi-rules in the least fixpoint")
    common.add_argument("--solve-cap", type=_positive_int, default=20,
                        help="largest atom count analyze will solve exactly")
    common.add_argument("--ig-mode", choices=("semantic", "syntactic"), default="semantic")
    common.add_argument("--ig-cap", type=_positive_int, default=bn.DEFAULT_SUPPORT_CAP,
                        help="max function support for the semantic influence graph")

    parser = argparse.ArgumentParser(
        prog="lpbn", description="Static analysis of ground normal logic programs via Boolean networks."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="report bounds on the number of stable models")
    p.add_argument("--solve", action="store_true", help="also compute the stable models")
    p.add_argument("--method", choices=METHODS, default="fixedpoint-filter")

    p = sub.add_parser("solve", parents=[common], help="list stable models")
    p.add_argument("--method", choices=METHODS, default="fixedpoint-filter")

    sub.add_parser("supported", parents=[common], help="list supported models")
    sub.add_parser("fixpoints", parents=[common], help="list fixed points of the encoded network")
    sub.add_parser("lfp", parents=[common], help="print the least fixpoint as a program")

    p = sub.add_parser("export", parents=[common], help="print a graph in DOT")
    p.add_argument("--graph", choices=("dg", "pdg", "ig"), default="dg")

    p = sub.add_parser("oracle", parents=[common], help="brute-force cross-checks")
    p.add_argument("kind", choices=("stable", "supported", "fixpoints", "cycles"))
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit_models(P: Program, models, cfg: RunConfig, out, method=None, bits=False) -> None:
    if cfg.fmt == "json":
        payload = {"count": len(models), "models": [P.names_of(m) for m in models]}
        if method:
            payload = {"method": method, **payload}
        if bits:
            payload["states"] = [bn.state_bits(m, P.n) for m in models]
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    for m in models:
        prefix = bn.state_bits(m, P.n) + " " if bits else ""
        out.write(prefix + P.format_set(m) + "\n")


def _export(P: Program, cfg: RunConfig) -> str:
    if cfg.graph == "dg":
        return to_dot(dependence_graph(P), "dg")
    if cfg.graph == "pdg":
        return to_dot(positive_dependence_graph(P), "pdg")
    G, exact = bn.influence_graph_with_fallback(bn.encode(P), cfg.ig_mode, cfg.ig_cap)
    mode = "semantic (exact)" if exact else "syntactic (over-approximation)"
    return to_dot(G, "ig", comment=f"influence graph, {mode}")


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        P = parse_program(_read(cfg.input))
    except (OSError, UnicodeDecodeError) as exc:
        err.write(f"lpbn: cannot read {cfg.input}: {exc}\n")
        return EXIT_INPUT
    except ParseError as exc:
        err.write(f"lpbn: {cfg.input}: {exc}\n")
        return EXIT_INPUT

    try:
        if cfg.command == "analyze":
            opts = AnalysisOptions(cfg.cycle_budget, cfg.fp_budget, cfg.lfp_budget, cfg.solve, cfg.solve_cap, cfg.method)
            report = analyze(P, opts)
            out.write(report.to_json() if cfg.fmt == "json" else report.render())
            return EXIT_BUDGET if report.budget_exhausted else EXIT_OK
        if cfg.command == "solve":
            models = solve(P, cfg.method, fp_budget=cfg.fp_budget, lfp_budget=cfg.lfp_budget)
            _emit_models(P, models, cfg, out, method=cfg.method)
        elif cfg.command == "supported":
            _emit_models(P, bn.fixed_points(bn.encode(P), cfg.fp_budget), cfg, out)
        elif cfg.command == "fixpoints":
            _emit_models(P, bn.fixed_points(bn.encode(P), cfg.fp_budget), cfg, out, bits=True)
        elif cfg.command == "lfp":
            text = format_program(lfp_program(P, least_fixpoint(P, cfg.lfp_budget)))
            if cfg.fmt == "json":
                text = json.dumps({"rules": text.splitlines()}, indent=2) + "\n"
            out.write(text)
        elif cfg.command == "export":
            out.write(_export(P, cfg))
        elif cfg.command == "oracle":
            _run_oracle(P, cfg, out)
        else:
            raise ValueError(f"unknown command {cfg.command!r}")
    except BudgetExceeded as exc:
        err.write(f"lpbn: budget exhausted: {exc}\n")
        if exc.partial:
            err.write(f"lpbn: {len(exc.partial)} unconfirmed partial results\n")
            if isinstance(exc.partial[0], frozenset):
                for m in exc.partial:
                    out.write(P.format_set(m) + "\n")
        return EXIT_BUDGET
    except oracle.SizeCapExceeded as exc:
        err.write(f"lpbn: {exc}\n")
        return EXIT_BUDGET
    except SoundnessError as exc:
        err.write(f"lpbn: internal soundness failure: {exc}\n")
        return EXIT_UNSOUND
    return EXIT_OK


def _run_oracle(P: Program, cfg: RunConfig, out) -> None:
    kind = cfg.oracle_kind
    if kind == "stable":
        _emit_models(P, oracle.enumerate_stable_bruteforce(P), cfg, out)
    elif kind == "supported":
        _emit_models(P, oracle.enumerate_supported_bruteforce(P), cfg, out)
    elif kind == "fixpoints":
        _emit_models(P, oracle.enumerate_fixed_points_bruteforce(bn.encode(P)), cfg, out, bits=True)
    else:
        G = dependence_graph(P)
        cycles = oracle.enumerate_signed_cycles(G, cfg.cycle_budget)
        if cfg.fmt == "json":
            rows = [{"vertices": [G.label(v) for v in c.vertices], "signs": [s.value for s in c.signs],
                     "sign": c.sign.value} for c in cycles]
            out.write(json.dumps(rows, indent=2) + "\n")
        else:
            for c in cycles:
                path = " ".join(G.label(v) for v in c.vertices)
                out.write(f"{c.sign.value} {path} [{''.join(s.value for s in c.signs)}]\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        input=args.input,
        fmt=args.fmt,
        cycle_budget=args.cycle_budget,
        fp_budget=args.fp_budget,
        lfp_budget=args.lfp_budget,
        solve_cap=args.solve_cap,
        ig_mode=args.ig_mode,
        ig_cap=args.ig_cap,
        solve=getattr(args, "solve", False),
        method=getattr(args, "method", "fixedpoint-filter"),
        graph=getattr(args, "graph", "dg"),
        oracle_kind=getattr(args, "kind", "stable"),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
