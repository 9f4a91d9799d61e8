"""Command line entry point: ``quconv analyze | verify | search``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .analysis import Budgets, classify
from .encoder import load
from .exceptions import ParseError, QuconvError
from .pauli import to_text
from .search import TARGETS, SearchConfig, run_search
from .state_diagram import vertex_pauli
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _edge(e, params):
    return {
        "source": to_text(vertex_pauli(e.source, params)),
        "ancilla": to_text(e.ancilla),
        "logical": to_text(e.logical),
        "physical": to_text(e.physical),
        "target": to_text(vertex_pauli(e.target, params)),
    }


def _group(g, params):
    return {
        "size": len(g),
        "closure_verified": g.closure_verified,
        "generators": [to_text(vertex_pauli(v, params)) for v in g.generators],
    }


def analysis_report(E, c) -> dict:
    params = E.params
    crit = None
    if c.criterion is not None:
        nz = c.criterion.nonzero_records
        crit = {
            "criterion_met": c.criterion.criterion_met,
            "complete": c.criterion.complete,
            "pairs": len(c.criterion.records),
            "paths": c.criterion.paths_enumerated,
            "cycles": c.criterion.cycles_enumerated,
            "nonzero": [
                {
                    "f_path": [to_text(vertex_pauli(v, params)) for v in r.f_path],
                    "p_cycle": [to_text(vertex_pauli(v, params)) for v in r.p_cycle],
                    "sum": r.sum,
                }
                for r in nz[:5]
            ],
            "notes": c.criterion.notes,
        }
    ce = c.recursive_counterexample
    return {
        "tool": "quconv",
        "version": __version__,
        "encoder": {"label": E.label, "seed": E.seed, "p": params.p, "m": params.m, "n": params.n, "k": params.k},
        "catastrophic": c.catastrophic,
        "recursive": c.recursive,
        "catastrophic_witness": None if c.catastrophic_witness is None else [_edge(e, params) for e in c.catastrophic_witness],
        "recursive_counterexample": None if ce is None else [_edge(e, params) for e in ce.edges],
        "recursive_impulse_ancillas": c.recursive_impulse,
        "finite_memory": _group(c.finite_memory, params),
        "zero_cycle": _group(c.zero_cycle, params),
        "centralizer_of_finite": _group(c.centralizer_of_finite, params),
        "criterion": crit,
        "budgets": {
            "max_len": c.budgets.max_len,
            "repetition_budget": c.budgets.repetition_budget,
            "cycle_budget": c.budgets.cycle_budget,
            "path_budget": c.budgets.path_budget,
            "pair_budget": c.budgets.pair_budget,
        },
    }


def _emit(doc, out) -> None:
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    try:
        E = load(args.encoder)
    except (ParseError, QuconvError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot read {args.encoder}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    c = classify(E, Budgets.from_env(max_len=args.max_len))
    try:
        _emit(analysis_report(E, c), args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _primes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated primes, got {text!r}") from None


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        res = run_suite(args.suite, args.p, args.trials, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = {"tool": "quconv", "version": __version__, **res.to_dict()}
    doc["config"] = {"p": list(args.p), "trials": args.trials, "seed": args.seed}
    _emit(doc, args.out)
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_search(args) -> int:
    config = SearchConfig(
        p=args.p,
        m=args.m,
        n=args.n,
        k=args.k,
        mode="exhaustive" if args.exhaustive else "sampled",
        samples=args.samples or 0,
        seed=args.seed,
        gates=args.gates,
        target=args.target,
        max_len=args.max_len,
        workers=args.workers,
    )
    try:
        config.validate()
    except (ValueError, QuconvError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run_search(config)
    try:
        _emit({"tool": "quconv", "version": __version__, **report.to_dict()}, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if report.found else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quconv", description=__doc__)
    ap.add_argument("--version", action="version", version=f"quconv {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="progress logging on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify one encoder")
    a.add_argument("--encoder", required=True)
    a.add_argument("--max-len", type=int)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, help=", ".join(SUITES))
    v.add_argument("--p", type=_primes, default=(2, 3, 5))
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="search an encoder space for a classification pattern")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gates", type=int, default=40)
    s.add_argument("--target", choices=sorted(TARGETS), default="recursive-noncatastrophic")
    s.add_argument("--max-len", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except QuconvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
