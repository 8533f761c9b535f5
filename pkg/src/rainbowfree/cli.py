"""Command-line frontend.

Subcommands: ``gen`` (sample an instance), ``decide`` (colourability of an
instance file), ``recover`` (colour classes from a full rainbow-free edge
set), ``sweep`` (Monte Carlo phase-transition sweep to CSV), ``expect``
(first-moment formula vs Monte Carlo).

Exit codes: 0 = colourable / success, 1 = not colourable, 2 = unknown
(one-sided method), 3 = any error. Results go to stdout, diagnostics to
stderr; invalid input never produces a stack trace.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import RainbowFreeError
from .experiments import (
    SweepConfig,
    format_csv,
    records_to_json,
    run_sweep,
    validate_expectation,
)
from .hypergraph import format_instance, parse_instance
from .random_model import RandomModelParams, sample
from .solver import decide_oracle, decide_peel, decide_type1, recover_colouring

EXIT_COLOURABLE = 0
EXIT_NOT_COLOURABLE = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; 2 means "unknown" here,
    # so usage problems are turned into ordinary errors instead.
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rainbowfree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="sample a random instance")
    gen.add_argument("--n", type=int, required=True, help="number of vertices")
    gen.add_argument("--k", type=int, required=True, help="edge size / palette")
    gen.add_argument("--p", type=float, required=True, help="edge probability")
    gen.add_argument("--seed", type=int, default=None, help="master seed")
    gen.add_argument("--out", default="-", help="output path, '-' for stdout")

    dec = sub.add_parser("decide", help="decide rainbow-free colourability")
    dec.add_argument("--in", dest="path", required=True, help="instance file")
    dec.add_argument(
        "--method",
        choices=("oracle", "peel", "type1"),
        default="peel",
        help="decision procedure",
    )
    dec.add_argument(
        "--witness", action="store_true", help="print a witness colouring"
    )

    rec = sub.add_parser("recover", help="recover colour classes from a full edge set")
    rec.add_argument("--in", dest="path", required=True, help="instance file")
    rec.add_argument("--k", type=int, required=True, help="palette size")

    sweep = sub.add_parser("sweep", help="Monte Carlo sweep over a probability grid")
    sweep.add_argument("--k", type=int, required=True)
    sweep.add_argument("--n", type=int, nargs="+", required=True, help="vertex counts")
    grid = sweep.add_mutually_exclusive_group()
    grid.add_argument(
        "--alphas",
        type=float,
        nargs="+",
        default=None,
        help="multiples of the threshold probability (default grid if omitted)",
    )
    grid.add_argument(
        "--p-grid", type=float, nargs="+", default=None, help="explicit probabilities"
    )
    sweep.add_argument("--trials", type=int, required=True)
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument(
        "--method",
        choices=("oracle", "peel", "type1-then-peel"),
        default="type1-then-peel",
    )
    sweep.add_argument("--confidence", type=float, default=0.95)
    sweep.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    sweep.add_argument("--json", default=None, help="also write a JSON mirror here")
    sweep.add_argument("--threads", type=int, default=1, help="worker cap")

    exp = sub.add_parser("expect", help="first-moment formula vs Monte Carlo")
    exp.add_argument("--n", type=int, required=True)
    exp.add_argument("--k", type=int, required=True)
    exp.add_argument("--p", type=float, required=True)
    exp.add_argument("--trials", type=int, required=True)
    exp.add_argument("--seed", type=int, default=None)

    return parser


def _resolve_seed(seed: int | None) -> int:
    """Use the given seed or generate one and report it for reproducibility."""
    if seed is not None:
        return seed
    generated = int.from_bytes(os.urandom(8), "big")
    print(f"# seed={generated}", file=sys.stderr)
    return generated


def _write_output(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed)
    h = sample(RandomModelParams(n=args.n, k=args.k, p=args.p, seed=seed))
    _write_output(format_instance(h), args.out)
    return EXIT_COLOURABLE


def _cmd_decide(args) -> int:
    with open(args.path, encoding="utf-8") as handle:
        h = parse_instance(handle.read())
    if args.method == "oracle":
        decision = decide_oracle(h)
    elif args.method == "peel":
        decision = decide_peel(h)
    else:
        decision = decide_type1(h)
    if decision.colourable is True:
        print("COLOURABLE")
        if args.witness and decision.witness is not None:
            for v in sorted(decision.witness.colours):
                print(f"{v} {decision.witness.colours[v]}")
        return EXIT_COLOURABLE
    if decision.colourable is False:
        print("NOT-COLOURABLE")
        return EXIT_NOT_COLOURABLE
    print("UNKNOWN")
    return EXIT_UNKNOWN


def _cmd_recover(args) -> int:
    with open(args.path, encoding="utf-8") as handle:
        h = parse_instance(handle.read())
    result = recover_colouring(h, args.k)
    for cls in result.canonical:
        print(" ".join(str(v) for v in cls))
    return EXIT_COLOURABLE


def _cmd_sweep(args) -> int:
    seed = _resolve_seed(args.seed)
    kwargs = dict(
        k=args.k,
        n_list=tuple(args.n),
        trials=args.trials,
        seed=seed,
        method=args.method,
        confidence=args.confidence,
    )
    if args.p_grid is not None:
        kwargs["p_grid"] = tuple(args.p_grid)
    elif args.alphas is not None:
        kwargs["alphas"] = tuple(args.alphas)
    config = SweepConfig(**kwargs)
    records = run_sweep(config, threads=args.threads)
    _write_output(format_csv(records, config), args.out)
    if args.json is not None:
        _write_output(records_to_json(records, config) + "\n", args.json)
    return EXIT_COLOURABLE


def _cmd_expect(args) -> int:
    seed = _resolve_seed(args.seed)
    report = validate_expectation(args.n, args.k, args.p, args.trials, seed)
    print(
        f"analytic={report.analytic:.6g} sample_mean={report.sample_mean:.6g} "
        f"std_error={report.std_error:.6g} z={report.z_score:.6g} "
        f"trials={report.trials}"
    )
    return EXIT_COLOURABLE


_COMMANDS = {
    "gen": _cmd_gen,
    "decide": _cmd_decide,
    "recover": _cmd_recover,
    "sweep": _cmd_sweep,
    "expect": _cmd_expect,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except RainbowFreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
