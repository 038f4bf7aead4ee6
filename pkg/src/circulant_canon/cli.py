"""
Command line for circulant canonization.

Every subcommand reads one input, either a connection set (``--set "n: s1,s2,..."``,
with ``--undirected`` for an inverse-closed set) or a graph file in the
``n <n> directed|undirected`` edge-list format (``--graph FILE``), and prints a short
report. Exit codes: 0 success, 1 give-up, 2 invalid input, 3 failed experiment checks.
"""

import argparse
import logging
import sys
from logging import getLogger
from pathlib import Path

from circulant_canon.canon import canonize
from circulant_canon.core import ConnectionSet, Digraph, cayley, random_permutation, relabel
from circulant_canon.experiments import check_report, report_csv, run_experiment
from circulant_canon.models.errors import BoundExceededError, ExperimentAssertionError, InvalidInputError
from circulant_canon.models.results import ExperimentSpec, SampleModel
from circulant_canon.models.settings import get_settings, use_settings
from circulant_canon.refinement import round_colorings
from circulant_canon.sampling import circulant_census, make_rng, sample
from circulant_canon.spectral import dft_cross_check, has_saturated_spectrum, spectrum
from circulant_canon.utils.exception_handling import handle_input_errors
from circulant_canon.walk import is_walk_saturated, walk_matrix, walk_rank
from circulant_canon.wl2 import canonical_cayley_representation, wl2_rounds

logger = getLogger(__name__)

EXIT_OK, EXIT_GIVE_UP, EXIT_INVALID, EXIT_ASSERTION = 0, 1, 2, 3


def _int_list(text: str) -> list[int]:
    """Parse "16,32,64" or "8-12" (inclusive) or a mix of both."""
    values: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                lo, hi = part.split("-", 1)
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like '16,32' or '8-12', got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _add_input(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--set", dest="connection_set", help='connection set, e.g. "5: 1,4"')
    source.add_argument("--graph", type=Path, help="graph file in the 'n <n> directed|undirected' format")
    parser.add_argument("--undirected", action="store_true", help="the connection set is inverse-closed")
    parser.add_argument("--shuffle", action="store_true", help="relabel the input by a random permutation")


def _load(args) -> tuple[Digraph, ConnectionSet | None]:
    if args.connection_set is not None:
        with handle_input_errors("--set"):
            s = ConnectionSet.parse(args.connection_set, undirected=args.undirected)
        x = cayley(s)
    else:
        with handle_input_errors(str(args.graph)):
            x = Digraph.from_text(args.graph.read_text(encoding="utf-8"), str(args.graph))
        s = None
    if args.shuffle:
        x = relabel(x, random_permutation(x.n, make_rng(args.seed, x.n)))
        logger.info(f"input relabeled with seed {args.seed}")
    return x, s


def _require_set(s: ConnectionSet | None, command: str) -> ConnectionSet:
    if s is None:
        raise InvalidInputError("this command needs a connection set (--set)", command)
    return s


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_gen(args) -> tuple[list[str], int]:
    with handle_input_errors("gen"):
        model = SampleModel(kind=args.model, directed=not args.undirected, n=args.n, seed=args.seed)
    lines = []
    for draw in range(args.count):
        drawn = sample(model, draw)
        lines.append(drawn.format() if isinstance(drawn, ConnectionSet) else drawn.to_text().rstrip("\n"))
        if isinstance(drawn, Digraph):
            lines.append("")
    return lines, EXIT_OK


def cmd_spectrum(args) -> tuple[list[str], int]:
    _, s = _load(args)
    s = _require_set(s, "spectrum")
    result = spectrum(s)
    lines = [
        f"connection set: {s.format()}",
        f"distinct eigenvalues: {result.distinct_count} of {s.n}",
        f"simple spectrum: {_yes(result.distinct_count == s.n)}",
    ]
    if s.is_inverse_closed:
        lines.append(f"saturated spectrum: {_yes(has_saturated_spectrum(s))}")
    lines.append(f"dft cross-check: {'ok' if dft_cross_check(s, args.tolerance) else 'MISMATCH'}")
    if args.eigenvalues:
        lines += [f"lambda_{a} = {value!r}" for a, value in enumerate(result.eigenvalues)]
    return lines, EXIT_OK


def cmd_walk(args) -> tuple[list[str], int]:
    x, s = _load(args)
    w = walk_matrix(x, args.terminal)
    distinct = w.distinct_row_count()
    lines = [
        f"terminal: {list(w.terminal)}",
        f"rank: {walk_rank(w)}",
        f"distinct rows: {distinct} of {x.n}",
        f"walk-discrete: {_yes(distinct == x.n)}",
    ]
    if s is not None and s.is_inverse_closed:
        lines.append(f"walk-saturated: {_yes(is_walk_saturated(s))}")
    return lines, EXIT_OK


def cmd_cr(args) -> tuple[list[str], int]:
    x, _ = _load(args)
    rounds = round_colorings(x, args.individualize)
    lines = [f"round {c.round}: {c.num_classes} classes" for c in rounds]
    final = rounds[-1]
    lines.append("partition: " + " | ".join(" ".join(str(v) for v in cls) for cls in final.classes()))
    lines.append(f"discrete: {_yes(final.is_discrete)}")
    return lines, EXIT_OK


def _canon_lines(result) -> tuple[list[str], int]:
    if not result.succeeded:
        return [f"outcome: give-up ({result.reason.value})"], EXIT_GIVE_UP
    return [
        "outcome: success",
        f"labeling: {' '.join(str(label) for label in result.labeling)}",
        f"digest: {result.canonical_form.digest()}",
    ], EXIT_OK


def cmd_canon(args) -> tuple[list[str], int]:
    x, _ = _load(args)
    return _canon_lines(canonize(x, args.mode, args.seed))


def cmd_wl2(args) -> tuple[list[str], int]:
    x, _ = _load(args)
    return [f"round {pc.round}: {pc.num_classes} classes" for pc in wl2_rounds(x)], EXIT_OK


def cmd_wl2_rep(args) -> tuple[list[str], int]:
    x, _ = _load(args)
    result = canonical_cayley_representation(x)
    lines, code = _canon_lines(result)
    if result.succeeded:
        elements = sorted(result.canonical_form.circulant_connection_set())
        lines.insert(1, f"connection set: {x.n}: " + ",".join(str(e) for e in elements))
    return lines, code


def cmd_experiment(args) -> tuple[list[str], int]:
    with handle_input_errors("experiment"):
        spec = ExperimentSpec(
            experiment=args.name,
            n_values=args.n,
            trials=args.trials,
            directed=not args.undirected,
            model=args.model,
            seed=args.seed,
            out=args.out,
            exhaustive=args.exhaustive,
            record_timings=args.timings,
            constant=args.constant,
            rel_tol=args.rel_tol,
            relabelings=args.relabelings,
            jobs=args.jobs,
            max_slope=args.max_slope,
        )
    report = run_experiment(spec)
    lines = report_csv(report).rstrip("\n").split("\n")
    try:
        check_report(report)
    except ExperimentAssertionError as e:
        print(str(e), file=sys.stderr)
        return lines, EXIT_ASSERTION
    return lines, EXIT_OK


def cmd_census(args) -> tuple[list[str], int]:
    report = circulant_census(args.n, not args.undirected)
    return [f"{name}: {value}" for name, value in report.model_dump().items()], EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="circulant-canon", description="Canonization of circulant (di)graphs.")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampling, shuffling and tie-breaking")
    parser.add_argument("--out", type=Path, default=None, help="write the report to this file")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes for experiments")
    parser.add_argument("--oracle-bound", type=int, default=None, help="largest order for brute-force oracles")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="sample random circulants")
    gen.add_argument("--model", choices=["cayley", "unlabeled", "labeled"], default="cayley")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--undirected", action="store_true")
    gen.add_argument("--count", type=int, default=1)
    gen.set_defaults(handler=cmd_gen)

    spec = commands.add_parser("spectrum", help="exact spectrum of a circulant")
    _add_input(spec)
    spec.add_argument("--eigenvalues", action="store_true", help="list every eigenvalue")
    spec.add_argument("--tolerance", type=float, default=1e-6, help="tolerance of the DFT cross-check")
    spec.set_defaults(handler=cmd_spectrum)

    walk = commands.add_parser("walk", help="walk matrix rank and verdicts")
    _add_input(walk)
    walk.add_argument("--terminal", type=_int_list, default=[0], help="terminal vertices, e.g. 0 or 0,3")
    walk.set_defaults(handler=cmd_walk)

    cr = commands.add_parser("cr", help="color refinement rounds")
    _add_input(cr)
    cr.add_argument("-i", "--individualize", type=_int_list, default=[], help="vertices to individualize")
    cr.set_defaults(handler=cmd_cr)

    canon = commands.add_parser("canon", help="canonical labeling")
    _add_input(canon)
    canon.add_argument("--mode", choices=["digraph", "graph", "full", "naive", "walk"], default="full")
    canon.set_defaults(handler=cmd_canon)

    wl2 = commands.add_parser("wl2", help="2-WL class counts per round")
    _add_input(wl2)
    wl2.set_defaults(handler=cmd_wl2)

    rep = commands.add_parser("wl2-rep", help="canonical Cayley representation")
    _add_input(rep)
    rep.set_defaults(handler=cmd_wl2_rep)

    exp = commands.add_parser("experiment", help="run an experiment and write CSV")
    exp.add_argument(
        "name", choices=["simple_spectrum", "3p_collision", "saturated", "canon_pipeline", "multiplier_free", "ccr"]
    )
    exp.add_argument("--n", type=_int_list, required=True, help="orders, e.g. 16,32,64 or 8-12")
    exp.add_argument("--trials", type=int, default=1000)
    exp.add_argument("--undirected", action="store_true")
    exp.add_argument("--model", choices=["cayley", "unlabeled", "labeled"], default="cayley")
    exp.add_argument("--exhaustive", action="store_true", help="enumerate every connection set")
    exp.add_argument("--timings", action="store_true", help="record per-trial timings")
    exp.add_argument("--constant", type=float, default=3.0)
    exp.add_argument("--rel-tol", type=float, default=0.1)
    exp.add_argument("--relabelings", type=int, default=1)
    exp.add_argument("--max-slope", type=float, default=None)
    exp.set_defaults(handler=cmd_experiment)

    census = commands.add_parser("census", help="exhaustive counts of the circulants of one order")
    census.add_argument("--n", type=int, required=True)
    census.add_argument("--undirected", action="store_true")
    census.set_defaults(handler=cmd_census)
    return parser


def _emit(args, lines: list[str]) -> None:
    if not lines:
        return
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _apply_overrides(args) -> None:
    updates = {}
    if args.oracle_bound is not None:
        updates.update(aut_oracle_bound=args.oracle_bound, canon_oracle_bound=args.oracle_bound)
    if args.jobs is not None:
        updates.update(jobs=args.jobs)
    if updates:
        use_settings(get_settings().model_copy(update=updates))


def main(argv: list[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    _apply_overrides(args)
    try:
        lines, code = args.handler(args)
    except (InvalidInputError, BoundExceededError) as e:
        print(str(e), file=sys.stderr)
        return EXIT_INVALID
    _emit(args, lines)
    return code


if __name__ == "__main__":
    sys.exit(main())
