"""Command line entry point: ``snaketree analyze <input> [options]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import InconsistencyError, SnakeTreeError, ValidationError
from .morse import analyze
from .textio import emit_dot, emit_report, parse_input, root_names

EXIT_OK = 0
EXIT_INJECTIVITY = 2
EXIT_VALIDATION = 3
EXIT_MISMATCH = 4


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="snaketree", description="Snake of a real morsification from its Puiseux roots.")
    sub = ap.add_subparsers(dest="command", required=True)
    an = sub.add_parser("analyze", help="analyse a problem file")
    an.add_argument("input", help="problem file ('-' for stdin)")
    an.add_argument("--oracle", action="store_true", help="cross-check against direct evaluation")
    an.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    an.add_argument("--dot-dir", metavar="DIR", help="write DOT files for the trees into DIR")
    an.add_argument("--quiet", action="store_true", help="suppress the summary on stdout")
    return ap


def _summary(report) -> str:
    lines = [f"n = {report.roots.n} real roots, {len(report.roots.complex_roots)} complex roots"]
    for a in report.areas:
        lines.append(f"S_{a.index}: sigma = {a.sigma}, s = {a.initial_coeff}")
    lines.append("injectivity: " + ("pass" if report.injectivity.passed else "FAIL"))
    if report.snake is not None:
        lines.append("snake: " + " ".join(map(str, report.snake.target_ranks)))
        lines.append(f"discriminant tree isomorphic: {report.discriminant_match}")
    if report.indeterminate_pairs:
        lines.append("indeterminate pairs: " + ", ".join(f"({i},{j})" for i, j in report.indeterminate_pairs))
    if report.oracle is not None:
        lines.append(f"oracle snake: {' '.join(map(str, report.oracle.snake.target_ranks))} "
                     f"(x0 = {report.oracle.x0_used}, agrees: {report.oracle_agrees})")
    elif report.oracle_error:
        lines.append(f"oracle: {report.oracle_error}")
    return "\n".join(lines) + "\n"


def _write_dots(report, directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    names = root_names(report.roots)
    trees = {"complex_tree": (report.complex_tree, None), "real_tree": (report.real_tree, None)}
    if report.integrated is not None:
        trees["integrated_tree"] = (report.integrated, report.sigma)
    if report.discriminant is not None:
        dnames = {i: f"delta_{i + 1}" for i in range(report.roots.n)}
        trees["discriminant_tree"] = (report.discriminant, None)
    for stem, (tree, exponent) in trees.items():
        labels = dnames if stem == "discriminant_tree" else names
        (directory / f"{stem}.dot").write_text(emit_dot(tree, labels, exponent, graph_name=stem))


def run(args) -> int:
    try:
        text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        spec = parse_input(text)
        report = analyze(spec.root_system, spec.unit, run_oracle=args.oracle)
    except ValidationError as exc:
        print(f"validation error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except SnakeTreeError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    if args.json == "-":
        sys.stdout.write(emit_report(report))
    elif args.json:
        Path(args.json).write_text(emit_report(report))
    if args.dot_dir:
        _write_dots(report, Path(args.dot_dir))
    if not args.quiet and args.json != "-":
        sys.stdout.write(_summary(report))
        sys.stdout.flush()

    if not report.injectivity.passed:
        for w in report.injectivity.witnesses:
            print(f"injectivity fails at vertex {w.vertex} (E = {w.exponent}): table entries "
                  f"{w.colliding[0]} and {w.colliding[1]} coincide, s-sum over edges "
                  f"{w.zero_sum_range[0]}..{w.zero_sum_range[1]} = "
                  + " + ".join(f"s_{r}" for r in w.zero_sum_terms) + " = 0", file=sys.stderr)
        return EXIT_INJECTIVITY
    if report.discriminant_match is False:
        print("integrated tree and discriminant tree differ", file=sys.stderr)
        return EXIT_MISMATCH
    if args.oracle:
        if report.oracle_error is not None:
            print(f"oracle: {report.oracle_error}", file=sys.stderr)
            return EXIT_MISMATCH
        if report.oracle_agrees is False:
            print("oracle snake differs from the combinatorial snake", file=sys.stderr)
            return EXIT_MISMATCH
    return EXIT_OK


def main(argv=None) -> int:
    return run(_parser().parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
