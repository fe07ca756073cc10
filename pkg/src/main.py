from argparse import ArgumentParser
import logging
from pathlib import Path
import sys

if __package__ in (None, ""):
    sys.path.append(str(Path(__file__).resolve().parent.parent))

from src.errors import UnilinError
from src.model import evaluate_ranges, parse
from src.output import render_json, render_text
from src.relax import relax
from src.safebound import DEFAULT_SWEEPS
from src.strategy import COMBINED, DEFAULT_THIN_EPS, MODES, SolverOptions, solve

logger = logging.getLogger(__name__)

EXIT_SOLVED = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2


def _build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="unilin", description="Certified enclosures for systems of linear constraints")
    parser.add_argument("model", type=Path, help="Model file (.ucl)")
    parser.add_argument("--solver", choices=MODES, default=COMBINED, help="Solving strategy (default: combined)")
    parser.add_argument("--order", default=None, help="Gauss elimination order, e.g. x,y")
    parser.add_argument("--digits", type=int, default=17, help="Significant digits in text output (default: 17)")
    parser.add_argument("--output", choices=("text", "json"), default="text", help="Output format (default: text)")
    parser.add_argument(
        "--thin-eps",
        type=float,
        default=DEFAULT_THIN_EPS,
        help="Relative width under which an equation counts as thin (default: 1e-10)",
    )
    parser.add_argument("--sweeps", type=int, default=DEFAULT_SWEEPS, help="Maximum LIN sweeps (default: 3)")
    parser.add_argument("--workers", type=int, default=1, help="Threads for the per-variable solves (default: 1)")
    parser.add_argument("--show-program", action="store_true", help="Print the relaxed program to stderr")
    parser.add_argument("--verbose", action="store_true", help="Log solver decisions at DEBUG level")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SOLVED if exc.code == 0 else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    if args.digits < 1:
        print("unilin: --digits must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if args.sweeps < 1:
        print("unilin: --sweeps must be at least 1", file=sys.stderr)
        return EXIT_USAGE

    options = SolverOptions(
        mode=args.solver,
        order=tuple(name.strip() for name in args.order.split(",") if name.strip()) if args.order else None,
        thin_eps=args.thin_eps,
        sweeps=args.sweeps,
        workers=args.workers,
    )
    try:
        model = parse(args.model.read_text(encoding="utf-8"))
        if args.show_program:
            print(relax(evaluate_ranges(model)).describe(), file=sys.stderr)
        box, report = solve(model, options)
    except (UnilinError, OSError, ValueError) as exc:
        print(f"unilin: {args.model}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.output == "json":
        sys.stdout.write(render_json(box, report))
    else:
        sys.stdout.write(render_text(box, args.digits))
    if box.infeasible:
        logger.info("infeasible at stage %s", report.infeasible_stage)
        return EXIT_INFEASIBLE
    return EXIT_SOLVED


if __name__ == "__main__":
    raise SystemExit(main())
