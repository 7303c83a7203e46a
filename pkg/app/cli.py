"""grcat: command-line access to the categorical group computations.

Exit status is 0 on success, 1 for invalid input or an internal
inconsistency, and 2 when the answer to the question asked is "no".
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import BaseModel

from app import services
from app.config import settings
from app.errors import InvalidInput, MismatchFound, NegativeAnswer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NEGATIVE = 2


def _orders(text: str) -> List[int]:
    try:
        orders = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated orders, got {text!r}")
    if any(d < 1 for d in orders):
        raise argparse.ArgumentTypeError("orders must be positive")
    return orders


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--cap", type=int, metavar="N", default=None,
                        help=f"group order cap (default {settings.GROUP_ORDER_CAP})")
    common.add_argument("--ext-cap", type=int, metavar="N", default=None,
                        help=f"extension order cap (default {settings.EXTENSION_ORDER_CAP})")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="grcat", description="Finite categorical groups and their invariants.")
    commands = parser.add_subparsers(dest="command", required=True)

    group = commands.add_parser("group", help="finite groups")
    group_commands = group.add_subparsers(dest="action", required=True)
    check = group_commands.add_parser("check", parents=[common], help="validate a group file")
    check.add_argument("file", type=Path)
    check.set_defaults(run=lambda a: services.check_group(a.file))
    aut = group_commands.add_parser("aut", parents=[common], help="Aut, In, Out and the centre")
    aut.add_argument("file", type=Path)
    aut.set_defaults(run=lambda a: services.group_automorphisms(a.file, a.cap))

    cohomology = commands.add_parser("cohomology", parents=[common], help="Hⁿ(Π, A) of a module file")
    cohomology.add_argument("file", type=Path)
    cohomology.add_argument("--degree", type=int, required=True, choices=range(0, 4))
    cohomology.add_argument("--emit", type=Path, metavar="DIR", help="write representative cocycles here")
    cohomology.set_defaults(run=lambda a: services.cohomology(a.file, a.degree, a.cap, a.emit))

    functor = commands.add_parser("functor", help="Gr-functors between skeletal types")
    functor_commands = functor.add_subparsers(dest="action", required=True)
    obstruction = functor_commands.add_parser("obstruction", parents=[common], help="obstruction cocycle and class")
    obstruction.add_argument("file", type=Path)
    obstruction.set_defaults(run=lambda a: services.functor_obstruction(a.file, a.cap))
    classify = functor_commands.add_parser("classify", parents=[common], help="functors up to homotopy")
    classify.add_argument("file", type=Path)
    classify.set_defaults(run=lambda a: services.functor_classify(a.file, a.cap))

    kernel = commands.add_parser("kernel", help="abstract kernels (Π, G, ψ)")
    kernel_commands = kernel.add_subparsers(dest="action", required=True)
    kernel_obstruction = kernel_commands.add_parser("obstruction", parents=[common],
                                                    help="obstruction to extensions of the kernel")
    kernel_obstruction.add_argument("file", type=Path)
    kernel_obstruction.add_argument("--no-compare", action="store_true",
                                    help="skip the comparison with the reduction of Aut_G")
    kernel_obstruction.set_defaults(
        run=lambda a: services.kernel_obstruction_file(a.file, a.cap, compare=not a.no_compare))

    ext = commands.add_parser("ext", help="group extensions")
    ext_commands = ext.add_subparsers(dest="action", required=True)
    enumerate_ = ext_commands.add_parser("enumerate", parents=[common], help="one extension per congruence class")
    enumerate_.add_argument("file", type=Path)
    enumerate_.add_argument("--emit", type=Path, metavar="DIR", help="write extension tables here")
    enumerate_.set_defaults(run=lambda a: services.extensions(a.file, a.cap, a.ext_cap, a.emit))

    braided = commands.add_parser("braided", help="braided types and abelian cohomology")
    braided_commands = braided.add_subparsers(dest="action", required=True)
    emcheck = braided_commands.add_parser("emcheck", parents=[common], help="trace map H³_ab(M, N) -> Quad(M, N)")
    emcheck.add_argument("--m", type=_orders, required=True, metavar="D1,D2,..")
    emcheck.add_argument("--n", type=_orders, required=True, metavar="E1,E2,..")
    emcheck.set_defaults(run=lambda a: services.em_report(a.m, a.n, a.cap))

    strictify = commands.add_parser("strictify", parents=[common], help="strict model from a realization")
    strictify.add_argument("file", type=Path)
    strictify.add_argument("--realization", type=Path, required=True, metavar="KERNELFILE")
    strictify.set_defaults(run=lambda a: services.strictify_files(a.file, a.realization, a.cap))
    return parser


def _format(value) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(", ", ": "))


def render(report: BaseModel) -> str:
    """Plain-text report, one field per line in declaration order."""
    lines = []
    for name, value in report.model_dump().items():
        if value is None:
            continue
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{name}:")
            lines.extend(f"  - {_format(item)}" for item in value)
        elif isinstance(value, (list, dict)):
            lines.append(f"{name}: {_format(value)}")
        else:
            lines.append(f"{name}: {value}")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        report = args.run(args)
    except InvalidInput as exc:
        logger.error("invalid input: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NegativeAnswer as exc:
        logger.error("negative answer: %s", exc)
        print(f"no: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except MismatchFound as exc:
        logger.error("internal consistency check failed: %s", exc)
        print(f"mismatch: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        print(render(report))
    return EXIT_NEGATIVE if getattr(report, "outcome", "positive") == "negative" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
