"""homcount 명령줄 구성"""

import argparse
from typing import Optional, Sequence

from ..core.config import settings
from ..core.verify import SUITES

METHODS = ("auto", "bruteforce", "expression", "subdivided", "kneser", "bounded-degree")
GEN_FAMILIES = ("clique", "path", "cycle", "hypercube", "kneser", "subdivided-clique")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=positive_int, default=None, help="work budget")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=None, help="console log level")
    common.add_argument("--debug", action="store_true", help="log error details and tracebacks")
    common.add_argument("-o", "--output", default=None, help="write the result to this file")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Exact graph homomorphism counting",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.version}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    count = commands.add_parser("count", parents=[common], help="count homomorphisms G -> H")
    count.add_argument("-G", dest="graph_path", required=True, help="source graph JSON")
    count.add_argument("-H", dest="target_path", default=None, help="target graph JSON")
    count.add_argument(
        "--expr", dest="expr_path", default=None, help="extended expression JSON for H"
    )
    count.add_argument(
        "--kneser", nargs=2, type=positive_int, metavar=("N", "K"), default=None,
        help="count into the Kneser graph KG(N, K)",
    )
    count.add_argument(
        "--subdivided", nargs=2, metavar=("N", "UFILE"), default=None,
        help="count into K_N subdivided by the graph in UFILE",
    )
    count.add_argument("--method", choices=METHODS, default="auto")

    synth = commands.add_parser(
        "synth", parents=[common], help="synthesize an extended k-expression"
    )
    synth.add_argument("-G", dest="graph_path", required=True, help="graph JSON")
    synth.add_argument("-k", type=positive_int, required=True, help="label alphabet size")

    evaluate = commands.add_parser("eval", parents=[common], help="evaluate an expression")
    evaluate.add_argument("inputs", nargs=1, metavar="EXPR", help="expression JSON")

    gen = commands.add_parser("gen", parents=[common], help="generate a graph family")
    gen.add_argument("family", choices=GEN_FAMILIES)
    gen.add_argument("params", nargs="+", help="family parameters")
    gen.add_argument(
        "--expression",
        action="store_true",
        help="emit the hypercube expression instead of the graph",
    )

    iso = commands.add_parser("iso", parents=[common], help="labeled isomorphism test")
    iso.add_argument("inputs", nargs=2, metavar="GRAPH", help="two graph JSON files")
    iso.add_argument("--gadget", action="store_true", help="also emit the gadget graph pair")

    verify = commands.add_parser("verify", parents=[common], help="run oracle-equivalence suites")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--cases", type=positive_int, default=None, help="cases per suite")
    verify.add_argument(
        "--suite", dest="suites", action="append", choices=sorted(SUITES), default=None
    )
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)
