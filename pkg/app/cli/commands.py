"""
서브커맨드 핸들러

모든 핸들러는 RunConfig 하나를 받아 종료 코드를 반환한다.
결과(개수, JSON)는 표준 출력 또는 -o 파일로, 로그는 표준 에러로 간다.
"""

from pathlib import Path
from typing import Callable, Dict, List, Optional

from ..core.errors import InvalidInputError
from ..core.expr import ExtExpr, eval_classic, eval_ext, hypercube_expr
from ..core.graph import (
    Graph,
    LabeledGraph,
    gen_clique,
    gen_cycle,
    gen_hypercube,
    gen_kneser,
    gen_path,
    subdivide_clique,
)
from ..core.homcount import count_hom_via_expr, expression_hom_counter
from ..core.oracle import brute_hom, count_hom_bounded_degree
from ..core.special import (
    KneserInstance,
    SubdividedInstance,
    count_hom_kneser,
    count_hom_subdivided,
)
from ..core.synthesis import gadget_reduce, labeled_iso, synthesize
from ..core.verify import run_verification
from ..models.schemas import (
    GadgetDocument,
    GraphDocument,
    RunConfig,
    expr_to_json,
    graph_to_json,
    parse_expression,
    parse_graph,
)
from ..utils.logger import get_logger

logger = get_logger("commands")

EXIT_OK = 0
EXIT_NEGATIVE = 1


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"Cannot read {path}: {e.strerror}", details={"path": path}) from e


def load_graph(path: str) -> Graph:
    return parse_graph(read_text(path)).to_graph()


def load_labeled_graph(path: str) -> LabeledGraph:
    """라벨이 없으면 모든 정점 라벨 1"""
    document = parse_graph(read_text(path))
    if document.labels is None:
        g = document.to_graph()
        return LabeledGraph(g, 1, (1,) * g.n)
    return document.to_labeled_graph()


def load_ext_expr(path: str) -> ExtExpr:
    return parse_expression(read_text(path)).to_ext_expr()


def emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote {output}")
    else:
        print(text)


def _resolve_method(config: RunConfig) -> str:
    if config.method != "auto":
        return config.method
    if config.expr_path:
        return "expression"
    if config.kneser:
        return "kneser"
    if config.subdivided:
        return "subdivided"
    return "bruteforce"


def _require(value: object, flag: str, method: str) -> None:
    if not value:
        raise InvalidInputError(f"--method {method} requires {flag}")


def cmd_count(config: RunConfig) -> int:
    g = load_graph(config.graph_path or "")
    method = _resolve_method(config)
    logger.info(f"Counting homomorphisms from a {g.n}-vertex graph (method={method})")

    if method == "expression":
        _require(config.expr_path, "--expr", method)
        if config.target_path:
            logger.warning("-H is ignored when counting via --expr")
        total = count_hom_via_expr(g, load_ext_expr(config.expr_path or ""))
    elif method == "kneser":
        _require(config.kneser, "--kneser N K", method)
        n, k = config.kneser or (0, 0)
        total = count_hom_kneser(KneserInstance(g, n, k))
    elif method == "subdivided":
        _require(config.subdivided, "--subdivided N UFILE", method)
        n, u_path = config.subdivided or (0, "")
        u = load_graph(u_path)
        if config.expr_path:
            # U 가 표현식으로 주어지면 성분별 hom(C, U) 도 DP 로
            counter = expression_hom_counter(load_ext_expr(config.expr_path))
            inst = SubdividedInstance(g, n, u, counter)
        else:
            inst = SubdividedInstance(g, n, u)
        total = count_hom_subdivided(inst)
    elif method == "bounded-degree":
        _require(config.target_path, "-H", method)
        total = count_hom_bounded_degree(g, load_graph(config.target_path or ""))
    else:
        _require(config.target_path, "-H", method)
        total = brute_hom(g, load_graph(config.target_path or ""))

    emit(str(total), config.output)
    return EXIT_OK


def cmd_synth(config: RunConfig) -> int:
    g = load_graph(config.graph_path or "")
    k = config.k or 1
    expr = synthesize(g, k)
    if expr is None:
        logger.error(f"No extended {k}-expression exists for this graph")
        return EXIT_NEGATIVE
    emit(expr_to_json(expr), config.output)
    return EXIT_OK


def cmd_eval(config: RunConfig) -> int:
    document = parse_expression(read_text(config.inputs[0]))
    expr = document.to_expr()
    result = eval_ext(expr) if isinstance(expr, ExtExpr) else eval_classic(expr)
    emit(graph_to_json(result), config.output)
    return EXIT_OK


def _int_params(params: List[str], count: int, family: str) -> List[int]:
    if len(params) != count:
        raise InvalidInputError(f"gen {family} takes {count} parameter(s), got {len(params)}")
    try:
        return [int(p) for p in params]
    except ValueError:
        raise InvalidInputError(f"gen {family}: parameters must be integers: {params}") from None


def cmd_gen(config: RunConfig) -> int:
    family = config.family or ""
    params = config.params
    if family == "subdivided-clique":
        if len(params) != 2:
            raise InvalidInputError("gen subdivided-clique takes N UFILE")
        (n,) = _int_params(params[:1], 1, family)
        emit(graph_to_json(subdivide_clique(n, load_graph(params[1])).graph), config.output)
        return EXIT_OK
    if family == "kneser":
        n, k = _int_params(params, 2, family)
        emit(graph_to_json(gen_kneser(n, k)), config.output)
        return EXIT_OK

    (n,) = _int_params(params, 1, family)
    if config.expression:
        if family != "hypercube":
            raise InvalidInputError("--expression is only available for gen hypercube")
        emit(expr_to_json(hypercube_expr(n)), config.output)
        return EXIT_OK
    generators: Dict[str, Callable[[int], Graph]] = {
        "clique": gen_clique,
        "path": gen_path,
        "cycle": gen_cycle,
        "hypercube": gen_hypercube,
    }
    emit(graph_to_json(generators[family](n)), config.output)
    return EXIT_OK


def cmd_iso(config: RunConfig) -> int:
    a = load_labeled_graph(config.inputs[0])
    b = load_labeled_graph(config.inputs[1])
    verdict = "iso" if labeled_iso(a, b) is not None else "non-iso"
    print(verdict)
    if config.gadget:
        if a.k != b.k:
            k = max(a.k, b.k)
            a = LabeledGraph(a.graph, k, a.labels)
            b = LabeledGraph(b.graph, k, b.labels)
        inst = gadget_reduce(a, b)
        document = GadgetDocument(
            g_prime=GraphDocument.from_graph(inst.g_prime),
            h_prime=GraphDocument.from_graph(inst.h_prime),
            q=inst.q,
            n=inst.n,
        )
        emit(document.model_dump_json(exclude_none=True), config.output)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    report = run_verification(seed=config.seed, cases=config.cases, suites=config.suites)
    emit(report.model_dump_json(indent=2), config.output)
    if not report.ok:
        logger.error(f"Verification found mismatches (seed={report.seed})")
        return EXIT_NEGATIVE
    return EXIT_OK


HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    "count": cmd_count,
    "synth": cmd_synth,
    "eval": cmd_eval,
    "gen": cmd_gen,
    "iso": cmd_iso,
    "verify": cmd_verify,
}
