"""
무작위 오라클 동치 검사 (cmd_verify)

스위트마다 시드 고정 random.Random 으로 작은 사례를 만들고,
빠른 경로와 brute-force 결과가 정확히 같은지 센다.
"""

import random
import time
from typing import Callable, Dict, List, Optional, Tuple

from ..models.schemas import SuiteResult, VerifyReport
from ..utils.logger import get_logger, log_function_call
from .config import settings
from .expr import (
    classic_to_ext,
    eval_classic,
    eval_ext,
    is_safe_classic,
    random_classic_expr,
    random_ext_expr,
)
from .graph import (
    LabeledGraph,
    gen_clique,
    gen_kneser,
    gen_path,
    permute,
    random_connected_graph,
    random_graph,
    subdivide_clique,
)
from .homcount import count_hom_via_expr, table_for_expr
from .oracle import brute_hom, brute_hom_labeled, brute_labeled_iso, brute_par
from .partition import SetFunction, count_colorings, count_colorings_subset_dp, par
from .special import KneserInstance, SubdividedInstance, count_hom_kneser, count_hom_subdivided
from .synthesis import gadget_reduce, graph_iso, labeled_iso, synthesize

logger = get_logger("verify")

# 한 사례: rng -> 불일치면 설명 문자열, 아니면 None
CaseCheck = Callable[[random.Random], Optional[str]]


def _random_labeled(rng: random.Random, n: int, k: int) -> LabeledGraph:
    return LabeledGraph(random_graph(rng, n), k, tuple(rng.randint(1, k) for _ in range(n)))


def _check_expr_dp(rng: random.Random) -> Optional[str]:
    k = rng.randint(1, 3)
    expr = random_ext_expr(rng, k, max_vertices=8)
    g = random_graph(rng, rng.randint(1, 5))
    h = eval_ext(expr)
    fast = count_hom_via_expr(g, expr)
    slow = brute_hom(g, h.graph)
    if fast != slow:
        return f"expr_dp: {fast} != {slow} for expr {expr}"
    return None


def _check_lifts(rng: random.Random) -> Optional[str]:
    k = rng.randint(1, 2)
    expr = random_ext_expr(rng, k, max_vertices=5, max_depth=4)
    g = random_graph(rng, rng.randint(1, 3))
    if table_for_expr(g, expr) != brute_hom_labeled(g, eval_ext(expr)):
        return f"lifts: table mismatch for expr {expr}"
    return None


def _check_partition(rng: random.Random) -> Optional[str]:
    m = rng.randint(0, 6)
    n = rng.randint(1, 4)
    f = SetFunction(m, tuple(rng.randint(0, 3) for _ in range(1 << m)))
    fast = par(f, n)
    slow = brute_par(f, n)
    if fast != slow:
        return f"partition: par={fast} brute={slow} (m={m}, n={n})"
    g = random_graph(rng, rng.randint(1, 5))
    colors = rng.randint(1, 4)
    counts = {
        count_colorings(g, colors),
        count_colorings_subset_dp(g, colors),
        brute_hom(g, gen_clique(colors)),
    }
    if len(counts) != 1:
        return f"partition: coloring counts disagree {sorted(counts)}"
    return None


def _check_subdivided(rng: random.Random) -> Optional[str]:
    n = rng.choice((2, 3))
    u = rng.choice((gen_clique(1), gen_clique(2), gen_path(3)))
    g = random_connected_graph(rng, rng.randint(1, 4))
    fast = count_hom_subdivided(SubdividedInstance(g, n, u))
    slow = brute_hom(g, subdivide_clique(n, u).graph)
    if fast != slow:
        return f"subdivided: {fast} != {slow} (n={n}, |U|={u.n}, g={g.edge_list()})"
    return None


def _check_kneser(rng: random.Random) -> Optional[str]:
    n, k = rng.choice(((4, 2), (5, 2), (4, 1), (3, 1)))
    g = random_graph(rng, rng.randint(1, 4))
    fast = count_hom_kneser(KneserInstance(g, n, k))
    slow = brute_hom(g, gen_kneser(n, k))
    if fast != slow:
        return f"kneser: {fast} != {slow} (n={n}, k={k}, g={g.edge_list()})"
    return None


def _check_gadget(rng: random.Random) -> Optional[str]:
    n = rng.randint(1, 4)
    k = rng.randint(1, 2)
    a = _random_labeled(rng, n, k)
    if rng.random() < 0.5:
        perm = list(range(n))
        rng.shuffle(perm)
        relabeled = [0] * n
        for v, image in enumerate(perm):
            relabeled[image] = a.labels[v]
        b = LabeledGraph(permute(a.graph, perm), k, tuple(relabeled))
    else:
        b = _random_labeled(rng, n, k)
    expected = brute_labeled_iso(a, b)
    if (labeled_iso(a, b) is not None) != expected:
        return f"gadget: labeled_iso disagrees with brute force on {a} / {b}"
    inst = gadget_reduce(a, b)
    if (graph_iso(inst.g_prime, inst.h_prime) is not None) != expected:
        return f"gadget: reduction disagrees (expected iso={expected})"
    return None


def _check_classic_to_ext(rng: random.Random) -> Optional[str]:
    k = rng.randint(1, 3)
    classic = random_classic_expr(rng, k, max_vertices=5)
    if not is_safe_classic(classic):
        return None
    expected = eval_classic(classic)
    converted = eval_ext(classic_to_ext(classic))
    if converted != expected:
        return f"classic_to_ext: evaluation changed for {classic}"
    return None


def _check_synthesis(rng: random.Random) -> Optional[str]:
    # 확장 2-expression 에서 나온 그래프는 반드시 합성되어야 한다
    expr = random_ext_expr(rng, 2, max_vertices=5, max_depth=4, max_copies=1)
    g = eval_ext(expr).graph
    found = synthesize(g, 2)
    if found is None:
        return f"synthesis: no expression found for {g.edge_list()} (n={g.n})"
    if graph_iso(eval_ext(found).graph, g) is None:
        return f"synthesis: result does not evaluate to {g.edge_list()}"
    return None


SUITES: Dict[str, CaseCheck] = {
    "expr_dp": _check_expr_dp,
    "lifts": _check_lifts,
    "partition": _check_partition,
    "subdivided": _check_subdivided,
    "kneser": _check_kneser,
    "gadget": _check_gadget,
    "classic_to_ext": _check_classic_to_ext,
    "synthesis": _check_synthesis,
}


def run_suite(name: str, check: CaseCheck, seed: int, cases: int) -> Tuple[SuiteResult, List[str]]:
    rng = random.Random(f"{seed}:{name}")
    start = time.perf_counter()
    failures: List[str] = []
    for _ in range(cases):
        message = check(rng)
        if message is not None:
            logger.warning(message)
            failures.append(message)
    elapsed = time.perf_counter() - start
    logger.info(f"Suite {name}: {cases} cases, {len(failures)} mismatches ({elapsed:.2f}s)")
    return (
        SuiteResult(name=name, cases=cases, mismatches=len(failures), seconds=round(elapsed, 4)),
        failures,
    )


@log_function_call(logger)
def run_verification(
    seed: int = 0, cases: Optional[int] = None, suites: Optional[List[str]] = None
) -> VerifyReport:
    """선택한 스위트를 순서대로 돌리고 보고서를 만든다"""
    count = settings.verify_cases if cases is None else cases
    selected = list(SUITES) if suites is None else suites
    results: List[SuiteResult] = []
    failures: List[str] = []
    for name in selected:
        result, messages = run_suite(name, SUITES[name], seed, count)
        results.append(result)
        failures.extend(messages)
    return VerifyReport(
        seed=seed,
        suites=results,
        ok=not failures,
        failures=failures[:20],
    )
