"""
brute-force 기준 구현

빠른 경로들의 정답 기준이다. 일부러 가지치기 없이 단순하게 유지한다.
"""

import itertools
from typing import Dict, Iterable, List, Optional, Sequence

from ..utils.logger import get_logger
from .config import settings
from .errors import check_budget
from .graph import Graph, LabeledGraph, connected_components
from .homcount import HomTable
from .partition import SetFunction

logger = get_logger("oracle")

BRUTE_PAR_MAX_GROUND = 8
BRUTE_ISO_MAX_VERTICES = 8


def _limit(budget: Optional[int]) -> int:
    return settings.budget if budget is None else budget


def _is_hom(g: Graph, h: Graph, image: Sequence[int]) -> bool:
    adjacency = h.adjacency
    return all(adjacency[image[u]] >> image[v] & 1 for u, v in g.edges)


def brute_hom(g: Graph, h: Graph, budget: Optional[int] = None) -> int:
    """모든 사상 |V(h)|^|V(g)| 을 열거"""
    check_budget("brute-force homomorphism enumeration", h.n**g.n, _limit(budget))
    return sum(1 for image in itertools.product(range(h.n), repeat=g.n) if _is_hom(g, h, image))


def brute_hom_labeled(g: Graph, h: LabeledGraph, budget: Optional[int] = None) -> HomTable:
    """모든 부분 라벨링 chi 에 대해 chi 와 consistent 한 G[X] -> h 준동형 사상 개수"""
    k = h.k
    table_size = (k + 1) ** g.n
    check_budget("brute-force labeled table", table_size * (h.n + 1) ** g.n, _limit(budget))
    table = HomTable.zeros(g, k)
    # 정점마다 (정의역 밖) 또는 h 의 정점 하나로 보내고, 라벨링은 상으로 결정된다
    choices = [None] + list(range(h.n))
    powers = [(k + 1) ** v for v in range(g.n)]
    adjacency = h.graph.adjacency
    for images in itertools.product(choices, repeat=g.n):
        ok = True
        for u, v in g.edges:
            a, b = images[u], images[v]
            if a is not None and b is not None and not adjacency[a] >> b & 1:
                ok = False
                break
        if ok:
            code = sum(h.labels[x] * powers[v] for v, x in enumerate(images) if x is not None)
            table.entries[code] += 1
    return table


def brute_hom_consistent_with_split(
    g: Graph,
    h: Graph,
    a_side: Iterable[int],
    a_vertices: Iterable[int],
    budget: Optional[int] = None,
) -> int:
    """H_A (= a_side) 의 역상이 정확히 a_vertices 인 준동형 사상 개수"""
    check_budget("brute-force split enumeration", h.n**g.n, _limit(budget))
    hub = frozenset(a_side)
    wanted = frozenset(a_vertices)
    total = 0
    for image in itertools.product(range(h.n), repeat=g.n):
        if frozenset(v for v in range(g.n) if image[v] in hub) != wanted:
            continue
        if _is_hom(g, h, image):
            total += 1
    return total


def brute_par(f: SetFunction, n: int, budget: Optional[int] = None) -> int:
    """n^m 개의 원소 -> 블록 배정을 열거"""
    check_budget("brute-force partition ground set", f.m, BRUTE_PAR_MAX_GROUND)
    check_budget("brute-force partition enumeration", n**f.m, _limit(budget))
    total = 0
    for blocks in itertools.product(range(n), repeat=f.m):
        masks = [0] * n
        for element, block in enumerate(blocks):
            masks[block] |= 1 << element
        product = 1
        for mask in masks:
            product *= f.values[mask]
            if not product:
                break
        total += product
    return total


def brute_iso(a: Graph, b: Graph) -> bool:
    """모든 순열 검사"""
    if a.n != b.n or a.num_edges != b.num_edges:
        return False
    check_budget("brute-force isomorphism vertices", a.n, BRUTE_ISO_MAX_VERTICES)
    for perm in itertools.permutations(range(a.n)):
        if all(b.has_edge(perm[u], perm[v]) for u, v in a.edges):
            return True
    return False


def brute_labeled_iso(a: LabeledGraph, b: LabeledGraph) -> bool:
    if a.n != b.n or a.graph.num_edges != b.graph.num_edges:
        return False
    if sorted(a.labels) != sorted(b.labels):
        return False
    check_budget("brute-force isomorphism vertices", a.n, BRUTE_ISO_MAX_VERTICES)
    for perm in itertools.permutations(range(a.n)):
        if any(a.labels[v] != b.labels[perm[v]] for v in range(a.n)):
            continue
        if all(b.graph.has_edge(perm[u], perm[v]) for u, v in a.graph.edges):
            return True
    return False


def _extension_order(g: Graph, component: Iterable[int]) -> List[int]:
    """첫 정점 이후 모든 정점이 앞선 이웃을 갖는 BFS 순서"""
    vertices = sorted(component)
    order = [vertices[0]]
    seen = {vertices[0]}
    for v in order:
        for u in g.neighbors(v):
            if u not in seen:
                seen.add(u)
                order.append(u)
    return order


def _count_component(g: Graph, h: Graph, component: Iterable[int]) -> int:
    order = _extension_order(g, component)
    position = {v: i for i, v in enumerate(order)}
    anchors = [[u for u in g.neighbors(v) if position[u] < position[v]] for v in order]
    image: Dict[int, int] = {}

    def extend(index: int) -> int:
        if index == len(order):
            return 1
        v = order[index]
        earlier = anchors[index]
        candidates: Iterable[int] = h.neighbors(image[earlier[0]]) if earlier else range(h.n)
        count = 0
        for x in candidates:
            if all(h.has_edge(image[u], x) for u in earlier[1:]):
                image[v] = x
                count += extend(index + 1)
        image.pop(v, None)
        return count

    return extend(0)


def count_hom_bounded_degree(g: Graph, h: Graph, budget: Optional[int] = None) -> int:
    """첫 정점은 |V(h)| 가지, 이후는 앞선 이웃 상의 이웃만 시도; 성분별 곱"""
    check_budget(
        "bounded-degree enumeration",
        h.n * max(h.max_degree(), 1) ** max(g.n - 1, 0),
        _limit(budget),
    )
    total = 1
    for component in connected_components(g):
        total *= _count_component(g, h, component)
        if not total:
            break
    logger.debug(f"bounded-degree count: n={g.n}, max degree {h.max_degree()} -> {total}")
    return total
