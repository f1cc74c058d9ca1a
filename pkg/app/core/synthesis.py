"""
확장 k-expression 합성

- labeled_iso: 색 정제 + 백트래킹 라벨 그래프 동형 판정
- gadget_reduce: 라벨 그래프 동형을 일반 그래프 동형으로 바꾸는 가젯 구성
- synthesize: (k+1)^n 크기 테이블 N 을 지지 집합 크기 순으로 채우는 DP
    Case 2 (connect) -> Case 1 (beta) 순으로 시도하고, 크기마다 relabel 폐포를 구한다.
"""

import itertools
import time
from collections import Counter, deque
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..utils.logger import get_logger, log_function_call
from .config import settings
from .errors import InvalidInputError, check_budget
from .expr import (
    Beta,
    BetaTuple,
    Connect,
    ExtExpr,
    ExtNode,
    Relabel,
    Vertex,
    apply_beta,
    symmetric_tuple_classes,
)
from .graph import Edge, Graph, LabeledGraph, PartialLabeling, mask_to_vertices

logger = get_logger("synthesis")

Bijection = Tuple[int, ...]


# ---------------------------------------------------------------------------
# 라벨 그래프 동형
# ---------------------------------------------------------------------------


def _refine_colors(graphs: Sequence[LabeledGraph]) -> List[List[int]]:
    """여러 그래프에 공통 팔레트로 색 정제 (라벨, 차수, 이웃 라벨 multiset 에서 시작)"""
    signatures: List[List[tuple]] = []
    for lg in graphs:
        graph = lg.graph
        signatures.append(
            [
                (
                    lg.labels[v],
                    graph.degree(v),
                    tuple(sorted(lg.labels[u] for u in graph.neighbors(v))),
                )
                for v in graph.vertices
            ]
        )
    palette = {sig: i for i, sig in enumerate(sorted({s for sigs in signatures for s in sigs}))}
    colors = [[palette[s] for s in sigs] for sigs in signatures]
    classes = len(palette)

    while True:
        refined: List[List[tuple]] = []
        for lg, color in zip(graphs, colors):
            refined.append(
                [
                    (color[v], tuple(sorted(color[u] for u in lg.graph.neighbors(v))))
                    for v in lg.graph.vertices
                ]
            )
        palette = {sig: i for i, sig in enumerate(sorted({s for sigs in refined for s in sigs}))}
        new_colors = [[palette[s] for s in sigs] for sigs in refined]
        if len(palette) == classes:
            return new_colors
        classes = len(palette)
        colors = new_colors


def _search_order(lg: LabeledGraph, colors: Sequence[int]) -> List[int]:
    """작은 색 클래스, 이미 놓인 이웃이 많은 정점 우선"""
    class_size = Counter(colors)
    placed = 0
    order: List[int] = []
    remaining = set(lg.graph.vertices)
    adjacency = lg.graph.adjacency
    while remaining:
        v = min(
            remaining,
            key=lambda x: (class_size[colors[x]], -bin(adjacency[x] & placed).count("1"), x),
        )
        order.append(v)
        remaining.remove(v)
        placed |= 1 << v
    return order


def labeled_iso(a: LabeledGraph, b: LabeledGraph) -> Optional[Bijection]:
    """라벨과 간선을 보존하는 전단사 (a 정점 -> b 정점), 없으면 None"""
    if a.n != b.n or a.graph.num_edges != b.graph.num_edges:
        return None
    if sorted(a.labels) != sorted(b.labels):
        return None
    if a.graph.degree_sequence() != b.graph.degree_sequence():
        return None
    if a.n == 0:
        return ()

    colors_a, colors_b = _refine_colors([a, b])
    if Counter(colors_a) != Counter(colors_b):
        return None

    by_color: Dict[int, List[int]] = {}
    for w, color in enumerate(colors_b):
        by_color.setdefault(color, []).append(w)

    order = _search_order(a, colors_a)
    adj_a = a.graph.adjacency
    adj_b = b.graph.adjacency
    mapping = [-1] * a.n
    used = [False] * b.n

    def image_of(mask: int) -> int:
        image = 0
        while mask:
            low = mask & -mask
            image |= 1 << mapping[low.bit_length() - 1]
            mask ^= low
        return image

    def extend(index: int, placed_a: int, placed_b: int) -> bool:
        if index == len(order):
            return True
        v = order[index]
        wanted = image_of(adj_a[v] & placed_a)
        for w in by_color[colors_a[v]]:
            if used[w] or adj_b[w] & placed_b != wanted:
                continue
            mapping[v] = w
            used[w] = True
            if extend(index + 1, placed_a | 1 << v, placed_b | 1 << w):
                return True
            used[w] = False
            mapping[v] = -1
        return False

    if extend(0, 0, 0):
        return tuple(mapping)
    return None


def graph_iso(a: Graph, b: Graph) -> Optional[Bijection]:
    """라벨 없는 그래프 동형"""
    return labeled_iso(LabeledGraph(a, 1, (1,) * a.n), LabeledGraph(b, 1, (1,) * b.n))


# ---------------------------------------------------------------------------
# 가젯 축소
# ---------------------------------------------------------------------------

# D 의 정점: 0 = z, 1..5 = x1..x5 (x1 이 다음 블록의 z)
GADGET_D_EDGES: Tuple[Edge, ...] = (
    (0, 3),
    (3, 2),
    (2, 1),
    (1, 0),
    (0, 4),
    (4, 5),
    (5, 1),
    (0, 2),
    (0, 5),
    (3, 4),
)


@dataclass(frozen=True)
class GadgetInstance:
    g_prime: Graph
    h_prime: Graph
    q: int
    n: int


@dataclass(frozen=True)
class GadgetLayout:
    """가젯 그래프의 정점 id 배치"""

    graph: Graph
    inputs: Tuple[int, ...]
    chain: Tuple[int, ...]
    junctions: Tuple[int, ...]
    cliques: Tuple[Tuple[int, ...], ...]
    apexes: Tuple[int, ...]


def gadget_graph(lg: LabeledGraph, q: int) -> GadgetLayout:
    """입력 그래프 + D 의 q+1 연쇄 (접합점은 K_{n+3}) + apex a_1..a_q"""
    if q < lg.k:
        raise InvalidInputError(f"Chain length q={q} must be at least k={lg.k}")
    n = lg.n
    edges: List[Edge] = list(lg.graph.edges)
    next_id = n
    head = next_id
    next_id += 1

    block_vertices: List[Tuple[int, ...]] = []
    z = head
    for _ in range(q + 1):
        locals_ = (z,) + tuple(range(next_id, next_id + 5))
        next_id += 5
        edges.extend((locals_[a], locals_[b]) for a, b in GADGET_D_EDGES)
        block_vertices.append(locals_)
        z = locals_[1]
    chain = (head,) + tuple(v for block in block_vertices for v in block[1:])

    # 접합점 z_i = 블록 i-1 의 x1 = 블록 i 의 z
    junctions = tuple(block_vertices[i][1] for i in range(q))
    cliques: List[Tuple[int, ...]] = []
    for i, junction in enumerate(junctions):
        extra = tuple(range(next_id, next_id + n + 2))
        next_id += n + 2
        members = (junction,) + extra
        edges.extend(itertools.combinations(members, 2))
        next_block = block_vertices[i + 1]
        for c in extra:
            edges.extend((c, x) for x in next_block[1:])
        cliques.append(extra)

    apexes = tuple(range(next_id, next_id + q))
    next_id += q
    for junction, apex in zip(junctions, apexes):
        edges.append((junction, apex))
    for v, label in enumerate(lg.labels):
        edges.append((v, apexes[label - 1]))

    return GadgetLayout(
        graph=Graph(next_id, edges),
        inputs=tuple(range(n)),
        chain=chain,
        junctions=junctions,
        cliques=tuple(cliques),
        apexes=apexes,
    )


def gadget_reduce(a: LabeledGraph, b: LabeledGraph) -> GadgetInstance:
    """G' ~= H' iff a, b 가 라벨 그래프로 동형 (q = k)"""
    if a.n != b.n:
        raise InvalidInputError(f"Vertex counts differ: {a.n} vs {b.n}")
    if a.k != b.k:
        raise InvalidInputError(f"Label alphabets differ: {a.k} vs {b.k}")
    q = a.k
    g_prime = gadget_graph(a, q).graph
    h_prime = gadget_graph(b, q).graph
    logger.debug(f"Gadget reduction: n={a.n}, q={q}, |V(G')|={g_prime.n}")
    return GadgetInstance(g_prime=g_prime, h_prime=h_prime, q=q, n=a.n)


# ---------------------------------------------------------------------------
# 합성 DP
# ---------------------------------------------------------------------------


class SynthTable:
    """부분 라벨링 코드 -> 표현식 (None 은 "없음", 키 부재는 "미정")"""

    def __init__(self, g: Graph, k: int):
        self.g = g
        self.k = k
        self.entries: Dict[int, Optional[ExtNode]] = {}

    def status(self, labeling: PartialLabeling) -> str:
        code = labeling.code(self.k)
        if code not in self.entries:
            return "unknown"
        return "no" if self.entries[code] is None else "expression"

    def lookup(self, labeling: PartialLabeling) -> Optional[ExtNode]:
        return self.entries.get(labeling.code(self.k))

    def filled(self) -> int:
        return sum(1 for node in self.entries.values() if node is not None)

    def first_full(self) -> Optional[Tuple[PartialLabeling, ExtNode]]:
        """코드 오름차순으로 첫 번째 전체 라벨링과 그 표현식"""
        for values in itertools.product(range(1, self.k + 1), repeat=self.g.n):
            labeling = PartialLabeling(values[::-1])
            node = self.lookup(labeling)
            if node is not None:
                return labeling, node
        return None


class _Synthesizer:
    def __init__(self, g: Graph, k: int):
        self.g = g
        self.k = k
        self.table = SynthTable(g, k)
        self.powers = [(k + 1) ** v for v in range(g.n)]
        self.digits: List[Tuple[int, ...]] = [
            digits[::-1] for digits in itertools.product(range(k + 1), repeat=g.n)
        ]
        self.beta_enabled = k <= settings.synth_beta_max_k
        if not self.beta_enabled:
            logger.warning(
                f"Beta search disabled for k={k} (synth_beta_max_k={settings.synth_beta_max_k})"
            )

    def support(self, code: int) -> int:
        mask = 0
        for v, label in enumerate(self.digits[code]):
            if label:
                mask |= 1 << v
        return mask

    def restrict(self, code: int, mask: int) -> int:
        digits = self.digits[code]
        return sum(digits[v] * self.powers[v] for v in mask_to_vertices(mask))

    def labeled(self, code: int) -> LabeledGraph:
        vertices = mask_to_vertices(self.support(code))
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u, v in self.g.edges if u in index and v in index]
        digits = self.digits[code]
        return LabeledGraph(Graph(len(vertices), edges), self.k, tuple(digits[v] for v in vertices))

    def run(self) -> SynthTable:
        by_size: Dict[int, List[int]] = {}
        for code, digits in enumerate(self.digits):
            size = sum(1 for label in digits if label)
            if size:
                by_size.setdefault(size, []).append(code)

        for size in range(1, self.g.n + 1):
            start = time.perf_counter()
            codes = by_size.get(size, [])
            for code in codes:
                if size == 1:
                    label = max(self.digits[code])
                    self.table.entries[code] = Vertex(label)
                    continue
                node = self.try_connect(code)
                if node is None and self.beta_enabled:
                    node = self.try_beta(code)
                self.table.entries[code] = node
            self.relabel_closure(codes)
            filled = sum(1 for c in codes if self.table.entries[c] is not None)
            logger.debug(
                f"Synthesis size {size}: {filled}/{len(codes)} filled "
                f"({time.perf_counter() - start:.3f}s)"
            )
        return self.table

    # Case 2
    def try_connect(self, code: int) -> Optional[ExtNode]:
        support = self.support(code)
        lowest = support & -support
        rest = support ^ lowest
        digits = self.digits[code]
        candidates = sorted(lowest | sub for sub in _submasks(rest) if lowest | sub != support)
        for left_mask in candidates:
            right_mask = support ^ left_mask
            left = self.table.entries.get(self.restrict(code, left_mask))
            right = self.table.entries.get(self.restrict(code, right_mask))
            if left is None or right is None:
                continue
            with_edge = set()
            without_edge = set()
            for u in mask_to_vertices(left_mask):
                for v in mask_to_vertices(right_mask):
                    key = (digits[u], digits[v])
                    if self.g.has_edge(u, v):
                        with_edge.add(key)
                    else:
                        without_edge.add(key)
            if with_edge & without_edge:
                continue
            return Connect(frozenset(with_edge), left, right)
        return None

    # Case 1
    def try_beta(self, code: int) -> Optional[ExtNode]:
        support = self.support(code)
        target = self.labeled(code)
        target_size = target.n
        target_counts = target.label_counts()
        target_edges = target.graph.num_edges

        for child_mask in sorted(_submasks(support)):
            if child_mask in (0, support):
                continue
            child_vertices = mask_to_vertices(child_mask)
            for values in itertools.product(range(1, self.k + 1), repeat=len(child_vertices)):
                child_code = sum(
                    label * self.powers[v] for v, label in zip(child_vertices, values)
                )
                child_node = self.table.entries.get(child_code)
                if child_node is None:
                    continue
                child = self.labeled(child_code)
                found = self._beta_over_child(
                    child, child_node, target, target_size, target_counts, target_edges
                )
                if found is not None:
                    return found
        return None

    def _beta_over_child(
        self,
        child: LabeledGraph,
        child_node: ExtNode,
        target: LabeledGraph,
        target_size: int,
        target_counts: Dict[int, int],
        target_edges: int,
    ) -> Optional[ExtNode]:
        k = self.k
        counts = child.label_counts()
        edge_pairs = set()
        for u, v in child.graph.edges:
            edge_pairs.add((child.labels[u], child.labels[v]))
            edge_pairs.add((child.labels[v], child.labels[u]))

        for nvec in _nvec_candidates(counts, target_size - child.n, k):
            active = [label for label in range(1, k + 1) if nvec[label - 1]]
            for images in itertools.product(range(1, k + 1), repeat=len(active)):
                sigma = list(range(1, k + 1))
                for label, image in zip(active, images):
                    sigma[label - 1] = image
                if not _histogram_matches(counts, nvec, sigma, target_counts):
                    continue
                classes = symmetric_tuple_classes(edge_pairs, nvec)
                if len(classes) > settings.synth_max_s_classes:
                    logger.warning(
                        f"Beta search skips a candidate with {len(classes)} S-classes "
                        f"(cap {settings.synth_max_s_classes}), synthesis may miss an expression"
                    )
                    continue
                weights = [_class_weight(child, cls) for cls in classes]
                for chosen in _subsets_with_weight(weights, target_edges - child.graph.num_edges):
                    tuples = frozenset(t for i in chosen for t in classes[i])
                    image = apply_beta(child, nvec, sigma, tuples)
                    if labeled_iso(image, target) is not None:
                        return Beta(tuple(nvec), tuple(sigma), tuples, child_node)
        return None

    # Case 3
    def relabel_closure(self, codes: Sequence[int]) -> None:
        entries = self.table.entries
        queue = deque(code for code in codes if entries.get(code) is not None)
        while queue:
            code = queue.popleft()
            node = entries[code]
            digits = self.digits[code]
            for source in sorted({label for label in digits if label}):
                for target in range(1, self.k + 1):
                    if target == source:
                        continue
                    shifted = code + sum(
                        (target - source) * self.powers[v]
                        for v, label in enumerate(digits)
                        if label == source
                    )
                    if entries.get(shifted) is None:
                        entries[shifted] = Relabel(source, target, node)
                        queue.append(shifted)


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _nvec_candidates(counts: Dict[int, int], copies: int, k: int) -> Iterator[List[int]]:
    """sum counts[l] * nvec[l] == copies, 없는 라벨은 0, 값은 0..k (사전순)"""
    present = sorted(counts)

    def visit(index: int, remaining: int, nvec: List[int]) -> Iterator[List[int]]:
        if index == len(present):
            if remaining == 0:
                yield list(nvec)
            return
        label = present[index]
        for value in range(0, min(k, remaining // counts[label]) + 1):
            nvec[label - 1] = value
            yield from visit(index + 1, remaining - value * counts[label], nvec)
        nvec[label - 1] = 0

    if copies <= 0:
        return iter(())
    return visit(0, copies, [0] * k)


def _histogram_matches(
    counts: Dict[int, int], nvec: Sequence[int], sigma: Sequence[int], target: Dict[int, int]
) -> bool:
    result = dict(counts)
    for label, count in counts.items():
        copies = nvec[label - 1] * count
        if copies:
            image = sigma[label - 1]
            result[image] = result.get(image, 0) + copies
    return {l: c for l, c in result.items() if c} == target


def _class_weight(child: LabeledGraph, cls: Tuple[BetaTuple, ...]) -> int:
    """클래스가 만드는 복사본 간선 수"""
    weight = 0
    for u, v in child.graph.edges:
        lu, lv = child.labels[u], child.labels[v]
        weight += sum(1 for t in cls if t[0] == lu and t[2] == lv)
    return weight


def _subsets_with_weight(weights: Sequence[int], needed: int) -> Iterator[List[int]]:
    """가중치 합이 needed 인 부분집합 (깊이 우선, 제외 먼저)"""
    suffix = [0] * (len(weights) + 1)
    for i in range(len(weights) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]

    def visit(index: int, remaining: int, chosen: List[int]) -> Iterator[List[int]]:
        if remaining < 0 or remaining > suffix[index]:
            return
        if index == len(weights):
            yield list(chosen)
            return
        yield from visit(index + 1, remaining, chosen)
        chosen.append(index)
        yield from visit(index + 1, remaining - weights[index], chosen)
        chosen.pop()

    return visit(0, needed, [])


@log_function_call(logger)
def build_synth_table(g: Graph, k: int) -> SynthTable:
    if g.n == 0:
        raise InvalidInputError("Cannot synthesize an expression for the empty graph")
    if k < 1:
        raise InvalidInputError(f"Alphabet size must be >= 1, got {k}")
    check_budget("synthesis table", (k + 1) ** g.n, settings.table_budget)
    table = _Synthesizer(g, k).run()
    logger.debug(f"Synthesis table: {table.filled()} of {len(table.entries)} entries filled")
    return table


@log_function_call(logger)
def synthesize(g: Graph, k: int) -> Optional[ExtExpr]:
    """G 의 확장 k-expression (어떤 전체 라벨링이든), 없으면 None"""
    found = build_synth_table(g, k).first_full()
    if found is None:
        logger.info(f"No extended {k}-expression found for graph with {g.n} vertices")
        return None
    return ExtExpr(k, found[1])


def extended_width(g: Graph, max_k: int) -> Optional[int]:
    """합성이 성공하는 가장 작은 k <= max_k"""
    for k in range(1, max_k + 1):
        if synthesize(g, k) is not None:
            return k
    return None
