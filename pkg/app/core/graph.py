"""
그래프 / 라벨 그래프 데이터 모델과 생성기

모든 생성기는 결정적인 정점 id 규칙을 따른다:
  - gen_hypercube: 비트 벡터의 정수 값
  - gen_kneser: k-부분집합의 colex 순서
  - subdivide_clique: 클리크 정점 0..n-1, 이후 (i, j) 사전순 쌍마다 U 복사본
  - blowup: 정점 v 의 클리크는 k*v .. k*v+k-1
"""

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx

from .errors import BudgetExceededError, InvalidInputError

Edge = Tuple[int, int]

HYPERCUBE_MAX_DIM = 20
KNESER_MAX_VERTICES = 10**5


def _normalize_edges(n: int, edges: Iterable[Sequence[int]]) -> FrozenSet[Edge]:
    normalized = set()
    for edge in edges:
        if len(edge) != 2:
            raise InvalidInputError(f"Edge must have two endpoints: {edge!r}")
        u, v = int(edge[0]), int(edge[1])
        if u == v:
            raise InvalidInputError(f"Self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidInputError(f"Edge ({u}, {v}) out of range for n={n}")
        key = (u, v) if u < v else (v, u)
        if key in normalized:
            raise InvalidInputError(f"Duplicate edge {key}")
        normalized.add(key)
    return frozenset(normalized)


@dataclass(frozen=True)
class Graph:
    """단순 무향 그래프 (정점 id 0..n-1)"""

    n: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInputError(f"Vertex count must be non-negative, got {self.n}")
        object.__setattr__(self, "edges", _normalize_edges(self.n, self.edges))

    @cached_property
    def adjacency(self) -> Tuple[int, ...]:
        """정점별 이웃 비트마스크"""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def neighbor_lists(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(
            tuple(v for v in range(self.n) if mask >> v & 1) for mask in self.adjacency
        )

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_list(self) -> List[Edge]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.neighbor_lists[v]

    def degree(self, v: int) -> int:
        return len(self.neighbor_lists[v])

    def degree_sequence(self) -> List[int]:
        return sorted((self.degree(v) for v in self.vertices), reverse=True)

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.vertices), default=0)

    def is_independent(self, mask: int) -> bool:
        """mask 가 독립 집합인지"""
        rest = mask
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            if self.adjacency[v] & mask:
                return False
            rest ^= low
        return True


@dataclass(frozen=True)
class LabeledGraph:
    """k-라벨 그래프: 모든 정점이 1..k 라벨 하나를 가진다"""

    graph: Graph
    k: int
    labels: Tuple[int, ...]

    def __post_init__(self) -> None:
        labels = tuple(int(label) for label in self.labels)
        object.__setattr__(self, "labels", labels)
        if self.k < 1:
            raise InvalidInputError(f"Label alphabet size must be >= 1, got {self.k}")
        if len(labels) != self.graph.n:
            raise InvalidInputError(
                f"Expected {self.graph.n} labels, got {len(labels)}"
            )
        for v, label in enumerate(labels):
            if not 1 <= label <= self.k:
                raise InvalidInputError(f"Label {label} of vertex {v} outside 1..{self.k}")

    @property
    def n(self) -> int:
        return self.graph.n

    def label_counts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for label in self.labels:
            counts[label] = counts.get(label, 0) + 1
        return counts

    def relabel(self, mapping: Sequence[int]) -> "LabeledGraph":
        """mapping[i-1] = 라벨 i 의 새 라벨"""
        return LabeledGraph(self.graph, self.k, tuple(mapping[label - 1] for label in self.labels))


@dataclass(frozen=True)
class PartialLabeling:
    """부분 라벨링: 값 0 은 정의역 X 밖을 뜻한다"""

    values: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise InvalidInputError(f"Negative value in partial labeling {self.values}")

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(v for v, value in enumerate(self.values) if value)

    @property
    def support_mask(self) -> int:
        mask = 0
        for v, value in enumerate(self.values):
            if value:
                mask |= 1 << v
        return mask

    def is_full(self) -> bool:
        return all(self.values)

    def code(self, k: int) -> int:
        """(k+1) 진법 혼합 기수 인코딩 (정점 0 이 최하위 자리)"""
        radix = k + 1
        total = 0
        for value in reversed(self.values):
            if value > k:
                raise InvalidInputError(f"Label {value} exceeds alphabet size {k}")
            total = total * radix + value
        return total

    @classmethod
    def from_code(cls, code: int, n: int, k: int) -> "PartialLabeling":
        radix = k + 1
        values = []
        for _ in range(n):
            code, digit = divmod(code, radix)
            values.append(digit)
        return cls(tuple(values))


def gen_clique(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def gen_path(n: int) -> Graph:
    return Graph(n, ((v, v + 1) for v in range(n - 1)))


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidInputError(f"Cycle needs at least 3 vertices, got {n}")
    return Graph(n, [(v, (v + 1) % n) for v in range(n)])


def complement(g: Graph) -> Graph:
    return Graph(
        g.n, (pair for pair in itertools.combinations(range(g.n), 2) if pair not in g.edges)
    )


def disjoint_union(a: Graph, b: Graph) -> Graph:
    """a 의 정점이 먼저, b 의 정점은 |V(a)| 만큼 밀린다"""
    return Graph(a.n + b.n, list(a.edges) + [(u + a.n, v + a.n) for u, v in b.edges])


def permute(g: Graph, perm: Sequence[int]) -> Graph:
    """정점 v 를 perm[v] 로 옮긴 그래프"""
    if sorted(perm) != list(range(g.n)):
        raise InvalidInputError("perm must be a permutation of the vertex ids")
    return Graph(g.n, ((perm[u], perm[v]) for u, v in g.edges))


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph(n, (pair for pair in itertools.combinations(range(n), 2) if rng.random() < p))


def random_connected_graph(rng: random.Random, n: int, p: float = 0.4) -> Graph:
    """랜덤 생성 트리 위에 간선을 추가해 연결성을 보장"""
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < p:
            edges.add((u, v))
    return Graph(n, edges)


def _checked_vertex_set(g: Graph, s: Iterable[int]) -> List[int]:
    vertices = sorted(set(s))
    for v in vertices:
        if not 0 <= v < g.n:
            raise InvalidInputError(f"Vertex {v} out of range for n={g.n}")
    return vertices


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """G[s]; s 의 원소를 오름차순으로 0.. 에 재배치"""
    vertices = _checked_vertex_set(g, s)
    index = {v: i for i, v in enumerate(vertices)}
    return Graph(
        len(vertices),
        ((index[u], index[v]) for u, v in g.edges if u in index and v in index),
    )


def induced_labeled_subgraph(lg: LabeledGraph, s: Iterable[int]) -> LabeledGraph:
    vertices = _checked_vertex_set(lg.graph, s)
    return LabeledGraph(
        induced_subgraph(lg.graph, vertices), lg.k, tuple(lg.labels[v] for v in vertices)
    )


def to_networkx(g: Graph) -> nx.Graph:
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(g.vertices)
    nx_graph.add_edges_from(g.edges)
    return nx_graph


def connected_components(g: Graph) -> List[FrozenSet[int]]:
    """최소 정점 id 순으로 정렬된 연결 성분"""
    components = [frozenset(c) for c in nx.connected_components(to_networkx(g))]
    return sorted(components, key=min)


def is_bipartite(g: Graph) -> bool:
    return bool(nx.is_bipartite(to_networkx(g)))


def gen_hypercube(n: int) -> Graph:
    if not 0 <= n <= HYPERCUBE_MAX_DIM:
        raise BudgetExceededError(
            f"Hypercube dimension {n} outside 0..{HYPERCUBE_MAX_DIM}",
            details={"dimension": n},
        )
    size = 1 << n
    return Graph(
        size, ((x, x | 1 << bit) for x in range(size) for bit in range(n) if not x >> bit & 1)
    )


def kneser_vertices(n: int, k: int) -> List[Tuple[int, ...]]:
    """[n] 의 k-부분집합 (1-based) 을 colex 순서로"""
    return sorted(itertools.combinations(range(1, n + 1), k), key=lambda s: s[::-1])


def gen_kneser(n: int, k: int) -> Graph:
    if n < 1 or k < 1:
        raise InvalidInputError(f"Kneser parameters must be >= 1, got n={n}, k={k}")
    if comb(n, k) > KNESER_MAX_VERTICES:
        raise BudgetExceededError(
            f"Kneser graph KG({n},{k}) has {comb(n, k)} vertices, guard is {KNESER_MAX_VERTICES}"
        )
    subsets = [frozenset(s) for s in kneser_vertices(n, k)]
    return Graph(
        len(subsets),
        (
            (i, j)
            for i, j in itertools.combinations(range(len(subsets)), 2)
            if not subsets[i] & subsets[j]
        ),
    )


@dataclass(frozen=True)
class SubdividedClique:
    """K_n 을 U 로 세분한 그래프와 (H_A, H_B) 분할"""

    graph: Graph
    hub_vertices: Tuple[int, ...]
    copy_vertices: Tuple[int, ...]
    copies: Dict[Tuple[int, int], Tuple[int, ...]]


def subdivide_clique(n: int, u: Graph) -> SubdividedClique:
    if n < 1:
        raise InvalidInputError(f"Clique size must be >= 1, got {n}")
    edges: List[Edge] = []
    copies: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    next_id = n
    for i, j in itertools.combinations(range(n), 2):
        ids = tuple(range(next_id, next_id + u.n))
        next_id += u.n
        copies[(i, j)] = ids
        edges.extend((ids[a], ids[b]) for a, b in u.edges)
        for t in ids:
            edges.append((i, t))
            edges.append((j, t))
    return SubdividedClique(
        graph=Graph(next_id, edges),
        hub_vertices=tuple(range(n)),
        copy_vertices=tuple(range(n, next_id)),
        copies=copies,
    )


def blowup(g: Graph, k: int) -> Graph:
    """G^(k): 정점 -> k-클리크, 간선 -> K_{k,k}"""
    if k < 1:
        raise InvalidInputError(f"Blow-up size must be >= 1, got {k}")
    edges: List[Edge] = []
    for v in g.vertices:
        edges.extend(itertools.combinations(range(k * v, k * v + k), 2))
    for u, v in g.edges:
        edges.extend((k * u + a, k * v + b) for a in range(k) for b in range(k))
    return Graph(k * g.n, edges)


def mask_to_vertices(mask: int) -> List[int]:
    vertices = []
    while mask:
        low = mask & -mask
        vertices.append(low.bit_length() - 1)
        mask ^= low
    return vertices
