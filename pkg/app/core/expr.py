"""
(확장) k-expression 대수

확장 연산자:
  Vertex(i)                 라벨 i 정점 하나
  Relabel(i, j, child)      라벨 i -> j
  Connect(T, left, right)   서로소 합 + (i, j) in T 인 교차 간선
  Beta(nvec, sigma, S, c)   라벨 i 정점마다 nvec[i] 개의 복사본을 추가

Classic 연산자는 Vertex / Relabel / AddEdges (eta_ij) / DisjointUnion.
"""

import itertools
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from ..utils.logger import get_logger
from .config import settings
from .errors import BudgetExceededError, MalformedExpressionError, UnsafeExpressionError
from .graph import Edge, Graph, LabeledGraph, induced_subgraph

logger = get_logger("expr")

HYPERCUBE_EXPR_MAX_DIM = 12

LabelPair = Tuple[int, int]
BetaTuple = Tuple[int, int, int, int]

# 하이퍼큐브 귀납 단계의 S (j 성분 0 허용)
HYPERCUBE_TUPLES: FrozenSet[BetaTuple] = frozenset(
    {
        (1, 1, 1, 1),
        (2, 1, 2, 1),
        (1, 1, 2, 1),
        (2, 1, 1, 1),
        (1, 0, 2, 1),
        (2, 1, 1, 0),
        (2, 0, 1, 1),
        (1, 1, 2, 0),
    }
)


# ---------------------------------------------------------------------------
# 확장 k-expression 노드
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    label: int


@dataclass(frozen=True)
class Relabel:
    source: int
    target: int
    child: "ExtNode"


@dataclass(frozen=True)
class Connect:
    pairs: FrozenSet[LabelPair]
    left: "ExtNode"
    right: "ExtNode"

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))


@dataclass(frozen=True)
class Beta:
    nvec: Tuple[int, ...]
    sigma: Tuple[int, ...]
    tuples: FrozenSet[BetaTuple]
    child: "ExtNode"

    def __post_init__(self) -> None:
        object.__setattr__(self, "nvec", tuple(self.nvec))
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "tuples", frozenset(tuple(t) for t in self.tuples))


ExtNode = Union[Vertex, Relabel, Connect, Beta]


def _check_label(label: int, k: int, where: str) -> None:
    if not isinstance(label, int) or not 1 <= label <= k:
        raise MalformedExpressionError(f"{where}: label {label!r} outside 1..{k}")


def validate_beta(
    k: int, nvec: Sequence[int], sigma: Sequence[int], tuples: Iterable[BetaTuple]
) -> None:
    """beta 파라미터 검증 (범위 밖 j 는 거부)"""
    if len(nvec) != k or len(sigma) != k:
        raise MalformedExpressionError(f"beta: nvec and sigma must have length k={k}")
    for value in nvec:
        if not isinstance(value, int) or not 0 <= value <= k:
            raise MalformedExpressionError(f"beta: nvec entry {value!r} outside 0..{k}")
    for value in sigma:
        _check_label(value, k, "beta sigma")
    tuple_set = set(tuples)
    for t in tuple_set:
        if len(t) != 4:
            raise MalformedExpressionError(f"beta: tuple {t!r} must have four entries")
        i1, j1, i2, j2 = t
        _check_label(i1, k, "beta tuple")
        _check_label(i2, k, "beta tuple")
        if not 0 <= j1 <= nvec[i1 - 1] or not 0 <= j2 <= nvec[i2 - 1]:
            raise MalformedExpressionError(f"beta: tuple {t!r} out of range for nvec {tuple(nvec)}")
        if (i2, j2, i1, j1) not in tuple_set:
            raise MalformedExpressionError(f"beta: tuple set is not symmetric at {t!r}")


def _validate_ext(node: ExtNode, k: int) -> None:
    stack: List[ExtNode] = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, Vertex):
            _check_label(current.label, k, "vertex")
        elif isinstance(current, Relabel):
            _check_label(current.source, k, "relabel")
            _check_label(current.target, k, "relabel")
            stack.append(current.child)
        elif isinstance(current, Connect):
            for i, j in current.pairs:
                _check_label(i, k, "connect")
                _check_label(j, k, "connect")
            stack.extend((current.right, current.left))
        elif isinstance(current, Beta):
            validate_beta(k, current.nvec, current.sigma, current.tuples)
            stack.append(current.child)
        else:
            raise MalformedExpressionError(f"Unknown extended node {type(current).__name__}")


@dataclass(frozen=True)
class ExtExpr:
    """확장 k-expression (라벨 알파벳 크기 k 공유)"""

    k: int
    root: ExtNode

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise MalformedExpressionError(f"Alphabet size must be >= 1, got {self.k!r}")
        _validate_ext(self.root, self.k)


# ---------------------------------------------------------------------------
# Classic k-expression 노드
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassicVertex:
    label: int


@dataclass(frozen=True)
class ClassicRelabel:
    source: int
    target: int
    child: "ClassicNode"


@dataclass(frozen=True)
class AddEdges:
    first: int
    second: int
    child: "ClassicNode"


@dataclass(frozen=True)
class DisjointUnion:
    left: "ClassicNode"
    right: "ClassicNode"


ClassicNode = Union[ClassicVertex, ClassicRelabel, AddEdges, DisjointUnion]


def _validate_classic(node: ClassicNode, k: int) -> None:
    stack: List[ClassicNode] = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, ClassicVertex):
            _check_label(current.label, k, "vertex")
        elif isinstance(current, ClassicRelabel):
            _check_label(current.source, k, "relabel")
            _check_label(current.target, k, "relabel")
            stack.append(current.child)
        elif isinstance(current, AddEdges):
            _check_label(current.first, k, "add_edges")
            _check_label(current.second, k, "add_edges")
            if current.first == current.second:
                raise MalformedExpressionError("add_edges requires two distinct labels")
            stack.append(current.child)
        elif isinstance(current, DisjointUnion):
            stack.extend((current.right, current.left))
        else:
            raise MalformedExpressionError(f"Unknown classic node {type(current).__name__}")


@dataclass(frozen=True)
class ClassicExpr:
    k: int
    root: ClassicNode

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise MalformedExpressionError(f"Alphabet size must be >= 1, got {self.k!r}")
        _validate_classic(self.root, self.k)


# ---------------------------------------------------------------------------
# 연산자 적용
# ---------------------------------------------------------------------------


def single_vertex(label: int, k: int) -> LabeledGraph:
    return LabeledGraph(Graph(1), k, (label,))


def apply_relabel(lg: LabeledGraph, mapping: Sequence[int]) -> LabeledGraph:
    return lg.relabel(mapping)


def apply_connect(
    left: LabeledGraph, right: LabeledGraph, pairs: Iterable[LabelPair]
) -> LabeledGraph:
    """왼쪽 id 먼저, 오른쪽 id 는 |left| 만큼 이동"""
    offset = left.n
    pair_set = set(pairs)
    edges: List[Edge] = list(left.graph.edges)
    edges.extend((u + offset, v + offset) for u, v in right.graph.edges)
    if pair_set:
        for a, la in enumerate(left.labels):
            for b, lb in enumerate(right.labels):
                if (la, lb) in pair_set:
                    edges.append((a, b + offset))
    return LabeledGraph(Graph(left.n + right.n, edges), left.k, left.labels + right.labels)


def beta_size(lg: LabeledGraph, nvec: Sequence[int]) -> int:
    return sum(1 + nvec[label - 1] for label in lg.labels)


def apply_beta(
    lg: LabeledGraph,
    nvec: Sequence[int],
    sigma: Sequence[int],
    tuples: FrozenSet[BetaTuple],
) -> LabeledGraph:
    """원본은 id 유지, 복사본 a_j (j>=1) 는 (정점, j) 순서로 뒤에 붙는다"""
    copy_ids: List[List[int]] = []
    labels = list(lg.labels)
    next_id = lg.n
    for a, label in enumerate(lg.labels):
        ids = [a]
        for _ in range(nvec[label - 1]):
            ids.append(next_id)
            labels.append(sigma[label - 1])
            next_id += 1
        copy_ids.append(ids)

    edges: List[Edge] = []
    for a, b in lg.graph.edges:
        la, lb = lg.labels[a], lg.labels[b]
        for j, a_j in enumerate(copy_ids[a]):
            for j2, b_j2 in enumerate(copy_ids[b]):
                if (j == 0 and j2 == 0) or (la, j, lb, j2) in tuples:
                    edges.append((a_j, b_j2))
    return LabeledGraph(Graph(next_id, edges), lg.k, tuple(labels))


def apply_union(left: LabeledGraph, right: LabeledGraph) -> LabeledGraph:
    return apply_connect(left, right, ())


def apply_add_edges(lg: LabeledGraph, first: int, second: int) -> LabeledGraph:
    edges = set(lg.graph.edges)
    for a, la in enumerate(lg.labels):
        if la != first:
            continue
        for b, lb in enumerate(lg.labels):
            if lb == second:
                edges.add((a, b) if a < b else (b, a))
    return LabeledGraph(Graph(lg.n, edges), lg.k, lg.labels)


def relabel_mapping(k: int, source: int, target: int) -> Tuple[int, ...]:
    return tuple(target if label == source else label for label in range(1, k + 1))


def collect_relabel_chain(node: ExtNode) -> Tuple[List[LabelPair], ExtNode]:
    """연속된 Relabel 노드를 (바깥쪽 먼저) 모으고 그 아래 노드를 반환"""
    chain: List[LabelPair] = []
    while isinstance(node, Relabel):
        chain.append((node.source, node.target))
        node = node.child
    return chain, node


def compose_relabels(chain: Sequence[LabelPair], k: int) -> Tuple[int, ...]:
    """chain 은 바깥쪽 먼저; 가장 안쪽 relabel 부터 적용한 합성 사상"""
    mapping = list(range(1, k + 1))
    for source, target in reversed(chain):
        mapping = [target if label == source else label for label in mapping]
    return tuple(mapping)


# ---------------------------------------------------------------------------
# 평가 / 추적
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    """부분식, 그 평가 결과, 최종 그래프 안에서의 id 오프셋"""

    node: object
    graph: LabeledGraph
    offset: int

    @property
    def embedding(self) -> range:
        return range(self.offset, self.offset + self.graph.n)


def _guard_size(size: int) -> None:
    if size > settings.eval_max_vertices:
        raise BudgetExceededError(
            f"Evaluated expression has {size} vertices, guard is {settings.eval_max_vertices}",
            details={"vertices": size},
        )


def _evaluate_ext(
    node: ExtNode, k: int, offset: int, trace: Optional[List[TraceEntry]]
) -> LabeledGraph:
    if isinstance(node, Vertex):
        result = single_vertex(node.label, k)
    elif isinstance(node, Relabel):
        chain, base = collect_relabel_chain(node)
        child = _evaluate_ext(base, k, offset, trace)
        result = apply_relabel(child, compose_relabels(chain, k))
    elif isinstance(node, Connect):
        left = _evaluate_ext(node.left, k, offset, trace)
        right = _evaluate_ext(node.right, k, offset + left.n, trace)
        _guard_size(left.n + right.n)
        result = apply_connect(left, right, node.pairs)
    elif isinstance(node, Beta):
        child = _evaluate_ext(node.child, k, offset, trace)
        _guard_size(beta_size(child, node.nvec))
        result = apply_beta(child, node.nvec, node.sigma, node.tuples)
    else:
        raise MalformedExpressionError(f"Unknown extended node {type(node).__name__}")
    if trace is not None:
        trace.append(TraceEntry(node, result, offset))
    return result


def eval_ext(expr: ExtExpr) -> LabeledGraph:
    """확장 k-expression 평가"""
    return _evaluate_ext(expr.root, expr.k, 0, None)


def trace_ext(expr: ExtExpr) -> List[TraceEntry]:
    """모든 부분식의 평가 결과 (후위 순서, 마지막이 루트)"""
    trace: List[TraceEntry] = []
    _evaluate_ext(expr.root, expr.k, 0, trace)
    return trace


def is_safe_ext(expr: ExtExpr) -> bool:
    """최종 그래프에서 각 부분식 id 위의 유도 부분그래프가 부분식 그래프와 같은지"""
    trace = trace_ext(expr)
    final = trace[-1].graph.graph
    for entry in trace:
        if induced_subgraph(final, entry.embedding) != entry.graph.graph:
            node_name = type(entry.node).__name__
            logger.debug(f"Unsafe subexpression at offset {entry.offset}: {node_name}")
            return False
    return True


def _evaluate_classic(
    node: ClassicNode, k: int, offset: int, operands: Optional[List[TraceEntry]]
) -> LabeledGraph:
    if isinstance(node, ClassicVertex):
        result = single_vertex(node.label, k)
    elif isinstance(node, ClassicRelabel):
        result = apply_relabel(
            _evaluate_classic(node.child, k, offset, operands),
            relabel_mapping(k, node.source, node.target),
        )
    elif isinstance(node, AddEdges):
        result = apply_add_edges(
            _evaluate_classic(node.child, k, offset, operands), node.first, node.second
        )
    elif isinstance(node, DisjointUnion):
        left = _evaluate_classic(node.left, k, offset, operands)
        right = _evaluate_classic(node.right, k, offset + left.n, operands)
        _guard_size(left.n + right.n)
        if operands is not None:
            operands.append(TraceEntry(node.left, left, offset))
            operands.append(TraceEntry(node.right, right, offset + left.n))
        result = apply_union(left, right)
    else:
        raise MalformedExpressionError(f"Unknown classic node {type(node).__name__}")
    return result


def eval_classic(expr: ClassicExpr) -> LabeledGraph:
    return _evaluate_classic(expr.root, expr.k, 0, None)


def trace_classic(expr: ClassicExpr) -> Tuple[LabeledGraph, List[TraceEntry]]:
    """최종 그래프와 모든 합집합 피연산자의 평가 결과"""
    operands: List[TraceEntry] = []
    final = _evaluate_classic(expr.root, expr.k, 0, operands)
    return final, operands


def is_safe_classic(expr: ClassicExpr) -> bool:
    final, operands = trace_classic(expr)
    for entry in operands:
        if induced_subgraph(final.graph, entry.embedding) != entry.graph.graph:
            return False
    return True


# ---------------------------------------------------------------------------
# classic -> 확장 변환
# ---------------------------------------------------------------------------


def _classic_labels(node: ClassicNode) -> Set[int]:
    """간선 없이 라벨 집합만 시뮬레이션"""
    if isinstance(node, ClassicVertex):
        return {node.label}
    if isinstance(node, ClassicRelabel):
        return {
            node.target if label == node.source else label
            for label in _classic_labels(node.child)
        }
    if isinstance(node, AddEdges):
        return _classic_labels(node.child)
    return _classic_labels(node.left) | _classic_labels(node.right)


def _cross_pairs(
    chain: Sequence[Union[ClassicRelabel, AddEdges]], left: Set[int], right: Set[int]
) -> Set[LabelPair]:
    """chain 의 eta 들이 왼쪽-오른쪽 사이에 잇는 (원래 라벨) 쌍"""
    current_left = {i: i for i in left}
    current_right = {j: j for j in right}
    pairs: Set[LabelPair] = set()
    for op in reversed(chain):
        if isinstance(op, ClassicRelabel):
            for labels in (current_left, current_right):
                for key, value in labels.items():
                    if value == op.source:
                        labels[key] = op.target
        else:
            wanted = {op.first, op.second}
            for i in left:
                for j in right:
                    if {current_left[i], current_right[j]} == wanted:
                        pairs.add((i, j))
    return pairs


def _convert_classic(node: ClassicNode) -> ExtNode:
    chain: List[Union[ClassicRelabel, AddEdges]] = []
    current = node
    while isinstance(current, (ClassicRelabel, AddEdges)):
        chain.append(current)
        current = current.child

    base: ExtNode
    if isinstance(current, ClassicVertex):
        base = Vertex(current.label)
    elif isinstance(current, DisjointUnion):
        pairs = _cross_pairs(chain, _classic_labels(current.left), _classic_labels(current.right))
        base = Connect(
            frozenset(pairs), _convert_classic(current.left), _convert_classic(current.right)
        )
    else:
        raise MalformedExpressionError(f"Unknown classic node {type(current).__name__}")

    # eta 를 제거한 relabel 들만 같은 순서로 남긴다
    for op in reversed(chain):
        if isinstance(op, ClassicRelabel):
            base = Relabel(op.source, op.target, base)
    return base


def classic_to_ext(expr: ClassicExpr) -> ExtExpr:
    """safe classic k-expression 을 같은 그래프의 확장 k-expression 으로 변환"""
    if not is_safe_classic(expr):
        raise UnsafeExpressionError("classic expression is not safe; conversion refused")
    return ExtExpr(expr.k, _convert_classic(expr.root))


# ---------------------------------------------------------------------------
# 생성기 / 크기
# ---------------------------------------------------------------------------


def hypercube_expr(n: int) -> ExtExpr:
    """HC_n 의 확장 2-expression"""
    if not 0 <= n <= HYPERCUBE_EXPR_MAX_DIM:
        raise BudgetExceededError(
            f"Hypercube expression dimension {n} outside 0..{HYPERCUBE_EXPR_MAX_DIM}"
        )
    if n == 0:
        return ExtExpr(2, Vertex(1))
    node: ExtNode = Connect(frozenset({(1, 2)}), Vertex(1), Vertex(2))
    for _ in range(n - 1):
        node = Beta((1, 1), (2, 1), HYPERCUBE_TUPLES, node)
    return ExtExpr(2, node)


def expr_size(expr: Union[ExtExpr, ExtNode]) -> int:
    """피연산자 + connect + beta + 최대 relabel 연쇄 개수"""
    root = expr.root if isinstance(expr, ExtExpr) else expr
    total = 0
    stack: List[Tuple[ExtNode, bool]] = [(root, False)]
    while stack:
        node, under_relabel = stack.pop()
        if isinstance(node, Vertex):
            total += 1
        elif isinstance(node, Relabel):
            if not under_relabel:
                total += 1
            stack.append((node.child, True))
        elif isinstance(node, Connect):
            total += 1
            stack.append((node.left, False))
            stack.append((node.right, False))
        else:
            total += 1
            stack.append((node.child, False))
    return total


def symmetric_tuple_classes(
    label_pairs: Iterable[LabelPair], nvec: Sequence[int], include_zero: bool = False
) -> List[Tuple[BetaTuple, ...]]:
    """라벨 쌍에 대한 S 후보를 대칭 클래스 {t, swap(t)} 로 묶어 정렬된 목록으로"""
    seen: Set[BetaTuple] = set()
    classes: List[Tuple[BetaTuple, ...]] = []
    for i1, i2 in sorted(set(label_pairs)):
        for j1 in range(nvec[i1 - 1] + 1):
            for j2 in range(nvec[i2 - 1] + 1):
                if j1 == 0 and j2 == 0 and not include_zero:
                    continue
                t = (i1, j1, i2, j2)
                if t in seen:
                    continue
                mirror = (i2, j2, i1, j1)
                seen.update((t, mirror))
                classes.append(tuple(sorted({t, mirror})))
    return classes


def _random_ext_node(
    rng: random.Random, k: int, budget: int, depth: int, max_copies: int
) -> Tuple[ExtNode, Dict[int, int]]:
    if budget <= 1 or depth <= 0:
        label = rng.randint(1, k)
        return Vertex(label), {label: 1}

    roll = rng.random()
    if roll < 0.15:
        label = rng.randint(1, k)
        return Vertex(label), {label: 1}

    if roll < 0.35:
        child, counts = _random_ext_node(rng, k, budget, depth - 1, max_copies)
        source = rng.choice(sorted(counts))
        target = rng.randint(1, k)
        relabeled: Dict[int, int] = {}
        for label, count in counts.items():
            new_label = target if label == source else label
            relabeled[new_label] = relabeled.get(new_label, 0) + count
        return Relabel(source, target, child), relabeled

    if roll < 0.75:
        left, left_counts = _random_ext_node(
            rng, k, rng.randint(1, budget - 1), depth - 1, max_copies
        )
        right_budget = budget - sum(left_counts.values())
        right, right_counts = _random_ext_node(rng, k, right_budget, depth - 1, max_copies)
        pairs = frozenset(
            (i, j)
            for i in sorted(left_counts)
            for j in sorted(right_counts)
            if rng.random() < 0.5
        )
        merged = dict(left_counts)
        for label, count in right_counts.items():
            merged[label] = merged.get(label, 0) + count
        return Connect(pairs, left, right), merged

    child, counts = _random_ext_node(rng, k, rng.randint(1, budget - 1), depth - 1, max_copies)
    remaining = budget - sum(counts.values())
    nvec = [0] * k
    for label in rng.sample(sorted(counts), len(counts)):
        cap = min(max_copies, k, remaining // counts[label])
        nvec[label - 1] = rng.randint(0, cap)
        remaining -= nvec[label - 1] * counts[label]
    sigma = tuple(rng.randint(1, k) for _ in range(k))
    present = sorted(counts)
    classes = symmetric_tuple_classes(
        itertools.product(present, present), nvec, include_zero=True
    )
    tuples = frozenset(t for cls in classes if rng.random() < 0.5 for t in cls)

    new_counts = dict(counts)
    for label, count in counts.items():
        copies = nvec[label - 1] * count
        if copies:
            image = sigma[label - 1]
            new_counts[image] = new_counts.get(image, 0) + copies
    return Beta(tuple(nvec), sigma, tuples, child), new_counts


def random_ext_expr(
    rng: random.Random, k: int, max_vertices: int = 10, max_depth: int = 6, max_copies: int = 2
) -> ExtExpr:
    """평가 결과가 max_vertices 이하인 랜덤 확장 k-expression"""
    node, _ = _random_ext_node(rng, k, max_vertices, max_depth, max_copies)
    return ExtExpr(k, node)


def _random_classic_node(
    rng: random.Random, k: int, budget: int, depth: int
) -> Tuple[ClassicNode, int]:
    if budget <= 1 or depth <= 0:
        return ClassicVertex(rng.randint(1, k)), 1
    roll = rng.random()
    if roll < 0.2:
        child, size = _random_classic_node(rng, k, budget, depth - 1)
        return ClassicRelabel(rng.randint(1, k), rng.randint(1, k), child), size
    if roll < 0.45 and k >= 2:
        child, size = _random_classic_node(rng, k, budget, depth - 1)
        first, second = rng.sample(range(1, k + 1), 2)
        return AddEdges(first, second, child), size
    left, left_size = _random_classic_node(rng, k, rng.randint(1, budget - 1), depth - 1)
    right, right_size = _random_classic_node(rng, k, budget - left_size, depth - 1)
    return DisjointUnion(left, right), left_size + right_size


def random_classic_expr(
    rng: random.Random, k: int, max_vertices: int = 6, max_depth: int = 8
) -> ClassicExpr:
    node, _ = _random_classic_node(rng, k, max_vertices, max_depth)
    return ClassicExpr(k, node)
