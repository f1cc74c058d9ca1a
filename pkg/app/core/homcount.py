"""
확장 k-expression 을 따라 consistent 준동형 사상 개수 테이블을 쌓는 DP

테이블 인덱스는 부분 라벨링 chi 의 (k+1) 진법 코드 sum chi(v) * (k+1)^v 이다.
값 0 인 정점은 정의역 X 밖이며, 빈 라벨링의 값은 항상 1 이다.
"""

import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.logger import get_logger, log_function_call
from .config import settings
from .errors import InvalidInputError, MalformedExpressionError, check_budget
from .expr import (
    Beta,
    Connect,
    ExtExpr,
    ExtNode,
    LabelPair,
    Relabel,
    Vertex,
    collect_relabel_chain,
    compose_relabels,
    eval_ext,
)
from .graph import Graph, PartialLabeling
from .partition import INT64_SAFE

logger = get_logger("homcount")


def radix_powers(n: int, k: int) -> List[int]:
    radix = k + 1
    return [radix**v for v in range(n)]


def full_codes(n: int, k: int) -> List[int]:
    """모든 정점이 라벨을 가진 라벨링의 코드"""
    codes = [0]
    for power in radix_powers(n, k):
        codes = [code + label * power for code in codes for label in range(1, k + 1)]
    return codes


class HomTable:
    """부분 라벨링 -> consistent 준동형 사상 개수"""

    __slots__ = ("graph", "k", "entries")

    def __init__(self, graph: Graph, k: int, entries: List[int]):
        expected = (k + 1) ** graph.n
        if len(entries) != expected:
            raise InvalidInputError(f"HomTable needs {expected} entries, got {len(entries)}")
        self.graph = graph
        self.k = k
        self.entries = entries

    @classmethod
    def zeros(cls, graph: Graph, k: int) -> "HomTable":
        return cls(graph, k, [0] * (k + 1) ** graph.n)

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, code: int) -> int:
        return self.entries[code]

    def entry(self, labeling: Union[PartialLabeling, Sequence[int]]) -> int:
        if not isinstance(labeling, PartialLabeling):
            labeling = PartialLabeling(tuple(labeling))
        if len(labeling.values) != self.graph.n:
            raise InvalidInputError(
                f"Labeling has {len(labeling.values)} values, graph has {self.graph.n} vertices"
            )
        return self.entries[labeling.code(self.k)]

    def full_total(self) -> int:
        """모든 전체 라벨링에 대한 합 = hom(G, H)"""
        return sum(self.entries[code] for code in full_codes(self.graph.n, self.k))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomTable):
            return NotImplemented
        return self.graph == other.graph and self.k == other.k and self.entries == other.entries

    def __repr__(self) -> str:
        nonzero = sum(1 for v in self.entries if v)
        return f"HomTable(n={self.graph.n}, k={self.k}, nonzero={nonzero})"


def base_table(g: Graph, k: int, label: int) -> HomTable:
    """라벨 label 의 단일 정점 타깃: X 가 독립이고 모두 label 이면 1"""
    if not 1 <= label <= k:
        raise MalformedExpressionError(f"Vertex label {label} outside 1..{k}")
    table = HomTable.zeros(g, k)
    powers = radix_powers(g.n, k)
    for mask in range(1 << g.n):
        if g.is_independent(mask):
            code = sum(label * powers[v] for v in range(g.n) if mask >> v & 1)
            table.entries[code] = 1
    return table


def _entry_dtype(bound: int) -> object:
    """bound 까지 정확하면 int64, 아니면 파이썬 int (object)"""
    return np.int64 if bound < INT64_SAFE else object


def _tensor(entries: Sequence[int], n: int, k: int, dtype: object) -> np.ndarray:
    """축 n-1-v 가 정점 v 의 자리"""
    return np.array(entries, dtype=dtype).reshape((k + 1,) * n)


def _support_sizes(n: int, k: int) -> np.ndarray:
    codes = np.arange((k + 1) ** n, dtype=np.int64)
    sizes = np.zeros_like(codes)
    for power in radix_powers(n, k):
        sizes += (codes // power) % (k + 1) != 0
    return sizes.reshape((k + 1,) * n)


def _star_transform(array: np.ndarray, first_axis: int, inverse: bool = False) -> None:
    """정점 축마다 라벨 칸에 '없음' 칸을 더한다 (inverse 면 뺀다). 제자리 변환"""
    for axis in range(first_axis, array.ndim):
        moved = np.moveaxis(array, axis, 0)
        if inverse:
            moved[1:] -= moved[0]
        else:
            moved[1:] += moved[0]


def _ranked_zeta(t: np.ndarray, sizes: np.ndarray, n: int) -> np.ndarray:
    """stack[r, chi] = sum_{psi <= chi, |psi| = r} t(psi)"""
    stack = np.zeros((n + 1,) + t.shape, dtype=t.dtype)
    for r in range(n + 1):
        at_rank = sizes == r
        stack[r][at_rank] = t[at_rank]
    _star_transform(stack, 1)
    return stack


def _disjoint_convolution(left: np.ndarray, right: np.ndarray, n: int) -> np.ndarray:
    """out(chi) = sum over psi1 + psi2 = chi (정의역 서로소) of left(psi1) * right(psi2)"""
    sizes = _support_sizes(n, left.shape[0] - 1)
    left_hat = _ranked_zeta(left, sizes, n)
    right_hat = _ranked_zeta(right, sizes, n)
    out = np.zeros_like(left)
    for r in range(n + 1):
        layer = left_hat[0] * right_hat[r]
        for i in range(1, r + 1):
            layer = layer + left_hat[i] * right_hat[r - i]
        _star_transform(layer, 0, inverse=True)
        at_rank = sizes == r
        out[at_rank] = layer[at_rank]
    return out


def _split_convolution(
    left: np.ndarray, right: np.ndarray, pair_set: frozenset, g: Graph, k: int
) -> np.ndarray:
    """오른쪽 정점 집합 S 마다 (S 는 모두 라벨 보유) 텐서 조각 곱을 더한다"""
    n = g.n
    # allowed[a, b - 1]: 왼쪽 라벨 a (0 은 X 밖), 오른쪽 라벨 b
    allowed = np.ones((k + 1, k), dtype=bool)
    for a in range(1, k + 1):
        for b in range(1, k + 1):
            allowed[a, b - 1] = (a, b) in pair_set
    axis_of = [n - 1 - v for v in range(n)]
    labelled = slice(1, None)
    everything = slice(None)
    out = np.zeros_like(left)
    for mask in range(1 << n):
        on_right = [bool(mask >> v & 1) for v in range(n)]
        left_index: List[Union[int, slice]] = [everything] * n
        right_index: List[Union[int, slice]] = [0] * n
        out_index: List[slice] = [everything] * n
        left_shape = [k + 1] * n
        right_shape = [1] * n
        for v in range(n):
            if on_right[v]:
                a = axis_of[v]
                left_index[a] = 0
                right_index[a] = labelled
                out_index[a] = labelled
                left_shape[a] = 1
                right_shape[a] = k
        right_part = np.asarray(right[tuple(right_index)], dtype=right.dtype)
        if not right_part.any():
            continue
        left_part = np.asarray(left[tuple(left_index)], dtype=left.dtype)
        term = left_part.reshape(left_shape) * right_part.reshape(right_shape)
        for u, w in g.edges:
            if on_right[u] == on_right[w]:
                continue
            r, l = (u, w) if on_right[u] else (w, u)
            shape = [1] * n
            shape[axis_of[l]] = k + 1
            shape[axis_of[r]] = k
            oriented = allowed if axis_of[l] < axis_of[r] else allowed.T
            term = term * oriented.reshape(shape)
        out[tuple(out_index)] += term
    return out


def lift_relabel(t: HomTable, mapping: Sequence[int]) -> HomTable:
    """합성된 relabel 사상 sigma_hat 에 대한 테이블"""
    k = t.k
    if tuple(mapping) == tuple(range(1, k + 1)):
        return HomTable(t.graph, k, list(t.entries))
    lookup = np.array([0, *mapping], dtype=np.int64)
    codes = np.arange(t.size, dtype=np.int64)
    targets = np.zeros_like(codes)
    for power in radix_powers(t.graph.n, k):
        targets += lookup[(codes // power) % (k + 1)] * power
    dtype = _entry_dtype(max(sum(t.entries), 1))
    out = np.zeros(t.size, dtype=dtype)
    np.add.at(out, targets, np.array(t.entries, dtype=dtype))
    return HomTable(t.graph, k, out.tolist())


def lift_connect(tl: HomTable, tr: HomTable, pairs: Sequence[LabelPair], g: Graph) -> HomTable:
    """
    X = X1 (왼쪽) + X2 (오른쪽) 분할에 대한 합, 가로지르는 간선은 (왼쪽 라벨, 오른쪽 라벨) in T

    가로지르는 간선에 제약이 없으면 (G 에 간선이 없거나 T = [k]^2) 랭크별 zeta/Mobius
    서로소 합성곱으로 n^2 (k+1)^n, 아니면 S 별 텐서 곱으로 (2k+1)^n 칸을 훑는다.
    """
    k = tl.k
    n = g.n
    pair_set = frozenset(pairs)
    bound = (n + 1) * 2**n * max(sum(tl.entries), 1) * max(sum(tr.entries), 1)
    dtype = _entry_dtype(bound)
    left = _tensor(tl.entries, n, k, dtype)
    right = _tensor(tr.entries, n, k, dtype)
    every_pair = {(a, b) for a in range(1, k + 1) for b in range(1, k + 1)}
    if not g.edges or pair_set >= every_pair:
        out = _disjoint_convolution(left, right, n)
    else:
        check_budget("connect split enumeration", (2 * k + 1) ** n, settings.budget)
        out = _split_convolution(left, right, pair_set, g, k)
    return HomTable(g, k, out.reshape(-1).tolist())


def count_copy_assignments(
    g: Graph,
    labels: Sequence[int],
    copy_mask: int,
    nvec: Sequence[int],
    tuples: frozenset,
) -> int:
    """|B|: X'' 위의 omega (1..nvec[label]) 중 X'' 에 닿는 모든 간선이 S 를 만족하는 개수"""
    n = g.n
    copies = [v for v in range(n) if copy_mask >> v & 1]
    omega = [0] * n

    # X' 쪽 끝점은 omega = 0 으로 고정
    constraints: List[List[int]] = []
    for v in copies:
        constraints.append(
            [u for u in g.neighbors(v) if labels[u] and (not copy_mask >> u & 1 or u < v)]
        )

    def visit(index: int) -> int:
        if index == len(copies):
            return 1
        v = copies[index]
        label = labels[v]
        total = 0
        for value in range(1, nvec[label - 1] + 1):
            ok = True
            for u in constraints[index]:
                if (label, value, labels[u], omega[u]) not in tuples:
                    ok = False
                    break
            if ok:
                omega[v] = value
                total += visit(index + 1)
        omega[v] = 0
        return total

    return visit(0)


def lift_beta(
    t: HomTable,
    nvec: Sequence[int],
    sigma: Sequence[int],
    tuples: frozenset,
    g: Graph,
    memoize: Optional[bool] = None,
) -> HomTable:
    """entry(gamma) = sum over C(gamma) of |B(gamma', gamma'')| * t(gamma' + gamma'')"""
    k = t.k
    n = g.n
    powers = radix_powers(n, k)
    child_entries = t.entries
    out = [0] * len(child_entries)
    child_labels = [0] * n
    use_memo = settings.memoize_beta_counts if memoize is None else memoize
    memo: Dict[Tuple[int, int], int] = {}

    # 정점별 선택지: (gamma 값, 자식 라벨, 복사본 여부)
    options: List[Tuple[int, int, bool]] = []
    for label in range(1, k + 1):
        options.append((label, label, False))
        if nvec[label - 1] >= 1:
            options.append((sigma[label - 1], label, True))
    check_budget("beta lift states", (len(options) + 1) ** n, settings.budget)

    def visit(v: int, code: int, child_code: int, copy_mask: int) -> None:
        if v == n:
            value = child_entries[child_code]
            if not value:
                return
            if not copy_mask:
                out[code] += value
                return
            if use_memo:
                key = (child_code, copy_mask)
                count = memo.get(key)
                if count is None:
                    count = memo[key] = count_copy_assignments(
                        g, child_labels, copy_mask, nvec, tuples
                    )
            else:
                count = count_copy_assignments(g, child_labels, copy_mask, nvec, tuples)
            if count:
                out[code] += value * count
            return
        child_labels[v] = 0
        visit(v + 1, code, child_code, copy_mask)
        power = powers[v]
        for image, label, is_copy in options:
            child_labels[v] = label
            visit(
                v + 1,
                code + image * power,
                child_code + label * power,
                copy_mask | (1 << v) if is_copy else copy_mask,
            )
        child_labels[v] = 0

    visit(0, 0, 0, 0)
    return HomTable(g, k, out)


def _build_table(g: Graph, k: int, node: ExtNode) -> HomTable:
    start = time.perf_counter()
    if isinstance(node, Vertex):
        table = base_table(g, k, node.label)
        kind = "vertex"
    elif isinstance(node, Relabel):
        chain, base = collect_relabel_chain(node)
        table = lift_relabel(_build_table(g, k, base), compose_relabels(chain, k))
        kind = f"relabel x{len(chain)}"
    elif isinstance(node, Connect):
        left = _build_table(g, k, node.left)
        right = _build_table(g, k, node.right)
        table = lift_connect(left, right, tuple(node.pairs), g)
        kind = "connect"
    elif isinstance(node, Beta):
        table = lift_beta(_build_table(g, k, node.child), node.nvec, node.sigma, node.tuples, g)
        kind = "beta"
    else:
        raise MalformedExpressionError(f"Unknown extended node {type(node).__name__}")
    logger.debug(f"Lifted {kind} table ({table.size} entries, {time.perf_counter() - start:.3f}s)")
    return table


def table_for_expr(g: Graph, expr: ExtExpr) -> HomTable:
    """루트 부분식까지 처리한 테이블"""
    if g.n == 0:
        raise InvalidInputError("Source graph must be nonempty")
    # 테이블 크기만 본다. connect 분할과 beta 상태 수는 각 lift 에서 settings.budget 로 잰다
    check_budget("expression DP table", (expr.k + 1) ** g.n, settings.table_budget)
    return _build_table(g, expr.k, expr.root)


@log_function_call(logger)
def count_hom_via_expr(g: Graph, expr: ExtExpr) -> int:
    """hom(G, H) where H = eval_ext(expr)"""
    table = table_for_expr(g, expr)
    total = table.full_total()
    logger.debug(f"hom via expression: n={g.n}, k={expr.k} -> {total}")
    return total


def expression_hom_counter(expr: ExtExpr) -> Callable[[Graph, Graph], int]:
    """SubdividedInstance.hom_to_u 로 꽂을 수 있는 카운터 (U = eval_ext(expr))"""
    target_size = eval_ext(expr).n

    def counter(c: Graph, u: Graph) -> int:
        if u.n != target_size:
            raise InvalidInputError(
                f"Expression evaluates to {target_size} vertices but U has {u.n}"
            )
        return count_hom_via_expr(c, expr)

    return counter
