"""
순서 있는 집합 분할 가중합 par(f) 와 n-색칠 개수

par(f, n) = sum_{(P_1..P_n) 서로소, 합집합 M} prod f(P_i)  (빈 블록 허용, 가중치 f(空))

랭크(원소 수) 별 zeta 변환 -> 랭크 다항식의 n 제곱 (차수 m 에서 절단)
-> 랭크 m 행의 Mobius 변환 -> M 에서 추출.
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..utils.logger import get_logger, log_function_call
from .config import settings
from .errors import BudgetExceededError, InvalidInputError
from .graph import Graph

logger = get_logger("partition")

INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class SetFunction:
    """ground set 크기 m 과 부분집합 비트마스크로 인덱싱된 값 테이블"""

    m: int
    values: tuple

    def __post_init__(self) -> None:
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if self.m < 0:
            raise InvalidInputError(f"Ground set size must be non-negative, got {self.m}")
        if self.m > settings.partition_max_ground:
            raise BudgetExceededError(
                f"Ground set size {self.m} exceeds guard {settings.partition_max_ground}",
                details={"m": self.m},
            )
        if len(values) != 1 << self.m:
            raise InvalidInputError(f"SetFunction needs {1 << self.m} values, got {len(values)}")
        if any(v < 0 for v in values):
            raise InvalidInputError("SetFunction values must be non-negative")

    @classmethod
    def constant(cls, m: int, value: int = 1) -> "SetFunction":
        return cls(m, (value,) * (1 << m))


def _popcounts(m: int) -> np.ndarray:
    counts = np.zeros(1 << m, dtype=np.int64)
    index = np.arange(1 << m, dtype=np.int64)
    for bit in range(m):
        counts += (index >> bit) & 1
    return counts


def _choose_dtype(f: SetFunction, n: int) -> object:
    """정확도를 잃지 않는 한 int64, 아니면 파이썬 int (object)"""
    size = 1 << f.m
    largest = max(f.values) if f.values else 0
    zeta_bound = size * max(largest, 1)
    if size * zeta_bound**n < INT64_SAFE:
        return np.int64
    return object


def ranked_zeta(f: SetFunction, dtype: object = object) -> np.ndarray:
    """ranked[r, X] = sum_{Y subset X, |Y| = r} f(Y)"""
    size = 1 << f.m
    ranked = np.zeros((f.m + 1, size), dtype=dtype)
    values = np.array(f.values, dtype=dtype)
    ranked[_popcounts(f.m), np.arange(size)] = values
    for bit in range(f.m):
        view = ranked.reshape(f.m + 1, -1, 2, 1 << bit)
        view[:, :, 1, :] += view[:, :, 0, :]
    return ranked


def _truncated_product(a: np.ndarray, b: np.ndarray, degree: int) -> np.ndarray:
    """랭크 축(0) 방향 다항식 곱, degree 에서 절단"""
    out = np.zeros_like(a)
    for d in range(degree + 1):
        acc = a[0] * b[d]
        for r in range(1, d + 1):
            acc = acc + a[r] * b[d - r]
        out[d] = acc
    return out


def _rank_power(ranked: np.ndarray, n: int, degree: int) -> np.ndarray:
    """점별 n 제곱 (제곱을 반복)"""
    result = np.zeros_like(ranked)
    result[0] = 1
    base = ranked
    exponent = n
    while exponent:
        if exponent & 1:
            result = _truncated_product(result, base, degree)
        exponent >>= 1
        if exponent:
            base = _truncated_product(base, base, degree)
    return result


def mobius(row: np.ndarray, m: int) -> np.ndarray:
    """g(X) = sum_{Y subset X} (-1)^{|X - Y|} row(Y)"""
    out = row.copy()
    for bit in range(m):
        view = out.reshape(-1, 2, 1 << bit)
        view[:, 1, :] -= view[:, 0, :]
    return out


@log_function_call(logger)
def par(f: SetFunction, n: int) -> int:
    """순서 있는 n-분할 가중합"""
    if n < 1:
        raise InvalidInputError(f"Part count must be >= 1, got {n}")
    dtype = _choose_dtype(f, n)
    ranked = ranked_zeta(f, dtype)
    powered = _rank_power(ranked, n, f.m)
    top = mobius(powered[f.m], f.m)
    result = int(top[-1])
    logger.debug(f"par: m={f.m}, n={n}, dtype={getattr(dtype, '__name__', dtype)} -> {result}")
    return result


def independence_indicator(g: Graph) -> SetFunction:
    """f(S) = 1 iff S 가 독립 집합"""
    if g.n > settings.partition_max_ground:
        raise BudgetExceededError(
            f"Graph has {g.n} vertices, partition guard is {settings.partition_max_ground}"
        )
    size = 1 << g.n
    indicator: List[int] = [0] * size
    indicator[0] = 1
    adjacency = g.adjacency
    for mask in range(1, size):
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        indicator[mask] = 1 if indicator[rest] and not adjacency[v] & rest else 0
    return SetFunction(g.n, tuple(indicator))


@log_function_call(logger)
def count_colorings(g: Graph, n: int) -> int:
    """proper n-색칠 개수 = hom(G, K_n)"""
    return par(independence_indicator(g), n)


def count_colorings_subset_dp(g: Graph, n: int) -> int:
    """N(S, l) = sum_{S' subset S 독립} N(S - S', l - 1) 로 hom(G, K_n) 계산 (3^|V| 시간)"""
    if n < 1:
        raise InvalidInputError(f"Color count must be >= 1, got {n}")
    if g.n > settings.partition_max_ground:
        raise BudgetExceededError(
            f"Graph has {g.n} vertices, partition guard is {settings.partition_max_ground}"
        )
    indicator = independence_indicator(g).values
    size = 1 << g.n
    # l = 1: S 전체가 한 색
    counts: Sequence[int] = [indicator[mask] for mask in range(size)]
    for _ in range(2, n + 1):
        nxt = [0] * size
        for mask in range(size):
            total = 0
            sub = mask
            while True:
                if indicator[sub]:
                    total += counts[mask ^ sub]
                if sub == 0:
                    break
                sub = (sub - 1) & mask
            nxt[mask] = total
        counts = nxt
    return counts[size - 1]
