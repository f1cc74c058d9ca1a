"""
세분된 클리크와 Kneser 그래프로의 준동형 사상 개수

세분 클리크 H = K_n 을 U 로 세분:
  H_A = 클리크 정점 v_1..v_n, H_B = U 복사본들
  G 의 2-분할 (A, B), A 독립 에 대해 "(A, B) 와 consistent" 한 사상만 센다.
  A 가 비어 있지 않으면 ground set S = A + {C0, C1 : C 는 G[B] 의 성분} 위의 f 로 par(f, n).
Kneser: hom(G, KG_{n,k}) = hom(G^(k), K_n) / (k!)^|V(G)|
"""

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable, Dict, Iterable, List

from ..utils.logger import get_logger, log_function_call
from .config import settings
from .errors import DivisibilityError, InvalidInputError, check_budget
from .graph import Graph, blowup, connected_components, induced_subgraph, mask_to_vertices
from .oracle import brute_hom
from .partition import SetFunction, count_colorings, par

logger = get_logger("special")

HomCounter = Callable[[Graph, Graph], int]


@dataclass(frozen=True)
class SubdividedInstance:
    g: Graph
    n: int
    u: Graph
    hom_to_u: HomCounter = field(default=brute_hom, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidInputError(f"Clique size must be >= 1, got {self.n}")
        if self.u.n < 1:
            raise InvalidInputError("Subdivision graph U must be nonempty")


@dataclass(frozen=True)
class KneserInstance:
    g: Graph
    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 1:
            raise InvalidInputError(f"Kneser parameters must be >= 1, got n={self.n}, k={self.k}")


def count_hom_by_components(g: Graph, counter: Callable[[Graph], int]) -> int:
    """연결 성분별 개수의 곱"""
    total = 1
    for component in connected_components(g):
        total *= counter(induced_subgraph(g, component))
        if not total:
            break
    return total


@dataclass(frozen=True)
class _Component:
    vertices: int  # G 안의 비트마스크
    attachments: int  # N(C) (A 안의 비트마스크)
    anchor: int  # s_C
    hom_count: int


def _split_components(g: Graph, a_mask: int, u: Graph, hom_to_u: HomCounter) -> List[_Component]:
    b_vertices = [v for v in range(g.n) if not a_mask >> v & 1]
    components = []
    for component in connected_components(induced_subgraph(g, b_vertices)):
        vertices = 0
        for local in component:
            vertices |= 1 << b_vertices[local]
        attachments = 0
        for v in mask_to_vertices(vertices):
            attachments |= g.adjacency[v] & a_mask
        sub = induced_subgraph(g, mask_to_vertices(vertices))
        components.append(
            _Component(
                vertices=vertices,
                attachments=attachments,
                anchor=(attachments & -attachments).bit_length() - 1,
                hom_count=hom_to_u(sub, u),
            )
        )
    return components


def split_set_function(
    g: Graph, a_mask: int, n: int, u: Graph, hom_to_u: HomCounter = brute_hom
) -> SetFunction:
    """(A, B) 분할에 대한 f 를 2^|S| 테이블로 만든다"""
    a_list = mask_to_vertices(a_mask)
    components = _split_components(g, a_mask, u, hom_to_u)
    for component in components:
        if not component.attachments:
            raise InvalidInputError("Split leaves a component with no neighbour in A")
    m = len(a_list) + 2 * len(components)
    check_budget("subdivided counter work", (1 << g.n) * (1 << m), settings.budget)

    # ground set: A 정점들 (비트 0..|A|-1), 이후 성분마다 C0, C1
    a_bit = {v: i for i, v in enumerate(a_list)}
    base = len(a_list)
    c0_bits = [1 << (base + 2 * i) for i in range(len(components))]
    c1_bits = [1 << (base + 2 * i + 1) for i in range(len(components))]
    attach_bits = []
    anchor_bits = []
    for component in components:
        bits = 0
        for v in mask_to_vertices(component.attachments):
            bits |= 1 << a_bit[v]
        attach_bits.append(bits)
        anchor_bits.append(1 << a_bit[component.anchor])

    values = [0] * (1 << m)
    a_part = (1 << base) - 1
    for x in range(1 << m):
        x_a = x & a_part
        value = 1
        for i in range(len(components)):
            has0 = bool(x & c0_bits[i])
            has1 = bool(x & c1_bits[i])
            touches = bool(x_a & attach_bits[i])
            # X 의 A 원소가 N(C) 에 있는데 C0, C1 둘 다 없음
            if touches and not has0 and not has1:
                value = 0
                break
            # C0 또는 C1 이 있는데 N(C) 원소가 X 에 없음
            if (has0 or has1) and not touches:
                value = 0
                break
            # C1 이 있는데 s_C 가 없음
            if has1 and not x_a & anchor_bits[i]:
                value = 0
                break
            if has0 and has1:
                value *= (n - 1) * components[i].hom_count
            elif has1:
                value *= components[i].hom_count
        values[x] = value
    return SetFunction(m, tuple(values))


def count_consistent_with_split(
    g: Graph, a_vertices: Iterable[int], n: int, u: Graph, hom_to_u: HomCounter = brute_hom
) -> int:
    """H_A 의 역상이 정확히 A 인 준동형 사상 개수 (G 연결)"""
    a_mask = 0
    for v in a_vertices:
        a_mask |= 1 << v
    if not g.is_independent(a_mask):
        return 0
    if not a_mask:
        # 연결된 G 는 U_ij 하나에 통째로 들어간다
        return comb(n, 2) * hom_to_u(g, u)
    return par(split_set_function(g, a_mask, n, u, hom_to_u), n)


def _count_subdivided_connected(g: Graph, inst: SubdividedInstance) -> int:
    total = 0
    splits = 0
    for a_mask in range(1 << g.n):
        if not g.is_independent(a_mask):
            continue
        splits += 1
        total += count_consistent_with_split(
            g, mask_to_vertices(a_mask), inst.n, inst.u, inst.hom_to_u
        )
    logger.debug(f"subdivided: {splits} independent splits for component of size {g.n}")
    return total


@log_function_call(logger)
def count_hom_subdivided(inst: SubdividedInstance) -> int:
    """hom(G, subdivide_clique(n, U)); 비연결 G 는 성분별 곱"""
    if inst.g.n == 0:
        return 1
    return count_hom_by_components(inst.g, lambda c: _count_subdivided_connected(c, inst))


@log_function_call(logger)
def count_hom_kneser(inst: KneserInstance) -> int:
    """블로우업의 n-색칠 개수를 (k!)^|V(G)| 로 나눈 값"""
    g, n, k = inst.g, inst.n, inst.k
    check_budget("Kneser blow-up vertices", k * g.n, settings.partition_max_ground)
    colorings = count_colorings(blowup(g, k), n)
    divisor = factorial(k) ** g.n
    quotient, remainder = divmod(colorings, divisor)
    if remainder:
        raise DivisibilityError(
            f"{colorings} colorings of the blow-up are not divisible by (k!)^|V(G)| = {divisor}",
            details={"colorings": colorings, "divisor": divisor},
        )
    logger.debug(f"Kneser KG({n},{k}): {colorings} / {divisor} = {quotient}")
    return quotient


def per_split_counts(inst: SubdividedInstance) -> Dict[int, int]:
    """독립 A 비트마스크 -> (A, B) 와 consistent 한 개수 (G 연결)"""
    g = inst.g
    return {
        a_mask: count_consistent_with_split(
            g, mask_to_vertices(a_mask), inst.n, inst.u, inst.hom_to_u
        )
        for a_mask in range(1 << g.n)
        if g.is_independent(a_mask)
    }
