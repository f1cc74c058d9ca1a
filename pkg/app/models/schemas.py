from datetime import datetime
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError

from ..core.errors import InvalidInputError, MalformedExpressionError
from ..core.expr import (
    AddEdges,
    Beta,
    ClassicExpr,
    ClassicRelabel,
    ClassicVertex,
    Connect,
    DisjointUnion,
    ExtExpr,
    Relabel,
    Vertex,
)
from ..core.graph import Graph, LabeledGraph

# ---------------------------------------------------------------------------
# 그래프
# ---------------------------------------------------------------------------


class GraphDocument(BaseModel):
    """그래프 JSON (정점 0..n-1, 라벨은 1-based, 선택)"""

    n: int = Field(..., ge=0, description="정점 수")
    edges: List[Tuple[int, int]] = Field(default=[], description="간선 목록")
    labels: Optional[List[int]] = Field(None, description="정점 라벨 (1..k)")
    k: Optional[PositiveInt] = Field(None, description="라벨 알파벳 크기")

    def to_graph(self) -> Graph:
        return Graph(self.n, self.edges)

    def to_labeled_graph(self) -> LabeledGraph:
        if self.labels is None:
            raise InvalidInputError("Graph document has no labels")
        k = self.k if self.k is not None else max(self.labels, default=1)
        return LabeledGraph(self.to_graph(), k, tuple(self.labels))

    @classmethod
    def from_graph(cls, g: Union[Graph, LabeledGraph]) -> "GraphDocument":
        if isinstance(g, LabeledGraph):
            return cls(n=g.n, edges=g.graph.edge_list(), labels=list(g.labels), k=g.k)
        return cls(n=g.n, edges=g.edge_list())


# ---------------------------------------------------------------------------
# 표현식 ("op" 으로 구분)
# ---------------------------------------------------------------------------


class _Node(BaseModel):
    """노드 공통: 키는 JSON 별칭 (from, to, t, s), 모르는 키는 거부"""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")


class VertexNode(_Node):
    op: Literal["vertex"] = "vertex"
    label: int


class RelabelNode(_Node):
    op: Literal["relabel"] = "relabel"
    source: int = Field(..., alias="from")
    target: int = Field(..., alias="to")
    child: "ExprNode"


class ConnectNode(_Node):
    op: Literal["connect"] = "connect"
    pairs: List[Tuple[int, int]] = Field(default=[], alias="t")
    left: "ExprNode"
    right: "ExprNode"


class BetaNode(_Node):
    op: Literal["beta"] = "beta"
    nvec: List[int]
    sigma: List[int]
    tuples: List[Tuple[int, int, int, int]] = Field(default=[], alias="s")
    child: "ExprNode"


class AddEdgesNode(_Node):
    op: Literal["add_edges"] = "add_edges"
    first: int
    second: int
    child: "ExprNode"


class UnionNode(_Node):
    op: Literal["union"] = "union"
    left: "ExprNode"
    right: "ExprNode"


ExprNode = Annotated[
    Union[VertexNode, RelabelNode, ConnectNode, BetaNode, AddEdgesNode, UnionNode],
    Field(discriminator="op"),
]

for _model in (RelabelNode, ConnectNode, BetaNode, AddEdgesNode, UnionNode):
    _model.model_rebuild()


def _to_ext(node: Any) -> Any:
    if isinstance(node, VertexNode):
        return Vertex(node.label)
    if isinstance(node, RelabelNode):
        return Relabel(node.source, node.target, _to_ext(node.child))
    if isinstance(node, ConnectNode):
        return Connect(frozenset(node.pairs), _to_ext(node.left), _to_ext(node.right))
    if isinstance(node, BetaNode):
        return Beta(
            tuple(node.nvec), tuple(node.sigma), frozenset(node.tuples), _to_ext(node.child)
        )
    raise MalformedExpressionError(f"Operator '{node.op}' is not allowed in an extended expression")


def _to_classic(node: Any) -> Any:
    if isinstance(node, VertexNode):
        return ClassicVertex(node.label)
    if isinstance(node, RelabelNode):
        return ClassicRelabel(node.source, node.target, _to_classic(node.child))
    if isinstance(node, AddEdgesNode):
        return AddEdges(node.first, node.second, _to_classic(node.child))
    if isinstance(node, UnionNode):
        return DisjointUnion(_to_classic(node.left), _to_classic(node.right))
    raise MalformedExpressionError(f"Operator '{node.op}' is not allowed in a classic expression")


def _from_node(node: Any) -> Any:
    if isinstance(node, (Vertex, ClassicVertex)):
        return VertexNode(label=node.label)
    if isinstance(node, (Relabel, ClassicRelabel)):
        return RelabelNode(source=node.source, target=node.target, child=_from_node(node.child))
    if isinstance(node, Connect):
        return ConnectNode(
            pairs=sorted(node.pairs), left=_from_node(node.left), right=_from_node(node.right)
        )
    if isinstance(node, Beta):
        return BetaNode(
            nvec=list(node.nvec),
            sigma=list(node.sigma),
            tuples=sorted(node.tuples),
            child=_from_node(node.child),
        )
    if isinstance(node, AddEdges):
        return AddEdgesNode(first=node.first, second=node.second, child=_from_node(node.child))
    if isinstance(node, DisjointUnion):
        return UnionNode(left=_from_node(node.left), right=_from_node(node.right))
    raise MalformedExpressionError(f"Unknown expression node {type(node).__name__}")


class ExpressionDocument(BaseModel):
    """k-expression JSON"""

    model_config = ConfigDict(extra="forbid")

    k: PositiveInt = Field(..., description="라벨 알파벳 크기")
    kind: Literal["extended", "classic"] = Field("extended", description="표현식 종류")
    root: ExprNode = Field(..., description="루트 노드")

    def to_expr(self) -> Union[ExtExpr, ClassicExpr]:
        if self.kind == "classic":
            return ClassicExpr(self.k, _to_classic(self.root))
        return ExtExpr(self.k, _to_ext(self.root))

    def to_ext_expr(self) -> ExtExpr:
        expr = self.to_expr()
        if not isinstance(expr, ExtExpr):
            raise MalformedExpressionError("Expected an extended expression")
        return expr

    @classmethod
    def from_expr(cls, expr: Union[ExtExpr, ClassicExpr]) -> "ExpressionDocument":
        kind = "classic" if isinstance(expr, ClassicExpr) else "extended"
        return cls(k=expr.k, kind=kind, root=_from_node(expr.root))


# ---------------------------------------------------------------------------
# 파싱 경계
# ---------------------------------------------------------------------------


def _validation_details(exc: ValidationError) -> Dict[str, Any]:
    return {"errors": [f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors()]}


def parse_graph(text: str) -> GraphDocument:
    try:
        return GraphDocument.model_validate_json(text)
    except ValidationError as e:
        raise InvalidInputError("Invalid graph document", details=_validation_details(e)) from e


def parse_expression(text: str) -> ExpressionDocument:
    try:
        return ExpressionDocument.model_validate_json(text)
    except ValidationError as e:
        raise MalformedExpressionError(
            "Invalid expression document", details=_validation_details(e)
        ) from e


def graph_to_json(g: Union[Graph, LabeledGraph]) -> str:
    return GraphDocument.from_graph(g).model_dump_json(exclude_none=True)


def graph_from_json(text: str) -> Graph:
    return parse_graph(text).to_graph()


def labeled_graph_from_json(text: str) -> LabeledGraph:
    return parse_graph(text).to_labeled_graph()


def expr_to_json(expr: Union[ExtExpr, ClassicExpr]) -> str:
    return ExpressionDocument.from_expr(expr).model_dump_json(by_alias=True)


def expr_from_json(text: str) -> Union[ExtExpr, ClassicExpr]:
    return parse_expression(text).to_expr()


# ---------------------------------------------------------------------------
# CLI 실행 설정 / 보고서
# ---------------------------------------------------------------------------

CountMethod = Literal["auto", "bruteforce", "expression", "subdivided", "kneser", "bounded-degree"]


class RunConfig(BaseModel):
    """한 번의 CLI 실행 설정"""

    command: str = Field(..., description="서브커맨드")
    graph_path: Optional[str] = Field(None, description="-G 그래프 파일")
    target_path: Optional[str] = Field(None, description="-H 타깃 그래프 파일")
    expr_path: Optional[str] = Field(None, description="--expr 표현식 파일")
    method: CountMethod = Field("auto", description="개수 계산 방법")
    kneser: Optional[Tuple[PositiveInt, PositiveInt]] = Field(None, description="KG(n, k)")
    subdivided: Optional[Tuple[PositiveInt, str]] = Field(None, description="(n, U 파일)")
    budget: Optional[PositiveInt] = Field(None, description="brute-force 예산")
    output: Optional[str] = Field(None, description="출력 파일")
    seed: int = Field(0, description="검증 시드")
    cases: Optional[PositiveInt] = Field(None, description="스위트별 사례 수")
    suites: Optional[List[str]] = Field(None, description="실행할 검증 스위트")
    k: Optional[PositiveInt] = Field(None, description="synth 라벨 알파벳 크기")
    family: Optional[str] = Field(None, description="gen 그래프 패밀리")
    params: List[str] = Field(default=[], description="gen 파라미터")
    expression: bool = Field(False, description="gen hypercube 를 표현식으로 출력")
    inputs: List[str] = Field(default=[], description="eval / iso 입력 파일")
    gadget: bool = Field(False, description="iso 가젯 쌍 출력")


class SuiteResult(BaseModel):
    """검증 스위트 결과"""

    name: str = Field(..., description="스위트 이름")
    cases: int = Field(..., description="사례 수")
    mismatches: int = Field(..., description="불일치 수")
    seconds: float = Field(..., description="소요 시간")


class VerifyReport(BaseModel):
    """cmd_verify 보고서"""

    seed: int = Field(..., description="시드")
    suites: List[SuiteResult] = Field(default=[], description="스위트 결과")
    ok: bool = Field(..., description="불일치 없음")
    failures: List[str] = Field(default=[], description="불일치 설명 (앞부분)")


class GadgetDocument(BaseModel):
    """iso --gadget 출력"""

    g_prime: GraphDocument
    h_prime: GraphDocument
    q: int
    n: int


class ErrorResponse(BaseModel):
    """에러 응답"""

    error: str = Field(..., description="에러 메시지")
    error_code: Optional[str] = Field(None, description="에러 코드")
    details: Optional[Dict[str, Any]] = Field(None, description="상세 정보")
    timestamp: datetime = Field(default_factory=datetime.now, description="에러 발생 시간")
