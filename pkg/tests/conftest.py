import json
import random
from pathlib import Path
from typing import Callable, Dict, Iterator, Optional

import pytest

from app.core.config import settings
from app.core.graph import Graph, gen_kneser

# 테스트마다 복원할 설정 필드
_TUNABLE = (
    "budget",
    "table_budget",
    "eval_max_vertices",
    "partition_max_ground",
    "synth_beta_max_k",
    "synth_max_s_classes",
    "memoize_beta_counts",
    "verify_cases",
    "debug",
)


@pytest.fixture(autouse=True)
def restore_settings() -> Iterator[None]:
    saved = {name: getattr(settings, name) for name in _TUNABLE}
    yield
    for name, value in saved.items():
        setattr(settings, name, value)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def petersen() -> Graph:
    return gen_kneser(5, 2)


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[..., str]:
    """dict 를 tmp_path 아래 JSON 파일로 쓰고 경로 문자열 반환"""

    def write(name: str, payload: Dict) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write


def graph_payload(g: Graph, labels: Optional[tuple] = None) -> Dict:
    payload: Dict = {"n": g.n, "edges": [list(e) for e in g.edge_list()]}
    if labels is not None:
        payload["labels"] = list(labels)
    return payload
