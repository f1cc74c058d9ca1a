from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """애플리케이션 설정"""

    model_config = SettingsConfigDict(
        env_prefix="HOMCOUNT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = "homcount"
    version: str = "1.0.0"
    description: str = "평범한 지수 시간(plain exponential) 그래프 준동형 사상 개수 계산 도구"

    # 로깅 설정
    log_level: str = Field(default="WARNING")
    file_log_level: str = Field(default="INFO")
    log_file: Optional[str] = Field(default=None)
    enable_log_colors: bool = Field(default=True)
    console_output: bool = Field(default=True)
    debug: bool = Field(default=False)

    # 예산 / 가드
    budget: int = Field(default=10**8, gt=0, description="열거와 lift 작업 예산")
    table_budget: int = Field(default=3**13, gt=0, description="(k+1)^|V(G)| 테이블 크기 상한")
    eval_max_vertices: int = Field(default=10**4, gt=0)
    partition_max_ground: int = Field(default=24, gt=0, le=30)

    # 합성(synthesis) 설정
    synth_beta_max_k: int = Field(default=2, ge=0)
    synth_max_s_classes: int = Field(default=14, ge=0)

    # DP 옵션
    memoize_beta_counts: bool = Field(default=False)

    # 검증 하네스
    verify_cases: int = Field(default=50, gt=0)

    def __init__(self, **kwargs: Any):
        super().__init__(**kwargs)

        # 로그 디렉토리 생성
        if self.log_file:
            Path(self.log_file).parent.mkdir(parents=True, exist_ok=True)


# 글로벌 설정 인스턴스
settings = Settings()


def load_config(env: Optional[str] = None) -> Settings:
    """환경별 설정 로드"""
    if env:
        env_file = f".env.{env}"
        if Path(env_file).exists():
            return Settings(_env_file=env_file)

    return Settings()


def apply_overrides(target: Settings, **values: Any) -> Settings:
    """CLI 플래그 값으로 설정 덮어쓰기 (None 은 무시)"""
    for key, value in values.items():
        if value is None:
            continue
        if key not in Settings.model_fields:
            raise KeyError(f"Unknown setting: {key}")
        if isinstance(value, int) and not isinstance(value, bool) and value <= 0:
            raise ValueError(f"{key} must be positive, got {value}")
        setattr(target, key, value)
    return target


def config_summary(settings: Settings) -> Dict[str, Any]:
    """설정 정보를 dict 로 반환"""
    return {
        "app_name": settings.app_name,
        "version": settings.version,
        "log_level": settings.log_level,
        "debug": settings.debug,
        "budget": settings.budget,
        "table_budget": settings.table_budget,
        "eval_max_vertices": settings.eval_max_vertices,
        "partition_max_ground": settings.partition_max_ground,
        "synth_beta_max_k": settings.synth_beta_max_k,
        "memoize_beta_counts": settings.memoize_beta_counts,
    }
