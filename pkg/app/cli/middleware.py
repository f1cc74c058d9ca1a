import time
import traceback
import uuid
from typing import Callable

from ..core.config import settings
from ..core.errors import (
    BudgetExceededError,
    DivisibilityError,
    HomCountError,
    InvalidInputError,
)
from ..models.schemas import ErrorResponse, RunConfig
from ..utils.logger import get_logger

logger = get_logger("middleware")

EXIT_INVALID_INPUT = 2
EXIT_BUDGET = 3
EXIT_DIVISIBILITY = 4
EXIT_UNEXPECTED = 70


def exit_code_for(error: BaseException) -> int:
    """예외 -> 종료 코드"""
    if isinstance(error, BudgetExceededError):
        return EXIT_BUDGET
    if isinstance(error, DivisibilityError):
        return EXIT_DIVISIBILITY
    if isinstance(error, (InvalidInputError, ValueError)):
        return EXIT_INVALID_INPUT
    return EXIT_UNEXPECTED


def _error_response(error: BaseException, run_id: str) -> ErrorResponse:
    if isinstance(error, HomCountError):
        return ErrorResponse(
            error=error.message,
            error_code=error.error_code,
            details={"run_id": run_id, **error.details},
        )
    return ErrorResponse(
        error=str(error) or type(error).__name__,
        error_code="INTERNAL_ERROR",
        details={"run_id": run_id, "type": type(error).__name__},
    )


def run_command(handler: Callable[[RunConfig], int], config: RunConfig) -> int:
    """실행 ID / 소요 시간 로깅과 예외 -> 종료 코드 변환"""
    run_id = str(uuid.uuid4())[:8]
    start_time = time.time()
    logger.info(f"[{run_id}] {config.command} started")

    if settings.debug:
        logger.debug(f"[{run_id}] Run config: {config.model_dump(exclude_defaults=True)}")

    try:
        status = handler(config)
        process_time = time.time() - start_time
        logger.info(f"[{run_id}] {config.command} finished with {status} ({process_time:.3f}s)")
        return status

    except KeyboardInterrupt:
        logger.warning(f"[{run_id}] Interrupted")
        return 130

    except Exception as e:
        process_time = time.time() - start_time
        code = exit_code_for(e)
        message = e.message if isinstance(e, HomCountError) else str(e)
        if code == EXIT_UNEXPECTED:
            logger.critical(f"[{run_id}] Unexpected error ({process_time:.3f}s): {message}")
        else:
            logger.error(f"[{run_id}] {message}")

        # 상세 오류 (디버그 모드에서만)
        if settings.debug:
            logger.debug(f"[{run_id}] {_error_response(e, run_id).model_dump_json()}")
            logger.debug(f"[{run_id}] Detailed error:\n{traceback.format_exc()}")
        return code
