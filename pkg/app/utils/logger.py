import functools
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Optional, TypeVar

F = TypeVar("F", bound=Callable[..., Any])

ROOT_LOGGER = "homcount"


class ColoredFormatter(logging.Formatter):
    """컬러 로그 포매터"""

    # ANSI 컬러 코드
    COLORS = {
        "DEBUG": "\033[36m",  # Cyan
        "INFO": "\033[32m",  # Green
        "WARNING": "\033[33m",  # Yellow
        "ERROR": "\033[31m",  # Red
        "CRITICAL": "\033[35m",  # Magenta
        "RESET": "\033[0m",
    }

    def format(self, record: logging.LogRecord) -> str:
        # 원본 레코드를 다른 핸들러와 공유하므로 복사본에 색을 입힌다
        colored = logging.makeLogRecord(record.__dict__)
        log_color = self.COLORS.get(record.levelname, self.COLORS["RESET"])
        colored.levelname = f"{log_color}{record.levelname}{self.COLORS['RESET']}"
        return super().format(colored)


def setup_logging(
    level: str = "WARNING",
    log_file: Optional[str] = None,
    enable_colors: bool = True,
    console_output: bool = True,
    file_log_level: str = "INFO",
) -> logging.Logger:
    """로깅 설정 초기화"""

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)

    logger = logging.getLogger(ROOT_LOGGER)
    console_level = getattr(logging, level.upper())
    file_level = getattr(logging, file_log_level.upper())
    logger.setLevel(min(console_level, file_level) if log_file else console_level)
    logger.propagate = False

    # 기존 핸들러 제거
    for handler in list(logger.handlers):
        handler.close()
    logger.handlers.clear()

    detailed_format = "%(asctime)s | %(name)s | %(levelname)s | %(module)s:%(lineno)d | %(message)s"
    simple_format = "%(asctime)s | %(levelname)s | %(message)s"

    # 콘솔 핸들러: stdout 은 결과 출력용이라 stderr 로 보낸다
    if console_output:
        console_handler = logging.StreamHandler(sys.stderr)
        if enable_colors and os.name != "nt" and sys.stderr.isatty():
            console_formatter: logging.Formatter = ColoredFormatter(simple_format)
        else:
            console_formatter = logging.Formatter(simple_format)
        console_handler.setFormatter(console_formatter)
        console_handler.setLevel(console_level)
        logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(detailed_format))
        file_handler.setLevel(file_level)
        logger.addHandler(file_handler)

        # 에러 전용 파일 핸들러
        error_log_file = str(Path(log_file).with_suffix("")) + "_error.log"
        error_handler = logging.FileHandler(error_log_file, encoding="utf-8")
        error_handler.setFormatter(logging.Formatter(detailed_format))
        error_handler.setLevel(logging.ERROR)
        logger.addHandler(error_handler)

    if not logger.handlers:
        logger.addHandler(logging.NullHandler())

    logger.debug("homcount logging system initialized")
    logger.debug(f"Log level: {level.upper()}")
    if log_file:
        logger.debug(f"Log file: {log_file}")

    return logger


def get_logger(name: str) -> logging.Logger:
    """모듈별 로거 반환"""
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


# 로그 데코레이터
def log_function_call(logger: logging.Logger) -> Callable[[F], F]:
    """함수 호출 로그 데코레이터"""

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            logger.debug(f"Starting {func.__name__}")
            try:
                result = func(*args, **kwargs)
                logger.debug(f"Completed {func.__name__}")
                return result
            except Exception as e:
                logger.error(f"Failed {func.__name__}: {str(e)}")
                raise

        return wrapper  # type: ignore[return-value]

    return decorator
