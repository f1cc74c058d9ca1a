import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from app.cli.commands import HANDLERS
from app.cli.middleware import EXIT_INVALID_INPUT, run_command
from app.cli.parser import parse_args
from app.core.config import apply_overrides, config_summary, settings
from app.models.schemas import RunConfig
from app.utils.logger import get_logger, setup_logging

logger = get_logger("main")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """homcount 진입점"""
    args = parse_args(argv)

    if args.debug:
        settings.debug = True
    level = args.log_level or ("DEBUG" if settings.debug else settings.log_level)

    # 로깅 설정
    setup_logging(
        level=level,
        log_file=settings.log_file,
        enable_colors=settings.enable_log_colors,
        console_output=settings.console_output,
        file_log_level=settings.file_log_level,
    )

    try:
        apply_overrides(settings, budget=args.budget)
        options = {
            key: value
            for key, value in vars(args).items()
            if key in RunConfig.model_fields and value is not None
        }
        config = RunConfig(**options)
    except (ValidationError, ValueError) as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_INVALID_INPUT

    logger.debug("Current configuration:")
    for key, value in config_summary(settings).items():
        logger.debug(f"  {key}: {value}")

    return run_command(HANDLERS[config.command], config)


if __name__ == "__main__":
    sys.exit(main())
