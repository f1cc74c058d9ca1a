from typing import Any, Dict, Optional


class HomCountError(Exception):
    """homcount 공통 예외"""

    error_code: str = "HOMCOUNT_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class InvalidInputError(HomCountError, ValueError):
    """잘못된 그래프/라벨/파라미터 입력"""

    error_code = "INVALID_INPUT"


class MalformedExpressionError(InvalidInputError):
    """형식이 맞지 않는 (확장) k-expression"""

    error_code = "MALFORMED_EXPRESSION"


class UnsafeExpressionError(InvalidInputError):
    """safe 하지 않은 classic k-expression"""

    error_code = "UNSAFE_EXPRESSION"


class BudgetExceededError(HomCountError):
    """열거 공간이 설정된 예산을 초과"""

    error_code = "BUDGET_EXCEEDED"


class DivisibilityError(HomCountError):
    """Kneser 카운터의 (k!)^|V(G)| 나눗셈 검증 실패 (구현 버그 신호)"""

    error_code = "DIVISIBILITY_VIOLATION"


def check_budget(what: str, required: int, limit: int) -> None:
    """required 가 limit 을 넘으면 BudgetExceededError"""
    if required > limit:
        raise BudgetExceededError(
            f"{what} needs {required} steps, budget is {limit}",
            details={"what": what, "required": required, "limit": limit},
        )
