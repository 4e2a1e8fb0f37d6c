"""Command registry."""

import logging
from typing import Any, Callable

from src.commands.handlers import (
    cmd_accept,
    cmd_bounds,
    cmd_fig,
    cmd_gamma,
    cmd_lp,
    cmd_simulate,
    cmd_verify_dual,
)
from src.commands.records import OutputRecord
from src.commands.schemas import validate_command_input
from src.errors import UsageError

logger = logging.getLogger(__name__)


# 명령 레지스트리
COMMANDS: dict[str, Callable[..., OutputRecord]] = {
    "bounds": cmd_bounds,
    "fig": cmd_fig,
    "verify-dual": cmd_verify_dual,
    "simulate": cmd_simulate,
    "lp": cmd_lp,
    "gamma": cmd_gamma,
    "accept": cmd_accept,
}


def get_command(name: str) -> Callable[..., OutputRecord] | None:
    """명령 함수 반환."""
    return COMMANDS.get(name)


def get_all_commands() -> dict[str, Callable[..., OutputRecord]]:
    """모든 명령 반환."""
    return COMMANDS.copy()


def run_command(name: str, params: dict[str, Any]) -> OutputRecord:
    """명령 실행 (스키마 기반 검증 포함).

    Args:
        name: 명령 이름
        params: 원시 파라미터 (argparse 결과 등)

    Returns:
        OutputRecord

    Raises:
        UsageError: 알 수 없는 명령, 스키마 검증 실패, 도메인 타입 검증 실패
    """
    command_fn = get_command(name)
    if command_fn is None:
        raise UsageError(f"알 수 없는 명령: {name}")

    # 스키마 기반 입력 검증 및 정규화
    validated = validate_command_input(name, params)
    logger.info("command %s %s", name, validated)
    try:
        return command_fn(**validated)
    except UsageError:
        raise
    except ValueError as e:
        # 도메인 타입 검증(ValidationError 포함)과 전제조건 위반은 사용 오류
        raise UsageError(f"{type(e).__name__}: {e}") from e
