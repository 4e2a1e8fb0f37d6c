"""명령 입력 스키마 정의.

각 명령의 파라미터 타입/기본값을 정의하여 registry에서 검증.
"""

import math
from typing import Any, TypedDict

from src.errors import UsageError


class ParamSchema(TypedDict, total=False):
    """파라미터 스키마."""
    type: str  # "int", "float", "str", "bool", "lambdas", "ints"
    required: bool
    default: Any
    choices: list[str]
    description: str


class CommandSchema(TypedDict, total=False):
    """명령 스키마."""
    description: str
    input: dict[str, ParamSchema]


_SETTING: ParamSchema = {
    "type": "str",
    "required": True,
    "choices": ["uniform", "exp"],
    "description": "prior setting",
}
_M: ParamSchema = {"type": "int", "required": False, "default": None, "description": "아이템 수 (uniform)"}
_LAMBDAS: ParamSchema = {
    "type": "lambdas",
    "required": False,
    "default": None,
    "description": "쉼표로 구분한 exponential rate (예: '2,1')",
}
_SEED: ParamSchema = {"type": "int", "required": False, "default": None, "description": "64-bit seed"}


# 명령별 스키마 정의
COMMAND_SCHEMAS: dict[str, CommandSchema] = {
    "bounds": {
        "description": "폐형식 상한, SRev, BRev, 근사비 상한",
        "input": {"setting": _SETTING, "m": _M, "lambdas": _LAMBDAS},
    },
    "fig": {
        "description": "ratio 곡선 데이터 (1: uniform ratio, 2: exponential ratio, dual: m=2 dual 편미분)",
        "input": {
            "which": {"type": "str", "required": True, "choices": ["1", "2", "dual"]},
            "max_m": {"type": "int", "required": False, "default": 100},
            "grid": {"type": "int", "required": False, "default": 50},
        },
    },
    "verify-dual": {
        "description": "Dual certificate 수치 점검",
        "input": {
            "family": {"type": "str", "required": True, "choices": ["uniform", "uniform-trivial", "exp"]},
            "m": _M,
            "lambdas": _LAMBDAS,
            "grid": {"type": "int", "required": False, "default": None, "description": "축당 셀 수"},
            "seed": _SEED,
        },
    },
    "simulate": {
        "description": "메커니즘 Monte Carlo 수익 추정",
        "input": {
            "mechanism": {"type": "str", "required": True, "choices": ["separate", "bundle", "proportional"]},
            "setting": {**_SETTING, "required": False, "default": None},
            "m": _M,
            "lambdas": _LAMBDAS,
            "price": {"type": "float", "required": False, "default": None, "description": "bundle 가격"},
            "n": {"type": "int", "required": False, "default": 1_000_000, "description": "표본 수"},
            "pairs": {"type": "int", "required": False, "default": 0, "description": "truthfulness 점검 쌍 수"},
            "seed": _SEED,
        },
    },
    "lp": {
        "description": "격자 LP oracle",
        "input": {
            "setting": _SETTING,
            "m": _M,
            "lambdas": _LAMBDAS,
            "n": {"type": "int", "required": False, "default": 11, "description": "축당 격자점 수"},
            "quantile": {"type": "float", "required": False, "default": 0.999},
        },
    },
    "gamma": {
        "description": "γ*_m, G(m) 및 quadrature 대조",
        "input": {"m": {"type": "int", "required": True}},
    },
    "accept": {
        "description": "Acceptance 점검 그래프 실행",
        "input": {
            "criteria": {"type": "ints", "required": False, "default": None, "description": "실행할 criterion 번호"},
            "quick": {"type": "bool", "required": False, "default": False},
            "seed": _SEED,
        },
    },
}


def get_command_schema(name: str) -> CommandSchema | None:
    """명령 스키마 반환."""
    return COMMAND_SCHEMAS.get(name)


def parse_lambdas(text: str) -> list[float]:
    """'2,1' 형식의 rate 목록 파싱.

    Raises:
        UsageError: 빈 항목, 숫자가 아닌 항목, 양수가 아닌 rate
    """
    parts = [p.strip() for p in str(text).split(",")]
    if not parts or any(not p for p in parts):
        raise UsageError(f"λ 목록 형식 오류: {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError as e:
        raise UsageError(f"λ 목록 형식 오류: {text!r}") from e
    if any(not math.isfinite(v) or v <= 0 for v in values):
        raise UsageError(f"λ는 양의 유한수여야 합니다: {text!r}")
    return values


def _parse_ints(text: Any) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    try:
        return [int(p) for p in str(text).split(",") if p.strip()]
    except ValueError as e:
        raise UsageError(f"정수 목록 형식 오류: {text!r}") from e


def _convert(name: str, value: Any, schema: ParamSchema) -> Any:
    kind = schema.get("type", "str")
    try:
        if kind == "int":
            result = int(value)
        elif kind == "float":
            result = float(value)
        elif kind == "bool":
            result = bool(value)
        elif kind == "lambdas":
            result = list(value) if isinstance(value, (list, tuple)) else parse_lambdas(value)
        elif kind == "ints":
            result = _parse_ints(value)
        else:
            result = str(value)
    except (TypeError, ValueError) as e:
        if isinstance(e, UsageError):
            raise
        raise UsageError(f"파라미터 '{name}' 형식 오류: {value!r}") from e
    choices = schema.get("choices")
    if choices is not None and result not in choices:
        raise UsageError(f"파라미터 '{name}'는 {choices} 중 하나여야 합니다: {result!r}")
    return result


def validate_command_input(name: str, raw: dict[str, Any]) -> dict[str, Any]:
    """명령 입력 검증 및 정규화.

    Args:
        name: 명령 이름
        raw: 파라미터 dict (None 값은 누락으로 취급)

    Returns:
        스키마 순서의 정규화된 dict

    Raises:
        UsageError: 알 수 없는 명령, 필수 파라미터 누락, 형식 오류
    """
    schema = get_command_schema(name)
    if schema is None:
        raise UsageError(f"알 수 없는 명령: {name}")

    validated: dict[str, Any] = {}
    for param_name, param_schema in schema["input"].items():
        value = raw.get(param_name)
        if value is not None:
            validated[param_name] = _convert(param_name, value, param_schema)
        elif param_schema.get("required", False):
            raise UsageError(f"명령 '{name}'에 필수 파라미터 '{param_name}' 누락")
        else:
            validated[param_name] = param_schema.get("default")
    return validated
