"""Application settings."""

import os
from dataclasses import dataclass, field
from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    """정수 환경변수 읽기 (비어 있으면 기본값)."""
    raw = os.getenv(name, "").strip()
    return int(raw) if raw else default


@dataclass
class Settings:
    """Application configuration."""

    # Irwin-Hall 교대합 작업 정밀도 (bits)
    precision_bits: int = field(
        default_factory=lambda: _env_int("REVBOUNDS_PRECISION_BITS", 256)
    )

    # 난수
    default_seed: int = field(
        default_factory=lambda: _env_int("REVBOUNDS_SEED", 42)
    )
    chunk_size: int = field(
        default_factory=lambda: _env_int("REVBOUNDS_CHUNK_SIZE", 1 << 20)
    )

    # 병렬 처리 (결과는 worker 수와 무관해야 함)
    max_workers: int = field(
        default_factory=lambda: _env_int("REVBOUNDS_MAX_WORKERS", 4)
    )

    # LP oracle
    lp_max_pivots: int = field(
        default_factory=lambda: _env_int("REVBOUNDS_LP_MAX_PIVOTS", 1_000_000)
    )

    # Quasi-random 적분 점 개수 = 2**qmc_log2_points
    qmc_log2_points: int = field(
        default_factory=lambda: _env_int("REVBOUNDS_QMC_LOG2_POINTS", 23)
    )

    log_level: str = field(
        default_factory=lambda: os.getenv("REVBOUNDS_LOG_LEVEL", "WARNING")
    )

    # 수치 상수
    bisection_max_iter: int = 200
    scan_points: int = 1000
    tail_width: float = 80.0  # 이상적분 절단 폭 (하한 기준)
    fd_step_exponential: float = 1e-3  # 5-point stencil

    # 출력
    display_digits: int = 9

    # App metadata
    app_name: str = "revbounds"
    app_version: str = "0.3.0"


settings = Settings()
