"""revbounds CLI."""

import argparse
import logging
import sys

from pydantic import ValidationError

from src.commands import OutputFormat, OutputRecord, render, run_command, write_output
from src.config import settings
from src.errors import UsageError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def setup_logging(verbose: bool):
    """로깅 설정."""
    level = logging.INFO if verbose else getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[logging.StreamHandler(sys.stdout)],
    )
    # 그래프 런타임 로그는 verbose에서도 숨김
    logging.getLogger("langgraph").setLevel(logging.WARNING)


def _add_prior_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, help="아이템 수 (uniform)")
    parser.add_argument("--lambdas", help="쉼표로 구분한 exponential rate (예: 2,1)")


def build_parser() -> argparse.ArgumentParser:
    """명령행 파서."""
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="최적 수익 상한, 단순 메커니즘, dual certificate 점검 도구",
    )
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TABLE.value)
    parser.add_argument("--out", help="출력 파일 경로 (기본: stdout)")
    parser.add_argument("--verbose", "-v", action="store_true", help="진행 로그 출력")
    parser.add_argument("--precision-bits", type=int, help="Irwin-Hall 교대합 정밀도 (bits)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="폐형식 상한과 SRev/BRev")
    p.add_argument("setting", choices=["uniform", "exp"])
    _add_prior_args(p)

    p = sub.add_parser("fig", help="ratio 곡선, dual 편미분 지도 데이터")
    p.add_argument("which", choices=["1", "2", "dual"])
    p.add_argument("--max-m", dest="max_m", type=int, default=100)
    p.add_argument("--grid", type=int, default=50, help="dual 편미분 지도 격자")

    p = sub.add_parser("verify-dual", help="dual certificate 점검")
    p.add_argument("family", choices=["uniform", "uniform-trivial", "exp"])
    _add_prior_args(p)
    p.add_argument("--grid", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("simulate", help="메커니즘 Monte Carlo 수익")
    p.add_argument("mechanism", choices=["separate", "bundle", "proportional"])
    p.add_argument("--setting", choices=["uniform", "exp"])
    _add_prior_args(p)
    p.add_argument("--price", type=float, help="bundle 가격")
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--pairs", type=int, default=0, help="truthfulness 점검 쌍 수")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("lp", help="격자 LP oracle")
    p.add_argument("setting", choices=["uniform", "exp"])
    _add_prior_args(p)
    p.add_argument("--n", type=int, default=11, help="축당 격자점 수")
    p.add_argument("--quantile", type=float, default=0.999)

    p = sub.add_parser("gamma", help="γ*_m, G(m)")
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("accept", help="acceptance 점검 실행")
    p.add_argument("--criteria", help="쉼표로 구분한 criterion 번호 (기본: 전체)")
    p.add_argument("--quick", action="store_true", help="Monte Carlo 표본 수 축소")
    p.add_argument("--seed", type=int)
    return parser


def _failure_record(command: str, message: str) -> OutputRecord:
    record = OutputRecord(command=command)
    record.fail(message)
    return record


def _emit(record: OutputRecord, fmt: str, out: str | None) -> None:
    text = render(record, fmt)
    if out:
        path = write_output(text, out)
        logging.getLogger(__name__).info("wrote %s", path)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    """CLI 메인 함수. 종료 코드를 반환한다."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # 로깅 설정
    setup_logging(args.verbose)
    if args.precision_bits is not None:
        settings.precision_bits = args.precision_bits

    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "format", "out", "verbose", "precision_bits")
    }

    try:
        record = run_command(args.command, params)
        code = EXIT_OK if record.ok else EXIT_CHECK_FAILED
    except (UsageError, ValidationError) as e:
        record = _failure_record(args.command, f"usage: {e}")
        code = EXIT_USAGE
    except Exception as e:
        # fail-closed: 어떤 예외도 위반 목록이 있는 비정상 종료로
        record = _failure_record(args.command, f"{type(e).__name__}: {e}")
        code = EXIT_CHECK_FAILED

    try:
        _emit(record, args.format, args.out)
    except OSError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_CHECK_FAILED
    return code


if __name__ == "__main__":
    sys.exit(main())
