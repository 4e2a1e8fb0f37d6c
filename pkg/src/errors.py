"""Domain exceptions.

입력 오류는 ValueError, 수치 실패는 RuntimeError 계열로 둔다.
"""


class PrecisionInsufficientError(RuntimeError):
    """설정된 정밀도로 Irwin-Hall 합의 상대오차 1e-9를 보장할 수 없음."""


class GridTooCoarseError(ValueError):
    """kink를 가로지르는 셀 비율이 허용치(20%)를 넘음."""


class TruncationInsufficientError(ValueError):
    """잘라낸 꼬리 영역의 해석적 상한이 허용치를 넘음."""


class SizeLimitError(ValueError):
    """LP 인스턴스가 크기 제한(m ≤ 2, type 수 n^m ≤ 625)을 넘음."""


class UsageError(ValueError):
    """CLI 인자 형식 오류."""
