"""Menu mechanisms.

구매자는 메뉴에서 효용 a·x - p 가 최대인 옵션을 고른다.
메뉴에는 항상 null 옵션(할당 0, 가격 0)이 있으므로 IR이 보장되고,
유도된 효용은 affine 함수들의 max라서 convex이다 (IC는 구조적으로 성립).
"""

from abc import ABC, abstractmethod
from itertools import product

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class MenuOption(BaseModel):
    """메뉴 옵션 (할당 확률 벡터, 가격).

    Attributes:
        allocation: 아이템별 판매 확률 ∈ [0,1]
        price: 총 지불액 ≥ 0
    """

    model_config = ConfigDict(frozen=True)

    allocation: tuple[float, ...] = Field(min_length=1, description="할당 확률 벡터")
    price: float = Field(ge=0, description="가격")

    @field_validator("allocation")
    @classmethod
    def _check_allocation(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if any(not 0.0 <= a <= 1.0 for a in value):
            raise ValueError(f"할당 확률은 [0,1] 범위여야 합니다: {value}")
        return value

    @classmethod
    def null(cls, m: int) -> "MenuOption":
        return cls(allocation=(0.0,) * m, price=0.0)

    @property
    def is_null(self) -> bool:
        return self.price == 0.0 and not any(self.allocation)


class SellingMechanism(BaseModel, ABC):
    """판매 메커니즘 공통 인터페이스."""

    model_config = ConfigDict(frozen=True)

    label: str = Field(default="", description="설명용 태그")

    @property
    @abstractmethod
    def m(self) -> int:
        """아이템 수."""

    @abstractmethod
    def utility(self, x: np.ndarray) -> np.ndarray:
        """(n, m) 가치 행렬에 대한 구매자 효용 (n,)."""

    @abstractmethod
    def outcome(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """최적 반응 결과 (할당 (n, m), 지불액 (n,))."""

    @abstractmethod
    def to_menu(self) -> "Mechanism":
        """동등한 유한 메뉴."""

    def payments(self, x: np.ndarray) -> np.ndarray:
        return self.outcome(x)[1]


class Mechanism(SellingMechanism):
    """유한 메뉴 메커니즘.

    옵션은 가격 오름차순으로 정렬되어 저장되므로 argmax는
    효용 동률 중 가장 싼 옵션을 고른다.
    """

    options: tuple[MenuOption, ...] = Field(min_length=1, description="메뉴 옵션")
    permutation: tuple[int, ...] | None = Field(
        default=None, description="입력 rate를 내림차순으로 정렬한 순열 (Proportional)"
    )

    @field_validator("options")
    @classmethod
    def _normalize_options(cls, value: tuple[MenuOption, ...]) -> tuple[MenuOption, ...]:
        dims = {len(o.allocation) for o in value}
        if len(dims) != 1:
            raise ValueError(f"옵션 차원이 일치하지 않습니다: {sorted(dims)}")
        m = dims.pop()
        options = list(value)
        if not any(o.is_null for o in options):
            options.insert(0, MenuOption.null(m))
        # null 옵션을 같은 가격대 맨 앞에 둔다
        options.sort(key=lambda o: (o.price, not o.is_null))
        return tuple(options)

    @property
    def m(self) -> int:
        return len(self.options[0].allocation)

    @property
    def allocations(self) -> np.ndarray:
        return np.array([o.allocation for o in self.options], dtype=float)

    @property
    def prices(self) -> np.ndarray:
        return np.array([o.price for o in self.options], dtype=float)

    def option_utilities(self, x: np.ndarray) -> np.ndarray:
        """(n, K) 옵션별 효용."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return x @ self.allocations.T - self.prices

    def choose(self, x: np.ndarray) -> np.ndarray:
        """선택된 옵션 인덱스 (n,)."""
        return np.argmax(self.option_utilities(x), axis=1)

    def utility(self, x: np.ndarray) -> np.ndarray:
        return self.option_utilities(x).max(axis=1)

    def outcome(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        idx = self.choose(x)
        return self.allocations[idx], self.prices[idx]

    def to_menu(self) -> "Mechanism":
        return self


class SeparateMechanism(SellingMechanism):
    """아이템별 take-it-or-leave-it 가격 (product menu).

    시뮬레이션은 아이템마다 독립적으로 x_j > p_j 이면 구매한다
    (동률은 구매하지 않음 = 더 싼 옵션).
    """

    item_prices: tuple[float, ...] = Field(min_length=1, description="아이템별 가격")

    @field_validator("item_prices")
    @classmethod
    def _check_prices(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if any(p < 0 for p in value):
            raise ValueError(f"가격은 0 이상이어야 합니다: {value}")
        return value

    @property
    def m(self) -> int:
        return len(self.item_prices)

    def utility(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.maximum(x - np.asarray(self.item_prices), 0.0).sum(axis=1)

    def outcome(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        prices = np.asarray(self.item_prices)
        bought = (x > prices).astype(float)
        return bought, bought @ prices

    def to_menu(self) -> Mechanism:
        """2^m 옵션 product menu로 전개 (m ≤ 12)."""
        if self.m > 12:
            raise ValueError(f"product menu 전개는 m ≤ 12만 지원합니다: m={self.m}")
        options = []
        for bits in product((0.0, 1.0), repeat=self.m):
            price = sum(b * p for b, p in zip(bits, self.item_prices))
            options.append(MenuOption(allocation=bits, price=price))
        return Mechanism(options=tuple(options), label=f"{self.label} (menu)")
