import math
from dataclasses import dataclass
from typing import Optional

from local_codes.errors import ContractError

FAMILIES = ("ca", "planar", "toric", "kcopies")


def alpha_exponent(D: int) -> float:
    """Exponent of d in the D-dimensional quantum bound k * d^alpha <= c * n."""
    if D < 2:
        raise ContractError(f"the bound needs spatial dimension D >= 2, got {D}")
    return 2 / (D - 1)


@dataclass(frozen=True)
class TradeoffPoint:
    """One (n, k, d) triple of a code family; ratios are always derived from the fields."""

    family: str
    n: int
    k: int
    d: int
    d_is_exact: bool = True
    D: int = 2

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ContractError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.n < 0 or self.k < 0:
            raise ContractError(f"n and k must be non-negative, got n={self.n} k={self.k}")
        if self.d < 1:
            raise ContractError(f"distance must be at least 1, got {self.d}")
        if self.n == 0:
            raise ContractError("a code point needs n > 0")

    @property
    def d_upper(self) -> Optional[int]:
        return None if self.d_is_exact else self.d

    @property
    def q_ratio(self) -> float:
        return self.k * self.d**2 / self.n

    @property
    def c_ratio(self) -> float:
        return self.k * math.sqrt(self.d) / self.n

    def ratio(self, alpha: float) -> float:
        return self.k * self.d**alpha / self.n
