"""Edge weights and exact comparison of weighted sizes.

A weighted size is kept as the integer pair ``(f1, f2)`` and evaluated as
``f1 + a*f2``.  Comparisons are exact: rational weights reduce to an
integer sign, and for ``log2(3)`` a float estimate is trusted only when it
is far from zero; near a tie ``2**dp * 3**dq`` is compared with 1 in
integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

_LOG2_3 = math.log2(3)


@dataclass(frozen=True)
class Weight:
    """Weight of a double edge relative to a single edge, 1 <= a <= 2.

    ``value`` is a Fraction, or None for the symbolic weight log2(3).
    """

    value: Fraction | None

    def __post_init__(self):
        if self.value is not None:
            v = Fraction(self.value)
            if not (1 <= v <= 2):
                raise ValueError(f"weight must satisfy 1 <= a <= 2, got {v}")
            object.__setattr__(self, "value", v)

    @classmethod
    def rational(cls, p: int, q: int = 1) -> "Weight":
        return cls(Fraction(p, q))

    @classmethod
    def log3(cls) -> "Weight":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "Weight":
        """Parse ``2``, ``log3`` or ``p/q``."""
        t = text.strip()
        if t == "log3":
            return cls.log3()
        try:
            return cls(Fraction(t))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad weight {text!r}") from exc

    @property
    def is_log3(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        if self.value is None:
            return "log3"
        return str(self.value)

    def __float__(self) -> float:
        return math.log2(3) if self.value is None else float(self.value)

    def sign(self, dp: int, dq: int) -> int:
        """Exact sign of ``dp + a*dq`` (dp, dq may be rational)."""
        if type(dp) is not int or type(dq) is not int:
            dp, dq = Fraction(dp), Fraction(dq)
            scale = math.lcm(dp.denominator, dq.denominator)
            dp, dq = int(dp * scale), int(dq * scale)
        if self.value is not None:
            x = dp * self.value.denominator + dq * self.value.numerator
            return (x > 0) - (x < 0)
        if dq == 0:
            return (dp > 0) - (dp < 0)
        approx = dp + _LOG2_3 * dq
        if abs(approx) > 1e-6 * (1 + abs(dp) + abs(dq)):
            # far from zero: the float sign is certainly right
            return 1 if approx > 0 else -1
        # 2**(dp + dq*log2 3) = 2**dp * 3**dq; compare with 1.
        lhs = (2 ** max(dp, 0)) * (3 ** max(dq, 0))
        rhs = (2 ** max(-dp, 0)) * (3 ** max(-dq, 0))
        return (lhs > rhs) - (lhs < rhs)

    def compare(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Compare two (f1, f2) pairs under this weight."""
        return self.sign(x[0] - y[0], x[1] - y[1])

    def evaluate(self, f1: int, f2: int) -> Fraction | float:
        """Numeric value; exact for rational weights."""
        if self.value is None:
            return f1 + math.log2(3) * f2
        return f1 + self.value * f2

    def key(self):
        """Sort key for (f1, f2) pairs."""
        return cmp_to_key(self.compare)

    def max(self, pairs: Iterable[Sequence[int]]):
        best = None
        for p in pairs:
            if best is None or self.compare(p, best) > 0:
                best = p
        return best


TWO = Weight.rational(2)
LOG3 = Weight.log3()


@dataclass(frozen=True, order=True)
class WeightedSize:
    """Counts of single-direction pairs (f1) and double-edge pairs (f2)."""

    f1: int
    f2: int

    def value(self, a: Weight):
        return a.evaluate(self.f1, self.f2)

    def as_pair(self) -> tuple[int, int]:
        return (self.f1, self.f2)

    def __add__(self, other: "WeightedSize") -> "WeightedSize":
        return WeightedSize(self.f1 + other.f1, self.f2 + other.f2)
