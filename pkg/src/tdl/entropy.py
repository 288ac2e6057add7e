from __future__ import annotations

import math
from fractions import Fraction
from math import comb

import mpmath


def binary_entropy(p: float) -> float:
    """-p log2 p - (1-p) log2 (1-p) for 0 < p < 1."""
    if not (0 < p < 1):
        raise ValueError(f"entropy needs 0 < p < 1, got {p}")
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy_partial_sum_check(n: int, p: float | Fraction, dps: int = 60) -> bool:
    """Check sum_{i <= floor(pn)} C(n, i) <= 2**(H(p) n).

    The left side is an exact integer; the right side is evaluated with
    ``dps`` decimal digits.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    # floats are read as the decimal they print as, so 0.3 * 20 floors to 6
    p = Fraction(str(p)) if isinstance(p, float) else Fraction(p)
    if not (0 < p < Fraction(1, 2)):
        raise ValueError(f"partial-sum bound needs 0 < p < 1/2, got {p}")
    lhs = sum(comb(n, i) for i in range(int(p * n) + 1))
    with mpmath.workdps(dps):
        pm = mpmath.mpf(p.numerator) / p.denominator
        h = -pm * mpmath.log(pm, 2) - (1 - pm) * mpmath.log(1 - pm, 2)
        return mpmath.log(lhs, 2) <= h * n
