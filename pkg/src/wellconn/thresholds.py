"""Well-connectedness thresholds: size-dependent lower bounds on min cuts.

A cluster of n nodes counts as well connected when its global minimum edge
cut strictly exceeds t(n). Built-in shapes: log10(n), log2(n), sqrt(n)/5,
a linear bound r*(n-1), and a custom combination a*n + b*log10(n) + c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class ThresholdFn:
    """One of: log10 | log2 | sqrt_div5 | linear (r*(n-1)) | custom.

    Custom evaluates a*n + b*log10(n) + c; a, b must be non-negative and
    a + c >= 0 so the value stays non-negative and non-decreasing for n >= 1.
    """

    kind: str
    r: float = 0.0
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        if self.kind not in ("log10", "log2", "sqrt_div5", "linear", "custom"):
            raise InvalidArgumentError(f"unknown threshold kind: {self.kind!r}")
        if self.kind == "linear" and self.r <= 0:
            raise InvalidArgumentError("linear threshold needs r > 0")
        if self.kind == "custom":
            if self.a < 0 or self.b < 0:
                raise InvalidArgumentError("custom threshold needs a >= 0 and b >= 0")
            if self.a + self.c < 0:
                raise InvalidArgumentError("custom threshold needs a + c >= 0")

    def __call__(self, n: int) -> float:
        if n < 1:
            raise InvalidArgumentError(f"threshold undefined for n={n}")
        if self.kind == "log10":
            return math.log10(n)
        if self.kind == "log2":
            return math.log2(n)
        if self.kind == "sqrt_div5":
            return math.sqrt(n) / 5.0
        if self.kind == "linear":
            return self.r * (n - 1)
        return self.a * n + self.b * math.log10(n) + self.c

    def describe(self) -> str:
        """Stable text form used in reports and for CLI echo."""
        if self.kind == "linear":
            return f"linear(r={self.r:g})"
        if self.kind == "custom":
            return f"custom(a={self.a:g}, b={self.b:g}, c={self.c:g})"
        return self.kind


LOG10 = ThresholdFn("log10")
LOG2 = ThresholdFn("log2")
SQRT_DIV5 = ThresholdFn("sqrt_div5")


def linear(r: float) -> ThresholdFn:
    return ThresholdFn("linear", r=r)


def custom(a: float, b: float, c: float) -> ThresholdFn:
    return ThresholdFn("custom", a=a, b=b, c=c)


def is_well_connected_value(mincut: int, n: int, t: ThresholdFn) -> bool:
    """Strict comparison: the cut must exceed t(n), equality fails."""
    return mincut > t(n)
