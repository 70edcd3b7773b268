"""Built-in family of test functions for pairing against measures.

Descriptors are plain data: a kind tag plus parameters.  Each knows how to
evaluate itself pointwise (numpy-aware) and how to integrate itself exactly
against Lebesgue measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_KINDS = ("indicator", "triangle", "gauss")


@dataclass(frozen=True)
class TestFunction:
    """kind 'indicator': params (lo, hi), value 1 on [lo, hi).
    kind 'triangle':  params (center, halfwidth), peak 1 at center.
    kind 'gauss':     params (center, sigma, lo, hi), truncated to [lo, hi].
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown test function kind {self.kind!r}")
        want = {"indicator": 2, "triangle": 2, "gauss": 4}[self.kind]
        if len(self.params) != want:
            raise ValueError(f"{self.kind} expects {want} parameters, got {len(self.params)}")
        if self.kind == "triangle" and self.params[1] <= 0:
            raise ValueError("triangle halfwidth must be positive")
        if self.kind == "gauss" and self.params[1] <= 0:
            raise ValueError("gauss sigma must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "indicator":
            lo, hi = self.params
            out = ((t >= lo) & (t < hi)).astype(np.float64)
        elif self.kind == "triangle":
            c, w = self.params
            out = np.maximum(0.0, 1.0 - np.abs(t - c) / w)
        else:
            c, s, lo, hi = self.params
            out = np.exp(-((t - c) ** 2) / (2 * s * s))
            out = np.where((t >= lo) & (t <= hi), out, 0.0)
        return float(out) if out.ndim == 0 else out

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == "indicator":
            return self.params[0], self.params[1]
        if self.kind == "triangle":
            c, w = self.params
            return c - w, c + w
        return self.params[2], self.params[3]

    def lebesgue(self) -> float:
        """Exact integral over the real line."""
        if self.kind == "indicator":
            lo, hi = self.params
            if math.isinf(lo) or math.isinf(hi):
                raise ValueError("indicator with unbounded support has no finite integral")
            return hi - lo
        if self.kind == "triangle":
            return self.params[1]
        c, s, lo, hi = self.params
        z = 1.0 / (s * math.sqrt(2.0))
        return s * math.sqrt(math.pi / 2.0) * (math.erf((hi - c) * z) - math.erf((lo - c) * z))


def indicator(lo: float, hi: float) -> TestFunction:
    return TestFunction("indicator", (lo, hi))


def triangle(center: float, halfwidth: float) -> TestFunction:
    return TestFunction("triangle", (center, halfwidth))


def gauss(center: float, sigma: float, lo: float = -math.inf, hi: float = math.inf) -> TestFunction:
    return TestFunction("gauss", (center, sigma, lo, hi))
