"""Run configuration shared by the measurement and theory layers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .ring import FieldParams, norm_cap

# exact-atom bookkeeping is kept while the pair count stays at or below this
ATOM_LIMIT = 1_000_000


@dataclass(frozen=True)
class CorrelationConfig:
    """Parameters of one pair-correlation measurement.

    The window scaling is phi(N) = coef * N**beta; psi_mode is 'auto'
    (normalization chosen by the regime classifier), 'npow' (psi = N**psi_param),
    or 'value' (psi = psi_param).  The histogram grid is bin_width on [lo, hi).
    """

    field: FieldParams
    alpha: float
    coef: float
    beta: float
    n: int
    bin_width: float = 0.05
    lo: float = -4.0
    hi: float = 4.0
    psi_mode: str = "auto"
    psi_param: float | None = None

    def __post_init__(self):
        if not (0.0 < self.alpha < 0.5):
            raise ValueError(f"alpha must lie in (0, 1/2), got {self.alpha}")
        if self.coef <= 0:
            raise ValueError(f"coef must be positive, got {self.coef}")
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if self.bin_width <= 0:
            raise ValueError(f"bin_width must be positive, got {self.bin_width}")
        if not (self.lo < self.hi):
            raise ValueError(f"histogram range must satisfy lo < hi, got {self.lo}:{self.hi}")
        if self.psi_mode not in ("auto", "npow", "value"):
            raise ValueError(f"psi_mode must be auto, npow or value, got {self.psi_mode}")
        if self.psi_mode == "value" and (self.psi_param is None or self.psi_param <= 0):
            raise ValueError("psi_mode 'value' requires a positive psi_param")
        if self.psi_mode == "npow" and self.psi_param is None:
            raise ValueError("psi_mode 'npow' requires an exponent psi_param")

    @property
    def phi(self) -> float:
        return self.coef * float(self.n) ** self.beta

    @property
    def pair_norm_cap(self) -> int:
        """Integer norm cap realizing the difference cutoff |p| <= N**alpha."""
        return norm_cap(float(self.n) ** self.alpha)

    @property
    def nsq(self) -> int:
        return self.n * self.n

    @property
    def nbins(self) -> int:
        width = self.hi - self.lo
        count = int(round(width / self.bin_width))
        if count < 1 or abs(count * self.bin_width - width) > 1e-9 * max(1.0, width):
            count = math.ceil(width / self.bin_width - 1e-12)
        return max(count, 1)

    @property
    def edges(self):
        import numpy as np

        return self.lo + self.bin_width * np.arange(self.nbins + 1)

    @property
    def symmetric_grid(self) -> bool:
        return self.lo == -self.hi


def parse_psi(text: str) -> tuple[str, float | None]:
    """CLI forms: 'auto', 'n^X', 'value:V'."""
    if text == "auto":
        return "auto", None
    if text.startswith("n^"):
        return "npow", float(text[2:])
    if text.startswith("value:"):
        return "value", float(text[6:])
    raise ValueError(f"psi must be 'auto', 'n^X' or 'value:V', got {text!r}")


def format_psi(mode: str, param: float | None) -> str:
    if mode == "auto":
        return "auto"
    if mode == "npow":
        return f"n^{param:g}"
    return f"value:{param:.17g}"
