"""Exact arithmetic in the ring of integers of an imaginary quadratic field.

Elements are stored in integer coordinates (x, y) with respect to the basis
(1, omega), where omega = i*sqrt(|d|)/2 for d = 0 mod 4 and
omega = (1 + i*sqrt(|d|))/2 for d = 1 mod 4.  Every norm, trace, and
membership test below is computed in exact integer arithmetic; floating
point only enters when a caller hands us a real radius, and then only to
fix an integer norm cap once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np


class QuadInt(NamedTuple):
    """Ring element x + omega*y with integer coordinates."""

    x: int
    y: int


@dataclass(frozen=True)
class FieldParams:
    """Discriminant plus the derived integer data of the order.

    tr_omega and n_omega are the trace and norm of the basis element omega,
    both exact integers; 4*n_omega - tr_omega**2 == |d| always holds.
    """

    d: int
    tr_omega: int
    n_omega: int

    @classmethod
    def from_discriminant(cls, d: int) -> "FieldParams":
        if d >= 0:
            raise ValueError(f"discriminant must be negative, got {d}")
        if d % 4 not in (0, 1):
            raise ValueError(f"discriminant must be 0 or 1 mod 4, got {d}")
        if d % 4 == 0:
            tr, n = 0, (-d) // 4
        else:
            tr, n = 1, (1 - d) // 4
        return cls(d, tr, n)

    @property
    def abs_d(self) -> int:
        return -self.d

    @property
    def omega_im(self) -> float:
        """Imaginary part of omega, sqrt(|d|)/2."""
        return math.sqrt(self.abs_d) / 2.0

    @property
    def covol(self) -> float:
        """Covolume of the lattice: sqrt(|d|)/2."""
        return math.sqrt(self.abs_d) / 2.0


def field(d: int) -> FieldParams:
    return FieldParams.from_discriminant(d)


def norm(q: QuadInt, k: FieldParams) -> int:
    """Norm form x^2 + tr(omega)*x*y + n(omega)*y^2, an exact integer >= 0."""
    x, y = q
    return x * x + k.tr_omega * x * y + k.n_omega * y * y


def conj(q: QuadInt, k: FieldParams) -> QuadInt:
    # conj(omega) = tr(omega) - omega
    x, y = q
    return QuadInt(x + k.tr_omega * y, -y)


def add(q: QuadInt, r: QuadInt) -> QuadInt:
    return QuadInt(q.x + r.x, q.y + r.y)


def sub(q: QuadInt, r: QuadInt) -> QuadInt:
    return QuadInt(q.x - r.x, q.y - r.y)


def mul(q: QuadInt, r: QuadInt, k: FieldParams) -> QuadInt:
    # omega^2 = tr(omega)*omega - n(omega)
    x1, y1 = q
    x2, y2 = r
    return QuadInt(
        x1 * x2 - k.n_omega * y1 * y2,
        x1 * y2 + y1 * x2 + k.tr_omega * y1 * y2,
    )


def trace_conj_prod(p: QuadInt, z: QuadInt, k: FieldParams) -> int:
    """Trace of conj(p)*z, i.e. twice the real inner product <p, z>.

    Symmetric in p and z, and integer for all ring elements.
    """
    return (
        2 * p.x * z.x
        + k.tr_omega * (p.x * z.y + p.y * z.x)
        + 2 * k.n_omega * p.y * z.y
    )


def norm_array(xs: np.ndarray, ys: np.ndarray, k: FieldParams) -> np.ndarray:
    """Vectorized norm form over int64 coordinate arrays."""
    return xs * xs + k.tr_omega * (xs * ys) + k.n_omega * (ys * ys)


def norm_cap(radius: float) -> int:
    """Largest integer norm admitted by the bound |q| <= radius.

    Computed as floor(radius^2), snapped up by one when radius^2 sits within
    1e-9 (relative) below the next integer.  Radii like N**alpha or sqrt(a)
    are floats whose squares miss the intended integer by an ulp or two
    (e.g. 32**0.8 -> 16.000000000000004, sqrt(3)**2 -> 2.9999999999999996);
    the snap restores the mathematical cutoff.  Every enumeration path in
    the package resolves its cutoff through this one function, so paths
    that must agree exactly always compare against the same integer.
    """
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    r2 = float(radius) * float(radius)
    m = math.floor(r2)
    if (m + 1) - r2 <= 1e-9 * max(1.0, r2):
        m += 1
    return m


def points_with_norm_le(cap: int, k: FieldParams) -> Iterator[QuadInt]:
    """All nonzero ring elements with norm <= cap, in lexicographic (y, x) order.

    Bounds are exact: 4*norm(q) = (2x + tr*y)^2 + y^2*|d|, so the y range is
    |y| <= isqrt(4*cap/|d|) and for each y the x range comes from an integer
    square root.  No per-point float test is needed.
    """
    if cap < 0:
        return
    abs_d = k.abs_d
    tr = k.tr_omega
    y_max = math.isqrt(4 * cap // abs_d)
    for y in range(-y_max, y_max + 1):
        rem = 4 * cap - y * y * abs_d
        s = math.isqrt(rem)
        # 2x + tr*y in [-s, s]
        x_lo = -((s + tr * y) // 2)
        x_hi = (s - tr * y) // 2
        for x in range(x_lo, x_hi + 1):
            if x == 0 and y == 0:
                continue
            yield QuadInt(x, y)


def points_in_disc(radius: float, k: FieldParams) -> Iterator[QuadInt]:
    """All nonzero ring elements q with norm(q) <= radius^2, lex (y, x) order."""
    return points_with_norm_le(norm_cap(radius), k)


def disc_array(radius: float, k: FieldParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(xs, ys, norms) int64 arrays of the nonzero points with |q| <= radius.

    Same points in the same lexicographic (y, x) order as points_in_disc,
    assembled row by row with numpy so million-point discs stay cheap.
    """
    return disc_array_by_cap(norm_cap(radius), k)


def disc_array_by_cap(cap: int, k: FieldParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """disc_array against an integer norm cap fixed by the caller."""
    if cap < 1:
        z = np.zeros(0, dtype=np.int64)
        return z, z.copy(), z.copy()
    abs_d = k.abs_d
    tr = k.tr_omega
    y_max = math.isqrt(4 * cap // abs_d)
    xs_parts = []
    ys_parts = []
    for y in range(-y_max, y_max + 1):
        rem = 4 * cap - y * y * abs_d
        s = math.isqrt(rem)
        x_lo = -((s + tr * y) // 2)
        x_hi = (s - tr * y) // 2
        row = np.arange(x_lo, x_hi + 1, dtype=np.int64)
        if y == 0:
            row = row[row != 0]
        xs_parts.append(row)
        ys_parts.append(np.full(row.shape, y, dtype=np.int64))
    xs = np.concatenate(xs_parts)
    ys = np.concatenate(ys_parts)
    return xs, ys, norm_array(xs, ys, k)


def count_representations(a: int, k: FieldParams) -> int:
    """Number of ring elements with norm exactly a (a >= 0).

    Solves (2x + tr*y)^2 = 4a - y^2*|d| over integers: for each admissible y
    the right side must be a perfect square with the correct parity.
    """
    if a < 0:
        raise ValueError(f"norm value must be nonnegative, got {a}")
    if a == 0:
        return 1
    abs_d = k.abs_d
    tr = k.tr_omega
    total = 0
    y_max = math.isqrt(4 * a // abs_d)
    for y in range(-y_max, y_max + 1):
        rem = 4 * a - y * y * abs_d
        s = math.isqrt(rem)
        if s * s != rem:
            continue
        if (s - tr * y) % 2 != 0:
            continue
        total += 1 if s == 0 else 2
    return total
