"""Line-by-line enumeration of the admissible companion set of a lattice pair.

For a fixed nonzero direction p, the companions q with
0 < norm(q) < norm(p+q) <= N^2 live on a family of parallel lattice lines:
the trace pairing tr(conj(p)*q) is constant on each line and ranges over the
multiples of a positive integer c'(p).  Each line carries a rank-one lattice
w + Z*v where v is a primitive vector orthogonal to p.  Everything here is
exact integer arithmetic: line index ranges, closest points, and per-line
membership intervals all come from integer square roots, so the enumeration
agrees with a brute-force scan bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import ring
from .ring import FieldParams, QuadInt


@dataclass(frozen=True)
class PairFrame:
    """Integer frame attached to a nonzero direction p.

    xp, yp are the coordinates of the trace form tr(conj(p)*z) = xp*x + yp*y;
    cp = gcd(xp, yp) > 0 is the line spacing; v is the primitive orthogonal
    vector spanning each line; kappa is the smallest admissible line index
    (lines with smaller index leave norm(q) < norm(p+q) unsatisfiable).
    """

    k: FieldParams
    p: QuadInt
    xp: int
    yp: int
    cp: int
    v: QuadInt
    n_p: int
    n_v: int
    kappa: int

    @property
    def abs_p(self) -> float:
        return math.sqrt(self.n_p)

    @property
    def abs_v(self) -> float:
        return math.sqrt(self.n_v)


@dataclass(frozen=True)
class LineSolution:
    """Lattice data of one admissible line.

    w is the lattice point on the line closest to the line's projection onto
    the direction p; every lattice point on the line is w + ell*v.  t_pk is
    the signed offset of w from that projection in units of |v|, always in
    [-1/2, 1/2].  [ell_lo, ell_hi] is the exact integer range for which
    norm(p + w + ell*v) <= n_cap^2; empty when ell_lo > ell_hi.
    """

    k_index: int
    w: QuadInt
    t_pk: float
    ell_lo: int
    ell_hi: int


def _bezout(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, s) with u*a + s*b = g = gcd(a, b) > 0, for any signs of a, b."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_s, s = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_s, s = s, old_s - q * s
    if old_r < 0:
        old_r, old_u, old_s = -old_r, -old_u, -old_s
    return old_r, old_u, old_s


def make_frame(k: FieldParams, p: QuadInt) -> PairFrame:
    """Build the integer frame of a nonzero direction p."""
    if p.x == 0 and p.y == 0:
        raise ValueError("direction p must be nonzero")
    xp = 2 * p.x + k.tr_omega * p.y
    yp = k.tr_omega * p.x + 2 * k.n_omega * p.y
    cp = math.gcd(xp, yp)
    v = QuadInt(yp // cp, -xp // cp)
    n_p = ring.norm(p, k)
    n_v = ring.norm(v, k)
    # kappa = floor(-n_p/cp) + 1, the first index with tr(conj(p)q) > -n_p
    kappa = -((n_p + cp - 1) // cp) + 1
    return PairFrame(k=k, p=p, xp=xp, yp=yp, cp=cp, v=v, n_p=n_p, n_v=n_v, kappa=kappa)


def _line_core(frame: PairFrame, base_u: int, base_s: int, t1: int,
               k_index: int, nsq: int) -> tuple[int, int, int, int, int]:
    """Integer data of line k_index: (wx, wy, tnum, ell_lo, ell_hi).

    tnum/(2*n_v) is the offset t_pk.  The closest lattice point is chosen by
    exact comparison of the two candidate offsets; ties go to the smaller
    shift, which pins t_pk = -1/2 rather than +1/2.
    """
    n_v = frame.n_v
    d2 = 2 * n_v
    t = k_index * t1
    q, r = divmod(-t, d2)                      # 0 <= r < d2
    m = q if r <= n_v else q + 1
    tnum = t + d2 * m
    wx = k_index * base_u + m * frame.v.x
    wy = k_index * base_s + m * frame.v.y
    rhs4 = n_v * (4 * frame.n_p * nsq - (k_index * frame.cp + 2 * frame.n_p) ** 2)
    if rhs4 < 0:
        return wx, wy, tnum, 0, -1
    smax = math.isqrt(rhs4 // frame.n_p)
    ell_lo = -((smax + tnum) // d2)
    ell_hi = (smax - tnum) // d2
    return wx, wy, tnum, ell_lo, ell_hi


def _frame_base(frame: PairFrame) -> tuple[int, int, int]:
    """Bezout base point of the cp-line and its trace against v."""
    g, u, s = _bezout(frame.xp, frame.yp)
    assert g == frame.cp
    t1 = ring.trace_conj_prod(QuadInt(u, s), frame.v, frame.k)
    return u, s, t1


def line_solution(frame: PairFrame, n_cap: int, k_index: int) -> LineSolution:
    """Closest-point representation and membership range of one line."""
    if k_index < frame.kappa:
        raise ValueError(f"line index {k_index} below the admissible minimum {frame.kappa}")
    base_u, base_s, t1 = _frame_base(frame)
    wx, wy, tnum, lo, hi = _line_core(frame, base_u, base_s, t1, k_index, n_cap * n_cap)
    return LineSolution(k_index, QuadInt(wx, wy), tnum / (2 * frame.n_v), lo, hi)


def _k_max(frame: PairFrame, nsq: int) -> int:
    # largest index whose line can still meet the disc, plus one for margin;
    # the per-line interval is exact, so the margin only costs an empty check
    s4 = math.isqrt(4 * frame.n_p * nsq)
    return (s4 - 2 * frame.n_p) // frame.cp + 1


def iter_lines(frame: PairFrame, n_cap: int) -> Iterator[tuple[int, int, int, int, int, int]]:
    """(k_index, wx, wy, tnum, ell_lo, ell_hi) for each nonempty line, k ascending."""
    nsq = n_cap * n_cap
    if frame.n_p >= 4 * nsq:                   # |p| >= 2N: no admissible q at all
        return
    base_u, base_s, t1 = _frame_base(frame)
    for k_index in range(frame.kappa, _k_max(frame, nsq) + 1):
        wx, wy, tnum, lo, hi = _line_core(frame, base_u, base_s, t1, k_index, nsq)
        if lo > hi:
            continue
        yield k_index, wx, wy, tnum, lo, hi


def enumerate_j(frame: PairFrame, n_cap: int) -> Iterator[QuadInt]:
    """All q with 0 < norm(q) < norm(p+q) <= n_cap^2, line by line.

    Deterministic order: line index ascending, then ell ascending within the
    line.  The strict inequalities are re-checked exactly in integers for
    every candidate even though the line geometry already guarantees them.
    """
    k = frame.k
    p = frame.p
    nsq = n_cap * n_cap
    for _, wx, wy, _, lo, hi in iter_lines(frame, n_cap):
        for ell in range(lo, hi + 1):
            q = QuadInt(wx + ell * frame.v.x, wy + ell * frame.v.y)
            nq = ring.norm(q, k)
            if nq == 0:
                continue
            npq = ring.norm(QuadInt(p.x + q.x, p.y + q.y), k)
            if nq < npq <= nsq:
                yield q


def line_point_arrays(frame: PairFrame, n_cap: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Per-line int64 coordinate arrays (qx, qy), same points and order as enumerate_j.

    Bulk path for the measurement pipeline; the q = 0 point (line 0 only) is
    not filtered here, callers mask on norm(q) > 0.
    """
    vx, vy = frame.v
    for _, wx, wy, _, lo, hi in iter_lines(frame, n_cap):
        ell = np.arange(lo, hi + 1, dtype=np.int64)
        yield wx + ell * vx, wy + ell * vy


def brute_force_j(k: FieldParams, p: QuadInt, n_cap: int) -> set[tuple[int, int]]:
    """Independent oracle: box scan of the full disc |q| <= n_cap.

    Guarded to small n_cap; cost grows like n_cap^2 points per call.
    """
    if n_cap > 500:
        raise ValueError(f"brute_force_j is an oracle for n_cap <= 500, got {n_cap}")
    nsq = n_cap * n_cap
    xs, ys, nq = ring.disc_array(n_cap, k)
    npq = ring.norm_array(xs + p.x, ys + p.y, k)
    keep = (nq < npq) & (npq <= nsq)
    return set(zip(xs[keep].tolist(), ys[keep].tolist()))


def card_j(frame: PairFrame, n_cap: int) -> int:
    """Exact cardinality of the companion set, via the line intervals."""
    total = 0
    zero_included = False
    for k_index, _, _, tnum, lo, hi in iter_lines(frame, n_cap):
        total += hi - lo + 1
        # line 0 passes through the origin, where w = 0 and t = 0; the
        # excluded point q = 0 is its ell = 0 entry
        if k_index == 0 and tnum == 0 and lo <= 0 <= hi:
            zero_included = True
    return total - (1 if zero_included else 0)


def rescaled_points(frame: PairFrame, n_cap: int) -> Iterator[tuple[float, float]]:
    """Companion set pushed through the 1/N similarity, as (s, t) pairs.

    s is the component along p/|p|, t along v/|v|, both divided by n_cap;
    the image lies in the unit disc centered at (-|p|/n_cap, 0) intersected
    with the right half plane boundary strip.
    """
    cp = frame.cp
    two_n_p = 2.0 * frame.abs_p * n_cap
    abs_v = frame.abs_v
    d2 = 2 * frame.n_v
    for k_index, _, _, tnum, lo, hi in iter_lines(frame, n_cap):
        s = k_index * cp / two_n_p
        base_t = tnum / d2
        for ell in range(lo, hi + 1):
            if k_index == 0 and tnum == 0 and ell == 0:
                continue                       # q = 0
            yield s, (base_t + ell) * abs_v / n_cap


def rescaled_arrays(frame: PairFrame, n_cap: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized rescaled_points, for convergence studies at large n_cap."""
    s_parts, t_parts = [], []
    cp = frame.cp
    two_n_p = 2.0 * frame.abs_p * n_cap
    abs_v = frame.abs_v
    d2 = 2 * frame.n_v
    for k_index, _, _, tnum, lo, hi in iter_lines(frame, n_cap):
        ell = np.arange(lo, hi + 1, dtype=np.int64)
        if k_index == 0 and tnum == 0:
            ell = ell[ell != 0]
        t = (tnum / d2 + ell) * (abs_v / n_cap)
        s_parts.append(np.full(t.shape, k_index * cp / two_n_p))
        t_parts.append(t)
    if not s_parts:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(s_parts), np.concatenate(t_parts)
