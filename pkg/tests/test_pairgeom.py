"""Pair frames and line enumeration: frozen examples, brute-force agreement,
geometric invariants."""

import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from paircorr import pairgeom, ring
from paircorr.ring import QuadInt, field


# ---------------------------------------------------------------------- frames

def test_make_frame_frozen_examples():
    f = pairgeom.make_frame(field(-4), QuadInt(1, 0))
    assert (f.xp, f.yp, f.cp) == (2, 0, 2)
    assert f.v == QuadInt(0, -1)
    assert f.kappa == 0

    f = pairgeom.make_frame(field(-4), QuadInt(1, 1))
    assert (f.xp, f.yp, f.cp) == (2, 2, 2)
    assert f.v == QuadInt(1, -1)
    assert f.kappa == 0

    f = pairgeom.make_frame(field(-3), QuadInt(1, 0))
    assert (f.xp, f.yp, f.cp) == (2, 1, 1)
    assert f.v == QuadInt(1, -2)
    assert f.kappa == 0


def test_make_frame_rejects_zero():
    with pytest.raises(ValueError):
        pairgeom.make_frame(field(-4), QuadInt(0, 0))


def all_p(k, radius):
    return list(ring.points_in_disc(radius, k))


def test_frame_invariants():
    for d in (-3, -4, -7, -8, -11):
        k = field(d)
        for p in all_p(k, 12):
            f = pairgeom.make_frame(k, p)
            # v is primitive and orthogonal to p
            assert math.gcd(f.v.x, f.v.y) == 1
            assert ring.trace_conj_prod(p, f.v, k) == 0
            # cp divides the trace form coefficients by construction
            assert f.xp % f.cp == 0 and f.yp % f.cp == 0 and f.cp > 0
            # |cp * v| = sqrt(|d|) * |p| as an exact integer identity
            assert f.cp**2 * f.n_v == k.abs_d * f.n_p
            assert f.kappa <= 0


def test_rotation_identity_even_discriminants():
    # for d = 0 mod 4, cp*v is p rotated by -i*sqrt(|d|): coordinates
    # (2*n_omega*py, -2*px) exactly
    for d in (-4, -8):
        k = field(d)
        for p in all_p(k, 100):
            f = pairgeom.make_frame(k, p)
            assert f.cp * f.v.x == 2 * k.n_omega * p.y
            assert f.cp * f.v.y == -2 * p.x


# ----------------------------------------------------------------------- lines

def test_line_solution_frozen_example():
    k = field(-4)
    f = pairgeom.make_frame(k, QuadInt(1, 1))
    sol = pairgeom.line_solution(f, 5, 1)
    # w lies on the line tr(conj(p) q) = cp
    assert ring.trace_conj_prod(f.p, sol.w, k) == f.cp
    # exact tie between the two nearest lattice points: resolved toward
    # the smaller shift, pinning t at -1/2
    assert sol.t_pk == -0.5
    assert sol.w == QuadInt(0, 1)


def test_line_solution_offsets_bounded():
    for d in (-3, -4, -7, -8, -11):
        k = field(d)
        for p in all_p(k, 5):
            f = pairgeom.make_frame(k, p)
            for k_index in range(f.kappa, 30):
                sol = pairgeom.line_solution(f, 12, k_index)
                assert -0.5 <= sol.t_pk <= 0.5
                assert ring.trace_conj_prod(p, sol.w, k) == k_index * f.cp
                # w is at least as close to the line's axis projection as
                # its lattice neighbors along v
                for shift in (-1, 1):
                    other = QuadInt(sol.w.x + shift * f.v.x, sol.w.y + shift * f.v.y)
                    # compare squared distances to the projection exactly:
                    # |w - z_k|^2 = t^2 |v|^2 with t = tnum/(2 n_v)
                    t_other = sol.t_pk + shift
                    assert abs(sol.t_pk) <= abs(t_other) + 1e-12
                    assert ring.trace_conj_prod(p, other, k) == k_index * f.cp


def test_line_solution_rejects_low_index():
    f = pairgeom.make_frame(field(-4), QuadInt(1, 0))
    with pytest.raises(ValueError):
        pairgeom.line_solution(f, 5, f.kappa - 1)


# ----------------------------------------------------------------- enumeration

def test_enumerate_j_frozen_example():
    k = field(-4)
    f = pairgeom.make_frame(k, QuadInt(1, 0))
    got = list(pairgeom.enumerate_j(f, 3))
    expect = {(0, 1), (0, -1), (0, 2), (0, -2), (1, 0), (1, 1), (1, -1), (1, 2), (1, -2), (2, 0)}
    assert set(got) == expect
    assert len(got) == 10


def test_enumerate_j_empty_cases():
    k = field(-4)
    assert list(pairgeom.enumerate_j(pairgeom.make_frame(k, QuadInt(1, 0)), 1)) == []
    assert list(pairgeom.enumerate_j(pairgeom.make_frame(k, QuadInt(7, 0)), 3)) == []


def test_enumerate_j_deterministic_order():
    k = field(-3)
    f = pairgeom.make_frame(k, QuadInt(2, 1))
    first = list(pairgeom.enumerate_j(f, 9))
    second = list(pairgeom.enumerate_j(f, 9))
    assert first == second
    # order is line index ascending, then ell ascending: trace pairing is
    # nondecreasing along the stream
    traces = [ring.trace_conj_prod(f.p, q, k) for q in first]
    assert traces == sorted(traces)


def test_enumerate_j_matches_brute_force_small_sweep():
    # acceptance covers the full grid; here a fast slice for development
    for d in (-3, -4, -7, -8, -11):
        k = field(d)
        for n in (1, 2, 3, 5, 8, 13, 16):
            cap = ring.norm_cap(n**0.4)
            for p in ring.points_with_norm_le(cap, k):
                f = pairgeom.make_frame(k, p)
                got = set((q.x, q.y) for q in pairgeom.enumerate_j(f, n))
                assert got == pairgeom.brute_force_j(k, p, n), (d, n, p)


def test_membership_conditions_exact():
    k = field(-7)
    f = pairgeom.make_frame(k, QuadInt(2, -1))
    nsq = 11 * 11
    for q in pairgeom.enumerate_j(f, 11):
        nq = ring.norm(q, k)
        npq = ring.norm(QuadInt(f.p.x + q.x, f.p.y + q.y), k)
        assert 0 < nq < npq <= nsq


def test_brute_force_guard():
    with pytest.raises(ValueError):
        pairgeom.brute_force_j(field(-4), QuadInt(1, 0), 501)


def test_line_point_arrays_match_enumerate():
    for d in (-4, -3):
        k = field(d)
        f = pairgeom.make_frame(k, QuadInt(1, 1))
        flat = []
        for qx, qy in pairgeom.line_point_arrays(f, 12):
            nq = ring.norm_array(qx, qy, k)
            keep = nq > 0
            flat.extend(zip(qx[keep].tolist(), qy[keep].tolist()))
        assert flat == [(q.x, q.y) for q in pairgeom.enumerate_j(f, 12)]


def test_card_j_matches_enumeration():
    for d in (-4, -11):
        k = field(d)
        for p in all_p(k, 3):
            f = pairgeom.make_frame(k, p)
            for n in (2, 7, 19):
                assert pairgeom.card_j(f, n) == len(list(pairgeom.enumerate_j(f, n)))


def test_card_j_asymptotics():
    # |J| ~ pi*|p|*N^2/(cp*|v|) within 5% at N = 500 for every |p| <= 3
    k = field(-4)
    n = 500
    for p in all_p(k, 3):
        f = pairgeom.make_frame(k, p)
        card = pairgeom.card_j(f, n)
        predicted = math.pi * f.abs_p * n * n / (f.cp * f.abs_v)
        assert abs(card / predicted - 1.0) <= 0.05, (p, card, predicted)


# ------------------------------------------------------------------- rescaling

def test_rescaled_points_frozen_example():
    k = field(-4)
    f = pairgeom.make_frame(k, QuadInt(1, 0))
    pts = dict()
    for (s, t), q in zip(pairgeom.rescaled_points(f, 3), pairgeom.enumerate_j(f, 3)):
        pts[(q.x, q.y)] = (s, t)
    s, t = pts[(2, 0)]
    assert s == pytest.approx(2 / 3, abs=1e-15)
    assert t == 0.0


def test_rescaled_points_inside_shifted_disc():
    for d in (-3, -8):
        k = field(d)
        for p in ((1, 0), (1, 1), (2, -1)):
            f = pairgeom.make_frame(k, QuadInt(*p))
            n = 40
            shift = f.abs_p / n
            for s, t in pairgeom.rescaled_points(f, n):
                assert (s + shift) ** 2 + t * t <= 1 + 1e-12
                assert s > -shift / 2 - 1e-12   # strictly right of the bisector


def _dist_to_half_disc(s, t):
    # distance from a point to {s >= 0, s^2 + t^2 <= 1}
    if s >= 0:
        r = math.hypot(s, t)
        return max(0.0, r - 1.0)
    if abs(t) <= 1.0:
        return -s
    return math.hypot(s, abs(t) - 1.0)


def _hausdorff_to_half_disc(f, n):
    s, t = pairgeom.rescaled_arrays(f, n)
    d_out = max(_dist_to_half_disc(si, ti) for si, ti in zip(s, t))
    # coverage direction: deterministic grid over the half disc
    h = 2.0e-3
    gs = np.arange(0.0, 1.0 + h, h)
    gt = np.arange(-1.0, 1.0 + h, h)
    gss, gtt = np.meshgrid(gs, gt)
    inside = gss**2 + gtt**2 <= 1.0
    grid = np.column_stack([gss[inside], gtt[inside]])
    theta = np.linspace(-math.pi / 2, math.pi / 2, 3000)
    arc = np.column_stack([np.cos(theta), np.sin(theta)])
    queries = np.vstack([grid, arc])
    tree = cKDTree(np.column_stack([s, t]))
    dists, _ = tree.query(queries)
    return max(d_out, float(dists.max()))


def test_rescaled_set_fills_half_disc():
    # Hausdorff distance to the closed right half disc shrinks as N grows
    k = field(-4)
    f = pairgeom.make_frame(k, QuadInt(1, 0))
    d100 = _hausdorff_to_half_disc(f, 100)
    d1000 = _hausdorff_to_half_disc(f, 1000)
    assert d1000 < d100
    assert d100 < 0.05
