import math

import numpy as np
import pytest

from flatlab.crooked import (
    CrookedHalfspace,
    DepthExceeded,
    NotSpacelike,
    Side,
    classify_point,
    crooked_disjoint_sampled,
    drumm_slab,
    make_crooked_plane,
    slab_recover,
    slice_polylines,
    transform_plane,
)
from flatlab.fixtures import boost_sl2
from flatlab.lorentz import LorentzVector, bilinear_form, sl2_to_so21
from flatlab.margulis import standard_boost
from flatlab.words import AffineDeformation, AffineMap, evaluate_affine
from helpers import rand_affine, rand_vector

ORIGIN = LorentzVector(0.0, 0.0, 0.0)
EY = LorentzVector(0.0, 1.0, 0.0)


def std_plane():
    return make_crooked_plane(ORIGIN, EY)


def test_make_crooked_plane_standard_frame():
    c = std_plane()
    assert c.nminus.as_array() == pytest.approx([-1, 0, 1])
    assert c.nplus.as_array() == pytest.approx([1, 0, 1])
    for n in (c.nminus, c.nplus):
        assert abs(bilinear_form(n, n)) < 1e-12
        assert abs(bilinear_form(n, c.v)) < 1e-12
        assert n.z == 1.0
    det = np.linalg.det(
        np.column_stack([c.v.as_array(), c.nminus.as_array(), c.nplus.as_array()])
    )
    assert det > 0


def test_make_crooked_plane_normalizes_director():
    c = make_crooked_plane(ORIGIN, LorentzVector(0.0, 2.0, 0.0))
    assert c.v.as_array() == pytest.approx([0, 1, 0])
    d = std_plane()
    assert c.nminus == d.nminus and c.nplus == d.nplus


def test_make_crooked_plane_rejects_timelike():
    with pytest.raises(NotSpacelike):
        make_crooked_plane(ORIGIN, LorentzVector(0.0, 0.0, 1.0))


def test_classify_examples():
    c = std_plane()
    assert classify_point(c, LorentzVector(0, 1, 2)) is Side.PLUS
    assert classify_point(c, LorentzVector(0, 0, 1)) is Side.ON_SURFACE
    assert classify_point(c, LorentzVector(3, 0, 0)) is Side.MINUS
    # wing points lie on the surface
    assert classify_point(c, LorentzVector(2.0, 1.5, 2.0)) is Side.ON_SURFACE
    assert classify_point(c, LorentzVector(-2.0, -1.5, 2.0)) is Side.ON_SURFACE


def test_classify_cone_property():
    rng = np.random.default_rng(51)
    for _ in range(30):
        p = rand_vector(rng)
        c = make_crooked_plane(p, LorentzVector(*rng.normal(size=3) + [0, 2, 0]))
        q = rand_vector(rng, span=4.0)
        side = classify_point(c, q)
        for s in (0.5, 2.0, 10.0):
            scaled = p + (q - p).scale(s)
            assert classify_point(c, scaled) is side


def test_classify_separation_and_crossing():
    rng = np.random.default_rng(52)
    c = make_crooked_plane(
        LorentzVector(0.2, -0.1, 0.4), LorentzVector(0.3, 1.1, 0.2)
    )
    plus, minus = [], []
    for _ in range(2000):
        q = rand_vector(rng, span=5.0)
        side = classify_point(c, q)
        (plus if side is Side.PLUS else minus if side is Side.MINUS else []).append(q)
    assert len(plus) > 100 and len(minus) > 100
    for _ in range(30):
        a = plus[rng.integers(0, len(plus))]
        b = minus[rng.integers(0, len(minus))]
        lo, hi = 0.0, 1.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            q = a + (b - a).scale(mid)
            side = classify_point(c, q)
            if side is Side.ON_SURFACE:
                break
            if side is Side.PLUS:
                lo = mid
            else:
                hi = mid
        assert hi - lo < 1e-8 or side is Side.ON_SURFACE
        probe = a + (b - a).scale(0.5 * (lo + hi))
        assert classify_point(c, probe) is Side.ON_SURFACE


def test_classify_equivariance():
    rng = np.random.default_rng(53)
    for _ in range(40):
        p = rand_vector(rng)
        v = LorentzVector(*rng.normal(size=3) + [1.5, 0, 0])
        try:
            c = make_crooked_plane(p, v)
        except NotSpacelike:
            continue
        g = rand_affine(rng)
        moved = transform_plane(g, c)
        q = rand_vector(rng, span=3.0)
        assert classify_point(moved, g.apply(q)) is classify_point(c, q)


def test_disjoint_sampler_examples():
    c = std_plane()
    h_plus = CrookedHalfspace(c, Side.PLUS)
    h_minus = CrookedHalfspace(c, Side.MINUS)
    assert crooked_disjoint_sampled(h_plus, h_minus, 5.0, 4000, seed=1) is None
    hit = crooked_disjoint_sampled(h_plus, h_plus, 5.0, 4000, seed=1)
    assert hit is not None
    assert classify_point(c, hit) is Side.PLUS


def test_disjoint_facing_away_translates():
    c1 = std_plane()
    c2 = make_crooked_plane(LorentzVector(40.0, 0.0, 0.0), EY)
    # +x wedge of a plane is its Minus side; the facing-away pair is
    # (Plus of the left plane, Minus of the right plane)
    h1 = CrookedHalfspace(c1, Side.PLUS)
    h2 = CrookedHalfspace(c2, Side.MINUS)
    assert crooked_disjoint_sampled(h1, h2, 10.0, 100000, seed=3) is None


def test_drumm_slab_basins_disjoint_and_recovery():
    gamma = standard_boost(1.2, 2.0)
    basin_minus, basin_plus = drumm_slab(gamma)
    assert (
        crooked_disjoint_sampled(basin_minus, basin_plus, 10.0, 20000, seed=4)
        is None
    )
    defo = AffineDeformation((boost_sl2(1.2),), (LorentzVector(0, 2.0, 0),))
    rng = np.random.default_rng(54)
    for _ in range(200):
        q = LorentzVector(*rng.uniform(-10, 10, 3))
        rec = slab_recover(defo, [(basin_minus, basin_plus)], q, 64)
        image = evaluate_affine(defo, rec.word).apply(q)
        assert classify_point(basin_minus.plane, image) is not basin_minus.side
        assert classify_point(basin_plus.plane, image) is not basin_plus.side


def test_drumm_slab_negative_displacement():
    gamma = standard_boost(0.8, -1.5)
    basin_minus, basin_plus = drumm_slab(gamma)
    defo = AffineDeformation((boost_sl2(0.8),), (LorentzVector(0, -1.5, 0),))
    rng = np.random.default_rng(55)
    for _ in range(100):
        q = LorentzVector(*rng.uniform(-8, 8, 3))
        rec = slab_recover(defo, [(basin_minus, basin_plus)], q, 64)
        assert rec.steps <= 64


def test_drumm_slab_conjugated_boost():
    rng = np.random.default_rng(56)
    conj = rand_affine(rng)
    gamma = conj.compose(standard_boost(1.0, 1.7)).compose(conj.inverse())
    basin_minus, basin_plus = drumm_slab(gamma)
    assert (
        crooked_disjoint_sampled(basin_minus, basin_plus, 8.0, 20000, seed=6)
        is None
    )


def test_drumm_slab_rejects_zero_displacement():
    with pytest.raises(ValueError):
        drumm_slab(standard_boost(1.0, 0.0))


def test_slab_recover_identity_and_one_step():
    gamma = standard_boost(1.2, 2.0)
    basin_minus, basin_plus = drumm_slab(gamma)
    defo = AffineDeformation((boost_sl2(1.2),), (LorentzVector(0, 2.0, 0),))
    inside = ORIGIN
    rec = slab_recover(defo, [(basin_minus, basin_plus)], inside, 8)
    assert rec.steps == 0 and len(rec.word) == 0
    pushed = defo.affine_generators[0].apply(inside)
    rec1 = slab_recover(defo, [(basin_minus, basin_plus)], pushed, 8)
    assert rec1.steps == 1
    assert rec1.word.letters == ((1, -1),)


def test_slab_recover_depth_exceeded():
    gamma = standard_boost(1.2, 2.0)
    basin_minus, basin_plus = drumm_slab(gamma)
    defo = AffineDeformation((boost_sl2(1.2),), (LorentzVector(0, 2.0, 0),))
    far = LorentzVector(0.0, 1e5, 0.0)
    with pytest.raises(DepthExceeded):
        slab_recover(defo, [(basin_minus, basin_plus)], far, 3)


def test_slice_zigzag_at_unit_height():
    pieces = slice_polylines(std_plane(), "z", 1.0, 3.0)
    assert len(pieces) == 1
    assert pieces[0] == [(-1.0, -3.0), (-1.0, 0.0), (1.0, 0.0), (1.0, 3.0)]


def test_slice_through_vertex_degenerates_to_line():
    pieces = slice_polylines(std_plane(), "z", 0.0, 3.0)
    assert len(pieces) == 1
    xs = {p[0] for p in pieces[0]}
    assert xs == {0.0}
    ys = [p[1] for p in pieces[0]]
    assert min(ys) == -3.0 and max(ys) == 3.0


def test_slice_translation_equivariance():
    shifted = make_crooked_plane(LorentzVector(0.5, -0.25, 0.0), EY)
    base = slice_polylines(std_plane(), "z", 1.0, 10.0)
    moved = slice_polylines(shifted, "z", 1.0, 10.0)
    # interior vertices shift by the in-plane components of the vertex
    base_core = [p for p in base[0] if abs(p[0]) <= 2 and abs(p[1]) <= 2]
    moved_core = [p for p in moved[0] if abs(p[0] - 0.5) <= 2 and abs(p[1] + 0.25) <= 2]
    assert len(base_core) == len(moved_core)
    for (x0, y0), (x1, y1) in zip(base_core, moved_core):
        assert x1 == pytest.approx(x0 + 0.5, abs=1e-9)
        assert y1 == pytest.approx(y0 - 0.25, abs=1e-9)


def test_slice_stem_points_classify_on_surface():
    c = std_plane()
    for poly in slice_polylines(c, "z", 1.0, 2.0):
        for x, y in poly:
            assert classify_point(c, LorentzVector(x, y, 1.0)) is Side.ON_SURFACE
