import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flatlab.euler import (
    TWO_PI,
    DegenerateVertex,
    EulerMode,
    LiftedElement,
    NonIntegralLift,
    RelatorFailed,
    SubdivisionLimit,
    benzecri_defect,
    circle_angle,
    compose_word,
    euler_number,
    lift_track,
    milnor_estimate_defect,
    polar_angle,
    translation_number,
    turning_number,
    wood_bound_check,
    word_lift,
)
from flatlab.fixtures import genus2_octagon_generators, near_fuchsian_perturbation, rotation_sl2
from flatlab.lorentz import SL2Matrix
from flatlab.words import Representation, RepKind, Word, relator_word
from helpers import rand_sl2

PI = math.pi


def rot(t):
    return rotation_sl2(t)


def test_circle_angle_examples():
    assert circle_angle(SL2Matrix.identity(), 1.3, TWO_PI) == pytest.approx(1.3)
    assert circle_angle(rot(0.7), 1.0, TWO_PI) == pytest.approx(1.7)
    assert circle_angle(SL2Matrix(2, 0, 0, 0.5), 0.0, TWO_PI) == 0.0
    assert circle_angle(rot(0.7), 1.0, PI) == pytest.approx((1.7) % PI)
    with pytest.raises(ValueError):
        circle_angle(rot(0.1), 0.0, 1.0)


def test_lift_track_examples():
    assert lift_track(rot(PI / 3), 0.0, TWO_PI) == pytest.approx(PI / 3)
    assert lift_track(SL2Matrix.identity(), 7.0, TWO_PI) == pytest.approx(7.0)
    lifted = LiftedElement.canonical(rot(PI / 3), TWO_PI)
    thrice = lifted.compose(lifted).compose(lifted)
    assert thrice.lift_at_zero == pytest.approx(PI, abs=1e-12)


def test_lift_track_periodicity_and_monotonicity():
    rng = np.random.default_rng(31)
    for _ in range(40):
        g = rand_sl2(rng)
        xs = sorted(rng.uniform(-7, 7, 6))
        vals = [lift_track(g, x, TWO_PI) for x in xs]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
        for x in xs[:3]:
            assert lift_track(g, x + TWO_PI, TWO_PI) == pytest.approx(
                lift_track(g, x, TWO_PI) + TWO_PI, abs=1e-9
            )


def test_lift_track_handles_extreme_boosts():
    huge = SL2Matrix(4e3, 0.0, 0.0, 2.5e-4)
    lift0 = lift_track(huge, 0.0, TWO_PI)
    assert lift_track(huge, TWO_PI, TWO_PI) == pytest.approx(lift0 + TWO_PI)
    xs = np.linspace(0.0, TWO_PI, 37)
    vals = [lift_track(huge, x, TWO_PI) for x in xs]
    assert all(a <= b + 1e-9 for a, b in zip(vals, vals[1:]))


def test_lifted_element_invariant_checked():
    with pytest.raises(ValueError):
        LiftedElement(rot(0.5), 0.7, TWO_PI)
    ok = LiftedElement(rot(0.5), 0.5 + TWO_PI, TWO_PI)
    assert ok.evaluate(0.0) == pytest.approx(0.5 + TWO_PI)


def test_lift_inverse_is_group_inverse():
    rng = np.random.default_rng(32)
    for _ in range(30):
        g = rand_sl2(rng)
        lifted = LiftedElement.canonical(g, TWO_PI)
        prod = lifted.compose(lifted.inverse())
        assert prod.lift_at_zero == pytest.approx(0.0, abs=1e-9)
        prod2 = lifted.inverse().compose(lifted)
        assert prod2.lift_at_zero == pytest.approx(0.0, abs=1e-9)


def test_word_lift_examples():
    rep = Representation((rot(0.9), rot(1.7)), RepKind.LINEAR2)
    assert word_lift(rep, Word.empty(), TWO_PI) == 0.0
    assert word_lift(rep, Word(((1, 1),)), TWO_PI) == pytest.approx(0.9)
    commutator = Word(((1, 1), (2, 1), (1, -1), (2, -1)))
    assert word_lift(rep, commutator, TWO_PI) == pytest.approx(0.0, abs=1e-10)


def test_translation_number_examples():
    lifted = LiftedElement.canonical(rot(0.8), TWO_PI)
    assert translation_number(lifted, 50) == pytest.approx(0.8, abs=TWO_PI / 50)
    hyp = LiftedElement.canonical(SL2Matrix(2, 0, 0, 0.5), TWO_PI)
    assert abs(translation_number(hyp, 50)) <= TWO_PI / 50
    par = LiftedElement.canonical(SL2Matrix(1, 1, 0, 1), TWO_PI)
    assert abs(translation_number(par, 50)) <= TWO_PI / 50


# -- Euler numbers ------------------------------------------------------------


def test_euler_trivial_rep():
    rep = Representation((SL2Matrix.identity(),) * 4, RepKind.PROJECTIVE2)
    report = euler_number(rep, 2, EulerMode.PROJECTIVE)
    assert report.e == 0
    assert report.satisfies
    assert report.bound == 2


def test_euler_octagon_projective_and_linear(octagon_gens):
    proj = euler_number(
        Representation(octagon_gens, RepKind.PROJECTIVE2), 2, EulerMode.PROJECTIVE
    )
    lin = euler_number(
        Representation(octagon_gens, RepKind.LINEAR2), 2, EulerMode.LINEAR
    )
    assert abs(proj.e) == 2
    assert proj.satisfies
    assert proj.e == 2 * lin.e
    assert abs(lin.e) == 1
    assert lin.satisfies
    assert abs(proj.raw_lift - proj.e * PI) < 1e-6
    assert abs(lin.raw_lift - lin.e * TWO_PI) < 1e-6


def test_euler_rejects_bad_relator():
    rng = np.random.default_rng(33)
    rep = Representation(tuple(rand_sl2(rng) for _ in range(4)), RepKind.PROJECTIVE2)
    with pytest.raises(RelatorFailed):
        euler_number(rep, 2, EulerMode.PROJECTIVE)


def test_euler_independent_of_lift_choice(octagon_gens):
    rng = np.random.default_rng(34)
    rep = Representation(octagon_gens, RepKind.PROJECTIVE2)
    base = euler_number(rep, 2, EulerMode.PROJECTIVE)
    relator = relator_word(2)
    for _ in range(10):
        lifts = [
            LiftedElement.canonical(g, PI).shifted(int(rng.integers(-2, 3)))
            for g in octagon_gens
        ]
        raw = compose_word(lifts, relator).lift_at_zero
        assert round(raw / PI) == base.e


def test_euler_conjugation_invariance(octagon_gens):
    rng = np.random.default_rng(35)
    rep = Representation(octagon_gens, RepKind.PROJECTIVE2)
    base = euler_number(rep, 2, EulerMode.PROJECTIVE)
    for _ in range(5):
        h = rand_sl2(rng, span=2.0)
        hinv = h.inverse()
        conj = Representation(
            tuple(h @ g @ hinv for g in octagon_gens), RepKind.PROJECTIVE2
        )
        assert euler_number(conj, 2, EulerMode.PROJECTIVE).e == base.e


def test_euler_near_fuchsian_milnor_wood(octagon_gens):
    rng = np.random.default_rng(36)
    for _ in range(20):
        gens = near_fuchsian_perturbation(octagon_gens, rng)
        rep = Representation(gens, RepKind.PROJECTIVE2)
        report = euler_number(rep, 2, EulerMode.PROJECTIVE)
        assert abs(report.e) <= 2


# -- Milnor / Wood estimates --------------------------------------------------


def test_milnor_defect_rotations():
    assert milnor_estimate_defect(rot(1.0), rot(2.5)) == pytest.approx(0.0, abs=1e-10)
    assert milnor_estimate_defect(SL2Matrix.identity(), SL2Matrix.identity()) == 0.0


def test_milnor_defect_below_half_pi_fuzz():
    rng = np.random.default_rng(37)
    worst = 0.0
    for _ in range(2000):
        worst = max(
            worst, milnor_estimate_defect(rand_sl2(rng, 10.0), rand_sl2(rng, 10.0))
        )
    assert worst < PI / 2
    assert worst > 0.5  # the bound is near-sharp for strong boosts


def test_milnor_defect_consistent_with_polar_angles():
    rng = np.random.default_rng(38)
    for _ in range(200):
        g1, g2 = rand_sl2(rng), rand_sl2(rng)
        defect = milnor_estimate_defect(g1, g2)
        residue = (
            polar_angle(g1 @ g2) - polar_angle(g1) - polar_angle(g2)
        ) % TWO_PI
        matches = min(
            abs(residue - defect),
            abs(residue - (TWO_PI - defect)),
        )
        assert matches < 1e-9


def test_wood_bound_trivial_and_octagon(octagon_gens):
    rep = Representation((SL2Matrix.identity(),) * 2, RepKind.LINEAR2)
    a, bound, ok = wood_bound_check(rep, 1)
    assert a == 0.0 and bound == 1.0 and ok
    rep_oct = Representation(octagon_gens, RepKind.PROJECTIVE2)
    a, bound, ok = wood_bound_check(rep_oct, 2)
    assert abs(a) == pytest.approx(2.0, abs=1e-9)
    assert bound == 3.0 and ok


def test_wood_bound_random_pairs():
    rng = np.random.default_rng(39)
    for _ in range(50):
        rep = Representation(
            tuple(rand_sl2(rng, 10.0) for _ in range(2)), RepKind.LINEAR2
        )
        a, bound, ok = wood_bound_check(rep, 1)
        assert ok and abs(a) < 1.0


# -- turning numbers ----------------------------------------------------------


def ngon(n, ccw=True, r=1.0):
    pts = [
        (r * math.cos(2 * PI * k / n), r * math.sin(2 * PI * k / n))
        for k in range(n)
    ]
    return pts if ccw else pts[::-1]


def test_turning_squares():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert turning_number(square) == pytest.approx(1.0, abs=1e-12)
    assert turning_number(square[::-1]) == pytest.approx(-1.0, abs=1e-12)


def test_turning_figure_eight():
    eight = [
        (0, 0), (1, 1), (2, 0), (1, -1),
        (0, 0), (-1, 1), (-2, 0), (-1, -1),
    ]
    assert turning_number(eight) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("n", range(3, 13))
def test_turning_regular_ngons(n):
    assert turning_number(ngon(n)) == pytest.approx(1.0, abs=1e-9)


@given(st.lists(st.floats(0.2, 1000.0), min_size=3, max_size=24))
def test_turning_convex_polygon_is_one(radii):
    n = len(radii)
    pts = [
        (r * math.cos(2 * PI * k / n), r * math.sin(2 * PI * k / n))
        for k, r in enumerate(radii)
    ]
    # star-shaped with strictly increasing angle: turning number one
    assert turning_number(pts) == pytest.approx(1.0, abs=1e-9)


def test_turning_degenerate_inputs():
    with pytest.raises(DegenerateVertex):
        turning_number([(0, 0), (1, 0)])
    with pytest.raises(DegenerateVertex):
        turning_number([(0, 0), (1, 0), (1, 0), (0, 1)])
    with pytest.raises(DegenerateVertex):
        turning_number([(0, 0), (1, 0), (2, 0), (3, 0)])  # fold at the end


# -- Benzecri defect ----------------------------------------------------------


def test_benzecri_similarity_gives_zero():
    p = ngon(64)
    s = 2.0
    c, sn = math.cos(0.8), math.sin(0.8)
    linear = [[s * c, -s * sn], [s * sn, s * c]]
    assert benzecri_defect(p, linear, (5.0, -3.0)) == pytest.approx(0.0, abs=1e-10)
    assert benzecri_defect(p, [[1, 0], [0, 1]]) == 0.0


def test_benzecri_anisotropic_below_pi():
    p = ngon(64)
    defect = benzecri_defect(p, [[4.0, 0.0], [0.0, 0.25]])
    assert 0.0 < defect < PI


def test_benzecri_requires_orientation():
    with pytest.raises(ValueError):
        benzecri_defect(ngon(8), [[1, 0], [0, -1]])
