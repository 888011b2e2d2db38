import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flatlab.lorentz import SL2Matrix, geodesic_length, classify_sl2, SL2Class
from flatlab.words import (
    AffineDeformation,
    AffineMap,
    IndexOutOfRange,
    LorentzVector,
    Representation,
    RepKind,
    Word,
    WrongGeneratorCount,
    enumerate_words,
    evaluate,
    evaluate_affine,
    reduce,
    relator_word,
    surface_relator_defect,
)
from helpers import rand_sl2, rand_vector

letters_strategy = st.lists(
    st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=12
)


def W(*letters):
    return Word(tuple(letters))


def test_reduce_examples():
    assert reduce([(1, 1), (1, -1)]) == Word.empty()
    assert reduce([(1, 1), (2, 1), (2, -1), (1, 1)]) == W((1, 1), (1, 1))
    already = [(1, 1), (2, 1), (1, -1)]
    assert reduce(already).letters == tuple(already)


def test_reduce_rejects_bad_indices():
    with pytest.raises(IndexOutOfRange):
        reduce([(0, 1)])
    with pytest.raises(IndexOutOfRange):
        reduce([(3, 1)], rank=2)


@given(letters_strategy)
def test_reduce_is_reduced_and_idempotent(letters):
    w = reduce(letters)
    for a, b in zip(w.letters, w.letters[1:]):
        assert not (a[0] == b[0] and a[1] == -b[1])
    assert reduce(w.letters) == w


@given(letters_strategy)
def test_reduce_respects_group_element(letters):
    rng = np.random.default_rng(7)
    gens = tuple(rand_sl2(rng, span=2.0) for _ in range(3))
    rep = Representation(gens, RepKind.LINEAR2)
    raw = SL2Matrix.identity()
    inv = {i: g.inverse() for i, g in enumerate(gens, start=1)}
    for idx, exp in letters:
        raw = raw @ (gens[idx - 1] if exp == 1 else inv[idx])
    reduced = evaluate(rep, reduce(letters))
    assert np.allclose(raw.to_array(), reduced.to_array(), atol=1e-8)


def test_enumerate_counts():
    assert sum(1 for _ in enumerate_words(2, 1)) == 5
    assert sum(1 for _ in enumerate_words(2, 2)) == 17
    assert sum(1 for _ in enumerate_words(1, 3)) == 7


@pytest.mark.parametrize("rank,max_len", [(1, 5), (2, 4), (3, 3)])
def test_enumerate_count_formula(rank, max_len):
    expected = 1 + sum(
        2 * rank * (2 * rank - 1) ** (n - 1) for n in range(1, max_len + 1)
    )
    words = list(enumerate_words(rank, max_len))
    assert len(words) == expected
    assert len(set(words)) == expected


def test_enumerate_order_is_length_then_lex():
    first = [str(w) for w in enumerate_words(2, 2)]
    assert first[:5] == ["1", "a", "A", "b", "B"]
    assert first[5:9] == ["aa", "ab", "aB", "AA"]


def test_evaluate_examples():
    rng = np.random.default_rng(21)
    g1, g2 = rand_sl2(rng), rand_sl2(rng)
    rep = Representation((g1, g2), RepKind.LINEAR2)
    assert evaluate(rep, W((1, 1))) == g1
    conj = evaluate(rep, W((1, 1), (2, 1), (1, -1)))
    expected = g1 @ g2 @ g1.inverse()
    assert np.allclose(conj.to_array(), expected.to_array(), atol=1e-12)
    assert evaluate(rep, Word.empty()) == SL2Matrix.identity()
    with pytest.raises(IndexOutOfRange):
        evaluate(rep, W((3, 1)))


def test_evaluate_homomorphism_fuzz():
    rng = np.random.default_rng(22)
    gens = tuple(rand_sl2(rng, span=2.0) for _ in range(2))
    rep = Representation(gens, RepKind.LINEAR2)
    words = [w for w in enumerate_words(2, 6)]
    for _ in range(200):
        w1 = words[rng.integers(0, len(words))]
        w2 = words[rng.integers(0, len(words))]
        lhs = evaluate(rep, w1 * w2).to_array()
        rhs = (evaluate(rep, w1) @ evaluate(rep, w2)).to_array()
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))


def _random_deformation(rng, rank=2):
    gens = tuple(rand_sl2(rng, span=2.0) for _ in range(rank))
    trans = tuple(rand_vector(rng) for _ in range(rank))
    return AffineDeformation(gens, trans)


def test_evaluate_affine_examples():
    rng = np.random.default_rng(23)
    defo = _random_deformation(rng)
    a_map = defo.affine_generators[0]
    b_map = defo.affine_generators[1]
    got = evaluate_affine(defo, W((1, 1)))
    assert np.allclose(got.linear.m, a_map.linear.m)
    assert got.trans.as_array() == pytest.approx(a_map.trans.as_array())
    # cocycle rule: u(ab) = u(a) + L(a) u(b)
    got_ab = evaluate_affine(defo, W((1, 1), (2, 1)))
    expected = a_map.trans + a_map.linear.apply(b_map.trans)
    assert got_ab.trans.as_array() == pytest.approx(expected.as_array(), abs=1e-12)
    # inverse: u(a^-1) = -L(a)^-1 u(a)
    got_inv = evaluate_affine(defo, W((1, -1)))
    expected_inv = -a_map.linear.inverse().apply(a_map.trans)
    assert got_inv.trans.as_array() == pytest.approx(
        expected_inv.as_array(), abs=1e-12
    )
    assert evaluate_affine(defo, Word.empty()).trans.as_array() == pytest.approx(
        [0, 0, 0]
    )


def test_affine_word_inverse_is_inverse_map():
    rng = np.random.default_rng(24)
    defo = _random_deformation(rng)
    words = [w for w in enumerate_words(2, 5) if len(w) > 0]
    for _ in range(100):
        w = words[rng.integers(0, len(words))]
        fwd = evaluate_affine(defo, w)
        back = evaluate_affine(defo, w.inverse())
        comp = fwd.compose(back)
        assert np.allclose(comp.linear.m, np.eye(3), atol=1e-9)
        assert comp.trans.as_array() == pytest.approx([0, 0, 0], abs=1e-9)


def test_cyclic_reduction_preserves_length_spectrum():
    rng = np.random.default_rng(25)
    gens = tuple(rand_sl2(rng, span=2.0) for _ in range(2))
    rep = Representation(gens, RepKind.LINEAR2)
    count = 0
    for w in enumerate_words(2, 5):
        if w.is_cyclically_reduced() or len(w) == 0:
            continue
        g = evaluate(rep, w)
        if classify_sl2(g) is not SL2Class.HYPERBOLIC:
            continue
        reduced = evaluate(rep, w.cyclic_reduce())
        if classify_sl2(reduced) is not SL2Class.HYPERBOLIC:
            continue
        assert geodesic_length(g) == pytest.approx(
            geodesic_length(reduced), rel=1e-9
        )
        count += 1
    assert count > 10


def test_surface_relator_trivial_rep():
    ident = SL2Matrix.identity()
    rep = Representation((ident,) * 4, RepKind.PROJECTIVE2)
    assert surface_relator_defect(rep, 2) == 0.0


def test_surface_relator_octagon(octagon_gens):
    rep = Representation(octagon_gens, RepKind.PROJECTIVE2)
    assert surface_relator_defect(rep, 2) < 1e-8


def test_surface_relator_random_fails():
    rng = np.random.default_rng(26)
    for _ in range(10):
        rep = Representation(
            tuple(rand_sl2(rng) for _ in range(4)), RepKind.PROJECTIVE2
        )
        assert surface_relator_defect(rep, 2) > 1e-3


def test_surface_relator_wrong_count():
    rep = Representation((SL2Matrix.identity(),) * 3, RepKind.LINEAR2)
    with pytest.raises(WrongGeneratorCount):
        surface_relator_defect(rep, 2)


def test_relator_word_shape():
    w = relator_word(2)
    assert str(w) == "abABcdCD"
