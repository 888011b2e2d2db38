"""Margulis invariants of affine deformations of Fuchsian groups.

For an affine map whose linear part is hyperbolic with eigenframe
(x-, x0, x+), the invariant is alpha = B(u, x0), the signed displacement
along the invariant spacelike line.  It is a class function, symmetric
under inversion, homogeneous under powers (alpha(g^n) = |n| alpha(g)), and
equals the derivative of the geodesic-length function along the deformation
defined by the translational cocycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from .lorentz import (
    BoostFrame,
    LorentzIsometry,
    LorentzVector,
    NotHyperbolic,
    SL2Class,
    SL2Matrix,
    bilinear_form,
    boost_frame,
    classify_sl2,
    sl2_to_so21,
    xz_boost,
)
from .words import (
    AffineDeformation,
    AffineMap,
    Representation,
    RepKind,
    Word,
    evaluate,
    evaluate_affine,
)

TOL_SIGN = 1e-7  # |alpha / ell| below this counts as a vanishing class


@dataclass(frozen=True)
class InvariantRecord:
    """Invariant data of one word: length, alpha, and alpha / length.

    The normalized value is defined only for hyperbolic words; it is
    constant along powers of a word.
    """

    word: Word
    klass: SL2Class
    ell: Optional[float]
    alpha: Optional[float]
    normalized: Optional[float]


def margulis_invariant(deformation: AffineDeformation, w: Word) -> InvariantRecord:
    """Signed Lorentzian displacement of the word's affine image.

    Non-hyperbolic words get a record with the class set and no numbers.
    """
    linear_word = evaluate(deformation.linear_representation, w)
    klass = classify_sl2(linear_word)
    if klass is not SL2Class.HYPERBOLIC:
        return InvariantRecord(w, klass, None, None, None)
    affine = evaluate_affine(deformation, w)
    frame = boost_frame(affine.linear)
    alpha = bilinear_form(affine.trans, frame.xzero)
    return InvariantRecord(w, klass, frame.ell, alpha, alpha / frame.ell)


def standard_boost(ell: float, alpha: float) -> AffineMap:
    """Affine boost in normal position: linear xz-boost, translation along y."""
    return AffineMap(xz_boost(ell), LorentzVector(0.0, alpha, 0.0))


_STANDARD_FRAME = np.column_stack(
    [np.array([1.0, 0.0, 1.0]), np.array([0.0, 1.0, 0.0]), np.array([-1.0, 0.0, 1.0])]
)


def _frame_data(g: AffineMap) -> Tuple[BoostFrame, np.ndarray, LorentzVector]:
    """Eigenframe, column matrix [x+ | x0 | x-], and a point on the axis."""
    frame = boost_frame(g.linear)
    cols = np.column_stack(
        [frame.xplus.as_array(), frame.xzero.as_array(), frame.xminus.as_array()]
    )
    coeffs = np.linalg.solve(cols, g.trans.as_array())
    el = math.exp(frame.ell)
    base = -(coeffs[0] / (el - 1.0)) * cols[:, 0] - (
        coeffs[2] / (1.0 / el - 1.0)
    ) * cols[:, 2]
    return frame, cols, LorentzVector.from_array(base)


def boost_normal_form(g: AffineMap) -> Tuple[AffineMap, float, float]:
    """Affine change of coordinates realizing the boost normal form.

    Returns (h, ell, alpha) where h is an affine isometry such that
    h^-1 o g o h is standard_boost(ell, alpha): expressed in the null frame
    (x+, x0, x-) its linear part is diag(e^ell, 1, e^-ell) and its
    translation is (0, alpha, 0).  The invariant spacelike line of g is the
    h-image of the y axis.
    """
    frame, cols, base = _frame_data(g)
    pairing = -bilinear_form(frame.xplus, frame.xminus)
    scale = math.sqrt(2.0 / pairing)
    scaled = cols.copy()
    scaled[:, 0] *= scale
    scaled[:, 2] *= scale
    k = LorentzIsometry(scaled @ np.linalg.inv(_STANDARD_FRAME))
    h = AffineMap(k, base)
    alpha = bilinear_form(g.trans, frame.xzero)
    return h, frame.ell, alpha


class Verdict(Enum):
    UNIFORM_POSITIVE = "uniform_positive"
    UNIFORM_NEGATIVE = "uniform_negative"
    MIXED = "mixed"
    ALL_ZERO = "all_zero"
    EMPTY = "empty"


@dataclass(frozen=True)
class SignSpectrum:
    """Sign census of normalized invariants over short conjugacy classes.

    A Mixed verdict refutes properness of the action; uniform verdicts are
    evidence only, since any word-length cutoff is a truncation.  Classes
    with |alpha/ell| <= tolerance are counted as zero, never dropped:
    a vanishing normalized invariant sits exactly on the properness
    boundary.
    """

    max_len: int
    positive: int
    negative: int
    zero: int
    skipped_nonhyperbolic: int
    min_normalized: Optional[float]
    max_normalized: Optional[float]
    verdict: Verdict


def conjugacy_class_representatives(rank: int, max_len: int) -> Iterator[Word]:
    """One cyclically reduced word per conjugacy class, up to inversion.

    The representative is the lexicographically least among all rotations
    of the word and of its inverse; the empty word is not produced.
    """
    from .words import _letter_key, enumerate_words  # deterministic order

    for w in enumerate_words(rank, max_len, cyclically_reduced_only=True):
        if len(w) == 0:
            continue
        letters = w.letters
        keyed = tuple(_letter_key(l) for l in letters)
        best = keyed
        for candidate in _rotations_and_inverse(letters):
            ck = tuple(_letter_key(l) for l in candidate)
            if ck < best:
                best = ck
        if keyed == best:
            yield w


def _rotations_and_inverse(letters) -> Iterator[Tuple]:
    n = len(letters)
    inv = tuple((idx, -exp) for idx, exp in reversed(letters))
    for i in range(n):
        yield letters[i:] + letters[:i]
        yield inv[i:] + inv[:i]


def sign_spectrum(
    deformation: AffineDeformation, max_len: int, tol: float = TOL_SIGN
) -> SignSpectrum:
    """Census of invariant signs over conjugacy classes of length <= max_len."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    pos = neg = zero = skipped = 0
    lo: Optional[float] = None
    hi: Optional[float] = None
    for w in conjugacy_class_representatives(deformation.rank, max_len):
        record = margulis_invariant(deformation, w)
        if record.klass is not SL2Class.HYPERBOLIC:
            skipped += 1
            continue
        nu = record.normalized
        lo = nu if lo is None else min(lo, nu)
        hi = nu if hi is None else max(hi, nu)
        if abs(nu) <= tol:
            zero += 1
        elif nu > 0:
            pos += 1
        else:
            neg += 1
    if pos and neg:
        verdict = Verdict.MIXED
    elif pos:
        verdict = Verdict.UNIFORM_POSITIVE
    elif neg:
        verdict = Verdict.UNIFORM_NEGATIVE
    elif zero:
        verdict = Verdict.ALL_ZERO
    else:
        verdict = Verdict.EMPTY
    return SignSpectrum(max_len, pos, neg, zero, skipped, lo, hi, verdict)


def lorentz_cross_matrix(v: LorentzVector) -> np.ndarray:
    """Element of so(2, 1) representing v under the equivariant isomorphism.

    The matrix sends w to G (v x w), so that B(cross(v) w, x) is the
    determinant of the column triple (v, w, x); this identifies translations
    with infinitesimal isometries.
    """
    a, b, c = v.x, v.y, v.z
    return np.array([[0.0, -c, b], [c, 0.0, -a], [b, -a, 0.0]])


def _deformed_length(
    base: Sequence[np.ndarray],
    velocities: Sequence[np.ndarray],
    t: float,
    w: Word,
) -> float:
    gens = [expm(t * x) @ m for m, x in zip(base, velocities)]
    invs: dict = {}
    result = np.eye(3)
    for idx, exp_ in w.letters:
        if exp_ == 1:
            g = gens[idx - 1]
        else:
            if idx not in invs:
                invs[idx] = np.linalg.inv(gens[idx - 1])
            g = invs[idx]
        result = result @ g
    vals = np.linalg.eigvals(result)
    if np.max(np.abs(vals.imag)) > 1e-7:
        raise NotHyperbolic("deformed word left the hyperbolic locus")
    top = float(np.max(vals.real))
    if top <= 1.0:
        raise NotHyperbolic("deformed word left the hyperbolic locus")
    return math.log(top)


def length_derivative_check(
    rho0: Representation,
    u: Sequence[LorentzVector],
    w: Word,
    h: float,
) -> Tuple[float, float, float]:
    """Compare a finite difference of geodesic length with the invariant.

    The linear representation is deformed by rho_t(a_i) =
    exp(t u_i^) rho_0(a_i), with u_i^ the so(2, 1) image of the translation
    vector.  Returns (fd, alpha, err) where fd = (l_h(w) - l_0(w)) / h and
    err = |fd - alpha|; err is O(h) when the invariant is the derivative.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    if rho0.kind is not RepKind.LINEAR2:
        raise ValueError("expected an SL(2) linear representation")
    if len(u) != rho0.rank:
        raise ValueError("one translation vector per generator required")
    base = [sl2_to_so21(g).m for g in rho0.generators]
    velocities = [lorentz_cross_matrix(v) for v in u]
    deformation = AffineDeformation(tuple(rho0.generators), tuple(u))
    record = margulis_invariant(deformation, w)
    if record.klass is not SL2Class.HYPERBOLIC:
        raise NotHyperbolic(f"word evaluates to a {record.klass.value} element")
    ell0 = _deformed_length(base, velocities, 0.0, w)
    ellh = _deformed_length(base, velocities, h, w)
    fd = (ellh - ell0) / h
    err = abs(fd - record.alpha)
    return fd, record.alpha, err
