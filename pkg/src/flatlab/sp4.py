"""Exact symplectic 4x4 matrices and their affine Lorentzian action.

W = L0 + Linf carries the symplectic form J = [[0, I], [-I, 0]] pairing the
two Lagrangian coordinate planes by duality.  Lagrangians transverse to L0
are graphs of self-adjoint maps Linf -> L0, identified with symmetric 2x2
matrices S; this is the affine chart used here.  A block upper-triangular
symplectic matrix [[A, B], [0, (A^T)^-1]] acts on the chart affinely by

    S  ->  A S A^T + B A^T,

so shears [[I, f], [0, I]] act as translations by f, and block embeddings
g + (g^T)^-1 act linearly by S -> g S g^T.  The quadratic form -det S is
preserved exactly when det A = +-1; converting (a, b, c) coordinates of S
to ((a - c)/2, b, (a + c)/2) lands in the Minkowski frame of the lorentz
module.

Everything in this module is exact rational arithmetic; floating point
enters only in the final AffineMap.

The other reading of the chart (graphs of maps L0 -> Linf, i.e. Lagrangians
transverse to Linf) does not make shears act by translations; see the
regression test pinning this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from .lorentz import LorentzIsometry, LorentzVector, SL2Matrix
from .words import AffineDeformation, AffineMap

Row = Tuple[Fraction, ...]
Mat = Tuple[Row, ...]


class NotSymmetric(ValueError):
    pass


class BadDeterminant(ValueError):
    pass


class NotAffineChart(ValueError):
    """Matrix is not block upper-triangular over the chart."""


class NonSymmetricTranslation(ValueError):
    """B A^T is not symmetric; the symplectic convention was breached."""


def _frac_matrix(rows) -> Mat:
    return tuple(tuple(Fraction(e) for e in row) for row in rows)


def _mmul(a: Mat, b: Mat) -> Mat:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def _mtrans(a: Mat) -> Mat:
    return tuple(tuple(a[j][i] for j in range(len(a))) for i in range(len(a[0])))


def _midentity(n: int) -> Mat:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def _det2(a: Mat) -> Fraction:
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def _inv2(a: Mat) -> Mat:
    d = _det2(a)
    if d == 0:
        raise ZeroDivisionError("singular 2x2 block")
    return (
        (a[1][1] / d, -a[0][1] / d),
        (-a[1][0] / d, a[0][0] / d),
    )


def _sym_form_j() -> Mat:
    z, one = Fraction(0), Fraction(1)
    return (
        (z, z, one, z),
        (z, z, z, one),
        (-one, z, z, z),
        (z, -one, z, z),
    )


J_FORM = _sym_form_j()


def symplectic_check(m) -> bool:
    """Exact test m^T J m = J for a 4x4 rational matrix."""
    mat = _frac_matrix(m)
    if len(mat) != 4 or any(len(r) != 4 for r in mat):
        raise ValueError("expected a 4x4 matrix")
    return _mmul(_mmul(_mtrans(mat), J_FORM), mat) == J_FORM


@dataclass(frozen=True)
class Sp4Matrix:
    """4x4 exact rational matrix preserving J = [[0, I], [-I, 0]]."""

    m: Mat

    def __post_init__(self):
        mat = _frac_matrix(self.m)
        object.__setattr__(self, "m", mat)
        if not symplectic_check(mat):
            raise ValueError("matrix is not symplectic")

    @staticmethod
    def identity() -> "Sp4Matrix":
        return Sp4Matrix(_midentity(4))

    def __matmul__(self, other: "Sp4Matrix") -> "Sp4Matrix":
        return Sp4Matrix(_mmul(self.m, other.m))

    def inverse(self) -> "Sp4Matrix":
        # m^-1 = -J m^T J for symplectic m
        neg = tuple(tuple(-e for e in row) for row in J_FORM)
        return Sp4Matrix(_mmul(_mmul(neg, _mtrans(self.m)), J_FORM))

    def blocks(self) -> Tuple[Mat, Mat, Mat, Mat]:
        m = self.m
        take = lambda r0, c0: tuple(
            tuple(m[r0 + i][c0 + j] for j in range(2)) for i in range(2)
        )
        return take(0, 0), take(0, 2), take(2, 0), take(2, 2)


def make_shear(f) -> Sp4Matrix:
    """Shear [[I, f], [0, I]] for symmetric rational f; acts as translation.

    Shears compose additively: make_shear(f) make_shear(f') =
    make_shear(f + f').
    """
    fm = _frac_matrix(f)
    if len(fm) != 2 or any(len(r) != 2 for r in fm):
        raise ValueError("expected a 2x2 matrix")
    if fm[0][1] != fm[1][0]:
        raise NotSymmetric("shear block must be symmetric")
    z, one = Fraction(0), Fraction(1)
    return Sp4Matrix(
        (
            (one, z, fm[0][0], fm[0][1]),
            (z, one, fm[1][0], fm[1][1]),
            (z, z, one, z),
            (z, z, z, one),
        )
    )


def block_embed(g) -> Sp4Matrix:
    """g + (g^T)^-1, the symplectic matrix preserving both Lagrangians.

    Induces a Lorentz isometry of the chart exactly when det g = +-1.
    """
    gm = _frac_matrix(g)
    if len(gm) != 2 or any(len(r) != 2 for r in gm):
        raise ValueError("expected a 2x2 matrix")
    d = _det2(gm)
    if d != 1 and d != -1:
        raise BadDeterminant(f"determinant must be +-1, got {d}")
    dblock = _inv2(_mtrans(gm))
    z = Fraction(0)
    return Sp4Matrix(
        (
            (gm[0][0], gm[0][1], z, z),
            (gm[1][0], gm[1][1], z, z),
            (z, z, dblock[0][0], dblock[0][1]),
            (z, z, dblock[1][0], dblock[1][1]),
        )
    )


_ABC_TO_XYZ = _frac_matrix(
    [
        [Fraction(1, 2), 0, Fraction(-1, 2)],
        [0, 1, 0],
        [Fraction(1, 2), 0, Fraction(1, 2)],
    ]
)
_XYZ_TO_ABC = _frac_matrix([[1, 0, 1], [0, 1, 0], [-1, 0, 1]])


def _action_abc(a: Mat) -> Mat:
    """Matrix of S -> A S A^T in the (a, b, c) coordinates of S."""
    p, q = a[0][0], a[0][1]
    r, s = a[1][0], a[1][1]
    return (
        (p * p, 2 * p * q, q * q),
        (p * r, p * s + q * r, q * s),
        (r * r, 2 * r * s, s * s),
    )


@dataclass(frozen=True)
class Sp4Affine:
    """Exact affine action of a chart-preserving symplectic matrix.

    linear_abc / translation_abc describe S -> A S A^T + B A^T in the
    (a, b, c) coordinates of symmetric matrices; the _xyz fields are the
    same data in the Minkowski frame.  `affine` is the floating version.
    """

    linear_abc: Mat
    translation_abc: Row
    linear_xyz: Mat
    translation_xyz: Row
    affine: AffineMap

    def compose(self, other: "Sp4Affine") -> "Sp4Affine":
        lin = _mmul(self.linear_abc, other.linear_abc)
        tr_col = _mmul(
            self.linear_abc, tuple((e,) for e in other.translation_abc)
        )
        tr = tuple(
            tr_col[i][0] + self.translation_abc[i] for i in range(3)
        )
        return _sp4_affine_from_abc(lin, tr)


def _sp4_affine_from_abc(lin_abc: Mat, tr_abc: Row) -> Sp4Affine:
    lin_xyz = _mmul(_mmul(_ABC_TO_XYZ, lin_abc), _XYZ_TO_ABC)
    tr_col = _mmul(_ABC_TO_XYZ, tuple((e,) for e in tr_abc))
    tr_xyz = tuple(tr_col[i][0] for i in range(3))
    affine = AffineMap(
        LorentzIsometry(np.array([[float(e) for e in row] for row in lin_xyz])),
        LorentzVector(*(float(e) for e in tr_xyz)),
    )
    return Sp4Affine(lin_abc, tr_abc, lin_xyz, tr_xyz, affine)


def sp4_to_affine(m: Sp4Matrix) -> Sp4Affine:
    """Affine chart action of a block upper-triangular symplectic matrix.

    Requires the lower-left block to vanish and the upper-left block A to
    be invertible; the action is S -> A S A^T + B A^T with B A^T symmetric.
    Composition is respected exactly: sp4_to_affine(m1 m2) equals
    sp4_to_affine(m1).compose(sp4_to_affine(m2)).
    """
    a, b, c, _d = m.blocks()
    zero = ((Fraction(0),) * 2,) * 2
    if c != zero:
        raise NotAffineChart("lower-left block must vanish")
    if _det2(a) == 0:
        raise NotAffineChart("upper-left block must be invertible")
    t = _mmul(b, _mtrans(a))
    if t[0][1] != t[1][0]:
        raise NonSymmetricTranslation("B A^T is not symmetric")
    tr_abc = (t[0][0], t[0][1], t[1][1])
    return _sp4_affine_from_abc(_action_abc(a), tr_abc)


@dataclass(frozen=True)
class Sp4ExampleParams:
    """Rational translational parameters (mu1, mu2, mu3)."""

    mu1: Fraction
    mu2: Fraction
    mu3: Fraction

    def __post_init__(self):
        object.__setattr__(self, "mu1", Fraction(self.mu1))
        object.__setattr__(self, "mu2", Fraction(self.mu2))
        object.__setattr__(self, "mu3", Fraction(self.mu3))


LINEAR_GENERATOR_1 = SL2Matrix(-1, -2, 0, -1)
LINEAR_GENERATOR_2 = SL2Matrix(-1, 0, 2, -1)


def arithmetic_example(
    params: Sp4ExampleParams,
) -> Tuple[Sp4Matrix, Sp4Matrix, AffineDeformation]:
    """The integral symplectic affine deformation of the level-2 group.

    The two 4x4 generators are exact integer (for integer mu) symplectic
    matrices whose linear parts are the level-two congruence generators
    [[-1, -2], [0, -1]] and [[-1, 0], [2, -1]]; the translational parts,
    read off through the affine chart, are B A^T.  Returns the generators
    and the resulting affine deformation.
    """
    m1, m2, m3 = params.mu1, params.mu2, params.mu3
    z = Fraction(0)
    g1 = Sp4Matrix(
        (
            (-1, -2, m1 + m2 - m3, z),
            (z, -1, 2 * m1, -m1),
            (z, z, -1, z),
            (z, z, 2, -1),
        )
    )
    g2 = Sp4Matrix(
        (
            (-1, z, -m2, -2 * m2),
            (2, -1, z, z),
            (z, z, -1, -2),
            (z, z, z, -1),
        )
    )
    translations = tuple(
        LorentzVector(*(float(e) for e in sp4_to_affine(g).translation_xyz))
        for g in (g1, g2)
    )
    deformation = AffineDeformation(
        (LINEAR_GENERATOR_1, LINEAR_GENERATOR_2), translations
    )
    return g1, g2, deformation
