"""Minkowski (2+1) linear algebra.

Conventions, fixed once for the whole package:

* the bilinear form is B(u, v) = u.x v.x + u.y v.y - u.z v.z, so the z axis
  is timelike and the future cone is z > 0;
* SL(2, R) acts on symmetric 2x2 matrices S = [[a, b], [b, c]] by
  g . S = g S g^T, preserving -det S.  In the coordinates
  (x, y, z) = ((a - c)/2, b, (a + c)/2) the form -det S becomes
  x^2 + y^2 - z^2 and the action realizes the two-to-one homomorphism
  SL(2, R) -> SO(2, 1) used throughout;
* eigenframes of hyperbolic isometries are normalized with the null
  eigenvectors scaled to z = 1 (future pointing), the spacelike fixed vector
  of unit length, and the sign of the fixed vector chosen so that
  det [x0 | x- | x+] > 0.  Any positive rescaling of the null vectors leaves
  the fixed vector unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np

Scalar = Union[int, float, Fraction]

TOL_NULL = 1e-9    # causal classification of vectors
TOL_CLASS = 1e-9   # trace classification of SL(2) elements
TOL_ORTHO = 1e-8   # allowed defect in m^T G m = G
TOL_FRAME = 1e-8   # eigenframe residuals

G_METRIC = np.diag([1.0, 1.0, -1.0])


class NotHyperbolic(ValueError):
    """Raised when an operation requires a hyperbolic element."""


class SL2Class(Enum):
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    IDENTITY = "identity"


class CausalClass(Enum):
    SPACELIKE = "spacelike"
    NULL = "null"
    TIMELIKE = "timelike"


def _is_exact(x: Scalar) -> bool:
    return isinstance(x, Rational)


@dataclass(frozen=True)
class LorentzVector:
    """Vector in the fixed frame where B = diag(+1, +1, -1)."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @staticmethod
    def from_array(a) -> "LorentzVector":
        return LorentzVector(float(a[0]), float(a[1]), float(a[2]))

    def __add__(self, other: "LorentzVector") -> "LorentzVector":
        return LorentzVector(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "LorentzVector") -> "LorentzVector":
        return LorentzVector(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "LorentzVector":
        return LorentzVector(-self.x, -self.y, -self.z)

    def scale(self, s: float) -> "LorentzVector":
        return LorentzVector(s * self.x, s * self.y, s * self.z)

    def norm(self) -> float:
        """Euclidean norm, used only for tolerance scaling."""
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


ZERO_VECTOR = LorentzVector(0.0, 0.0, 0.0)


def bilinear_form(u: LorentzVector, v: LorentzVector) -> float:
    """B(u, v) = u.x v.x + u.y v.y - u.z v.z."""
    return u.x * v.x + u.y * v.y - u.z * v.z


def causal_class(v: LorentzVector, tol: float = TOL_NULL) -> CausalClass:
    """Sign of B(v, v), with a tolerance band around the null cone."""
    q = bilinear_form(v, v)
    scale = 1.0 + v.norm() ** 2
    if abs(q) <= tol * scale:
        return CausalClass.NULL
    return CausalClass.SPACELIKE if q > 0 else CausalClass.TIMELIKE


@dataclass(frozen=True)
class SL2Matrix:
    """2x2 matrix of determinant +-1 (default +1).

    Entries may be exact rationals (int or Fraction), in which case the
    determinant constraint is checked exactly and products stay exact, or
    floats, in which case it is checked to tolerance.  Exactness matters for
    integer examples; numerically constructed Fuchsian generators carry
    float entries.
    """

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if all(_is_exact(e) for e in (self.a, self.b, self.c, self.d)):
            if det != 1 and det != -1:
                raise ValueError(f"determinant must be +-1 exactly, got {det}")
        else:
            if abs(abs(det) - 1.0) > 1e-9 * max(1.0, self._sq_norm()):
                raise ValueError(f"determinant must be +-1, got {det}")

    def _sq_norm(self) -> float:
        return float(
            self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
        )

    @property
    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> Scalar:
        return self.a + self.d

    @staticmethod
    def identity() -> "SL2Matrix":
        return SL2Matrix(1, 0, 0, 1)

    def __matmul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "SL2Matrix":
        det = self.det
        if _is_exact(det):
            det = Fraction(det)
            return SL2Matrix(
                Fraction(self.d) / det, -Fraction(self.b) / det,
                -Fraction(self.c) / det, Fraction(self.a) / det,
            )
        return SL2Matrix(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def neg(self) -> "SL2Matrix":
        return SL2Matrix(-self.a, -self.b, -self.c, -self.d)

    def to_array(self) -> np.ndarray:
        return np.array(
            [[float(self.a), float(self.b)], [float(self.c), float(self.d)]]
        )

    def is_exact(self) -> bool:
        return all(_is_exact(e) for e in (self.a, self.b, self.c, self.d))

    def entry_distance(self, other: "SL2Matrix") -> float:
        return max(
            abs(float(self.a - other.a)), abs(float(self.b - other.b)),
            abs(float(self.c - other.c)), abs(float(self.d - other.d)),
        )


def classify_sl2(g: SL2Matrix, tol: float = TOL_CLASS) -> SL2Class:
    """Trace classification of an SL(2) element of determinant +1."""
    ident = SL2Matrix.identity()
    if g.entry_distance(ident) <= tol or g.entry_distance(ident.neg()) <= tol:
        return SL2Class.IDENTITY
    t = abs(g.trace)
    if t > 2 + tol:
        return SL2Class.HYPERBOLIC
    if t < 2 - tol:
        return SL2Class.ELLIPTIC
    return SL2Class.PARABOLIC


@dataclass(frozen=True)
class LorentzIsometry:
    """3x3 matrix m with m^T G m = G, G = diag(1, 1, -1)."""

    m: np.ndarray

    def __post_init__(self):
        arr = np.array(self.m, dtype=float)
        if arr.shape != (3, 3):
            raise ValueError("expected a 3x3 matrix")
        defect = np.max(np.abs(arr.T @ G_METRIC @ arr - G_METRIC))
        if defect > TOL_ORTHO * max(1.0, float(np.max(np.abs(arr))) ** 2):
            raise ValueError(f"not a Lorentz isometry (defect {defect:.3e})")
        arr.setflags(write=False)
        object.__setattr__(self, "m", arr)

    @staticmethod
    def identity() -> "LorentzIsometry":
        return LorentzIsometry(np.eye(3))

    def __matmul__(self, other: "LorentzIsometry") -> "LorentzIsometry":
        return LorentzIsometry(self.m @ other.m)

    def inverse(self) -> "LorentzIsometry":
        # G m^T G is the exact inverse of an isometry; avoids np.linalg.inv.
        return LorentzIsometry(G_METRIC @ self.m.T @ G_METRIC)

    def apply(self, v: LorentzVector) -> LorentzVector:
        return LorentzVector.from_array(self.m @ v.as_array())

    @property
    def trace(self) -> float:
        return float(np.trace(self.m))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.m))


def xz_boost(ell: float) -> LorentzIsometry:
    """Boost fixing (0, 1, 0), with eigenvalues e^ell, 1, e^-ell."""
    ch, sh = math.cosh(ell), math.sinh(ell)
    return LorentzIsometry(np.array([[ch, 0.0, sh], [0.0, 1.0, 0.0], [sh, 0.0, ch]]))


def sl2_to_so21(g: SL2Matrix) -> LorentzIsometry:
    """Image of g under the action S -> g S g^T on symmetric matrices.

    The result is expressed in the diagonalizing coordinates
    (x, y, z) = ((a - c)/2, b, (a + c)/2); the kernel on SL(2, R) is {+-I}.
    """
    p, q = float(g.a), float(g.b)
    r, s = float(g.c), float(g.d)
    # Action on (a, b, c) coordinates of S = [[a, b], [b, c]].
    m_abc = np.array(
        [
            [p * p, 2 * p * q, q * q],
            [p * r, p * s + q * r, q * s],
            [r * r, 2 * r * s, s * s],
        ]
    )
    conv = np.array([[0.5, 0.0, -0.5], [0.0, 1.0, 0.0], [0.5, 0.0, 0.5]])
    conv_inv = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 1.0]])
    return LorentzIsometry(conv @ m_abc @ conv_inv)


def _top_eigenvalue(h: LorentzIsometry, tol: float = TOL_CLASS) -> float:
    """Largest eigenvalue of a hyperbolic isometry, or raise NotHyperbolic."""
    vals = np.linalg.eigvals(h.m)
    if np.max(np.abs(vals.imag)) > 1e-7:
        raise NotHyperbolic("isometry has complex eigenvalues (elliptic)")
    top = float(np.max(vals.real))
    if top <= 1.0 + tol:
        raise NotHyperbolic(f"largest eigenvalue {top} is not > 1")
    return top


def geodesic_length(g: Union[SL2Matrix, LorentzIsometry]) -> float:
    """Translation length of a hyperbolic element.

    Equal to log of the top eigenvalue of the SO(2,1) image, and to
    2 arccosh(|tr g| / 2) for SL(2) input.
    """
    if isinstance(g, SL2Matrix):
        if classify_sl2(g) is not SL2Class.HYPERBOLIC:
            raise NotHyperbolic(f"element is {classify_sl2(g).value}")
        return 2.0 * math.acosh(abs(float(g.trace)) / 2.0)
    return math.log(_top_eigenvalue(g))


@dataclass(frozen=True)
class BoostFrame:
    """Eigenframe (x-, x0, x+) of a hyperbolic isometry and its length.

    x- and x+ are the repelling and attracting null eigenvectors scaled to
    z = 1 (both future pointing); x0 spans the fixed spacelike line,
    normalized to B(x0, x0) = 1 with det [x0 | x- | x+] > 0.
    """

    xminus: LorentzVector
    xzero: LorentzVector
    xplus: LorentzVector
    ell: float


def boost_frame(h: LorentzIsometry) -> BoostFrame:
    """Normalized eigenframe of a hyperbolic isometry in SO+(2, 1)."""
    vals, vecs = np.linalg.eig(h.m)
    if np.max(np.abs(vals.imag)) > 1e-7:
        raise NotHyperbolic("isometry has complex eigenvalues (elliptic)")
    vals = vals.real
    order = np.argsort(vals)
    lo, mid, hi = vals[order]
    if hi <= 1.0 + TOL_CLASS or lo >= 1.0 - TOL_CLASS:
        raise NotHyperbolic("eigenvalues do not form e^-l < 1 < e^l")
    v_minus = vecs[:, order[0]].real
    v_zero = vecs[:, order[1]].real
    v_plus = vecs[:, order[2]].real

    def null_scaled(v: np.ndarray) -> np.ndarray:
        if abs(v[2]) < 1e-12 * np.linalg.norm(v):
            raise NotHyperbolic("null eigenvector has vanishing z component")
        return v / v[2]

    xm = null_scaled(v_minus)
    xp = null_scaled(v_plus)
    q = float(v_zero @ (G_METRIC @ v_zero))
    if q <= 0:
        raise NotHyperbolic("fixed eigenvector is not spacelike")
    x0 = v_zero / math.sqrt(q)
    if np.linalg.det(np.column_stack([x0, xm, xp])) < 0:
        x0 = -x0
    resid = np.max(np.abs(h.m @ x0 - x0))
    if resid > TOL_FRAME * max(1.0, float(np.max(np.abs(h.m)))):
        raise NotHyperbolic(f"fixed vector residual too large ({resid:.3e})")
    return BoostFrame(
        LorentzVector.from_array(xm),
        LorentzVector.from_array(x0),
        LorentzVector.from_array(xp),
        math.log(hi),
    )
