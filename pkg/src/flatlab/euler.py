"""Lifts of circle actions, Euler numbers, and turning numbers.

SL(2, R) with positive determinant acts on the circle of directions
(period 2 pi) and on the circle of lines (period pi).  Elements of the
universal covering group are represented as (matrix, lift value at angle 0);
composition evaluates one lift at the other's value by tracking along the
circle.  The canonical lift of a matrix is the one whose value at 0 lies in
[0, period).

Tracking is exact for these maps: a linear map with positive determinant
sends rays to rays, so the angle level f(0) recurs only after a full
period, and the lift increment over any sub-period interval equals the
angle difference reduced to [0, period).  A midpoint split re-verifies the
monotone-increment identity on every call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Sequence, Tuple

import numpy as np

from .lorentz import SL2Matrix
from .words import (
    Representation,
    RepKind,
    Word,
    WrongGeneratorCount,
    relator_word,
    surface_relator_defect,
)

TWO_PI = 2.0 * math.pi
NON_INTEGRAL_TOL = 1e-6   # distance of a relator lift from a period multiple
RELATOR_TOL = 1e-6        # allowed surface-relator defect


class SubdivisionLimit(RuntimeError):
    """Lift tracking met a non-finite angle or a failed monotone-increment
    identity; the input is pathological."""


class NonIntegralLift(RuntimeError):
    """Relator lift is not within tolerance of a period multiple."""


class RelatorFailed(ValueError):
    """Surface relator is not satisfied to tolerance."""


class DegenerateVertex(ValueError):
    """Polyline has a zero edge or an exterior angle of +-pi."""


def _check_period(period: float) -> float:
    if not (abs(period - TWO_PI) < 1e-12 or abs(period - math.pi) < 1e-12):
        raise ValueError("period must be 2*pi (directions) or pi (lines)")
    return float(period)


def circle_angle(g: SL2Matrix, x: float, period: float) -> float:
    """Angle of g (cos x, sin x), reduced to [0, period).

    For period 2*pi this is the action on directions; for period pi, on
    lines.  Monotone non-decreasing in x and of degree one when det g = 1.
    """
    period = _check_period(period)
    arr = g.to_array()
    vx = arr[0, 0] * math.cos(x) + arr[0, 1] * math.sin(x)
    vy = arr[1, 0] * math.cos(x) + arr[1, 1] * math.sin(x)
    return math.atan2(vy, vx) % period


def _circle_angles(arr: np.ndarray, xs: np.ndarray, period: float) -> np.ndarray:
    vx = arr[0, 0] * np.cos(xs) + arr[0, 1] * np.sin(xs)
    vy = arr[1, 0] * np.cos(xs) + arr[1, 1] * np.sin(xs)
    return np.arctan2(vy, vx) % period


def lift_track(g: SL2Matrix, x0: float, period: float) -> float:
    """Value at x0 of the canonical monotone lift of g's circle map.

    The canonical lift sends 0 into [0, period); values elsewhere follow
    from the equivariance lift(x + period) = lift(x) + period and from
    tracking along [0, x0 mod period].  For the direction map of a linear
    g with det g > 0 the increment over any interval shorter than a period
    is itself below one period (rays map to rays, so the starting level is
    next crossed only after a full period), which makes the increment mod
    period exact with a single step; a midpoint split re-checks the
    monotone-increment identity and flags pathological input.
    """
    period = _check_period(period)
    if float(g.det) <= 0:
        raise ValueError("circle lifts require det g = +1")
    arr = g.to_array()
    k = math.floor(x0 / period)
    r = x0 - k * period
    base = k * period

    xs = np.array([0.0, 0.5 * r, r])
    vals = _circle_angles(arr, xs, period)
    if not np.all(np.isfinite(vals)):
        raise SubdivisionLimit("circle map evaluated to a non-finite angle")

    def inc(delta: float) -> float:
        # raw angle difference of mod-period values; increments that round
        # to a hair below zero are true zeros, not near-full wraps
        if delta >= -1e-12:
            return max(delta, 0.0)
        return delta + period

    whole = inc(float(vals[2] - vals[0]))
    halves = inc(float(vals[1] - vals[0])) + inc(float(vals[2] - vals[1]))
    if abs(halves - whole) > 1e-6:
        raise SubdivisionLimit(
            "monotone increment identity failed; input is pathological"
        )
    return float(vals[0]) + whole + base


@dataclass(frozen=True)
class LiftedElement:
    """Element of the universal cover: base matrix plus lift value at 0."""

    base: SL2Matrix
    lift_at_zero: float
    period: float

    def __post_init__(self):
        _check_period(self.period)
        angle = circle_angle(self.base, 0.0, self.period)
        offset = self.lift_at_zero - angle
        k = round(offset / self.period)
        if abs(offset - k * self.period) > 1e-9 * (1.0 + abs(k)):
            raise ValueError("lift_at_zero is not a lift of the angle at 0")
        object.__setattr__(self, "_shift", k * self.period)

    @staticmethod
    def canonical(g: SL2Matrix, period: float) -> "LiftedElement":
        return LiftedElement(g, circle_angle(g, 0.0, period), period)

    @staticmethod
    def identity(period: float) -> "LiftedElement":
        return LiftedElement(SL2Matrix.identity(), 0.0, period)

    def evaluate(self, x: float) -> float:
        """Value of this lift at x."""
        return lift_track(self.base, x, self.period) + self._shift

    def compose(self, other: "LiftedElement") -> "LiftedElement":
        """Group product in the universal cover: self after other."""
        if abs(self.period - other.period) > 1e-12:
            raise ValueError("cannot compose lifts of different periods")
        return LiftedElement(
            self.base @ other.base,
            self.evaluate(other.lift_at_zero),
            self.period,
        )

    def inverse(self) -> "LiftedElement":
        """Group inverse in the universal cover."""
        binv = self.base.inverse()
        # The canonical lift of the inverse matrix composed with this lift is
        # a translation by an exact period multiple; snap and subtract it.
        shift = lift_track(binv, self.lift_at_zero, self.period)
        k = round(shift / self.period)
        if abs(shift - k * self.period) > 1e-8 * (1.0 + abs(k)):
            raise ValueError("inverse lift shift is not a period multiple")
        value = circle_angle(binv, 0.0, self.period) - k * self.period
        return LiftedElement(binv, value, self.period)

    def shifted(self, k: int) -> "LiftedElement":
        """The same circle map lifted k periods higher."""
        return LiftedElement(self.base, self.lift_at_zero + k * self.period, self.period)


def compose_word(lifts: Sequence[LiftedElement], w: Word) -> LiftedElement:
    """Evaluate a word in the universal cover.

    lifts[i] is the chosen lift of generator i + 1; inverse letters use
    group inverses of those lifts, so the result is the image of the word
    under the unique homomorphism extending the assignment.
    """
    if not lifts:
        raise ValueError("need at least one generator lift")
    period = lifts[0].period
    result = LiftedElement.identity(period)
    inverses: Dict[int, LiftedElement] = {}
    for idx, exp in w.letters:
        if idx > len(lifts):
            raise ValueError(f"generator index {idx} > rank {len(lifts)}")
        if exp == 1:
            elt = lifts[idx - 1]
        else:
            if idx not in inverses:
                inverses[idx] = lifts[idx - 1].inverse()
            elt = inverses[idx]
        result = result.compose(elt)
    return result


def _rep_period(rep: Representation) -> float:
    if rep.kind is RepKind.LINEAR2:
        return TWO_PI
    if rep.kind is RepKind.PROJECTIVE2:
        return math.pi
    raise ValueError("circle lifts need an SL(2) representation kind")


def word_lift(rep: Representation, w: Word, period: float) -> float:
    """Lift at 0 of the word's image, with canonical generator lifts."""
    period = _check_period(period)
    if rep.kind is RepKind.LORENTZ3:
        raise ValueError("circle lifts need an SL(2) representation kind")
    lifts = [LiftedElement.canonical(g, period) for g in rep.generators]
    return compose_word(lifts, w).lift_at_zero


class EulerMode(Enum):
    LINEAR = "linear"          # directions, period 2 pi, bound g - 1
    PROJECTIVE = "projective"  # lines, period pi, bound 2g - 2


@dataclass(frozen=True)
class EulerReport:
    e: int
    genus: int
    bound: int
    mode: EulerMode
    raw_lift: float
    satisfies: bool


def euler_number(rep: Representation, genus: int, mode: EulerMode) -> EulerReport:
    """Euler number of a surface-group representation.

    The value is the lift of the commutator-product relator, which lands on
    a period multiple exactly when the relator holds in the group acted on
    (linear mode additionally needs the relator to be +I, not -I).
    """
    period = TWO_PI if mode is EulerMode.LINEAR else math.pi
    defect = surface_relator_defect(rep, genus)
    if defect >= RELATOR_TOL:
        raise RelatorFailed(
            f"surface relator defect {defect:.3e} >= {RELATOR_TOL:.0e}"
        )
    raw = word_lift(rep, relator_word(genus), period)
    e = round(raw / period)
    if abs(raw - e * period) > NON_INTEGRAL_TOL:
        raise NonIntegralLift(
            f"relator lift {raw} is not within {NON_INTEGRAL_TOL} of a "
            f"period multiple"
        )
    if mode is EulerMode.LINEAR:
        bound = genus - 1
        satisfies = abs(e) < genus
    else:
        bound = 2 * genus - 2
        satisfies = abs(e) <= 2 * genus - 2
    return EulerReport(e, genus, bound, mode, raw, satisfies)


def translation_number(lift: LiftedElement, iterations: int) -> float:
    """Average displacement of N iterates at 0; error at most period / N."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    v = 0.0
    for _ in range(iterations):
        v = lift.evaluate(v)
    return v / iterations


def _spd_sqrt_2x2(m: np.ndarray) -> np.ndarray:
    """Square root of a symmetric positive definite 2x2 matrix."""
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    s = math.sqrt(det)
    t = math.sqrt(m[0, 0] + m[1, 1] + 2.0 * s)
    return (m + s * np.eye(2)) / t


def polar_angle(g: SL2Matrix) -> float:
    """Principal angle of the rotation factor in the polar decomposition."""
    arr = g.to_array()
    return math.atan2(arr[1, 0] - arr[0, 1], arr[0, 0] + arr[1, 1])


def milnor_estimate_defect(g1: SL2Matrix, g2: SL2Matrix) -> float:
    """Additivity defect of the rotation-angle retraction on lifts.

    The universal cover retracts onto the lifted rotation angle of the
    polar factor.  Writing g = p k (p positive definite, k a rotation), the
    composite's angle exceeds the sum of the two angles by the polar angle
    of p1 (k1 p2 k1^T), a product of two positive matrices.  Its trace is
    positive, which keeps the defect strictly below pi / 2.
    """
    a1, a2 = g1.to_array(), g2.to_array()
    p1 = _spd_sqrt_2x2(a1 @ a1.T)
    p2 = _spd_sqrt_2x2(a2 @ a2.T)
    k1 = np.linalg.solve(p1, a1)
    prod = p1 @ k1 @ p2 @ k1.T
    return abs(math.atan2(prod[1, 0] - prod[0, 1], prod[0, 0] + prod[1, 1]))


def wood_bound_check(
    rep: Representation, m: int
) -> Tuple[float, float, bool]:
    """Translation amount of the m-fold commutator product, in full turns.

    Returns (a, bound, ok) with bound = 2m - 1 and ok iff |a| < bound.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if rep.rank != 2 * m:
        raise WrongGeneratorCount(f"need 2m = {2 * m} generators, got {rep.rank}")
    period = _rep_period(rep)
    raw = word_lift(rep, relator_word(m), period)
    a = raw / period
    bound = float(2 * m - 1)
    return a, bound, abs(a) < bound


def _edge_angles(points: np.ndarray) -> np.ndarray:
    edges = np.roll(points, -1, axis=0) - points
    norms = np.hypot(edges[:, 0], edges[:, 1])
    scale = float(np.max(norms)) if norms.size else 0.0
    if scale == 0.0 or float(np.min(norms)) <= 1e-12 * scale:
        raise DegenerateVertex("polyline has a zero-length edge")
    return np.arctan2(edges[:, 1], edges[:, 0])


def _exterior_angles(angles: np.ndarray) -> np.ndarray:
    raw = np.roll(angles, -1) - angles
    ext = (raw + math.pi) % TWO_PI - math.pi
    if float(np.min(math.pi - np.abs(ext))) <= 1e-12:
        raise DegenerateVertex("exterior angle of +-pi (cusp or fold)")
    return ext


def _close_polyline(p) -> np.ndarray:
    pts = np.asarray(p, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("polyline must be a sequence of (x, y) points")
    if len(pts) >= 2 and np.allclose(pts[0], pts[-1]):
        pts = pts[:-1]
    if len(pts) < 3:
        raise DegenerateVertex("closed polyline needs at least 3 vertices")
    return pts


def turning_number(p) -> float:
    """Total tangent turning of a closed polyline, in full turns.

    Sum of exterior angles (each in (-pi, pi)) divided by 2 pi; an integer
    for closed polylines, asserted to within 1e-9.
    """
    pts = _close_polyline(p)
    total = float(np.sum(_exterior_angles(_edge_angles(pts)))) / TWO_PI
    if abs(total - round(total)) > 1e-9:
        raise DegenerateVertex(
            f"turning {total} of a closed polyline is not an integer"
        )
    return total


def benzecri_defect(p, linear, offset=(0.0, 0.0)) -> float:
    """Largest drift between tangent lifts of a polyline and its affine image.

    Tangent angles of the polyline and of its image under the affine map are
    lifted continuously along the curve, including the closing edge; the
    defect is the maximum of |(phi_k - theta_k) - (phi_0 - theta_0)|.  For
    orientation-preserving affine maps it stays below pi; similarities turn
    all tangents equally and give 0.
    """
    lin = np.asarray(linear, dtype=float)
    if lin.shape != (2, 2):
        raise ValueError("linear part must be a 2x2 matrix")
    if np.linalg.det(lin) <= 0:
        raise ValueError("affine map must preserve orientation (det > 0)")
    pts = _close_polyline(p)
    image = pts @ lin.T + np.asarray(offset, dtype=float)

    theta = _edge_angles(pts)
    phi = _edge_angles(image)
    theta_lift = np.concatenate(
        [[theta[0]], theta[0] + np.cumsum(_exterior_angles(theta))]
    )
    phi_lift = np.concatenate([[phi[0]], phi[0] + np.cumsum(_exterior_angles(phi))])
    drift = (phi_lift - theta_lift) - (phi_lift[0] - theta_lift[0])
    return float(np.max(np.abs(drift)))
