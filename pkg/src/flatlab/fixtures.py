"""Canonical constructions used by tests, experiments, and the CLI examples.

Not part of the stable API.  The central fixture is the holonomy of the
genus-2 surface built from the regular hyperbolic octagon with vertex angles
pi/4, whose side pairings satisfy the commutator relator exactly and whose
circle action has the extremal Euler number.
"""

from __future__ import annotations

import cmath
import math
from typing import Tuple

import numpy as np

from .lorentz import SL2Matrix
from .words import Representation, RepKind, surface_relator_defect

SL2Quad = Tuple[SL2Matrix, SL2Matrix, SL2Matrix, SL2Matrix]


def _disc_translation(w: complex) -> np.ndarray:
    return np.array([[1.0, w], [w.conjugate(), 1.0]], dtype=complex)


def _disc_rotation(psi: float) -> np.ndarray:
    half = cmath.exp(0.5j * psi)
    return np.array([[half, 0.0], [0.0, 1.0 / half]], dtype=complex)


def _frame_map(p: complex, q: complex) -> np.ndarray:
    """Disc isometry sending 0 to p with derivative aimed at q."""
    pulled = (q - p) / (1.0 - p.conjugate() * q)
    return _disc_translation(p) @ _disc_rotation(cmath.phase(pulled))


def _segment_pairing(p: complex, q: complex, p2: complex, q2: complex) -> np.ndarray:
    """Disc isometry carrying the directed segment (p, q) to (p2, q2)."""
    m = _frame_map(p2, q2) @ np.linalg.inv(_frame_map(p, q))
    return m / np.sqrt(np.linalg.det(m))


def _disc_to_sl2(m: np.ndarray) -> SL2Matrix:
    cayley = np.array([[1.0, -1.0j], [1.0, 1.0j]], dtype=complex)
    w = np.linalg.inv(cayley) @ m @ cayley
    w = w / np.sqrt(np.linalg.det(w))
    if np.max(np.abs(w.imag)) > 1e-12:
        raise RuntimeError("disc isometry did not convert to a real matrix")
    w = w.real
    return SL2Matrix(w[0, 0], w[0, 1], w[1, 0], w[1, 1])


def genus2_octagon_generators() -> SL2Quad:
    """Side pairings (A1, B1, A2, B2) of the regular hyperbolic octagon.

    The octagon has all interior angles pi/4 (circumradius arccosh(cot^2
    pi/8)) and its sides, in boundary order, spell a1 b1 a1' b1' a2 b2 a2'
    b2'.  The a-pairings carry the primed side onto the unprimed side with
    reversed direction; the b-generators are the inverses of the analogous
    pairings.  This is the orientation convention under which the product of
    commutators is exactly +I and all four generators are hyperbolic, with
    |trace| = 2 + sqrt(2).
    """
    radius = math.tanh(0.5 * math.acosh(1.0 / math.tan(math.pi / 8) ** 2))
    v = [
        radius * cmath.exp(1j * (-math.pi / 8 + k * math.pi / 4)) for k in range(8)
    ]
    a1 = _segment_pairing(v[2], v[3], v[1], v[0])
    b1 = np.linalg.inv(_segment_pairing(v[3], v[4], v[2], v[1]))
    a2 = _segment_pairing(v[6], v[7], v[5], v[4])
    b2 = np.linalg.inv(_segment_pairing(v[7], v[0], v[6], v[5]))
    gens = tuple(_disc_to_sl2(m) for m in (a1, b1, a2, b2))
    rep = Representation(gens, RepKind.PROJECTIVE2)
    defect = surface_relator_defect(rep, 2)
    if defect > 1e-10:
        raise RuntimeError(f"octagon construction lost the relator ({defect:.3e})")
    return gens


def _sl2_exp(x: np.ndarray) -> np.ndarray:
    """exp of a traceless 2x2 matrix, via x^2 = -det(x) I."""
    d = x[0, 0] * x[1, 1] - x[0, 1] * x[1, 0]
    if d < -1e-14:
        s = math.sqrt(-d)
        return math.cosh(s) * np.eye(2) + (math.sinh(s) / s) * x
    if d > 1e-14:
        s = math.sqrt(d)
        return math.cos(s) * np.eye(2) + (math.sin(s) / s) * x
    return np.eye(2) + x


_SL2_BASIS = (
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [0.0, 0.0]]),
    np.array([[0.0, 0.0], [1.0, 0.0]]),
)


def _as_sl2(m: np.ndarray) -> SL2Matrix:
    m = m / np.sqrt(np.linalg.det(m))
    return SL2Matrix(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def near_fuchsian_perturbation(
    gens: SL2Quad, rng: np.random.Generator, scale: float = 0.03
) -> SL2Quad:
    """Perturb a genus-2 representation without leaving the relator variety.

    A1, B1, A2 move freely by at most `scale` per entry; B2 is then solved
    by Newton iteration so the product of commutators returns to the
    identity.  Perturbations this small keep the representation in the
    extremal component, so it stays a valid Milnor-Wood test point.
    """
    base = [g.to_array() for g in gens]
    for attempt in range(8):
        s = scale / (2.0 ** attempt)
        moved = []
        for arr in base[:2]:
            cand = arr + rng.uniform(-s, s, size=(2, 2))
            moved.append(cand / np.sqrt(np.linalg.det(cand)))
        a1, b1 = moved
        target = np.linalg.inv(
            a1 @ b1 @ np.linalg.inv(a1) @ np.linalg.inv(b1)
        )

        def residual(a2: np.ndarray, b2: np.ndarray) -> np.ndarray:
            m = a2 @ b2 @ np.linalg.inv(a2) @ np.linalg.inv(b2) - target
            return np.array([m[0, 1], m[1, 0], m[0, 0] - m[1, 1]])

        # With a2 held fixed the commutator only sweeps a 2-dimensional set
        # (a2 times a conjugacy class), so solve for (a2, b2) jointly with
        # minimal-norm Gauss-Newton steps in the 6 group coordinates.
        a2, b2 = base[2].copy(), base[3].copy()
        ok = False
        for _ in range(80):
            res = residual(a2, b2)
            if not np.all(np.isfinite(res)):
                break
            if np.max(np.abs(res)) < 1e-13:
                ok = True
                break
            jac = np.empty((3, 6))
            eps = 1e-7
            for j, basis in enumerate(_SL2_BASIS):
                jac[:, j] = (residual(a2 @ _sl2_exp(eps * basis), b2) - res) / eps
                jac[:, 3 + j] = (
                    residual(a2, b2 @ _sl2_exp(eps * basis)) - res
                ) / eps
            delta = np.linalg.pinv(jac, rcond=1e-10) @ (-res)
            size = float(np.linalg.norm(delta))
            if size > 0.25:  # damp; full steps can overshoot far from a root
                delta *= 0.25 / size
            a2 = a2 @ _sl2_exp(sum(delta[j] * _SL2_BASIS[j] for j in range(3)))
            b2 = b2 @ _sl2_exp(sum(delta[3 + j] * _SL2_BASIS[j] for j in range(3)))
        moved_enough = max(
            np.max(np.abs(a2 - base[2])), np.max(np.abs(b2 - base[3]))
        )
        if ok and moved_enough < 0.05:
            return (_as_sl2(a1), _as_sl2(b1), _as_sl2(a2), _as_sl2(b2))
    raise RuntimeError("could not re-solve the relator near the octagon point")


def rotation_sl2(theta: float) -> SL2Matrix:
    """Rotation of the plane by theta (elliptic, fixes i in the half-plane)."""
    return SL2Matrix(
        math.cos(theta), -math.sin(theta), math.sin(theta), math.cos(theta)
    )


def boost_sl2(length: float, axis_angle: float = 0.0) -> SL2Matrix:
    """Hyperbolic element of translation length `length`, rotated axis.

    The SO(2, 1) image fixes the unit spacelike vector obtained by rotating
    (0, 1, 0); for axis_angle = 0 it is the boost in the x-z plane fixing
    (0, 1, 0) itself.
    """
    lam = math.exp(length / 2.0)
    diag = SL2Matrix(lam, 0.0, 0.0, 1.0 / lam)
    if axis_angle == 0.0:
        return diag
    r = rotation_sl2(axis_angle)
    return r @ diag @ r.inverse()


def free_boost_representation(
    lengths=(1.5, 1.1), angles=(0.0, math.pi / 4)
) -> Representation:
    """Two hyperbolic generators with crossing axes; free and discrete for
    generic strong boosts (a convex-cocompact test group)."""
    gens = tuple(boost_sl2(l, a) for l, a in zip(lengths, angles))
    return Representation(gens, RepKind.LINEAR2)


def octagon_json_document() -> dict:
    """Input document for the CLI with the octagon holonomy generators."""
    gens = genus2_octagon_generators()
    return {
        "kind": "sl2",
        "genus": 2,
        "generators": [
            [[float(g.a), float(g.b)], [float(g.c), float(g.d)]] for g in gens
        ],
    }
