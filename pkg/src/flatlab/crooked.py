"""Crooked planes, halfspaces, slabs, and ping-pong orbit recovery.

A crooked plane with vertex p and unit spacelike director v is the
piecewise-linear surface

    Stem = { p + w : B(w, v) = 0, B(w, w) <= 0 },
    W+   = { p + a n+ + b v : a real, b >= 0 },
    W-   = { p + a n- + b v : a real, b <= 0 },

where n-, n+ are the two null directions orthogonal to v, scaled to z = 1
and labeled so that det [v | n- | n+] > 0.  The surface separates Minkowski
space into two open halfspaces, classified by the closed-form case table in
`classify_point`.  Membership in a side is invariant under positive scaling
about the vertex and equivariant under orientation- and time-preserving
isometries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .lorentz import LorentzVector, bilinear_form
from .margulis import boost_normal_form, standard_boost
from .words import AffineDeformation, AffineMap, Word, evaluate_affine

TOL_SURF = 1e-9


class NotSpacelike(ValueError):
    """Director of a crooked plane must be spacelike."""


class DepthExceeded(RuntimeError):
    """Ping-pong recovery did not reach the slab within the step budget."""


class Side(Enum):
    PLUS = "plus"
    MINUS = "minus"
    ON_SURFACE = "on_surface"


@dataclass(frozen=True)
class CrookedPlane:
    """Vertex, unit director, and derived null frame (z = 1, oriented)."""

    p: LorentzVector
    v: LorentzVector
    nminus: LorentzVector
    nplus: LorentzVector


@dataclass(frozen=True)
class CrookedHalfspace:
    plane: CrookedPlane
    side: Side

    def __post_init__(self):
        if self.side is Side.ON_SURFACE:
            raise ValueError("a halfspace side must be PLUS or MINUS")


@dataclass(frozen=True)
class OrbitRecovery:
    """Word whose affine image sends the point into the target slab."""

    point: LorentzVector
    word: Word
    steps: int


def _null_frame(v: LorentzVector) -> Tuple[LorentzVector, LorentzVector]:
    """The two null vectors orthogonal to unit spacelike v, scaled to z = 1."""
    # Solve x^2 + y^2 = 1 + ... : w = (x, y, 1) with B(w, v) = 0, B(w, w) = 0.
    a, b, c = v.x, v.y, v.z
    # x a + y b = c on the circle x^2 + y^2 = 1.
    nrm = math.hypot(a, b)
    if nrm < 1e-12:
        raise NotSpacelike("director has no spacelike component")
    x0, y0 = a * c / nrm**2, b * c / nrm**2
    h = math.sqrt(max(1.0 - (c / nrm) ** 2, 0.0))
    ux, uy = -b / nrm, a / nrm
    n1 = LorentzVector(x0 + h * ux, y0 + h * uy, 1.0)
    n2 = LorentzVector(x0 - h * ux, y0 - h * uy, 1.0)
    det = np.linalg.det(
        np.column_stack([v.as_array(), n1.as_array(), n2.as_array()])
    )
    return (n1, n2) if det > 0 else (n2, n1)


def make_crooked_plane(p: LorentzVector, v: LorentzVector) -> CrookedPlane:
    """Crooked plane with vertex p and spacelike director v (normalized)."""
    q = bilinear_form(v, v)
    if q <= TOL_SURF:
        raise NotSpacelike(f"B(v, v) = {q} is not positive")
    unit = v.scale(1.0 / math.sqrt(q))
    nminus, nplus = _null_frame(unit)
    return CrookedPlane(p, unit, nminus, nplus)


def transform_plane(g: AffineMap, plane: CrookedPlane) -> CrookedPlane:
    """Image of a crooked plane under an affine isometry.

    For orientation- and time-preserving linear parts the Plus/Minus labels
    of the two sides are preserved.
    """
    return make_crooked_plane(g.apply(plane.p), g.linear.apply(plane.v))


def classify_point(plane: CrookedPlane, q: LorentzVector) -> Side:
    """Which side of the crooked plane the point is on.

    With w = q - p, u+- = B(w, n+-) and y = B(w, v):
    inside the future cone of the stem plane (u+ < 0, u- < 0) the side is
    the sign of y; inside the past cone it is the sign of -y; the wedge
    u+ < 0 < u- is Plus and the wedge u- < 0 < u+ is Minus.  Points within
    tolerance of the stem or of a wing classify as OnSurface.
    """
    w = q - plane.p
    scale = 1.0 + w.norm()
    tol = TOL_SURF * scale
    uplus = bilinear_form(w, plane.nplus)
    uminus = bilinear_form(w, plane.nminus)
    y = bilinear_form(w, plane.v)

    # Stem: y = 0 with the v-orthogonal part causal (u+ and u- same sign).
    if abs(y) <= tol and uplus * uminus >= -tol * tol:
        return Side.ON_SURFACE
    # Wing W+ sits on the null plane u+ = 0 with y >= 0; W- on u- = 0, y <= 0.
    if abs(uplus) <= tol and y >= -tol:
        return Side.ON_SURFACE
    if abs(uminus) <= tol and y <= tol:
        return Side.ON_SURFACE

    if uplus <= 0.0 and uminus <= 0.0:
        return Side.PLUS if y > 0 else Side.MINUS
    if uplus >= 0.0 and uminus >= 0.0:
        return Side.PLUS if y < 0 else Side.MINUS
    if uplus < 0.0 < uminus:
        return Side.PLUS
    return Side.MINUS


def _halton(index: int, base: int) -> float:
    result, f = 0.0, 1.0
    while index > 0:
        f /= base
        result += f * (index % base)
        index //= base
    return result


def _surface_points(
    plane: CrookedPlane, extent: float, rng: np.random.Generator, count: int
) -> Iterator[LorentzVector]:
    for _ in range(count):
        mode = rng.integers(0, 3)
        if mode == 0:
            # stem: causal combination of the null frame
            s = rng.uniform(-extent, extent)
            t = rng.uniform(0.0, 1.0)
            a, b = s * t, s * (1.0 - t)
            yield plane.p + plane.nplus.scale(a) + plane.nminus.scale(b)
        elif mode == 1:
            a = rng.uniform(-extent, extent)
            b = rng.uniform(0.0, extent)
            yield plane.p + plane.nplus.scale(a) + plane.v.scale(b)
        else:
            a = rng.uniform(-extent, extent)
            b = rng.uniform(-extent, 0.0)
            yield plane.p + plane.nminus.scale(a) + plane.v.scale(b)


def crooked_disjoint_sampled(
    h1: CrookedHalfspace,
    h2: CrookedHalfspace,
    extent: float,
    n_samples: int,
    seed: int = 0,
) -> Optional[LorentzVector]:
    """Search for a point interior to both halfspaces.

    Low-discrepancy box samples plus stratified samples jittered off both
    surfaces.  Returns the first common interior point found, or None.
    This is a falsifier, not a disjointness certificate.
    """
    if extent <= 0:
        raise ValueError("extent must be positive")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")

    def inside_both(q: LorentzVector) -> bool:
        return (
            classify_point(h1.plane, q) is h1.side
            and classify_point(h2.plane, q) is h2.side
        )

    rng = np.random.default_rng(seed)
    n_box = max(1, n_samples // 2)
    for i in range(n_box):
        q = LorentzVector(
            extent * (2.0 * _halton(i + 1, 2) - 1.0),
            extent * (2.0 * _halton(i + 1, 3) - 1.0),
            extent * (2.0 * _halton(i + 1, 5) - 1.0),
        )
        if inside_both(q):
            return q
    n_surf = max(1, (n_samples - n_box) // 2)
    for plane in (h1.plane, h2.plane):
        for base in _surface_points(plane, extent, rng, n_surf):
            jitter = LorentzVector(*rng.normal(0.0, 1e-3 * extent, 3))
            q = base + jitter
            if inside_both(q):
                return q
    return None


def drumm_slab(
    gamma: AffineMap, margin: Optional[float] = None
) -> Tuple[CrookedHalfspace, CrookedHalfspace]:
    """Bounding halfspaces of a crooked slab for one affine boost.

    In the coordinates where gamma is standard_boost(ell, alpha), the first
    bounding plane has vertex -(|alpha|/2 + margin) sign(alpha) e_y on the
    invariant line and director e_x, a unit spacelike vector inside the
    plane spanned by the null eigenvectors (so its dual geodesic crosses
    the axis orthogonally); the second plane is the gamma-image of the
    first, which makes the slab between them a fundamental domain for the
    cyclic group.  Returns (basin of gamma^-1, basin of gamma): the second
    halfspace is gamma applied to the open complement of the first's
    closure, which is exactly the ping-pong pairing used by slab_recover.
    """
    h, ell, alpha = boost_normal_form(gamma)
    if abs(alpha) < 1e-9:
        raise ValueError("slab needs a nonzero displacement along the axis")
    if margin is None:
        margin = abs(alpha) / 10.0
    sgn = 1.0 if alpha > 0 else -1.0
    offset = (abs(alpha) / 2.0 + margin) * sgn

    p1_std = LorentzVector(0.0, -offset, 0.0)
    plane1_std = make_crooked_plane(p1_std, LorentzVector(1.0, 0.0, 0.0))
    plane1 = transform_plane(h, plane1_std)
    plane2 = transform_plane(h.compose(standard_boost(ell, alpha)), plane1_std)

    far = 1e6 * (abs(alpha) + 1.0)
    witness_minus = h.apply(LorentzVector(0.0, -sgn * far, 0.0))
    witness_plus = h.apply(LorentzVector(0.0, sgn * far, 0.0))
    side1 = classify_point(plane1, witness_minus)
    side2 = classify_point(plane2, witness_plus)
    if Side.ON_SURFACE in (side1, side2):
        raise RuntimeError("slab witness landed on a bounding surface")
    return (
        CrookedHalfspace(plane1, side1),
        CrookedHalfspace(plane2, side2),
    )


def slab_recover(
    deformation: AffineDeformation,
    slabs: Sequence[Tuple[CrookedHalfspace, CrookedHalfspace]],
    q: LorentzVector,
    max_steps: int,
) -> OrbitRecovery:
    """Greedy ping-pong: pull the point into the common slab.

    slabs[i] is the pair (attracting basin of generator i+1 inverse,
    attracting basin of generator i+1); whenever the point sits in a basin
    the corresponding inverse element is applied.  Succeeds when the point
    leaves every basin (it is then in the closed common slab); the returned
    word w satisfies evaluate_affine(w)(q) in the slab.
    """
    if len(slabs) != deformation.rank:
        raise ValueError("one slab pair per generator required")
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    gens = deformation.affine_generators
    inverses = [g.inverse() for g in gens]
    applied: List[Tuple[int, int]] = []
    current = q
    for step in range(max_steps + 1):
        hit = None
        for i, (basin_minus, basin_plus) in enumerate(slabs):
            if classify_point(basin_plus.plane, current) is basin_plus.side:
                hit = (i, -1)
                break
            if classify_point(basin_minus.plane, current) is basin_minus.side:
                hit = (i, 1)
                break
        if hit is None:
            letters = tuple(reversed(applied))
            return OrbitRecovery(q, Word(letters), step)
        i, exp = hit
        current = (inverses[i] if exp == -1 else gens[i]).apply(current)
        applied.append((i + 1, exp))
    raise DepthExceeded(f"no recovery within {max_steps} steps")


# -- planar slices -----------------------------------------------------------

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}
_INPLANE = {"x": (1, 2), "y": (0, 2), "z": (0, 1)}


def _clip_param_line(
    q0: np.ndarray,
    d: np.ndarray,
    lo: float,
    hi: float,
    extent: float,
    coords: Tuple[int, int],
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Clip q0 + t d, t in [lo, hi], to the in-plane box [-extent, extent]^2."""
    tmin, tmax = lo, hi
    for axis in coords:
        p, delta = q0[axis], d[axis]
        for sign_, bound in ((1.0, extent), (-1.0, extent)):
            # sign * coordinate <= bound
            a, b = sign_ * delta, bound - sign_ * p
            if abs(a) < 1e-15:
                if b < 0:
                    return None
                continue
            t = b / a
            if a > 0:
                tmax = min(tmax, t)
            else:
                tmin = max(tmin, t)
        if tmin > tmax:
            return None
    if not (math.isfinite(tmin) and math.isfinite(tmax)) or tmin > tmax:
        return None
    return q0 + tmin * d, q0 + tmax * d


_BIG = 1e30


def slice_polylines(
    plane: CrookedPlane, axis: str, value: float, extent: float
) -> List[List[Tuple[float, float]]]:
    """Intersection of the crooked surface with a coordinate plane.

    Pieces (stem segment, wing rays) are clipped to the in-plane box
    [-extent, extent]^2 and chained into maximal polylines; each point is
    reported in the in-plane coordinates (the two coordinates other than
    the slicing axis).
    """
    if axis not in _AXIS_INDEX:
        raise ValueError("axis must be one of 'x', 'y', 'z'")
    if extent <= 0:
        raise ValueError("extent must be positive")
    ax = _AXIS_INDEX[axis]
    coords = _INPLANE[axis]
    p = plane.p.as_array()
    v = plane.v.as_array()
    segments: List[Tuple[np.ndarray, np.ndarray]] = []

    # Stem: the line (v-orthogonal plane) cap (axis = value), restricted to
    # the causal cone B(w, w) <= 0.
    normal = np.array([v[0], v[1], -v[2]])
    e_axis = np.zeros(3)
    e_axis[ax] = 1.0
    d = np.cross(normal, e_axis)
    if np.linalg.norm(d) > 1e-12:
        q0 = _stem_point(p, normal, ax, value)
        if q0 is not None:
            w0 = q0 - p
            metric = np.array([1.0, 1.0, -1.0])
            A = float(np.sum(metric * d * d))
            Bc = 2.0 * float(np.sum(metric * w0 * d))
            C = float(np.sum(metric * w0 * w0))
            for lo, hi in _quadratic_nonpositive(A, Bc, C):
                clipped = _clip_param_line(q0, d, lo, hi, extent, coords)
                if clipped is not None:
                    segments.append(clipped)

    for n, brange in ((plane.nplus.as_array(), (0.0, _BIG)),
                      (plane.nminus.as_array(), (-_BIG, 0.0))):
        segments.extend(
            _wing_slice(p, n, v, brange, ax, value, extent, coords)
        )

    pieces = [
        [(float(a[coords[0]]), float(a[coords[1]])),
         (float(b[coords[0]]), float(b[coords[1]]))]
        for a, b in segments
    ]
    pieces = [seg for seg in pieces if _length2(seg) > 0.0]
    return _chain_polylines(pieces)


def _stem_point(
    p: np.ndarray, normal: np.ndarray, ax: int, value: float
) -> Optional[np.ndarray]:
    """A point on the line {B-orthogonal plane of v through p} cap {axis}."""
    q = p.copy()
    q[ax] = value
    rhs = float(normal @ (p - q))
    others = [i for i in range(3) if i != ax]
    best = max(others, key=lambda i: abs(normal[i]))
    if abs(normal[best]) < 1e-14:
        return None
    q[best] += rhs / normal[best]
    return q


def _quadratic_nonpositive(a: float, b: float, c: float):
    """Parameter intervals where a t^2 + b t + c <= 0."""
    if abs(a) < 1e-14:
        if abs(b) < 1e-14:
            return [(-_BIG, _BIG)] if c <= 0 else []
        t = -c / b
        return [(t, _BIG)] if b < 0 else [(-_BIG, t)]
    disc = b * b - 4.0 * a * c
    if a > 0:
        if disc <= 0:
            return []
        r = math.sqrt(disc)
        return [((-b - r) / (2 * a), (-b + r) / (2 * a))]
    if disc <= 0:
        return [(-_BIG, _BIG)]
    r = math.sqrt(disc)
    t1, t2 = (-b + r) / (2 * a), (-b - r) / (2 * a)
    return [(-_BIG, t1), (t2, _BIG)]


def _wing_slice(p, n, v, brange, ax, value, extent, coords):
    """Slice of { p + a n + b v : b in brange } with {axis = value}."""
    rhs = value - p[ax]
    na, va = n[ax], v[ax]
    out = []
    if abs(na) > 1e-12:
        # a = (rhs - b va) / na: a line parametrized by b over brange.
        q0 = p + (rhs / na) * n
        d = v - (va / na) * n
        clipped = _clip_param_line(q0, d, brange[0], brange[1], extent, coords)
        if clipped is not None:
            out.append(clipped)
    elif abs(va) > 1e-12:
        b = rhs / va
        if brange[0] <= b <= brange[1]:
            q0 = p + b * v
            clipped = _clip_param_line(q0, n, -_BIG, _BIG, extent, coords)
            if clipped is not None:
                out.append(clipped)
    else:
        # wing parallel to the slicing plane: either empty or degenerate
        if abs(rhs) < 1e-12:
            # emit the boundary null line of the wing as a degenerate cue
            clipped = _clip_param_line(p, n, -_BIG, _BIG, extent, coords)
            if clipped is not None:
                out.append(clipped)
    return out


def _length2(seg) -> float:
    (x0, y0), (x1, y1) = seg[0], seg[-1]
    return (x1 - x0) ** 2 + (y1 - y0) ** 2


def _chain_polylines(
    pieces: List[List[Tuple[float, float]]], tol: float = 1e-9
) -> List[List[Tuple[float, float]]]:
    """Merge segments sharing endpoints into maximal polylines."""
    def close(a, b):
        return abs(a[0] - b[0]) <= tol and abs(a[1] - b[1]) <= tol

    chains = [list(p) for p in sorted(pieces)]
    merged = True
    while merged:
        merged = False
        out: List[List[Tuple[float, float]]] = []
        while chains:
            cur = chains.pop(0)
            i = 0
            while i < len(chains):
                other = chains[i]
                if close(cur[-1], other[0]):
                    cur = cur + other[1:]
                elif close(cur[-1], other[-1]):
                    cur = cur + other[-2::-1]
                elif close(cur[0], other[-1]):
                    cur = other[:-1] + cur
                elif close(cur[0], other[0]):
                    cur = other[::-1][:-1] + cur
                else:
                    i += 1
                    continue
                chains.pop(i)
                merged = True
            out.append(cur)
        chains = out
    return chains
