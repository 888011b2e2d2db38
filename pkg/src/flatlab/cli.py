"""Command-line front end: JSON in, JSON/CSV out.

Matrix entries in input documents may be integers, decimals, or exact
rationals written as "p/q" strings.  Reports serialize deterministically:
sorted keys, floats rendered at 12 significant digits (round-half-even),
exact rationals as "p/q" strings.  Exit codes: 0 success, 1 input error,
2 numeric failure (the error name is reported verbatim).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .crooked import (
    DepthExceeded,
    LorentzVector,
    make_crooked_plane,
    slice_polylines,
)
from .euler import (
    EulerMode,
    NonIntegralLift,
    RelatorFailed,
    SubdivisionLimit,
    euler_number,
    milnor_estimate_defect,
    turning_number,
)
from .lorentz import NotHyperbolic, SL2Matrix
from .margulis import margulis_invariant, sign_spectrum, conjugacy_class_representatives
from .sp4 import Sp4ExampleParams, arithmetic_example, symplectic_check
from .words import AffineDeformation, Representation, RepKind

NUMERIC_ERRORS = (
    NonIntegralLift,
    SubdivisionLimit,
    RelatorFailed,
    DepthExceeded,
    NotHyperbolic,
)


class InputError(ValueError):
    """Invalid input document; the message names the offending field."""


@dataclass
class InputDocument:
    kind: str
    generators: list
    translations: Optional[list]
    genus: Optional[int]
    mu: Optional[list]
    seed: int


def _scalar(value, field: str):
    if isinstance(value, bool):
        raise InputError(f"{field}: expected a number, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{field}: bad rational literal {value!r}") from exc
    raise InputError(f"{field}: expected a number or 'p/q' string")


def _matrix(entries, field: str, shape: int):
    if not isinstance(entries, list) or len(entries) != shape:
        raise InputError(f"{field}: expected a {shape}x{shape} matrix")
    rows = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != shape:
            raise InputError(f"{field}[{i}]: expected {shape} entries")
        rows.append([_scalar(e, f"{field}[{i}][{j}]") for j, e in enumerate(row)])
    return rows


def parse_input(path: str) -> InputDocument:
    """Parse and validate a JSON input document (exact rational aware)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"input: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"input: invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("input: document must be a JSON object")
    kind = doc.get("kind")
    if kind not in ("sl2", "so21", "affine", "sp4"):
        raise InputError("kind: must be one of sl2, so21, affine, sp4")
    generators = doc.get("generators", [])
    if kind != "sp4" and (not isinstance(generators, list) or not generators):
        raise InputError("generators: a nonempty list is required")
    size = {"sl2": 2, "affine": 2, "so21": 3, "sp4": 4}[kind]
    gens = [
        _matrix(g, f"generators[{i}]", size) for i, g in enumerate(generators)
    ]
    translations = doc.get("translations")
    if kind == "affine":
        if translations is None:
            raise InputError("translations: required when kind is affine")
        if not isinstance(translations, list) or len(translations) != len(gens):
            raise InputError(
                "translations: need exactly one 3-vector per generator"
            )
        parsed_tr = []
        for i, t in enumerate(translations):
            if not isinstance(t, list) or len(t) != 3:
                raise InputError(f"translations[{i}]: expected a 3-vector")
            parsed_tr.append(
                [_scalar(e, f"translations[{i}][{j}]") for j, e in enumerate(t)]
            )
        translations = parsed_tr
    elif translations is not None:
        raise InputError("translations: only allowed when kind is affine")
    genus = doc.get("genus")
    if genus is not None and (not isinstance(genus, int) or genus < 1):
        raise InputError("genus: must be a positive integer")
    mu = doc.get("mu")
    if mu is not None:
        if not isinstance(mu, list) or len(mu) != 3:
            raise InputError("mu: expected three rationals")
        mu = [_scalar(e, f"mu[{i}]") for i, e in enumerate(mu)]
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise InputError("seed: must be an integer")
    if kind in ("sl2", "affine"):
        for i, g in enumerate(gens):
            det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
            if abs(float(det) - 1.0) > 1e-9:
                raise InputError(f"generators[{i}]: determinant {det} is not 1")
    return InputDocument(kind, gens, translations, genus, mu, seed)


def _sl2(entries) -> SL2Matrix:
    return SL2Matrix(entries[0][0], entries[0][1], entries[1][0], entries[1][1])


def _deformation(doc: InputDocument) -> AffineDeformation:
    gens = tuple(_sl2(g) for g in doc.generators)
    translations = tuple(
        LorentzVector(float(t[0]), float(t[1]), float(t[2]))
        for t in doc.translations
    )
    return AffineDeformation(gens, translations)


def _round_floats(obj):
    if isinstance(obj, float):
        return float(format(obj, ".12g"))
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else str(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, np.floating):
        return _round_floats(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def emit_report(command: str, inputs: dict, results: dict, warnings=()) -> str:
    report = {
        "command": command,
        "inputs": inputs,
        "results": results,
        "warnings": list(warnings),
        "version": __version__,
    }
    return json.dumps(_round_floats(report), sort_keys=True, indent=2)


def _spectrum_dict(spec) -> dict:
    return {
        "max_len": spec.max_len,
        "positive": spec.positive,
        "negative": spec.negative,
        "zero": spec.zero,
        "skipped_nonhyperbolic": spec.skipped_nonhyperbolic,
        "min_normalized": spec.min_normalized,
        "max_normalized": spec.max_normalized,
        "verdict": spec.verdict.value,
    }


def _cmd_euler(args) -> str:
    doc = parse_input(args.input)
    if doc.kind != "sl2":
        raise InputError("kind: euler needs an sl2 document")
    genus = args.genus if args.genus is not None else doc.genus
    if genus is None:
        raise InputError("genus: give --genus or a genus field in the input")
    rep_kind = (
        RepKind.PROJECTIVE2 if args.mode == "projective" else RepKind.LINEAR2
    )
    rep = Representation(tuple(_sl2(g) for g in doc.generators), rep_kind)
    mode = EulerMode.PROJECTIVE if args.mode == "projective" else EulerMode.LINEAR
    report = euler_number(rep, genus, mode)
    return emit_report(
        "euler",
        {"input": args.input, "mode": args.mode, "genus": genus},
        {
            "e": report.e,
            "genus": report.genus,
            "bound": report.bound,
            "mode": report.mode.value,
            "raw_lift": report.raw_lift,
            "satisfies": report.satisfies,
        },
    )


def _cmd_margulis(args) -> str:
    doc = parse_input(args.input)
    if doc.kind != "affine":
        raise InputError("kind: margulis needs an affine document")
    deformation = _deformation(doc)
    rows = []
    for w in conjugacy_class_representatives(deformation.rank, args.max_word_len):
        rec = margulis_invariant(deformation, w)
        rows.append(
            {
                "word": str(rec.word),
                "class": rec.klass.value,
                "ell": rec.ell,
                "alpha": rec.alpha,
                "normalized": rec.normalized,
            }
        )
    return emit_report(
        "margulis",
        {"input": args.input, "max_word_len": args.max_word_len},
        {"records": rows},
    )


def _cmd_proper(args) -> str:
    doc = parse_input(args.input)
    if doc.kind != "affine":
        raise InputError("kind: proper needs an affine document")
    spec = sign_spectrum(_deformation(doc), args.max_word_len)
    return emit_report(
        "proper",
        {"input": args.input, "max_word_len": args.max_word_len},
        {"spectrum": _spectrum_dict(spec)},
    )


def _cmd_sp4(args) -> str:
    mu = [_scalar(v, "mu") for v in args.mu]
    params = Sp4ExampleParams(*(Fraction(m) for m in mu))
    g1, g2, deformation = arithmetic_example(params)
    spec = sign_spectrum(deformation, args.max_word_len)
    results = {
        "g1": [[e for e in row] for row in g1.m],
        "g2": [[e for e in row] for row in g2.m],
        "symplectic": symplectic_check(g1.m) and symplectic_check(g2.m),
        "linear_generators": [
            [[g.a, g.b], [g.c, g.d]] for g in deformation.linear_generators
        ],
        "translations": [
            [t.x, t.y, t.z] for t in deformation.translations
        ],
        "spectrum": _spectrum_dict(spec),
    }
    return emit_report(
        "sp4",
        {"mu": [str(m) for m in mu], "max_word_len": args.max_word_len},
        results,
    )


def _parse_plane(text: str):
    try:
        axis, value = text.split("=")
        axis = axis.strip().lower()
        value = float(value)
    except ValueError as exc:
        raise InputError(f"plane: expected 'x=...', 'y=...' or 'z=...', got {text!r}") from exc
    if axis not in ("x", "y", "z"):
        raise InputError("plane: axis must be x, y, or z")
    return axis, value


def _parse_vec(text: str, field: str) -> LorentzVector:
    parts = text.split(",")
    if len(parts) != 3:
        raise InputError(f"{field}: expected three comma-separated numbers")
    try:
        return LorentzVector(*(float(p) for p in parts))
    except ValueError as exc:
        raise InputError(f"{field}: bad number in {text!r}") from exc


def _cmd_crooked_slice(args) -> str:
    axis, value = _parse_plane(args.plane)
    vertex = _parse_vec(args.vertex, "vertex")
    director = _parse_vec(args.director, "director")
    plane = make_crooked_plane(vertex, director)
    pieces = slice_polylines(plane, axis, value, args.extent)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["piece_id", "x", "y"])
        for pid, poly in enumerate(pieces):
            for x, y in poly:
                writer.writerow(
                    [pid, format(x, ".12g"), format(y, ".12g")]
                )
    return emit_report(
        "crooked-slice",
        {
            "plane": args.plane,
            "extent": args.extent,
            "vertex": args.vertex,
            "director": args.director,
            "out": args.out,
        },
        {
            "pieces": len(pieces),
            "points": sum(len(p) for p in pieces),
        },
    )


def _random_sl2(rng: np.random.Generator, span: float = 10.0) -> SL2Matrix:
    while True:
        a, b, c = rng.uniform(-span, span, 3)
        if abs(a) < 1e-3:
            continue
        d = (1.0 + b * c) / a
        if abs(d) <= span:
            return SL2Matrix(a, b, c, d)


def _cmd_estimate_defect(args) -> str:
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.samples):
        g1 = _random_sl2(rng)
        g2 = _random_sl2(rng)
        worst = max(worst, milnor_estimate_defect(g1, g2))
    return emit_report(
        "estimate-defect",
        {"samples": args.samples, "seed": args.seed},
        {
            "max_defect": worst,
            "bound": math.pi / 2.0,
            "ok": worst < math.pi / 2.0,
        },
    )


def _cmd_turning(args) -> str:
    points = []
    try:
        with open(args.polyline, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            for i, row in enumerate(reader):
                if not row or (i == 0 and not _is_number(row[0])):
                    continue  # header or blank
                if len(row) < 2:
                    raise InputError(f"polyline: row {i} needs two columns")
                points.append((float(row[0]), float(row[1])))
    except OSError as exc:
        raise InputError(f"polyline: cannot read {args.polyline}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"polyline: {exc}") from exc
    tau = turning_number(points)
    return emit_report(
        "turning",
        {"polyline": args.polyline},
        {"turning_number": int(round(tau)), "raw": tau},
    )


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flat-lab",
        description=(
            "Euler numbers of flat circle bundles, Margulis invariants and "
            "sign spectra of affine deformations, crooked-plane slabs and "
            "slices, and the integral Sp(4) example."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("euler", help="Euler number of a surface-group representation")
    p.add_argument("--input", required=True, help="sl2 input document (JSON)")
    p.add_argument("--genus", type=int, default=None,
                   help="surface genus (default: genus field of the input)")
    p.add_argument("--mode", choices=["linear", "projective"],
                   default="projective", help="circle acted on (default projective)")
    p.set_defaults(func=_cmd_euler)

    p = sub.add_parser("margulis", help="table of Margulis invariants by conjugacy class")
    p.add_argument("--input", required=True, help="affine input document (JSON)")
    p.add_argument("--max-word-len", type=int, default=4,
                   help="class length cutoff (default 4)")
    p.set_defaults(func=_cmd_margulis)

    p = sub.add_parser("proper", help="sign spectrum of an affine deformation")
    p.add_argument("--input", required=True, help="affine input document (JSON)")
    p.add_argument("--max-word-len", type=int, default=6,
                   help="class length cutoff (default 6)")
    p.set_defaults(func=_cmd_proper)

    p = sub.add_parser("sp4", help="integral symplectic example and its spectrum")
    p.add_argument("--mu", nargs=3, required=True, metavar=("M1", "M2", "M3"),
                   help="three rational translational parameters")
    p.add_argument("--max-word-len", type=int, default=6,
                   help="class length cutoff (default 6)")
    p.set_defaults(func=_cmd_sp4)

    p = sub.add_parser("crooked-slice", help="planar slice of a crooked plane as CSV")
    p.add_argument("--plane", default="z=1", help="slicing plane, e.g. z=1 (default)")
    p.add_argument("--extent", type=float, default=2.0,
                   help="in-plane clipping half-width (default 2.0)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--vertex", default="0,0,0",
                   help="crooked plane vertex (default 0,0,0)")
    p.add_argument("--director", default="0,1,0",
                   help="spacelike director (default 0,1,0)")
    p.set_defaults(func=_cmd_crooked_slice)

    p = sub.add_parser("estimate-defect",
                       help="max observed rotation-retraction defect vs pi/2")
    p.add_argument("--samples", type=int, default=10000,
                   help="number of random pairs (default 10000)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.set_defaults(func=_cmd_estimate_defect)

    p = sub.add_parser("turning", help="turning number of a closed polyline")
    p.add_argument("--polyline", required=True,
                   help="CSV with x,y columns (closed implicitly)")
    p.set_defaults(func=_cmd_turning)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        print(args.func(args))
        return 0
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NUMERIC_ERRORS as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload, sort_keys=True))
        return 2


if __name__ == "__main__":
    sys.exit(main())
