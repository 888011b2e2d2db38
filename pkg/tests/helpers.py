"""Shared random generators for the test suite."""

import numpy as np

from flatlab.lorentz import SL2Matrix, sl2_to_so21
from flatlab.words import AffineMap, LorentzVector


def rand_sl2(rng: np.random.Generator, span: float = 4.0) -> SL2Matrix:
    """Random determinant-one matrix with all entries bounded by span."""
    while True:
        a, b, c = rng.uniform(-span, span, 3)
        if abs(a) < 1e-2:
            continue
        d = (1.0 + b * c) / a
        if abs(d) <= span:
            return SL2Matrix(a, b, c, d)


def rand_hyperbolic(rng: np.random.Generator, span: float = 4.0) -> SL2Matrix:
    while True:
        g = rand_sl2(rng, span)
        if abs(float(g.trace)) > 2.05:
            return g


def rand_vector(rng: np.random.Generator, span: float = 2.0) -> LorentzVector:
    return LorentzVector(*rng.uniform(-span, span, 3))


def rand_isometry(rng: np.random.Generator, span: float = 2.0):
    return sl2_to_so21(rand_sl2(rng, span))


def rand_affine(rng: np.random.Generator, span: float = 2.0) -> AffineMap:
    return AffineMap(rand_isometry(rng, span), rand_vector(rng, span))
