"""Free-group words and their matrix and affine evaluations.

Letters are pairs (generator index >= 1, exponent +-1).  Words are freely
reduced.  Enumeration is deterministic: by length, then lexicographically
with the letter order a < a^-1 < b < b^-1 < ...
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Tuple, Union

import numpy as np

from .lorentz import (
    LorentzIsometry,
    LorentzVector,
    SL2Matrix,
    sl2_to_so21,
)

Letter = Tuple[int, int]


class IndexOutOfRange(ValueError):
    """Generator index outside the rank of the word's target."""


class WrongGeneratorCount(ValueError):
    """Representation does not have the number of generators required."""


def _letter_key(letter: Letter) -> Tuple[int, int]:
    idx, exp = letter
    return (idx, 0 if exp == 1 else 1)


@dataclass(frozen=True)
class Word:
    """Freely reduced word; the empty tuple is the identity."""

    letters: Tuple[Letter, ...]

    def __post_init__(self):
        for idx, exp in self.letters:
            if idx < 1:
                raise IndexOutOfRange(f"generator index {idx} < 1")
            if exp not in (1, -1):
                raise ValueError(f"exponent must be +-1, got {exp}")
        for first, second in zip(self.letters, self.letters[1:]):
            if first[0] == second[0] and first[1] == -second[1]:
                raise ValueError("word is not freely reduced")

    @staticmethod
    def empty() -> "Word":
        return Word(())

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((idx, -exp) for idx, exp in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return reduce(self.letters + other.letters)

    def power(self, n: int) -> "Word":
        result = Word.empty()
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            result = result * base
        return result

    def cyclic_reduce(self) -> "Word":
        letters = list(self.letters)
        while len(letters) >= 2 and letters[0][0] == letters[-1][0] \
                and letters[0][1] == -letters[-1][1]:
            letters = letters[1:-1]
        return Word(tuple(letters))

    def is_cyclically_reduced(self) -> bool:
        if len(self.letters) < 2:
            return True
        first, last = self.letters[0], self.letters[-1]
        return not (first[0] == last[0] and first[1] == -last[1])

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for idx, exp in self.letters:
            if idx <= 26:
                ch = chr(ord("a") + idx - 1)
                parts.append(ch if exp == 1 else ch.upper())
            else:
                parts.append(f"g{idx}" if exp == 1 else f"g{idx}^-1")
        return "".join(parts)


def reduce(letters: Iterable[Letter], rank: int | None = None) -> Word:
    """Freely reduce a raw letter sequence."""
    stack: list[Letter] = []
    for idx, exp in letters:
        if idx < 1 or (rank is not None and idx > rank):
            raise IndexOutOfRange(f"generator index {idx} out of range")
        if stack and stack[-1][0] == idx and stack[-1][1] == -exp:
            stack.pop()
        else:
            stack.append((idx, exp))
    return Word(tuple(stack))


def enumerate_words(
    rank: int, max_len: int, cyclically_reduced_only: bool = False
) -> Iterator[Word]:
    """All freely reduced words of length <= max_len, each exactly once.

    Order is deterministic: by length, then lexicographic in the letter
    order a < a^-1 < b < b^-1 < ...  The empty word comes first.
    """
    if rank < 1:
        raise ValueError("rank must be >= 1")
    alphabet = sorted(
        [(i, e) for i in range(1, rank + 1) for e in (1, -1)], key=_letter_key
    )
    yield Word.empty()
    for length in range(1, max_len + 1):
        for letters in _words_of_length(alphabet, length):
            word = Word(letters)
            if cyclically_reduced_only and not word.is_cyclically_reduced():
                continue
            yield word


def _words_of_length(
    alphabet: Sequence[Letter], length: int
) -> Iterator[Tuple[Letter, ...]]:
    def rec(prefix: list[Letter]) -> Iterator[Tuple[Letter, ...]]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for letter in alphabet:
            if prefix and prefix[-1][0] == letter[0] and prefix[-1][1] == -letter[1]:
                continue
            prefix.append(letter)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


class RepKind(Enum):
    LINEAR2 = "linear2"        # SL(2) acting on the circle of directions
    PROJECTIVE2 = "projective2"  # the same matrices acting on the circle of lines
    LORENTZ3 = "lorentz3"      # SO(2, 1) matrices


GroupElement = Union[SL2Matrix, LorentzIsometry]


@dataclass(frozen=True)
class Representation:
    """Assignment of one group element per free generator."""

    generators: Tuple[GroupElement, ...]
    kind: RepKind

    def __post_init__(self):
        if not self.generators:
            raise ValueError("representation needs at least one generator")
        want = LorentzIsometry if self.kind is RepKind.LORENTZ3 else SL2Matrix
        for g in self.generators:
            if not isinstance(g, want):
                raise ValueError(f"{self.kind.value} generators must be {want.__name__}")

    @property
    def rank(self) -> int:
        return len(self.generators)


def evaluate(rep: Representation, w: Word) -> GroupElement:
    """Product of generator images along the word; the empty word gives I."""
    if rep.kind is RepKind.LORENTZ3:
        result: GroupElement = LorentzIsometry.identity()
    else:
        result = SL2Matrix.identity()
    inverses = {}
    for idx, exp in w.letters:
        if idx > rep.rank:
            raise IndexOutOfRange(f"generator index {idx} > rank {rep.rank}")
        if exp == 1:
            g = rep.generators[idx - 1]
        else:
            if idx not in inverses:
                inverses[idx] = rep.generators[idx - 1].inverse()
            g = inverses[idx]
        result = result @ g
    return result


@dataclass(frozen=True)
class AffineMap:
    """x -> linear(x) + trans, with linear in O(2, 1)."""

    linear: LorentzIsometry
    trans: LorentzVector

    @staticmethod
    def identity() -> "AffineMap":
        return AffineMap(LorentzIsometry.identity(), LorentzVector(0.0, 0.0, 0.0))

    def apply(self, v: LorentzVector) -> LorentzVector:
        return self.linear.apply(v) + self.trans

    def compose(self, other: "AffineMap") -> "AffineMap":
        return AffineMap(
            self.linear @ other.linear,
            self.linear.apply(other.trans) + self.trans,
        )

    def inverse(self) -> "AffineMap":
        inv = self.linear.inverse()
        return AffineMap(inv, -inv.apply(self.trans))


@dataclass(frozen=True)
class AffineDeformation:
    """Linear generators in SL(2) plus one translation vector per generator.

    The affine image of a generator is (so21 image, translation); words are
    evaluated by composing affine maps, which realizes the cocycle rule
    u(w1 w2) = u(w1) + L(w1) u(w2) without expanding it symbolically.
    """

    linear_generators: Tuple[SL2Matrix, ...]
    translations: Tuple[LorentzVector, ...]

    def __post_init__(self):
        if len(self.linear_generators) != len(self.translations):
            raise ValueError("one translation required per linear generator")
        if not self.linear_generators:
            raise ValueError("deformation needs at least one generator")

    @property
    def rank(self) -> int:
        return len(self.linear_generators)

    @cached_property
    def affine_generators(self) -> Tuple[AffineMap, ...]:
        return tuple(
            AffineMap(sl2_to_so21(g), u)
            for g, u in zip(self.linear_generators, self.translations)
        )

    @cached_property
    def linear_representation(self) -> Representation:
        return Representation(self.linear_generators, RepKind.LINEAR2)


def evaluate_affine(deformation: AffineDeformation, w: Word) -> AffineMap:
    """Affine image (L(w), u(w)) of a word; u satisfies the cocycle rule."""
    result = AffineMap.identity()
    inverses = {}
    for idx, exp in w.letters:
        if idx > deformation.rank:
            raise IndexOutOfRange(
                f"generator index {idx} > rank {deformation.rank}"
            )
        if exp == 1:
            g = deformation.affine_generators[idx - 1]
        else:
            if idx not in inverses:
                inverses[idx] = deformation.affine_generators[idx - 1].inverse()
            g = inverses[idx]
        result = result.compose(g)
    return result


def relator_word(genus: int) -> Word:
    """The surface relator [a1, b1] ... [ag, bg] in generators 1..2g."""
    letters: list[Letter] = []
    for i in range(genus):
        a, b = 2 * i + 1, 2 * i + 2
        letters += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return Word(tuple(letters))


def surface_relator_defect(rep: Representation, genus: int) -> float:
    """Max-norm distance of the evaluated surface relator from +-identity.

    Zero means the generators satisfy the genus-g surface relation
    projectively.
    """
    if genus < 1:
        raise ValueError("genus must be >= 1")
    if rep.rank != 2 * genus:
        raise WrongGeneratorCount(
            f"genus {genus} needs {2 * genus} generators, got {rep.rank}"
        )
    value = evaluate(rep, relator_word(genus))
    if isinstance(value, SL2Matrix):
        arr = value.to_array()
        eye = np.eye(2)
    else:
        arr = value.m
        eye = np.eye(3)
    return float(min(np.max(np.abs(arr - eye)), np.max(np.abs(arr + eye))))
