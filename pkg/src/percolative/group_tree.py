"""Reduced-word algebra for the free group / free product of Z/2, and tree balls.

The d-regular tree is identified with the right Cayley graph of one of two
groups: the free group on k generators (d = 2k) or the free product of d
copies of Z/2.  A vertex of the tree is a reduced word; the edge labelled
``s`` joins ``w`` to ``w * s``.

Letters are non-zero integers.  For :class:`EvenFree` the letter ``+i``
stands for ``s_i`` and ``-i`` for its inverse; for :class:`Involutive` only
positive letters occur.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import BudgetExceeded, ParityMismatch

DEFAULT_BALL_BUDGET = 2_000_000


@dataclass(frozen=True)
class EvenFree:
    """Free group on ``k`` generators; Cayley graph is the 2k-regular tree."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"EvenFree needs k >= 1, got {self.k}")

    @property
    def degree(self) -> int:
        return 2 * self.k

    @property
    def n_gens(self) -> int:
        return self.k

    @property
    def letters(self) -> tuple[int, ...]:
        out = []
        for i in range(1, self.k + 1):
            out += [i, -i]
        return tuple(out)

    def inverse_letter(self, s: int) -> int:
        return -s

    def check_letter(self, s: int) -> None:
        if not (isinstance(s, (int, np.integer)) and s != 0 and abs(s) <= self.k):
            raise ValueError(f"letter {s!r} out of range for EvenFree({self.k})")

    @property
    def tag(self) -> str:
        return "even"


@dataclass(frozen=True)
class Involutive:
    """Free product of ``d`` copies of Z/2; Cayley graph is the d-regular tree."""

    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"Involutive needs d >= 1, got {self.d}")

    @property
    def degree(self) -> int:
        return self.d

    @property
    def n_gens(self) -> int:
        return self.d

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(range(1, self.d + 1))

    def inverse_letter(self, s: int) -> int:
        return s

    def check_letter(self, s: int) -> None:
        if not (isinstance(s, (int, np.integer)) and 1 <= s <= self.d):
            raise ValueError(f"letter {s!r} out of range for Involutive({self.d})")

    @property
    def tag(self) -> str:
        return "inv"


Parity = Union[EvenFree, Involutive]


def parity_from_degree(tag: str, d: int) -> Parity:
    """Build a parity from the text tag used in graph files (``even``/``inv``)."""
    if tag == "even":
        if d % 2:
            raise ValueError(f"parity 'even' needs even degree, got d={d}")
        return EvenFree(d // 2)
    if tag == "inv":
        return Involutive(d)
    raise ValueError(f"unknown parity tag {tag!r}")


@dataclass(frozen=True)
class Word:
    """A reduced word; the empty word is the identity (the tree root)."""

    parity: Parity
    letters: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self.parity, self, other)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def last(self) -> int:
        return self.letters[-1]

    def inverse(self) -> "Word":
        inv = self.parity.inverse_letter
        return Word(self.parity, tuple(inv(s) for s in reversed(self.letters)))

    def __repr__(self) -> str:
        if not self.letters:
            return "e"
        parts = []
        for s in self.letters:
            parts.append(f"s{s}" if s > 0 else f"s{-s}^-1")
        return " ".join(parts)


def identity(parity: Parity) -> Word:
    return Word(parity, ())


def generator(parity: Parity, s: int) -> Word:
    parity.check_letter(s)
    return Word(parity, (int(s),))


def reduce(parity: Parity, letters: Iterable[int]) -> Word:
    """Freely reduce a letter sequence, cancelling ``s s^-1`` (or ``s s``)."""
    inv = parity.inverse_letter
    stack: list[int] = []
    for s in letters:
        parity.check_letter(s)
        s = int(s)
        if stack and stack[-1] == inv(s):
            stack.pop()
        else:
            stack.append(s)
    return Word(parity, tuple(stack))


def is_reduced(parity: Parity, letters: Sequence[int]) -> bool:
    inv = parity.inverse_letter
    return all(letters[i + 1] != inv(letters[i]) for i in range(len(letters) - 1))


def multiply(parity: Parity, w1: Word, w2: Word) -> Word:
    if w1.parity != parity or w2.parity != parity:
        raise ParityMismatch(f"cannot multiply words of {w1.parity} and {w2.parity} in {parity}")
    return reduce(parity, w1.letters + w2.letters)


def inverse(w: Word) -> Word:
    return w.inverse()


def ball_size(d: int, r: int) -> int:
    """Number of vertices of the closed radius-``r`` ball in the d-regular tree."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    if r == 0:
        return 1
    if d == 1:
        return 2
    if d == 2:
        return 2 * r + 1
    return 1 + d * ((d - 1) ** r - 1) // (d - 2)


@dataclass(frozen=True, eq=False)
class TreeBall:
    """Breadth-first enumeration of T_d(r) as reduced words.

    ``parent[i]`` is the index of ``elements[i]`` with its last letter removed
    (``-1`` for the root).  Children of a vertex are contiguous and levels
    occupy contiguous index ranges, which the message-passing code relies on.
    """

    parity: Parity
    radius: int
    elements: tuple[Word, ...]
    parent: np.ndarray
    depth: np.ndarray
    letter: np.ndarray
    level_starts: tuple[int, ...]
    index: dict

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def level(self, k: int) -> slice:
        return slice(self.level_starts[k], self.level_starts[k + 1])

    def index_of(self, w: Word) -> int:
        return self.index[w]

    def children_per_parent(self, k: int) -> int:
        """Children count of each vertex at depth ``k`` (inside the infinite tree)."""
        d = self.parity.degree
        return d if k == 0 else d - 1


@lru_cache(maxsize=64)
def _ball_cached(parity: Parity, r: int) -> TreeBall:
    root = identity(parity)
    elements = [root]
    parent = [-1]
    depth = [0]
    letter = [0]
    level_starts = [0, 1]
    inv = parity.inverse_letter
    for k in range(r):
        start, stop = level_starts[k], level_starts[k + 1]
        for i in range(start, stop):
            w = elements[i]
            for s in parity.letters:
                if w.letters and s == inv(w.last):
                    continue
                elements.append(Word(parity, w.letters + (s,)))
                parent.append(i)
                depth.append(k + 1)
                letter.append(s)
        level_starts.append(len(elements))
    elements_t = tuple(elements)
    return TreeBall(
        parity=parity,
        radius=r,
        elements=elements_t,
        parent=np.asarray(parent, dtype=np.int64),
        depth=np.asarray(depth, dtype=np.int64),
        letter=np.asarray(letter, dtype=np.int64),
        level_starts=tuple(level_starts),
        index={w: i for i, w in enumerate(elements_t)},
    )


def ball(parity: Parity, r: int, budget: int = DEFAULT_BALL_BUDGET) -> TreeBall:
    """Closed ball T_d(r) around the identity, enumerated breadth first."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    size = ball_size(parity.degree, r)
    if size > budget:
        raise BudgetExceeded(f"ball of radius {r} has {size} elements > budget {budget}")
    return _ball_cached(parity, r)


def canonical_edge_transversal(parity: Parity) -> list[tuple[Word, Word]]:
    """Orbit representatives ``(e, s_i)`` of undirected tree edges, one per colour."""
    e = identity(parity)
    return [(e, Word(parity, (i,))) for i in range(1, parity.n_gens + 1)]


def left_stabilizer(parity: Parity, words: Sequence[Word]) -> list[Word]:
    """Elements ``g`` with ``g * F == F`` as sets.

    Since the identity lies in every representative, ``g = g * e`` must be
    in ``F``, so only members of ``F`` need checking.
    """
    fset = set(words)
    return [g for g in words if {multiply(parity, g, f) for f in words} == fset]
