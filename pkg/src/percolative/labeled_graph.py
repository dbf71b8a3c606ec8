"""Finite d-regular graphs presented by generator permutations.

A graph is a vertex count plus one permutation per generator of the group
acting on the tree.  The tree vertex ``g`` is sent to ``act(graph, g, v)``
by walking from ``v`` along the letters of ``g`` from left to right, so that
the tree edge ``{w, w*s}`` lands on the graph edge ``{u, gamma_s(u)}``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CoincidentGenerators,
    FixedPoint,
    GenerationFailure,
    NotABijection,
    NotInvolution,
    ParityMismatch,
)
from .group_tree import EvenFree, Involutive, Parity, Word, ball, parity_from_degree

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LabeledRegularGraph:
    n: int
    parity: Parity
    gens: tuple[np.ndarray, ...]
    multi_edge_vertices: frozenset = field(default_factory=frozenset)

    @property
    def degree(self) -> int:
        return self.parity.degree

    @cached_property
    def inverse_gens(self) -> tuple[np.ndarray, ...]:
        out = []
        for g in self.gens:
            inv = np.empty_like(g)
            inv[g] = np.arange(self.n)
            inv.setflags(write=False)
            out.append(inv)
        return tuple(out)

    def step(self, s: int) -> np.ndarray:
        """Permutation of the vertices realising the letter ``s``."""
        if s > 0:
            return self.gens[s - 1]
        return self.inverse_gens[-s - 1]

    @property
    def has_multi_edges(self) -> bool:
        return bool(self.multi_edge_vertices)

    def neighbours(self, v: int) -> list[int]:
        return [int(self.step(s)[v]) for s in self.parity.letters]

    def ball_images(self, r: int) -> np.ndarray:
        """Array ``(n, |T_d(r)|)`` whose row ``v`` is ``g -> act(g, v)`` over the ball."""
        return _ball_images(self, r)

    def __eq__(self, other):
        if not isinstance(other, LabeledRegularGraph):
            return NotImplemented
        return (self.n == other.n and self.parity == other.parity
                and all(np.array_equal(a, b) for a, b in zip(self.gens, other.gens)))

    __hash__ = object.__hash__


def _check_bijection(perm: np.ndarray, n: int) -> None:
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise NotABijection("generator is not a permutation of 0..n-1")


def from_permutations(parity: Parity, perms: Sequence[Sequence[int]]) -> LabeledRegularGraph:
    """Validate generator permutations and build the graph."""
    perms = [np.asarray(p, dtype=np.int64) for p in perms]
    if len(perms) != parity.n_gens:
        raise ValueError(f"{parity} needs {parity.n_gens} generators, got {len(perms)}")
    if not perms or perms[0].ndim != 1:
        raise NotABijection("generators must be one-dimensional")
    n = perms[0].shape[0]
    for p in perms:
        _check_bijection(p, n)
    idx = np.arange(n)
    multi = set()
    if isinstance(parity, Involutive):
        for p in perms:
            if np.any(p == idx):
                raise FixedPoint(f"generator fixes vertex {int(np.flatnonzero(p == idx)[0])}")
            if not np.array_equal(p[p], idx):
                raise NotInvolution("generator is not an involution")
        for i in range(len(perms)):
            for j in range(i + 1, len(perms)):
                clash = np.flatnonzero(perms[i] == perms[j])
                if clash.size:
                    raise CoincidentGenerators(
                        f"generators {i + 1} and {j + 1} agree at vertex {int(clash[0])}")
    else:
        # every (vertex, direction) pair gives one half-edge; coincidences are multi-edges
        invs = []
        for p in perms:
            inv = np.empty_like(p)
            inv[p] = idx
            invs.append(inv)
        images = np.stack([q for pair in zip(perms, invs) for q in pair], axis=1)
        for v in range(n):
            row = images[v]
            if np.any(row == v) or len(set(row.tolist())) < row.size:
                multi.add(v)
        if multi:
            log.info("graph has %d vertices incident to loops or multi-edges", len(multi))
    for p in perms:
        p.setflags(write=False)
    return LabeledRegularGraph(n=n, parity=parity, gens=tuple(perms),
                               multi_edge_vertices=frozenset(multi))


def _random_matching(n: int, rng: np.random.Generator) -> np.ndarray:
    order = rng.permutation(n)
    m = np.empty(n, dtype=np.int64)
    a, b = order[0::2], order[1::2]
    m[a] = b
    m[b] = a
    return m


def random_graph(parity: Parity, n: int, rng: np.random.Generator,
                 max_tries: int = 100_000) -> LabeledRegularGraph:
    """Uniform random permutations (even) or uniform perfect matchings (involutive).

    Involutive generators are redrawn jointly until no two agree anywhere, so the
    result is uniform over simple 1-factorised graphs with labelled matchings.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if isinstance(parity, EvenFree):
        return from_permutations(parity, [rng.permutation(n) for _ in range(parity.k)])
    if n % 2:
        raise ValueError(f"involutive graphs need an even vertex count, got {n}")
    for _ in range(max_tries):
        ms = [_random_matching(n, rng) for _ in range(parity.d)]
        if all(not np.any(ms[i] == ms[j])
               for i in range(len(ms)) for j in range(i + 1, len(ms))):
            return from_permutations(parity, ms)
    raise GenerationFailure(f"no simple {parity.d}-matching graph on {n} vertices "
                            f"after {max_tries} draws")


def act(graph: LabeledRegularGraph, g: Word, v: int) -> int:
    """Image of the tree vertex ``g`` under the homomorphism rooted at ``v``."""
    if g.parity != graph.parity:
        raise ParityMismatch(f"word of {g.parity} acting on graph of {graph.parity}")
    for s in g.letters:
        v = graph.step(s)[v]
    return int(v)


def _ball_images(graph: LabeledRegularGraph, r: int) -> np.ndarray:
    b = ball(graph.parity, r)
    out = np.empty((graph.n, b.size), dtype=np.int64)
    out[:, 0] = np.arange(graph.n)
    for c in range(1, b.size):
        out[:, c] = graph.step(int(b.letter[c]))[out[:, b.parent[c]]]
    return out


def pullback_name(graph: LabeledRegularGraph, config: np.ndarray, v: int, r: int) -> np.ndarray:
    """Pull-back name of radius ``r``: entry ``i`` is ``config[act(ball.elements[i], v)]``."""
    config = np.asarray(config)
    b = ball(graph.parity, r)
    sites = np.empty(b.size, dtype=np.int64)
    sites[0] = v
    for c in range(1, b.size):
        sites[c] = graph.step(int(b.letter[c]))[sites[b.parent[c]]]
    return config[sites]


def _injective_rows(images: np.ndarray) -> np.ndarray:
    if images.shape[1] <= 1:
        return np.ones(images.shape[0], dtype=bool)
    srt = np.sort(images, axis=1)
    return np.all(srt[:, 1:] != srt[:, :-1], axis=1)


def tree_like_vertices(graph: LabeledRegularGraph, t: int) -> np.ndarray:
    """Boolean mask of vertices whose radius-``t`` ball map is injective."""
    return _injective_rows(graph.ball_images(t))


def tree_like_fraction(graph: LabeledRegularGraph, t: int) -> Fraction:
    if t < 0:
        raise ValueError("t must be non-negative")
    return Fraction(int(tree_like_vertices(graph, t).sum()), graph.n)


def ball_model_map(graph: LabeledRegularGraph, v: int, r: int) -> Optional[np.ndarray]:
    """Colour-respecting isomorphism T_d(r) -> B(v, r), or ``None`` if not injective."""
    sites = pullback_name(graph, np.arange(graph.n), v, r)
    if len(np.unique(sites)) != sites.size:
        return None
    return sites


# text format: "parity d n" then one line of n images per generator

def format_graph(graph: LabeledRegularGraph) -> str:
    lines = [f"{graph.parity.tag} {graph.degree} {graph.n}"]
    lines += [" ".join(str(int(x)) for x in g) for g in graph.gens]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> LabeledRegularGraph:
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 3:
        raise ValueError("graph header must be 'parity d n'")
    tag, d, n = rows[0][0], int(rows[0][1]), int(rows[0][2])
    parity = parity_from_degree(tag, d)
    perms = [[int(x) for x in row] for row in rows[1:]]
    if any(len(p) != n for p in perms):
        raise NotABijection(f"every generator line must list {n} images")
    return from_permutations(parity, perms)


def save_graph(graph: LabeledRegularGraph, path) -> None:
    Path(path).write_text(format_graph(graph))


def load_graph(path) -> LabeledRegularGraph:
    return parse_graph(Path(path).read_text())
