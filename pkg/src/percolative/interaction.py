"""Translation-invariant interactions on the tree and their transport to graphs.

An interaction is given by a finite list of :class:`Term` objects.  Each term
holds an orbit representative ``F0`` (a tuple of words containing the
identity) and a log-weight table over ``A^F0`` with values in ``[-inf, inf)``.
The Hamiltonian on a labeled graph sums every term over every base vertex,
divided by the size of the representative's stabilizer so that each set is
counted once even when, as for involutive edges ``{e, s_i}``, two base
vertices read the same set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import ParityMismatch, ZeroMass
from .group_tree import (
    EvenFree,
    Involutive,
    Parity,
    Word,
    ball,
    canonical_edge_transversal,
    identity,
    left_stabilizer,
    multiply,
)
from .labeled_graph import LabeledRegularGraph, act

NEG_INF = -np.inf


@dataclass(frozen=True, eq=False)
class Term:
    words: tuple[Word, ...]
    table: np.ndarray

    @cached_property
    def stabilizer_size(self) -> int:
        return len(left_stabilizer(self.words[0].parity, self.words))

    @property
    def weight(self) -> float:
        return 1.0 / self.stabilizer_size

    @property
    def radius(self) -> int:
        return max(len(w) for w in self.words)


@dataclass(frozen=True, eq=False)
class InteractionSpec:
    alphabet_size: int
    parity: Parity
    terms: tuple[Term, ...]
    name: str = "custom"
    params: tuple = ()
    state_values: Optional[tuple] = None

    def __post_init__(self):
        _validate(self)

    @property
    def range(self) -> int:
        return max((t.radius for t in self.terms), default=0)

    @property
    def degree(self) -> int:
        return self.parity.degree

    def describe(self) -> dict:
        return {"model": self.name, **dict(self.params),
                "alphabet_size": self.alphabet_size,
                "parity": self.parity.tag, "d": self.degree}

    @cached_property
    def is_pairwise(self) -> bool:
        for t in self.terms:
            if len(t.words) > 2 or t.radius > 1:
                return False
        return True

    @cached_property
    def pairwise(self) -> "PairwiseTables":
        return _pairwise_tables(self)


@dataclass(frozen=True)
class PairwiseTables:
    """Vertex table ``(A,)`` and per-colour edge tables ``T_i[x_w, x_{w s_i}]``."""

    vertex: np.ndarray
    edges: tuple[np.ndarray, ...]

    def oriented(self, letter: int) -> np.ndarray:
        """Table indexed ``[x_parent, x_child]`` for a tree edge ``child = parent * letter``."""
        t = self.edges[abs(letter) - 1]
        return t if letter > 0 else t.T


def _validate(spec: InteractionSpec) -> None:
    A = spec.alphabet_size
    if A < 1:
        raise ValueError("alphabet must be non-empty")
    e = identity(spec.parity)
    for t in spec.terms:
        if any(w.parity != spec.parity for w in t.words):
            raise ParityMismatch("term word has wrong parity")
        if e not in t.words:
            raise ValueError(f"representative {t.words} does not contain the identity")
        if len(set(t.words)) != len(t.words):
            raise ValueError(f"representative {t.words} repeats a word")
        if t.table.shape != (A,) * len(t.words):
            raise ValueError(f"table shape {t.table.shape} does not match {len(t.words)} sites")
        if np.any(np.isnan(t.table)) or np.any(t.table == np.inf):
            raise ValueError("log-weights must lie in [-inf, inf)")
        t.table.setflags(write=False)
        # translation invariance forces symmetry under the stabilizer
        for g in left_stabilizer(spec.parity, t.words):
            perm = [t.words.index(multiply(spec.parity, g, f)) for f in t.words]
            if not np.array_equal(t.table, t.table.transpose(perm)):
                raise ValueError(f"table of {t.words} is not invariant under translation by {g}")
    if feasibility_witness(spec) is None:
        raise ZeroMass("no configuration on ball(L+1) has finite local energy")


def _term_instances_in_ball(spec: InteractionSpec, r: int):
    b = ball(spec.parity, r)
    out = []
    for g in b.elements:
        for t in spec.terms:
            idx = [b.index.get(multiply(spec.parity, g, f)) for f in t.words]
            if None not in idx:
                out.append((idx, t.table))
    return b, out


def feasibility_witness(spec: InteractionSpec) -> Optional[np.ndarray]:
    """Backtracking search for a configuration on ball(L+1) with every contained
    translate of every term finite.  Returns ``None`` if none exists."""
    b, instances = _term_instances_in_ball(spec, spec.range + 1)
    by_last: list[list] = [[] for _ in range(b.size)]
    for idx, table in instances:
        by_last[max(idx)].append((idx, table))
    A = spec.alphabet_size
    x = np.zeros(b.size, dtype=np.int64)

    def ok(i):
        return all(table[tuple(x[idx])] > NEG_INF for idx, table in by_last[i])

    i = 0
    choice = [-1] * b.size
    while 0 <= i < b.size:
        choice[i] += 1
        if choice[i] >= A:
            choice[i] = -1
            i -= 1
            continue
        x[i] = choice[i]
        if ok(i):
            i += 1
    return x if i == b.size else None


def _pairwise_tables(spec: InteractionSpec) -> PairwiseTables:
    if not spec.is_pairwise:
        raise ValueError(f"interaction {spec.name} is not vertex+edge")
    A = spec.alphabet_size
    vertex = np.zeros(A)
    edges = [np.zeros((A, A)) for _ in range(spec.parity.n_gens)]
    for t in spec.terms:
        if len(t.words) == 1:
            vertex = vertex + t.table
            continue
        e_pos = 0 if t.words[0].is_identity else 1
        other = t.words[1 - e_pos]
        tab = t.table if e_pos == 0 else t.table.T   # now [x_e, x_other]
        s = other.last
        if s < 0:
            tab = tab.T
        edges[abs(s) - 1] = edges[abs(s) - 1] + tab
    for m in [vertex, *edges]:
        m.setflags(write=False)
    return PairwiseTables(vertex=vertex, edges=tuple(edges))


def _edge_terms(parity: Parity, table: np.ndarray) -> list[Term]:
    return [Term(words=rep, table=np.array(table, dtype=float))
            for rep in canonical_edge_transversal(parity)]


def _vertex_term(parity: Parity, table) -> Term:
    return Term(words=(identity(parity),), table=np.array(table, dtype=float))


def ising(beta: float, parity: Parity) -> InteractionSpec:
    """Ferromagnetic Ising: states (+1, -1), edge log-weight ``beta * s_u * s_v``."""
    spins = np.array([1.0, -1.0])
    return InteractionSpec(2, parity, tuple(_edge_terms(parity, beta * np.outer(spins, spins))),
                           name="ising", params=(("beta", float(beta)),), state_values=(1, -1))


def potts(beta: float, q: int, parity: Parity) -> InteractionSpec:
    if q < 2:
        raise ValueError(f"Potts needs q >= 2, got {q}")
    return InteractionSpec(q, parity, tuple(_edge_terms(parity, beta * np.eye(q))),
                           name="potts", params=(("beta", float(beta)), ("q", int(q))))


def hardcore(lam: float, parity: Parity) -> InteractionSpec:
    """Independent-set model: activity ``lam`` per occupied site, no two adjacent."""
    if not lam > 0:
        raise ValueError(f"activity must be positive, got {lam}")
    edge = np.array([[0.0, 0.0], [0.0, NEG_INF]])
    terms = [_vertex_term(parity, [0.0, math.log(lam)]), *_edge_terms(parity, edge)]
    return InteractionSpec(2, parity, tuple(terms), name="hardcore",
                           params=(("lambda", float(lam)),))


def coloring(q: int, parity: Parity) -> InteractionSpec:
    if q < 2:
        raise ValueError(f"colouring needs q >= 2, got {q}")
    edge = np.where(np.eye(q, dtype=bool), NEG_INF, 0.0)
    return InteractionSpec(q, parity, tuple(_edge_terms(parity, edge)),
                           name="coloring", params=(("q", int(q)),))


def with_field(spec: InteractionSpec, psi) -> InteractionSpec:
    """Add a translation-invariant finite self-interaction to the vertex term."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (spec.alphabet_size,):
        raise ValueError(f"field must have shape ({spec.alphabet_size},)")
    if not np.all(np.isfinite(psi)):
        raise ValueError("self-interactions must be finite")
    if not np.any(psi):
        return spec
    terms = list(spec.terms)
    for i, t in enumerate(terms):
        if len(t.words) == 1:
            terms[i] = Term(t.words, t.table + psi)
            break
    else:
        terms.append(_vertex_term(spec.parity, psi))
    params = tuple(p for p in spec.params if p[0] != "field")
    old = dict(spec.params).get("field")
    total = psi if old is None else np.asarray(old) + psi
    params += (("field", tuple(float(x) for x in total)),)
    return InteractionSpec(spec.alphabet_size, spec.parity, tuple(terms), name=spec.name,
                           params=params, state_values=spec.state_values)


def derived_hamiltonian(spec: InteractionSpec, graph: LabeledRegularGraph, config) -> float:
    """Sum over base vertices and representatives of the pulled-back term values."""
    if spec.parity != graph.parity:
        raise ParityMismatch(f"spec on {spec.parity}, graph on {graph.parity}")
    config = np.asarray(config)
    if config.shape != (graph.n,) or config.min(initial=0) < 0 or \
            config.max(initial=0) >= spec.alphabet_size:
        raise ValueError("configuration does not match graph/alphabet")
    total = 0.0
    for v in range(graph.n):
        for t in spec.terms:
            val = t.table[tuple(config[act(graph, f, v)] for f in t.words)]
            if val == NEG_INF:
                return NEG_INF
            total += t.weight * val
    return float(total)


@dataclass(frozen=True, eq=False)
class CompiledHamiltonian:
    """Deduplicated term instances ``(sites, table)`` of a spec on a concrete graph."""

    n: int
    alphabet_size: int
    instances: tuple[tuple[np.ndarray, np.ndarray], ...]

    def energy(self, configs: np.ndarray) -> np.ndarray:
        """Log-weights of a batch ``(B, n)`` of configurations."""
        configs = np.asarray(configs)
        A = self.alphabet_size
        out = np.zeros(configs.shape[0])
        for sites, table in self.instances:
            flat = table.ravel()
            idx = np.zeros(configs.shape[0], dtype=np.int64)
            for s in sites:
                idx = idx * A + configs[:, s]
            out += flat[idx]
        return out

    @cached_property
    def flat(self):
        """CSR layout consumed by the compiled heat-bath kernel."""
        A = self.alphabet_size
        inst_ptr = [0]
        inst_sites, inst_strides, inst_offset, tables = [], [], [], []
        per_vertex: list[dict] = [dict() for _ in range(self.n)]
        offset = 0
        for j, (sites, table) in enumerate(self.instances):
            m = len(sites)
            strides = [A ** (m - 1 - p) for p in range(m)]
            inst_sites += [int(s) for s in sites]
            inst_strides += strides
            inst_ptr.append(len(inst_sites))
            inst_offset.append(offset)
            tables.append(table.ravel())
            offset += table.size
            for p, s in enumerate(sites):
                per_vertex[s][j] = per_vertex[s].get(j, 0) + strides[p]
        vptr, vinst, vstride = [0], [], []
        for u in range(self.n):
            for j, st in sorted(per_vertex[u].items()):
                vinst.append(j)
                vstride.append(st)
            vptr.append(len(vinst))
        as_i = lambda x: np.asarray(x, dtype=np.int64)
        return dict(inst_ptr=as_i(inst_ptr), inst_sites=as_i(inst_sites),
                    inst_strides=as_i(inst_strides), inst_offset=as_i(inst_offset),
                    tables=np.concatenate(tables) if tables else np.zeros(0),
                    vptr=as_i(vptr), vinst=as_i(vinst), vstride=as_i(vstride))


def compile_hamiltonian(spec: InteractionSpec, graph: LabeledRegularGraph,
                        field: Optional[np.ndarray] = None) -> CompiledHamiltonian:
    """Expand every (base vertex, representative) pair into site tuples.

    Instances reading the same site set are merged (tables re-ordered to sorted
    sites and summed with their stabilizer weights); ``field`` adds a per-vertex
    self-interaction of shape ``(n, A)``.
    """
    if spec.parity != graph.parity:
        raise ParityMismatch(f"spec on {spec.parity}, graph on {graph.parity}")
    merged: dict[tuple, np.ndarray] = {}
    for t in spec.terms:
        w = t.weight
        for v in range(graph.n):
            sites = [act(graph, f, v) for f in t.words]
            order = np.argsort(sites, kind="stable")
            key = tuple(sites[i] for i in order)
            tab = t.table.transpose(order) * w if w != 1.0 else t.table.transpose(order)
            merged[key] = merged[key] + tab if key in merged else np.array(tab)
    if field is not None:
        field = np.asarray(field, dtype=float)
        if field.shape != (graph.n, spec.alphabet_size) or not np.all(np.isfinite(field)):
            raise ValueError("per-vertex field must be finite with shape (n, A)")
        for v in range(graph.n):
            key = (v,)
            merged[key] = merged[key] + field[v] if key in merged else field[v].copy()
    instances = tuple((np.asarray(k, dtype=np.int64), tab) for k, tab in merged.items())
    return CompiledHamiltonian(graph.n, spec.alphabet_size, instances)


def hardcore_threshold(d: int) -> float:
    """Uniqueness threshold ``(d-1)^(d-1) / (d-2)^d`` for independent sets on T_d."""
    if d < 3:
        raise ValueError("threshold defined for d >= 3")
    return float(Fraction((d - 1) ** (d - 1), (d - 2) ** d))


def coloring_constant(tol: float = 1e-15, max_iter: int = 10_000) -> float:
    """Root of ``c = exp(1/c)`` by fixed-point iteration."""
    c = 1.75
    for _ in range(max_iter):
        nxt = math.exp(1.0 / c)
        if abs(nxt - c) <= tol:
            return nxt
        c = nxt
    raise RuntimeError("fixed-point iteration did not converge")


def coloring_threshold(d: int) -> int:
    """Smallest q covered by the colouring mixing result: ``1 + ceil(c (d-1))``."""
    if d < 2:
        raise ValueError("threshold defined for d >= 2")
    return 1 + math.ceil(coloring_constant() * (d - 1))


_MODEL_KEYS = {"model", "beta", "lambda", "q", "field"}


def parse_model_config(cfg: Mapping[str, str], parity: Parity) -> InteractionSpec:
    """Build a spec from flat ``key = value`` text settings; unknown keys are rejected."""
    unknown = set(cfg) - _MODEL_KEYS
    if unknown:
        raise ValueError(f"unknown model keys: {sorted(unknown)}")
    if "model" not in cfg:
        raise ValueError("model config needs a 'model' key")

    def need(key):
        if key not in cfg:
            raise ValueError(f"model {cfg['model']!r} needs key {key!r}")
        return cfg[key]

    kind = str(cfg["model"]).strip()
    if kind == "ising":
        spec = ising(float(need("beta")), parity)
    elif kind == "potts":
        spec = potts(float(need("beta")), int(need("q")), parity)
    elif kind == "hardcore":
        spec = hardcore(float(need("lambda")), parity)
    elif kind == "coloring":
        spec = coloring(int(need("q")), parity)
    else:
        raise ValueError(f"unknown model {kind!r}")
    if "field" in cfg and str(cfg["field"]).strip():
        raw = cfg["field"]
        vals = [float(x) for x in str(raw).replace(",", " ").split()] \
            if isinstance(raw, str) else [float(x) for x in raw]
        spec = with_field(spec, vals)
    return spec
