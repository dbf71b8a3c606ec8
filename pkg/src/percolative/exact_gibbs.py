"""Exact Gibbs measures on small labeled graphs by full enumeration.

Configurations are indexed in mixed radix with vertex 0 as the least
significant digit.  Enumeration runs over fixed-size chunks; chunk results are
reduced in index order, so the output does not depend on the worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, NotTreeLike, ZeroPartition
from .group_tree import ball
from .interaction import CompiledHamiltonian, InteractionSpec, compile_hamiltonian
from .labeled_graph import LabeledRegularGraph, ball_model_map

DEFAULT_BUDGET = 2 ** 24
CHUNK = 2 ** 18


@dataclass(frozen=True, eq=False)
class Distribution:
    """Joint law over ``A^sites``; axis ``i`` of ``probs`` is ``sites[i]``."""

    sites: tuple
    probs: np.ndarray

    @property
    def alphabet_size(self) -> int:
        return self.probs.shape[0] if self.probs.ndim else 1

    def marginal(self, keep: Sequence) -> "Distribution":
        pos = [self.sites.index(s) for s in keep]
        drop = tuple(i for i in range(len(self.sites)) if i not in pos)
        arr = self.probs.sum(axis=drop) if drop else self.probs
        remaining = [i for i in range(len(self.sites)) if i in pos]
        order = [remaining.index(p) for p in pos]
        return Distribution(tuple(keep), np.transpose(arr, order))


def tv_distance(p, q) -> float:
    """Half the L1 distance between two laws on the same index set."""
    pa = p.probs if isinstance(p, Distribution) else np.asarray(p, dtype=float)
    qa = q.probs if isinstance(q, Distribution) else np.asarray(q, dtype=float)
    if pa.shape != qa.shape:
        raise ValueError(f"shape mismatch {pa.shape} vs {qa.shape}")
    return float(0.5 * np.abs(pa - qa).sum())


def shannon(p: np.ndarray) -> float:
    """Entropy in nats with ``0 log 0 = 0``."""
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def decode(indices: np.ndarray, n: int, A: int) -> np.ndarray:
    """Mixed-radix digits ``(B, n)`` of configuration indices."""
    indices = np.asarray(indices, dtype=np.int64)
    if A == 2:
        return ((indices[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int8)
    out = np.empty((indices.size, n), dtype=np.int8)
    rest = indices.copy()
    for i in range(n):
        rest, out[:, i] = np.divmod(rest, A)
    return out


def _chunks(total: int, chunk: int):
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def _check_budget(graph: LabeledRegularGraph, spec: InteractionSpec, budget: int) -> int:
    total = spec.alphabet_size ** graph.n
    if total > budget:
        raise BudgetExceeded(f"{spec.alphabet_size}^{graph.n} = {total} configurations "
                             f"exceed budget {budget}")
    return total


@dataclass(frozen=True, eq=False)
class ExactGibbs:
    graph: LabeledRegularGraph
    spec: InteractionSpec
    states: np.ndarray     # indices of finite-energy configurations, increasing
    probs: np.ndarray
    log_Z: float

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def alphabet_size(self) -> int:
        return self.spec.alphabet_size

    def configs(self) -> np.ndarray:
        return decode(self.states, self.n, self.alphabet_size)

    @cached_property
    def dense(self) -> np.ndarray:
        """Probability array of shape ``(A,)*n`` with axis ``i`` for vertex ``i``."""
        A, n = self.alphabet_size, self.n
        flat = np.zeros(A ** n)
        flat[self.states] = self.probs
        return flat.reshape((A,) * n, order="F")

    def marginal(self, sites: Sequence[int]) -> Distribution:
        full = Distribution(tuple(range(self.n)), self.dense)
        return full.marginal(list(sites))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        pick = rng.choice(self.states.size, size=size, p=self.probs)
        return decode(self.states[pick], self.n, self.alphabet_size)


def build(graph: LabeledRegularGraph, spec: InteractionSpec, budget: int = DEFAULT_BUDGET,
          field: Optional[np.ndarray] = None, workers: int = 1) -> ExactGibbs:
    """Enumerate ``A^V`` and normalise ``exp(U)`` over finite-energy configurations."""
    total = _check_budget(graph, spec, budget)
    ham = compile_hamiltonian(spec, graph, field)
    n, A = graph.n, spec.alphabet_size

    def work(bounds):
        idx = np.arange(*bounds, dtype=np.int64)
        u = ham.energy(decode(idx, n, A))
        keep = u > -np.inf
        return idx[keep], u[keep]

    parts = _map(work, _chunks(total, CHUNK), workers)
    states = np.concatenate([p[0] for p in parts])
    energies = np.concatenate([p[1] for p in parts])
    if states.size == 0:
        raise ZeroPartition(f"{spec.name} has no finite-energy configuration on this graph")
    shift = energies.max()
    log_Z = float(shift + np.log(np.exp(energies - shift).sum()))
    probs = np.exp(energies - log_Z)
    return ExactGibbs(graph, spec, states, probs, log_Z)


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def log_partition_and_entropy(graph: LabeledRegularGraph, spec: InteractionSpec,
                              budget: int = DEFAULT_BUDGET, workers: int = 1,
                              field: Optional[np.ndarray] = None) -> tuple[float, float]:
    """Streaming ``(log Z, H)`` without storing the table; ``H = log Z - E[U]``."""
    total = _check_budget(graph, spec, budget)
    ham = compile_hamiltonian(spec, graph, field)
    n, A = graph.n, spec.alphabet_size

    def work(bounds):
        u = ham.energy(decode(np.arange(*bounds, dtype=np.int64), n, A))
        u = u[u > -np.inf]
        if u.size == 0:
            return -np.inf, 0.0, 0.0
        m = u.max()
        w = np.exp(u - m)
        return m, w.sum(), (w * u).sum()

    parts = _map(work, _chunks(total, CHUNK), workers)
    m = max(p[0] for p in parts)
    if m == -np.inf:
        raise ZeroPartition(f"{spec.name} has no finite-energy configuration on this graph")
    s = sum(p[1] * math.exp(p[0] - m) for p in parts if p[0] > -np.inf)
    t = sum(p[2] * math.exp(p[0] - m) for p in parts if p[0] > -np.inf)
    log_Z = m + math.log(s)
    return float(log_Z), float(log_Z - t / s)


def entropy(eg: ExactGibbs) -> float:
    return shannon(eg.probs)


def _conditional_from_joint(joint: np.ndarray, v_axis: int) -> float:
    """``H(X_v | rest)`` for a joint array, skipping null conditioning events."""
    arr = np.moveaxis(joint, v_axis, -1)
    arr = arr.reshape(-1, arr.shape[-1])
    cond = arr.sum(axis=1)
    live = cond > 0
    arr, cond = arr[live], cond[live]
    p = arr / cond[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    return float(-(cond * plogp.sum(axis=1)).sum())


def conditional_entropy(eg: ExactGibbs, v: int, S) -> float:
    """``H(sigma_v | sigma_S) = sum_eta mu(eta) H(mu(sigma_v = . | eta))``."""
    S = sorted(set(int(s) for s in S))
    if v in S:
        raise ValueError("v must not belong to the conditioning set")
    sites = sorted(S + [v])
    joint = eg.marginal(sites).probs
    return _conditional_from_joint(joint, sites.index(v))


def _subset_marginals(dense: np.ndarray):
    """Yield ``(kept_sites, marginal)`` for every subset of the axes, depth first."""
    n = dense.ndim

    def rec(arr, kept, k):
        if k == n:
            yield tuple(kept), arr
            return
        yield from rec(arr, kept + [k], k + 1)
        yield from rec(arr.sum(axis=len(kept)), kept, k + 1)

    yield from rec(dense, [], 0)


def percolation_identity_rhs(eg: ExactGibbs, max_n: int = 10) -> float:
    """Exact value of the random-ordering average of conditional entropies.

    Conditioning on ``{u : X_u < X_v}`` with i.i.d. uniform marks gives subset
    ``S`` of size ``m`` weight ``m! (n-1-m)! / n!`` (a Beta integral), so the
    result is ``(1/n) sum_v sum_S w(|S|) H(sigma_v | sigma_S)``.
    """
    n = eg.n
    if n > max_n:
        raise BudgetExceeded(f"n = {n} exceeds subset-enumeration limit {max_n}")
    fact = math.factorial
    w = [fact(m) * fact(n - 1 - m) / fact(n) for m in range(n)]
    total = 0.0
    for kept, arr in _subset_marginals(eg.dense):
        for pos in range(len(kept)):
            total += w[len(kept) - 1] * _conditional_from_joint(arr, pos)
    return total / n


def pushforward_marginal(eg: ExactGibbs, v: int, r: int,
                         budget: int = DEFAULT_BUDGET) -> Distribution:
    """Law of the radius-``r`` pull-back name at ``v``; axes follow ball order."""
    sites = ball_model_map(eg.graph, v, r)
    if sites is None:
        raise NotTreeLike(f"vertex {v} is not tree-like at radius {r}")
    b = ball(eg.graph.parity, r)
    if eg.alphabet_size ** b.size > budget:
        raise BudgetExceeded(f"|A|^{b.size} exceeds budget {budget}")
    marg = eg.marginal([int(s) for s in sites])
    return Distribution(b.elements, marg.probs)
