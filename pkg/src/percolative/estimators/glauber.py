"""Single-site heat-bath (Glauber) dynamics for Gibbs measures on labeled graphs."""
from __future__ import annotations

from typing import Optional

import numba
import numpy as np

from ..errors import InfeasibleInit
from ..interaction import InteractionSpec, compile_hamiltonian
from ..labeled_graph import LabeledRegularGraph
from .estimate import SeedLike, resolve_seed, stream


@numba.njit(cache=True)
def _heat_bath(x, orders, uniforms, A, inst_ptr, inst_sites, inst_strides, inst_offset,
               tables, vptr, vinst, vstride):
    logw = np.empty(A)
    for t in range(orders.shape[0]):
        for k in range(orders.shape[1]):
            u = orders[t, k]
            x[u] = 0
            for a in range(A):
                logw[a] = 0.0
            for q in range(vptr[u], vptr[u + 1]):
                j = vinst[q]
                base = inst_offset[j]
                for p in range(inst_ptr[j], inst_ptr[j + 1]):
                    base += x[inst_sites[p]] * inst_strides[p]
                st = vstride[q]
                for a in range(A):
                    logw[a] += tables[base + a * st]
            m = -np.inf
            for a in range(A):
                if logw[a] > m:
                    m = logw[a]
            if m == -np.inf:
                return u
            total = 0.0
            for a in range(A):
                logw[a] = np.exp(logw[a] - m)
                total += logw[a]
            target = uniforms[t, k] * total
            acc = 0.0
            pick = A - 1
            for a in range(A):
                acc += logw[a]
                if logw[a] > 0.0 and target < acc:
                    pick = a
                    break
            while logw[pick] == 0.0:
                pick -= 1
            x[u] = pick
    return -1


class GlauberChain:
    """Heat-bath chain on ``mu_n``; each sweep visits all vertices in a fresh random order."""

    def __init__(self, graph: LabeledRegularGraph, spec: InteractionSpec, rng: SeedLike = None,
                 init: Optional[np.ndarray] = None, field: Optional[np.ndarray] = None):
        self.graph, self.spec = graph, spec
        self.ham = compile_hamiltonian(spec, graph, field)
        self.seed = resolve_seed(rng)
        self._rng = stream(self.seed, 0)
        x = feasible_init(graph, spec, self.ham) if init is None else np.array(init, dtype=np.int64)
        if x.shape != (graph.n,) or x.min() < 0 or x.max() >= spec.alphabet_size:
            raise InfeasibleInit("initial configuration has the wrong shape or states")
        if not np.isfinite(self.ham.energy(x[None, :])[0]):
            raise InfeasibleInit("initial configuration has infinite energy")
        self.state = x

    def run(self, sweeps: int) -> np.ndarray:
        n = self.graph.n
        if sweeps <= 0:
            return self.state.copy()
        orders = self._rng.permuted(np.tile(np.arange(n, dtype=np.int64), (sweeps, 1)), axis=1)
        uniforms = self._rng.random((sweeps, n))
        fl = self.ham.flat
        bad = _heat_bath(self.state, orders, uniforms, self.spec.alphabet_size,
                         fl["inst_ptr"], fl["inst_sites"], fl["inst_strides"],
                         fl["inst_offset"], fl["tables"], fl["vptr"], fl["vinst"], fl["vstride"])
        if bad >= 0:
            raise InfeasibleInit(f"vertex {bad} has no finite-energy state")
        return self.state.copy()

    def samples(self, count: int, burn_in: int = 100, thin: int = 10) -> np.ndarray:
        """``count`` configurations taken every ``thin`` sweeps after ``burn_in`` sweeps."""
        self.run(burn_in)
        out = np.empty((count, self.graph.n), dtype=np.int64)
        for i in range(count):
            out[i] = self.run(thin)
        return out


def feasible_init(graph: LabeledRegularGraph, spec: InteractionSpec, ham=None) -> np.ndarray:
    """All-zero start if feasible, else a greedy sequential assignment (e.g. proper colouring)."""
    ham = compile_hamiltonian(spec, graph) if ham is None else ham
    x = np.zeros(graph.n, dtype=np.int64)
    if np.isfinite(ham.energy(x[None, :])[0]):
        return x
    A = spec.alphabet_size
    touching = [[] for _ in range(graph.n)]
    for sites, table in ham.instances:
        for s in set(sites.tolist()):
            touching[s].append((sites, table))
    assigned = np.zeros(graph.n, dtype=bool)
    for v in range(graph.n):
        for a in range(A):
            x[v] = a
            ok = True
            for sites, table in touching[v]:
                if all(assigned[s] or s == v for s in sites):
                    if table[tuple(x[sites])] == -np.inf:
                        ok = False
                        break
            if ok:
                break
        else:
            raise InfeasibleInit(f"greedy assignment failed at vertex {v}; supply an init")
        assigned[v] = True
    return x


def glauber_sample(graph: LabeledRegularGraph, spec: InteractionSpec, sweeps: int,
                   rng: SeedLike = None, init: Optional[np.ndarray] = None,
                   field: Optional[np.ndarray] = None) -> np.ndarray:
    """State of the heat-bath chain after ``sweeps`` full sweeps."""
    return GlauberChain(graph, spec, rng, init, field).run(sweeps)
