"""Specific entropy of finite-graph Gibbs measures and the local weak* diagnostic."""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..errors import BudgetExceeded, NotTreeLike
from ..exact_gibbs import DEFAULT_BUDGET, build, conditional_entropy, pushforward_marginal
from ..interaction import InteractionSpec
from ..labeled_graph import LabeledRegularGraph, tree_like_vertices
from ..tree_engine import FREE, TreeModel, batch_root_marginals
from .estimate import SeedLike, entropy_rows, resolve_seed, run_blocks, stream, summarize
from .glauber import GlauberChain
from .mixing import ssm_profile

SOURCES = ("ball", "exact")
SAMPLERS = ("glauber", "exact")


def graph_distances(graph: LabeledRegularGraph) -> np.ndarray:
    """All-pairs hop distances (breadth first from every vertex)."""
    n = graph.n
    nbrs = np.stack([graph.step(s) for s in graph.parity.letters], axis=1)
    dist = np.full((n, n), -1, dtype=np.int64)
    for v in range(n):
        dist[v, v] = 0
        frontier = [v]
        k = 0
        while frontier:
            k += 1
            nxt = []
            for u in frontier:
                for w in nbrs[u]:
                    if dist[v, w] < 0:
                        dist[v, w] = k
                        nxt.append(int(w))
            frontier = nxt
    return dist


def _conditioning_samples(graph, spec, count, seed, sampler, burn_in, thin, budget):
    rng = stream(seed, 1 << 40)
    if sampler == "exact":
        return build(graph, spec, budget).sample(rng, count).astype(np.int64)
    return GlauberChain(graph, spec, rng).samples(count, burn_in, thin)


def specific_entropy_truncated(graph: LabeledRegularGraph, spec: InteractionSpec, r: int,
                               n_orderings: int = 200, rng: SeedLike = None,
                               source: str = "ball", sampler: str = "glauber",
                               burn_in: int = 100, thin: int = 10,
                               budget: int = DEFAULT_BUDGET, bias_bound: bool = True,
                               workers: int = 1):
    """Radius-``r`` truncation of ``(1/n) sum_v E H(sigma_v | sigma_{u : X_u < X_v})``.

    ``source="ball"``: each vertex whose radius-(r+1) ball map is injective
    gets the Free-boundary tree model on its ball, clamped to a configuration
    drawn from ``mu_n`` (Glauber or exact sampler); other vertices contribute
    ``log |A|``.  ``source="exact"``: conditional entropies under ``mu_n``
    itself, computed by enumeration, with the conditioning set cut to the
    graph ball ``B(v, r)``.  Both average over random orderings.
    """
    if source not in SOURCES or sampler not in SAMPLERS:
        raise ValueError(f"source must be in {SOURCES}, sampler in {SAMPLERS}")
    if r < 0 or n_orderings < 1:
        raise ValueError("need r >= 0 and a positive ordering count")
    seed = resolve_seed(rng)
    n, A = graph.n, spec.alphabet_size
    log_a = math.log(A)
    extra = dict(r=r, source=source)

    if source == "exact":
        eg = build(graph, spec, budget)
        dist = graph_distances(graph)
        cache: dict = {}

        def block(rng, start, stop):
            out = np.empty(stop - start)
            for i in range(stop - start):
                X = rng.random(n)
                total = 0.0
                for v in range(n):
                    T = frozenset(np.flatnonzero((X < X[v]) & (dist[v] >= 0) & (dist[v] <= r)).tolist())
                    key = (v, T)
                    if key not in cache:
                        cache[key] = conditional_entropy(eg, v, T)
                    total += cache[key]
                out[i] = total / n
            return out

        values = run_blocks(block, n_orderings, seed, 1)
        return summarize(values, seed, "specific-exact-conditional", **extra)

    mask = tree_like_vertices(graph, r + 1)
    if not mask.any():
        raise NotTreeLike(f"no vertex is tree-like at radius {r + 1}")
    tree_v = np.flatnonzero(mask)
    sites = graph.ball_images(r)[tree_v]
    eta_all = _conditioning_samples(graph, spec, n_orderings, seed, sampler, burn_in, thin, budget)
    n_bad = n - tree_v.size

    def block(rng, start, stop):
        out = np.empty(stop - start)
        for i in range(stop - start):
            X = rng.random(n)
            eta = eta_all[start + i]
            take = X[sites] < X[tree_v][:, None]
            take[:, 0] = False
            clamps = np.where(take, eta[sites], -1)
            probs, _ = batch_root_marginals(spec, r, clamps)
            out[i] = (entropy_rows(probs).sum() + n_bad * log_a) / n
        return out

    values = run_blocks(block, n_orderings, seed, workers)
    extra.update(sampler=sampler, tree_like=float(mask.mean()))
    if bias_bound:
        extra["ssm_bias"] = ssm_profile(spec, r, "extremal", r_min=r).at(r)
    return summarize(values, seed, "specific-ball-" + sampler, **extra)


def _codes(names: np.ndarray, A: int) -> np.ndarray:
    out = np.zeros(names.shape[:-1], dtype=np.int64)
    for i in range(names.shape[-1]):
        out = out * A + names[..., i]
    return out


def lw_diagnostic(graph: LabeledRegularGraph, spec: InteractionSpec, r: int, epsilon: float,
                  mode: str = "exact", rng: SeedLike = None, tree_radius: Optional[int] = None,
                  n_samples: int = 4000, burn_in: int = 100, thin: int = 10,
                  budget: int = DEFAULT_BUDGET) -> float:
    """Fraction of vertices whose pull-back marginal is more than ``epsilon`` from the tree's.

    The reference is the radius-``r`` marginal of the Free-boundary tree model
    of radius ``tree_radius`` (default ``r + 4``).  ``mode="exact"`` uses exact
    pushforwards, ``mode="mc"`` empirical ones from a heat-bath chain.
    Vertices with a non-injective ball map count as bad.
    """
    if mode not in ("exact", "mc"):
        raise ValueError("mode must be 'exact' or 'mc'")
    if r < 0 or not 0 <= epsilon:
        raise ValueError("need r >= 0 and epsilon >= 0")
    tree_radius = r + 4 if tree_radius is None else tree_radius
    ref = TreeModel(spec, tree_radius, FREE).ball_marginal(r).probs
    A, N = spec.alphabet_size, ref.ndim
    if A ** N > budget:
        raise BudgetExceeded(f"{A}^{N} name states exceed budget {budget}")
    mask = tree_like_vertices(graph, r)
    good = np.flatnonzero(mask)
    far = np.zeros(graph.n, dtype=bool)
    far[~mask] = True
    if good.size == 0:
        return 1.0
    if mode == "exact":
        eg = build(graph, spec, budget)
        for v in good:
            p = pushforward_marginal(eg, int(v), r, budget).probs
            far[v] = 0.5 * np.abs(p - ref).sum() > epsilon
        return float(far.mean())
    seed = resolve_seed(rng)
    samples = GlauberChain(graph, spec, stream(seed, 1 << 40)).samples(n_samples, burn_in, thin)
    images = graph.ball_images(r)
    ref_flat = ref.ravel()
    size = A ** N
    step = max(1, 2 ** 22 // (n_samples * N))
    for lo in range(0, good.size, step):
        vs = good[lo: lo + step]
        codes = _codes(samples[:, images[vs]], A)             # (S, len(vs))
        codes = codes + np.arange(vs.size)[None, :] * size
        hist = np.bincount(codes.ravel(), minlength=vs.size * size).reshape(vs.size, size)
        tv = 0.5 * np.abs(hist / n_samples - ref_flat[None, :]).sum(axis=1)
        far[vs] = tv > epsilon
    return float(far.mean())
