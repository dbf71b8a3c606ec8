"""Monte Carlo percolative entropy of a tree-indexed Gibbs state."""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..interaction import InteractionSpec
from ..tree_engine import (
    FREE,
    BoundaryCondition,
    ExtremalAllState,
    Free,
    TreeModel,
    _boundary_array,
    _kernel,
    batch_root_marginals,
    batch_sample,
)
from .estimate import Estimate, SeedLike, entropy_rows, resolve_seed, run_blocks, summarize


def _generator_boundary(spec, radius, boundary):
    # a generator model of a different radius keeps the same kind of boundary
    if isinstance(boundary, Free):
        return None
    if isinstance(boundary, ExtremalAllState):
        return _boundary_array(_kernel(spec, radius), boundary)
    raise ValueError("a generator radius needs a Free or ExtremalAllState boundary")


def percolative_entropy(spec: InteractionSpec, r: int, boundary: BoundaryCondition = FREE,
                        n_outer: int = 10_000, n_inner: int = 1, rng: SeedLike = None,
                        stratified: bool = False, p: Optional[float] = None,
                        generator_radius: Optional[int] = None, workers: int = 1) -> Estimate:
    """Average over ``p ~ U[0,1]`` and ``S ~ Bernoulli(p)^(ball minus root)`` of
    ``H(sigma_root | sigma_S)`` under the radius-``r`` tree model.

    With ``generator_radius = R >= r`` the measure is the radius-``R`` model:
    conditioning values are drawn from it and the conditional root law is
    computed under it, with ``S`` confined to the radius-``r`` ball.  For fixed
    ``R`` the estimate is then nonincreasing in ``r`` (data processing).  ``p`` pins
    the inclusion probability (diagnostics); ``stratified`` places the ``i``-th
    draw of ``p`` uniformly in ``[i/n_outer, (i+1)/n_outer)``.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    if n_outer < 1 or n_inner < 1:
        raise ValueError("sample counts must be positive")
    if generator_radius is not None and generator_radius < r:
        raise ValueError("generator radius must be at least r")
    if p is not None and not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    seed = resolve_seed(rng)
    TreeModel(spec, r, boundary).root_marginal()  # validates, raises ZeroMass early
    kern = _kernel(spec, r)
    N = kern.N
    ann = _boundary_array(kern, boundary)
    g_radius = r if generator_radius is None else generator_radius
    g_ann = ann if generator_radius is None else _generator_boundary(spec, g_radius, boundary)

    def block(rng, start, stop):
        B = stop - start
        if p is not None:
            ps = np.full(B, float(p))
        elif stratified:
            ps = (np.arange(start, stop) + rng.random(B)) / n_outer
        else:
            ps = rng.random(B)
        S = rng.random((B, N)) < ps[:, None]
        S[:, 0] = False
        S = np.repeat(S, n_inner, axis=0)
        eta = batch_sample(spec, g_radius, B * n_inner, rng, annulus=g_ann)
        clamps = np.full(eta.shape, -1, dtype=np.int64)
        clamps[:, :N] = np.where(S, eta[:, :N], -1)
        probs, _ = batch_root_marginals(spec, g_radius, clamps, g_ann)
        h = entropy_rows(probs)
        return h.reshape(B, n_inner).mean(axis=1)

    values = run_blocks(block, n_outer, seed, workers)
    method = "percolative-mc" + ("-stratified" if stratified else "")
    return summarize(values, seed, method, r=r, boundary=type(boundary).__name__,
                     generator_radius=g_radius, n_inner=n_inner)
