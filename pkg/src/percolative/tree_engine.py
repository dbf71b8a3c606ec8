"""Exact conditional Gibbs computations on finite tree balls T_d(r).

A :class:`TreeModel` is a pairwise interaction restricted to the ball of radius
``r`` with a boundary condition on the annulus ``T_d(r+1) minus T_d(r)``, some
clamped interior sites and per-site fields.  Everything is computed by a
leaf-to-root elimination whose messages live in the linear domain, normalised
at every step, with the normalisers accumulated in log space.  Exact zeros
coming from hard constraints therefore survive untouched.

The ``batch_*`` functions evaluate many clamp/boundary patterns at once; the
estimators are built on them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .errors import BudgetExceeded, ConflictingClamp, ZeroMass
from .exact_gibbs import Distribution
from .group_tree import TreeBall, Word, ball
from .interaction import InteractionSpec

DEFAULT_BUDGET = 2 ** 24


@dataclass(frozen=True)
class Free:
    """No terms beyond radius r: outer edges are dropped."""


@dataclass(frozen=True, eq=False)
class Clamped:
    """Fixed states on the annulus, in ball(r+1) order after the ball(r) sites."""

    annulus: np.ndarray


@dataclass(frozen=True)
class ExtremalAllState:
    state: int


BoundaryCondition = Union[Free, Clamped, ExtremalAllState]
FREE = Free()


class _Kernel:
    """Per (spec, radius) precomputation: oriented edge weights and level layout."""

    def __init__(self, spec: InteractionSpec, r: int):
        if not spec.is_pairwise:
            raise ValueError("the tree engine handles vertex+edge interactions only")
        self.spec = spec
        self.r = r
        self.A = spec.alphabet_size
        self.ball = ball(spec.parity, r)
        self.outer = ball(spec.parity, r + 1)
        self.N = self.ball.size
        self.M = self.outer.size - self.N
        tabs = spec.pairwise
        self.vertex_log = np.asarray(tabs.vertex, dtype=float)
        weights = np.ones((self.outer.size, self.A, self.A))
        shifts = np.zeros(self.outer.size)
        for c in range(1, self.outer.size):
            t = tabs.oriented(int(self.outer.letter[c]))
            m = t.max()
            shifts[c] = m
            weights[c] = np.exp(t - m)
        self.edge_w = weights[: self.N]
        self.edge_shift = float(shifts[1: self.N].sum())
        self.ann_wT = np.ascontiguousarray(weights[self.N:].transpose(0, 2, 1))
        self.ann_shift = float(shifts[self.N:].sum())


@lru_cache(maxsize=32)
def _kernel(spec: InteractionSpec, r: int) -> _Kernel:
    return _Kernel(spec, r)


def annulus_size(spec: InteractionSpec, r: int) -> int:
    return _kernel(spec, r).M


def _boundary_array(kern: _Kernel, boundary: BoundaryCondition) -> Optional[np.ndarray]:
    if isinstance(boundary, Free):
        return None
    if isinstance(boundary, ExtremalAllState):
        if not 0 <= boundary.state < kern.A:
            raise ValueError(f"state {boundary.state} outside alphabet")
        return np.full(kern.M, boundary.state, dtype=np.int64)
    if isinstance(boundary, Clamped):
        arr = np.asarray(boundary.annulus, dtype=np.int64)
        if arr.shape != (kern.M,) or arr.min(initial=0) < 0 or arr.max(initial=0) >= kern.A:
            raise ValueError(f"annulus configuration must have {kern.M} entries in range")
        return arr
    raise TypeError(f"unknown boundary {boundary!r}")


def _field_log(kern: _Kernel, field) -> np.ndarray:
    """Per-site log potentials ``(N, A)`` or ``(B, N, A)``."""
    base = kern.vertex_log
    if field is None:
        return np.broadcast_to(base, (kern.N, kern.A))
    field = np.asarray(field, dtype=float)
    if not np.all(np.isfinite(field)):
        raise ValueError("self-interactions must be finite")
    if field.shape == (kern.A,):
        return np.broadcast_to(base + field, (kern.N, kern.A))
    if field.shape[-2:] == (kern.N, kern.A):
        return base + field
    raise ValueError(f"field must have shape ({kern.A},) or (..., {kern.N}, {kern.A})")


@dataclass
class _Pass:
    inside: np.ndarray     # (B, N, A), normalised per site
    log_scale: np.ndarray  # (B,)
    feasible: np.ndarray   # (B,)


def _upward(kern: _Kernel, clamps: np.ndarray, annulus: Optional[np.ndarray],
            field=None, stop_depth: int = 0) -> _Pass:
    """Eliminate every site deeper than ``stop_depth`` into its parent.

    ``clamps`` is ``(B, N)`` with -1 for free sites; ``annulus`` is ``(B, M)``
    (or ``(M,)`` shared) boundary states, or ``None`` for a free boundary.
    """
    B = clamps.shape[0]
    A, N, b = kern.A, kern.N, kern.ball
    flog = _field_log(kern, field)
    shift = flog.max(axis=-1, keepdims=True)
    local = np.broadcast_to(np.exp(flog - shift), (B, N, A)).copy()
    log_scale = np.broadcast_to(shift[..., 0].sum(axis=-1), (B,)).astype(float).copy()
    log_scale += kern.edge_shift
    free = clamps < 0
    onehot = np.arange(A)[None, None, :] == clamps[:, :, None]
    local *= free[:, :, None] | onehot
    feasible = np.ones(B, dtype=bool)

    if annulus is not None:
        annulus = np.broadcast_to(annulus, (B, kern.M))
        fac = kern.ann_wT[np.arange(kern.M)[None, :], annulus]          # (B, M, A_parent)
        leaves = b.level(kern.r)
        cnt = b.children_per_parent(kern.r)
        fac = fac.reshape(B, leaves.stop - leaves.start, cnt, A).prod(axis=2)
        top = fac.max(axis=-1, keepdims=True)
        bad = top[..., 0] == 0
        feasible &= ~bad.any(axis=1)
        top[top == 0] = 1.0
        local[:, leaves] *= fac / top
        log_scale += np.log(top[..., 0]).sum(axis=1) + kern.ann_shift

    inside = np.empty_like(local)
    for k in range(kern.r, stop_depth, -1):
        sl = b.level(k)
        x = local[:, sl]
        z = x.sum(axis=-1)
        zero = z == 0
        feasible &= ~zero.any(axis=1)
        z[zero] = 1.0
        inside[:, sl] = x / z[..., None]
        log_scale += np.log(z).sum(axis=1)
        msg = np.einsum("kij,bkj->bki", kern.edge_w[sl], inside[:, sl])
        y = msg.sum(axis=-1)
        zero = y == 0
        feasible &= ~zero.any(axis=1)
        y[zero] = 1.0
        msg /= y[..., None]
        log_scale += np.log(y).sum(axis=1)
        parents = b.level(k - 1)
        cnt = b.children_per_parent(k - 1)
        local[:, parents] *= msg.reshape(B, parents.stop - parents.start, cnt, A).prod(axis=2)
    top = b.level_starts[stop_depth + 1]
    x = local[:, :top]
    z = x.sum(axis=-1)
    zero = z == 0
    feasible &= ~zero.any(axis=1)
    z[zero] = 1.0
    inside[:, :top] = x / z[..., None]
    if stop_depth == 0:
        log_scale += np.log(z[:, 0])
    return _Pass(inside, log_scale, feasible)


def _draw(p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF draw along the last axis of (unnormalised) ``p``."""
    c = np.cumsum(p, axis=-1)
    idx = (c < u[..., None] * c[..., -1:]).sum(axis=-1)
    return np.minimum(idx, p.shape[-1] - 1)


def _sample_down(kern: _Kernel, inside: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    B = inside.shape[0]
    b = kern.ball
    u = rng.random((B, kern.N))
    x = np.empty((B, kern.N), dtype=np.int64)
    x[:, 0] = _draw(inside[:, 0], u[:, 0])
    for k in range(1, kern.r + 1):
        sl = b.level(k)
        nk = sl.stop - sl.start
        par = b.parent[sl]
        rows = kern.edge_w[sl][np.arange(nk)[None, :], x[:, par]]   # (B, nk, A)
        x[:, sl] = _draw(rows * inside[:, sl], u[:, sl])
    return x


def _as_batch_clamps(kern: _Kernel, clamps, B: int) -> np.ndarray:
    if clamps is None:
        return np.full((B, kern.N), -1, dtype=np.int64)
    clamps = np.asarray(clamps, dtype=np.int64)
    return np.broadcast_to(clamps, (B, kern.N))


def batch_root_marginals(spec: InteractionSpec, r: int, clamps: np.ndarray,
                         annulus: Optional[np.ndarray] = None, field=None):
    """Root laws ``(B, A)`` and a feasibility mask ``(B,)`` for a batch of patterns."""
    kern = _kernel(spec, r)
    clamps = np.atleast_2d(np.asarray(clamps, dtype=np.int64))
    if annulus is not None:
        annulus = np.asarray(annulus, dtype=np.int64)
        if annulus.ndim == 2 and clamps.shape[0] == 1:
            clamps = np.broadcast_to(clamps, (annulus.shape[0], kern.N))
    if field is not None:
        field = np.asarray(field, dtype=float)
        if field.ndim == 3 and clamps.shape[0] == 1:
            clamps = np.broadcast_to(clamps, (field.shape[0], kern.N))
    res = _upward(kern, clamps, annulus, field)
    return res.inside[:, 0].copy(), res.feasible


def batch_sample(spec: InteractionSpec, r: int, size: int, rng: np.random.Generator,
                 annulus: Optional[np.ndarray] = None, field=None, clamps=None) -> np.ndarray:
    """``size`` exact samples ``(size, N)`` of the conditional measure on T_d(r)."""
    kern = _kernel(spec, r)
    cl = _as_batch_clamps(kern, clamps, 1)
    res = _upward(kern, cl, annulus, field)
    if not res.feasible.all():
        raise ZeroMass("boundary or clamps admit no finite-energy extension")
    inside = np.broadcast_to(res.inside, (size, kern.N, kern.A))
    return _sample_down(kern, inside, rng)


class TreeModel:
    """Pairwise interaction on T_d(r) with boundary, clamps and fields."""

    def __init__(self, spec: InteractionSpec, radius: int, boundary: BoundaryCondition = FREE,
                 clamps: Optional[Mapping] = None, field=None):
        if radius < 0:
            raise ValueError("radius must be non-negative")
        self.spec = spec
        self.radius = radius
        self._kern = _kernel(spec, radius)
        self.boundary = boundary
        self._annulus = _boundary_array(self._kern, boundary)
        self.field = None if field is None else np.asarray(field, dtype=float)
        _field_log(self._kern, self.field)  # validates shape
        self._clamps = np.full(self._kern.N, -1, dtype=np.int64)
        self._clamps.setflags(write=False)
        if clamps:
            self._clamps = self._merge(clamps.keys(), clamps.values())

    @property
    def ball(self) -> TreeBall:
        return self._kern.ball

    @property
    def clamps(self) -> np.ndarray:
        return self._clamps

    def _site_index(self, site) -> int:
        i = self.ball.index[site] if isinstance(site, Word) else int(site)
        if not 0 <= i < self._kern.N:
            raise ValueError(f"site {site!r} is not inside the ball")
        return i

    def _merge(self, sites, values) -> np.ndarray:
        out = self._clamps.copy()
        for site, val in zip(sites, values):
            i = self._site_index(site)
            val = int(val)
            if not 0 <= val < self._kern.A:
                raise ValueError(f"state {val} outside alphabet")
            if out[i] >= 0 and out[i] != val:
                raise ConflictingClamp(f"site {site!r} already clamped to {out[i]}")
            out[i] = val
        out.setflags(write=False)
        return out

    def clamp_sites(self, sites: Sequence, values: Sequence[int]) -> "TreeModel":
        """New model with extra clamps; the root may not be clamped."""
        sites, values = list(sites), list(values)
        if len(sites) != len(values):
            raise ValueError("sites and values differ in length")
        if any(self._site_index(s) == 0 for s in sites):
            raise ValueError("the root cannot be clamped")
        new = object.__new__(TreeModel)
        new.__dict__.update(self.__dict__)
        new._clamps = self._merge(sites, values)
        return new

    def _run(self, stop_depth: int = 0) -> _Pass:
        res = _upward(self._kern, self._clamps[None, :], self._annulus, self.field, stop_depth)
        if not res.feasible[0]:
            raise ZeroMass("boundary or clamps admit no finite-energy extension")
        return res

    def root_marginal(self) -> np.ndarray:
        return self._run().inside[0, 0].copy()

    def log_partition(self) -> float:
        """Log of the conditional normaliser (terms touching the ball only)."""
        return float(self._run().log_scale[0])

    def sample(self, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
        res = self._run()
        B = 1 if size is None else size
        x = _sample_down(self._kern, np.broadcast_to(res.inside, (B,) + res.inside.shape[1:]), rng)
        return x[0] if size is None else x

    def ball_marginal(self, r_sub: int, budget: int = DEFAULT_BUDGET) -> Distribution:
        """Exact joint law on T_d(r_sub) after eliminating everything outside it."""
        if not 0 <= r_sub <= self.radius:
            raise ValueError(f"sub-radius must lie in [0, {self.radius}]")
        sub = ball(self.spec.parity, r_sub)
        A = self._kern.A
        if A ** sub.size > budget:
            raise BudgetExceeded(f"{A}^{sub.size} joint states exceed budget {budget}")
        res = self._run(stop_depth=r_sub)
        inside = res.inside[0]
        joint = inside[0].copy()
        for c in range(1, sub.size):
            p = int(sub.parent[c])
            fac = self._kern.edge_w[c] * inside[c][None, :]
            shape = [1] * (c + 1)
            shape[p] = A
            shape[c] = A
            joint = joint[..., None] * fac.reshape(shape)
            joint /= joint.sum()
        total = joint.sum()
        if total == 0:
            raise ZeroMass("no finite-energy configuration on the sub-ball")
        return Distribution(sub.elements, joint / total)


def root_marginal(tm: TreeModel) -> np.ndarray:
    return tm.root_marginal()


def sample(tm: TreeModel, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    return tm.sample(rng, size)


def clamp_sites(tm: TreeModel, sites, values) -> TreeModel:
    return tm.clamp_sites(sites, values)


def ball_marginal(tm: TreeModel, r_sub: int, budget: int = DEFAULT_BUDGET) -> Distribution:
    return tm.ball_marginal(r_sub, budget)
