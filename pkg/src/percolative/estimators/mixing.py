"""Strong spatial mixing profiles and the Dobrushin influence coefficient."""
from __future__ import annotations

import itertools
from typing import Optional, Sequence

import numpy as np

from ..errors import BudgetExceeded, ZeroMass
from ..exact_gibbs import decode
from ..interaction import InteractionSpec
from ..tree_engine import _kernel, batch_root_marginals
from .estimate import SeedLike, SsmEntry, SsmProfile, resolve_seed, stream

GRID = np.linspace(-3.0, 3.0, 21)
CLAMPING = (-30.0, 30.0)
STRATEGIES = ("extremal", "exhaustive", "random-search")


def default_field_grid(alphabet_size: int) -> list[np.ndarray]:
    """Zero field plus ``h * 1[sigma = a]`` for every state and every grid/clamping ``h``."""
    out = [np.zeros(alphabet_size)]
    for a in range(alphabet_size):
        for h in list(GRID) + list(CLAMPING):
            if h == 0:
                continue
            f = np.zeros(alphabet_size)
            f[a] = h
            out.append(f)
    return out


def _grid(spec: InteractionSpec, field_grid) -> list[np.ndarray]:
    if field_grid is None:
        return default_field_grid(spec.alphabet_size)
    out = [np.asarray(f, dtype=float) for f in field_grid]
    for f in out:
        if f.shape != (spec.alphabet_size,) or not np.all(np.isfinite(f)):
            raise ValueError("field grid entries must be finite vectors over the alphabet")
    return out


class _Spread:
    """Running per-state max/min of root marginals over feasible boundaries."""

    def __init__(self, A: int):
        self.hi = np.full(A, -np.inf)
        self.lo = np.full(A, np.inf)
        self.arg_hi = [None] * A
        self.arg_lo = [None] * A

    def update(self, probs, ok, configs):
        if not ok.any():
            return
        p, cfg = probs[ok], configs[ok] if configs.ndim == 2 else configs
        i_hi, i_lo = p.argmax(axis=0), p.argmin(axis=0)
        for c in range(p.shape[1]):
            if p[i_hi[c], c] > self.hi[c]:
                self.hi[c] = p[i_hi[c], c]
                self.arg_hi[c] = cfg[i_hi[c]].copy()
            if p[i_lo[c], c] < self.lo[c]:
                self.lo[c] = p[i_lo[c], c]
                self.arg_lo[c] = cfg[i_lo[c]].copy()

    @property
    def value(self) -> float:
        if not np.isfinite(self.hi).all():
            raise ZeroMass("no boundary condition admits a finite-energy extension")
        return float(max(0.0, (self.hi - self.lo).max()))


def _extremal(spec, r, f):
    kern = _kernel(spec, r)
    configs = np.repeat(np.arange(kern.A)[:, None], kern.M, axis=1)
    sp = _Spread(kern.A)
    sp.update(*batch_root_marginals(spec, r, np.full((1, kern.N), -1), configs, f), configs)
    return sp


def _exhaustive(spec, r, f, budget, chunk=2 ** 14):
    kern = _kernel(spec, r)
    total = kern.A ** kern.M
    if total > budget:
        raise BudgetExceeded(f"{kern.A}^{kern.M} annulus configurations exceed budget {budget}")
    sp = _Spread(kern.A)
    free = np.full((1, kern.N), -1)
    for start in range(0, total, chunk):
        configs = decode(np.arange(start, min(start + chunk, total)), kern.M, kern.A)
        configs = configs.astype(np.int64)
        sp.update(*batch_root_marginals(spec, r, free, configs, f), configs)
    return sp


def _climb(spec, r, f, x, c, sign, rounds):
    """Greedy single-site moves on the annulus pushing ``P(root = c)`` up (sign=+1) or down."""
    kern = _kernel(spec, r)
    free = np.full((1, kern.N), -1)
    probs, _ = batch_root_marginals(spec, r, free, x[None, :], f)
    best = probs[0, c]
    for _ in range(rounds):
        nbrs = np.repeat(x[None, :], kern.M * (kern.A - 1), axis=0)
        rows = np.arange(nbrs.shape[0])
        site = rows // (kern.A - 1)
        shift = rows % (kern.A - 1) + 1
        nbrs[rows, site] = (x[site] + shift) % kern.A
        probs, ok = batch_root_marginals(spec, r, free, nbrs, f)
        vals = np.where(ok, sign * probs[:, c], -np.inf)
        k = int(vals.argmax())
        if not vals[k] > sign * best:
            break
        best, x = probs[k, c], nbrs[k]
    return best


def _random_search(spec, r, f, rng, n_random, rounds):
    kern = _kernel(spec, r)
    free = np.full((1, kern.N), -1)
    configs = np.concatenate([
        np.repeat(np.arange(kern.A)[:, None], kern.M, axis=1),
        rng.integers(kern.A, size=(n_random, kern.M)),
    ])
    sp = _Spread(kern.A)
    sp.update(*batch_root_marginals(spec, r, free, configs, f), configs)
    for c in range(kern.A):
        if sp.arg_hi[c] is None:
            continue
        sp.hi[c] = max(sp.hi[c], _climb(spec, r, f, sp.arg_hi[c], c, +1, rounds))
        sp.lo[c] = min(sp.lo[c], _climb(spec, r, f, sp.arg_lo[c], c, -1, rounds))
    return sp


def ssm_profile(spec: InteractionSpec, r_max: int, strategy: str = "extremal",
                field_grid: Optional[Sequence] = None, r_min: int = 1,
                budget: int = 2 ** 20, n_random: int = 64, rounds: int = 8,
                rng: SeedLike = 0) -> SsmProfile:
    """Sup over boundary pairs (per strategy) and grid fields of the root-marginal gap.

    ``extremal`` compares constant annulus states, ``exhaustive`` every annulus
    configuration, ``random-search`` random configurations refined by greedy
    single-site moves (a lower bound on the sup).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}")
    if not 0 <= r_min <= r_max:
        raise ValueError("need 0 <= r_min <= r_max")
    grid = _grid(spec, field_grid)
    seed = resolve_seed(rng)
    entries = []
    for r in range(r_min, r_max + 1):
        best, best_f = -1.0, None
        for j, f in enumerate(grid):
            if strategy == "extremal":
                sp = _extremal(spec, r, f)
            elif strategy == "exhaustive":
                sp = _exhaustive(spec, r, f, budget)
            else:
                sp = _random_search(spec, r, f, stream(seed, r, j), n_random, rounds)
            v = min(1.0, sp.value)
            if v > best:
                best, best_f = v, f
        entries.append(SsmEntry(r, best, strategy, tuple(float(x) for x in best_f)))
    return SsmProfile(tuple(entries), strategy, len(grid))


def single_site_conditionals(spec: InteractionSpec, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Root laws given every neighbour configuration: ``(A,)*d + (A,)`` and a feasibility mask."""
    tabs = spec.pairwise
    A, letters = spec.alphabet_size, spec.parity.letters
    d = len(letters)
    logits = np.broadcast_to(tabs.vertex + f, (A,) * d + (A,)).copy()
    for slot, s in enumerate(letters):
        t = tabs.oriented(s).T                      # [neighbour, root]
        shape = [1] * d + [A]
        shape[slot] = A
        logits = logits + t.reshape(shape)
    top = logits.max(axis=-1, keepdims=True)
    ok = np.isfinite(top[..., 0])
    top[~ok] = 0.0
    w = np.exp(logits - top)
    w[~ok] = 1.0
    return w / w.sum(axis=-1, keepdims=True), ok


def slot_influences(spec: InteractionSpec, f: np.ndarray) -> np.ndarray:
    """Max TV change of the root law when only neighbour slot ``s`` changes, per slot."""
    probs, ok = single_site_conditionals(spec, f)
    A = spec.alphabet_size
    d = ok.ndim
    out = np.zeros(d)
    for slot in range(d):
        P = np.moveaxis(probs, slot, 0)
        Q = np.moveaxis(ok, slot, 0)
        for i, j in itertools.combinations(range(A), 2):
            tv = 0.5 * np.abs(P[i] - P[j]).sum(axis=-1)
            both = Q[i] & Q[j]
            if both.any():
                out[slot] = max(out[slot], float(tv[both].max()))
    return out


def dobrushin_alpha(spec: InteractionSpec, field_grid: Optional[Sequence] = None,
                    return_field: bool = False):
    """``alpha = max over grid fields of the summed per-slot influences``."""
    best, best_f = 0.0, None
    for f in _grid(spec, field_grid):
        a = float(slot_influences(spec, f).sum())
        if best_f is None or a > best:
            best, best_f = a, f
    return (best, best_f) if return_field else best
