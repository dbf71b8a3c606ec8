"""Result containers and the seeding contract shared by all estimators.

Every Monte Carlo estimator splits its samples into fixed blocks of
``BLOCK`` draws; block ``b`` uses the stream ``SeedSequence([seed, b])``.
Workers only change who evaluates a block, never what it computes, and block
results are concatenated in index order before reduction.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

BLOCK = 512

SeedLike = Union[int, np.random.Generator, None]


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    samples: int
    seed: Optional[int]
    method: str
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.stderr >= 0:
            raise ValueError(f"stderr must be non-negative, got {self.stderr}")

    @property
    def exact(self) -> bool:
        return self.stderr == 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SsmEntry:
    r: int
    sup_difference: float
    strategy: str
    field: tuple  # maximising per-site field, one value per state

    def __post_init__(self):
        if not 0.0 <= self.sup_difference <= 1.0 + 1e-12:
            raise ValueError(f"sup difference {self.sup_difference} outside [0, 1]")


@dataclass(frozen=True)
class SsmProfile:
    entries: tuple[SsmEntry, ...]
    strategy: str
    n_fields: int

    @property
    def radii(self) -> list[int]:
        return [e.r for e in self.entries]

    @property
    def values(self) -> np.ndarray:
        return np.array([e.sup_difference for e in self.entries])

    def at(self, r: int) -> float:
        for e in self.entries:
            if e.r == r:
                return e.sup_difference
        raise KeyError(r)

    def decay_rate(self) -> Optional[float]:
        """Geometric rate from a least-squares fit of log values; None unless all positive."""
        v = self.values
        if len(v) < 2 or np.any(v <= 0):
            return None
        slope = np.polyfit(np.array(self.radii, dtype=float), np.log(v), 1)[0]
        return float(np.exp(slope))


def resolve_seed(rng: SeedLike) -> int:
    """Turn the caller's seed or generator into the 64-bit master seed."""
    if rng is None:
        return int(np.random.SeedSequence().entropy % 2 ** 64)
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(2 ** 63))
    seed = int(rng)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return seed


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def run_blocks(fn: Callable[[np.random.Generator, int, int], np.ndarray], total: int,
               seed: int, workers: int = 1, block: int = BLOCK) -> np.ndarray:
    """Evaluate ``fn(rng, start, stop)`` over fixed blocks; concatenate in order."""
    items = [(b, s, min(s + block, total)) for b, s in enumerate(range(0, total, block))]

    def job(item):
        b, start, stop = item
        return np.asarray(fn(stream(seed, b), start, stop))

    if workers <= 1 or len(items) == 1:
        parts = [job(it) for it in items]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, items))
    return np.concatenate(parts) if parts else np.zeros(0)


def summarize(values: Sequence[float], seed: Optional[int], method: str, **extra) -> Estimate:
    """Mean and standard error; identical samples give an exact estimate."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("no samples")
    if np.ptp(v) == 0:
        return Estimate(float(v[0]), 0.0, int(v.size), seed, method, dict(extra))
    err = float(v.std(ddof=1) / np.sqrt(v.size)) if v.size > 1 else float("inf")
    return Estimate(float(v.sum() / v.size), err, int(v.size), seed, method, dict(extra))


def entropy_rows(p: np.ndarray) -> np.ndarray:
    """Shannon entropy (nats) of each row of a probability array."""
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(p > 0, p * np.log(p), 0.0)
    return -t.sum(axis=-1)
