"""Seeded samplers for the Erdos-Renyi r-partite model H(r, n, p).

Randomness comes from numpy's PCG64 generator; every sampler is a pure
function of its parameter bundle, and independent trials should be seeded
via :func:`trial_seed` so they own disjoint streams.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CapacityError, InputError, PartiteHypergraph

RNG_NAME = "pcg64"

DENSE_TUPLE_CAP = 10**6  # iterate-all-tuples sampler above this switches to count-then-place

_COUNT_LIMIT = 2**62


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def trial_seed(seed: int, trial_index: int) -> tuple[int, int]:
    """Per-trial seed material: feed to make_rng for an independent stream."""
    return (int(seed), int(trial_index))


@dataclass(frozen=True)
class ModelParams:
    """Parameters of H(r, n, p); p may be given via expected degree d = p * n^(r-1)."""

    r: int
    n: int
    p: float | None = None
    d: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.r < 2:
            raise InputError(f"r must be >= 2, got {self.r}")
        if self.n < self.r:
            raise InputError(f"n must be >= r, got n={self.n}, r={self.r}")
        if (self.p is None) == (self.d is None):
            raise InputError("exactly one of p and d must be given")
        if self.d is not None:
            if self.d < 0 or self.d > float(self.n) ** (self.r - 1):
                raise InputError(f"d must lie in [0, n^(r-1)], got {self.d}")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise InputError(f"p must lie in [0, 1], got {self.p}")

    @property
    def probability(self) -> float:
        if self.p is not None:
            return float(self.p)
        return float(self.d) / float(self.n) ** (self.r - 1)

    @property
    def total_tuples(self) -> int:
        return self.n**self.r


def sample(params: ModelParams) -> PartiteHypergraph:
    """Draw H(r, n, p): every valid tuple included independently with probability p.

    Uses per-tuple coins when n^r <= DENSE_TUPLE_CAP and the count-then-place
    sparse sampler otherwise; both induce the same distribution.
    """
    if params.total_tuples <= DENSE_TUPLE_CAP:
        rng = make_rng(params.seed)
        total = params.total_tuples
        keep = rng.random(total) < params.probability
        codes = np.nonzero(keep)[0].astype(np.int64)
        return PartiteHypergraph._from_sorted_codes(params.r, [params.n] * params.r, codes)
    return sample_count_then_place(params)


def sample_count_then_place(params: ModelParams) -> PartiteHypergraph:
    """Draw M ~ Binomial(n^r, p), then M distinct uniform tuples by rejection."""
    total = params.total_tuples
    if total >= _COUNT_LIMIT:
        raise CapacityError(f"n^r = {total} overflows the tuple-counting integer")
    rng = make_rng(params.seed)
    p = params.probability
    # numpy's binomial switches between inversion (small n*p) and the BTPE
    # rejection sampler internally, matching the regimes we care about.
    m = int(rng.binomial(total, p))
    if m == 0:
        return PartiteHypergraph(params.r, [params.n] * params.r)
    if m > total // 2 and total > DENSE_TUPLE_CAP:
        raise CapacityError("dense regime at large n^r: rejection placement would thrash")

    sizes = [params.n] * params.r
    collected = np.empty(0, dtype=np.int64)
    while len(collected) < m:
        need = m - len(collected)
        batch = rng.integers(0, params.n, size=(int(need * 1.2) + 16, params.r), dtype=np.int64)
        codes = np.zeros(len(batch), dtype=np.int64)
        for j in range(params.r):
            codes = codes * params.n + batch[:, j]
        merged = np.concatenate([collected, codes])
        # stable first-occurrence dedup keeps the arrival order uniform
        _, first = np.unique(merged, return_index=True)
        merged = merged[np.sort(first)]
        collected = merged
    codes = np.sort(collected[:m])
    return PartiteHypergraph._from_sorted_codes(params.r, sizes, codes)
