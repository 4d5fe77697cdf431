"""Exponential-time exact computations at desk scale.

These solvers are the ground truth the rest of the package is tested
against: balanced independence number, balanced chromatic number, perfect
matchings, and balanced colorability.  Every search is budgeted; running
out of budget yields an explicit "unknown" status, never a wrong value.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    BalancedColoring,
    BalancedSubset,
    DEFAULT_COMPLEMENT_CAP,
    InputError,
    PartiteHypergraph,
)

DECIDED = "decided"
BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class OracleBudget:
    """Limits for an exact search; None means unlimited."""

    node_limit: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        if self.node_limit is not None and self.node_limit <= 0:
            raise InputError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise InputError("time_limit must be positive")


class _BudgetTracker:
    __slots__ = ("node_limit", "deadline", "nodes", "exhausted")

    def __init__(self, budget: OracleBudget | None):
        budget = budget or OracleBudget()
        self.node_limit = budget.node_limit
        self.deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
        self.nodes = 0
        self.exhausted = False

    def tick(self) -> bool:
        """Count one search node; True while within budget."""
        if self.exhausted:
            return False
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.exhausted = True
        elif self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            self.exhausted = True
        return not self.exhausted


@dataclass(frozen=True)
class AlphaBResult:
    status: str
    s: int                       # best certified per-part size found
    witness: BalancedSubset
    r: int
    nodes: int

    @property
    def alpha_b(self) -> int:
        return self.s * self.r


@dataclass(frozen=True)
class ChiBResult:
    status: str
    colorable: bool | None       # None when undecided
    q: int | None                # chromatic value when decided colorable
    witness: BalancedColoring | None
    q_refuted_below: int         # all q' <= this were exhaustively refuted
    nodes: int


@dataclass(frozen=True)
class MatchingResult:
    status: str
    exists: bool | None
    matching: tuple[tuple[int, ...], ...] | None
    nodes: int


def _require_balanced(h: PartiteHypergraph) -> int:
    if not h.is_balanced:
        raise InputError("oracle requires an n-balanced hypergraph")
    return h.part_sizes[0]


def alpha_b_exact(h: PartiteHypergraph, budget: OracleBudget | None = None) -> AlphaBResult:
    """Largest s with an s-balanced independent set; witness is lexicographically least.

    On budget exhaustion the result reports the best size found so far with
    status "budget_exceeded" (maximality unproven), never a wrong value.
    """
    n = _require_balanced(h)
    tracker = _BudgetTracker(budget)
    edge_rows = [tuple(int(x) for x in row) for row in h.edge_array]

    chosen: list[list[int]] = [[] for _ in range(h.r)]
    chosen_sets: list[set[int]] = [set() for _ in range(h.r)]

    def completes_edge(part: int, idx: int) -> bool:
        # with parts filled in order, only an edge whose other endpoints are
        # all already chosen can become fully contained
        for eid in h.incident_edge_ids((part, idx)):
            row = edge_rows[eid]
            if all(row[j] in chosen_sets[j] for j in range(h.r) if j != part):
                return True
        return False

    def extend(s: int, part: int, start: int) -> bool:
        if len(chosen[part]) == s:
            if part + 1 == h.r:
                return True
            return extend(s, part + 1, 0)
        if not tracker.tick():
            return False
        needed = s - len(chosen[part])
        for idx in range(start, n - needed + 1):
            if not completes_edge(part, idx):
                chosen[part].append(idx)
                chosen_sets[part].add(idx)
                if extend(s, part, idx + 1):
                    return True
                chosen[part].pop()
                chosen_sets[part].remove(idx)
            if tracker.exhausted:
                return False
        return False

    best_s = 0
    best_witness = BalancedSubset.from_lists([[] for _ in range(h.r)])
    for s in range(n, 0, -1):
        if tracker.exhausted:
            break
        for part in range(h.r):
            chosen[part].clear()
            chosen_sets[part].clear()
        if extend(s, 0, 0):
            best_s = s
            best_witness = BalancedSubset.from_lists([list(p) for p in chosen])
            break

    status = BUDGET_EXCEEDED if tracker.exhausted else DECIDED
    return AlphaBResult(status=status, s=best_s, witness=best_witness, r=h.r, nodes=tracker.nodes)


def chi_b_exact(h: PartiteHypergraph, budget: OracleBudget | None = None) -> ChiBResult:
    """Minimum q admitting a total balanced proper coloring, or certified non-colorability.

    Iterates q = 1, 2, ..., n with backtracking over class assignments in
    part order.  Part 0 fixes every class size; later parts prune on the
    remaining per-class capacity.  Class ids are canonical (a new class gets
    the next unused id), so the first coloring found is the lexicographically
    least canonical witness.
    """
    n = _require_balanced(h)
    tracker = _BudgetTracker(budget)
    edge_rows = [tuple(int(x) for x in row) for row in h.edge_array]

    if n == 0:
        phi = BalancedColoring([0] * h.r, num_colors=0)
        return ChiBResult(DECIDED, True, 0, phi, 0, 0)

    def try_q(q: int) -> Optional[list[np.ndarray]]:
        colors = [np.full(n, -1, dtype=np.int32) for _ in range(h.r)]
        sizes = [0] * q             # per-class size, fixed by part 0
        counts = [[0] * q for _ in range(h.r)]

        def makes_monochrome(part: int, idx: int, c: int) -> bool:
            for eid in h.incident_edge_ids((part, idx)):
                row = edge_rows[eid]
                if all(colors[j][row[j]] == c for j in range(h.r) if j != part):
                    return True
            return False

        def assign(pos: int, max_open: int) -> bool:
            if pos == h.r * n:
                return True
            if not tracker.tick():
                return False
            part, idx = divmod(pos, n)
            if part == 0:
                limit = min(max_open + 1, q - 1)
                for c in range(limit + 1):
                    colors[0][idx] = c
                    sizes[c] += 1
                    counts[0][c] += 1
                    if not makes_monochrome(0, idx, c) and assign(pos + 1, max(max_open, c)):
                        return True
                    sizes[c] -= 1
                    counts[0][c] -= 1
                    colors[0][idx] = -1
                    if tracker.exhausted:
                        return False
                return False
            for c in range(q):
                if counts[part][c] >= sizes[c]:
                    continue
                colors[part][idx] = c
                counts[part][c] += 1
                if not makes_monochrome(part, idx, c) and assign(pos + 1, max_open):
                    return True
                counts[part][c] -= 1
                colors[part][idx] = -1
                if tracker.exhausted:
                    return False
            return False

        return colors if assign(0, -1) else None

    refuted = 0
    for q in range(1, n + 1):
        result = try_q(q)
        if tracker.exhausted:
            return ChiBResult(BUDGET_EXCEEDED, None, None, None, refuted, tracker.nodes)
        if result is not None:
            phi = BalancedColoring([n] * h.r, colors=result, num_colors=q)
            return ChiBResult(DECIDED, True, q, phi, refuted, tracker.nodes)
        refuted = q
    return ChiBResult(DECIDED, False, None, None, refuted, tracker.nodes)


def perfect_matching_exists(h: PartiteHypergraph, budget: OracleBudget | None = None) -> MatchingResult:
    """Do n pairwise-disjoint edges cover all vertices?

    Backtracking over part-0 vertices with fail-first pruning: at each step
    the unmatched vertex with the fewest available edges is expanded, and its
    edges are tried in lexicographic order (deterministic witness).
    """
    n = _require_balanced(h)
    tracker = _BudgetTracker(budget)
    if n == 0:
        return MatchingResult(DECIDED, True, (), tracker.nodes)
    if h.edge_count < n:
        return MatchingResult(DECIDED, False, None, tracker.nodes)
    if h.r == 2:
        return _pm_bipartite(h, tracker)
    return _pm_general(h, tracker)


def _pm_bipartite(h: PartiteHypergraph, tracker: _BudgetTracker) -> MatchingResult:
    n = h.part_sizes[0]
    adj = np.zeros((n, n), dtype=bool)
    rows = h.edge_array
    adj[rows[:, 0], rows[:, 1]] = True

    partner = np.full(n, -1, dtype=np.int64)   # by part-0 vertex
    used1 = np.zeros(n, dtype=bool)

    def solve(depth: int) -> bool:
        if depth == n:
            return True
        if not tracker.tick():
            return False
        pending = np.nonzero(partner == -1)[0]
        avail = adj[pending][:, ~used1]
        counts = avail.sum(axis=1)
        pos = int(np.argmin(counts))           # ties: lowest vertex index
        if counts[pos] == 0:
            return False
        v = int(pending[pos])
        for u in np.nonzero(adj[v] & ~used1)[0]:
            partner[v] = u
            used1[u] = True
            if solve(depth + 1):
                return True
            partner[v] = -1
            used1[u] = False
            if tracker.exhausted:
                return False
        return False

    found = solve(0)
    if tracker.exhausted and not found:
        return MatchingResult(BUDGET_EXCEEDED, None, None, tracker.nodes)
    if not found:
        return MatchingResult(DECIDED, False, None, tracker.nodes)
    matching = tuple(sorted((v, int(partner[v])) for v in range(n)))
    return MatchingResult(DECIDED, True, matching, tracker.nodes)


def _pm_general(h: PartiteHypergraph, tracker: _BudgetTracker) -> MatchingResult:
    n = h.part_sizes[0]
    edge_rows = h.edge_array
    used = [np.zeros(n, dtype=bool) for _ in range(h.r)]
    matched_edge: list[int | None] = [None] * n

    def candidates(v0: int) -> list[int]:
        out = []
        for eid in h.incident_edge_ids((0, v0)):
            row = edge_rows[eid]
            if all(not used[j][row[j]] for j in range(1, h.r)):
                out.append(int(eid))
        return out

    def solve(depth: int) -> bool:
        if depth == n:
            return True
        if not tracker.tick():
            return False
        best_v, best_cands = None, None
        for v in range(n):
            if matched_edge[v] is not None or used[0][v]:
                continue
            cands = candidates(v)
            if best_cands is None or len(cands) < len(best_cands):
                best_v, best_cands = v, cands
                if not cands:
                    return False
        if best_v is None:
            return False
        for eid in best_cands:     # incident ids iterate in lexicographic edge order
            row = edge_rows[eid]
            for j in range(h.r):
                used[j][row[j]] = True
            matched_edge[best_v] = eid
            if solve(depth + 1):
                return True
            matched_edge[best_v] = None
            for j in range(h.r):
                used[j][row[j]] = False
            if tracker.exhausted:
                return False
        return False

    found = solve(0)
    if tracker.exhausted and not found:
        return MatchingResult(BUDGET_EXCEEDED, None, None, tracker.nodes)
    if not found:
        return MatchingResult(DECIDED, False, None, tracker.nodes)
    edges = tuple(
        tuple(int(x) for x in edge_rows[matched_edge[v]]) for v in range(n) if matched_edge[v] is not None
    )
    return MatchingResult(DECIDED, True, tuple(sorted(edges)), tracker.nodes)


def is_balanced_colorable(
    h: PartiteHypergraph,
    budget: OracleBudget | None = None,
    cap: int = DEFAULT_COMPLEMENT_CAP,
) -> bool | None:
    """Balanced colorability via a perfect matching of the r-partite complement.

    Returns None when the matching search exhausts its budget undecided.
    """
    _require_balanced(h)
    result = perfect_matching_exists(h.complement(cap=cap), budget)
    return result.exists
