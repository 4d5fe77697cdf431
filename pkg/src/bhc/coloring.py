"""Constructive balanced-coloring procedures.

The producers here all emit colorings that validate on their colored domain:

* ``two_color_sparse``      -- 2 colors for n-balanced inputs with < n edges,
  via connected components and a pigeonhole over prefix sizes.
* ``matching_to_coloring``  -- n classes from a perfect matching of the
  r-partite complement.
* ``colorability_by_degree`` -- matching-based coloring whenever the maximum
  (r-1)-degree is at most n/2 (a matching of the complement then must exist).
* ``triple_merge_reduce``   -- repeatedly recolors a sparse triple of classes
  with two colors; exits at most max{2, r(r-1)|E|/n + 1} colors.
* ``heuristic_balanced_color`` -- randomized greedy extraction of balanced
  independent classes (the workhorse at experiment scale).
* ``iterative_sparse_color`` -- peel-and-color pipeline for small balanced
  subsets: repeatedly peel the highest-degree vertices, color the bulk with a
  fresh palette, and finish the residue through the matching route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    BalancedColoring,
    BalancedSubset,
    BudgetError,
    DEFAULT_COMPLEMENT_CAP,
    InputError,
    PartiteHypergraph,
    validate_coloring,
)
from .models import make_rng
from .oracles import BUDGET_EXCEEDED, OracleBudget, perfect_matching_exists


def _require_balanced(h: PartiteHypergraph) -> int:
    if not h.is_balanced:
        raise InputError("operation requires an n-balanced hypergraph")
    return h.part_sizes[0]


# ---------------------------------------------------------------------------
# sparse two-coloring
# ---------------------------------------------------------------------------

def two_color_sparse(h: PartiteHypergraph) -> BalancedColoring:
    """Total balanced coloring with at most 2 colors when |E| < n.

    Construction: order connected components so that those meeting the first
    two parts come first (each edge meets V0 u V1 in exactly two vertices, so
    at least n+1 components do); coarsen to n+1 blocks by merging the tail;
    scan prefix sizes s_i = |prefix ∩ (V0 u V1)| until one hits n exactly or
    two agree mod n, which yields a block union meeting V0 u V1 in exactly n
    vertices.  That union fixes both classes; parts beyond the second are
    filled with the lowest available indices.
    """
    n = _require_balanced(h)
    if h.edge_count >= n:
        raise InputError(
            f"two_color_sparse requires |E| < n; got |E| = {h.edge_count}, n = {n}"
        )
    comps = h.components()
    meets = [c for c in comps if any(v.part <= 1 for v in c)]
    rest = [c for c in comps if not any(v.part <= 1 for v in c)]
    if len(meets) < n + 1:  # impossible: each edge joins exactly 2 of the 2n vertices
        raise AssertionError("fewer than n+1 components meet the first two parts")
    tail = [v for c in meets[n:] for v in c] + [v for c in rest for v in c]
    blocks = [list(c) for c in meets[:n]] + [tail]

    prefix_sizes = []
    acc = 0
    for b in blocks:
        acc += sum(1 for v in b if v.part <= 1)
        prefix_sizes.append(acc)

    chosen: range | None = None
    seen: dict[int, int] = {}
    for i, s in enumerate(prefix_sizes):
        if s == n:
            chosen = range(0, i + 1)
            break
        rem = s % n
        if rem in seen:
            chosen = range(seen[rem] + 1, i + 1)
            break
        seen[rem] = i
    if chosen is None:  # pigeonhole over n+1 prefixes cannot fail
        raise AssertionError("no prefix union meets the first two parts in n vertices")

    union = [v for i in chosen for v in blocks[i]]
    u1 = {v.index for v in union if v.part == 0}
    u2 = {v.index for v in union if v.part == 1}
    size = len(u1)
    if size + len(u2) != n:
        raise AssertionError("selected blocks do not split the first two parts evenly")

    all_idx = set(range(n))
    j1: list[set[int]] = [set(u1), all_idx - u2]
    for _ in range(2, h.r):
        j1.append(set(range(size)))
    j2 = [all_idx - p for p in j1]

    classes = [cls for cls in (j1, j2) if len(cls[0]) > 0]
    return BalancedColoring.from_classes(h.part_sizes, [[sorted(p) for p in cls] for cls in classes])


# ---------------------------------------------------------------------------
# matching-based colorings
# ---------------------------------------------------------------------------

def matching_to_coloring(h: PartiteHypergraph, matching: Sequence[Sequence[int]]) -> BalancedColoring:
    """One color class per edge of a perfect matching of the complement.

    Each class is one vertex per part and independent in h (its tuple is a
    complement edge), so the result is a total proper balanced n-coloring.
    """
    n = _require_balanced(h)
    edges = [tuple(int(x) for x in e) for e in matching]
    if len(edges) != n:
        raise InputError(f"matching must have n = {n} edges, got {len(edges)}")
    for j in range(h.r):
        col = sorted(e[j] for e in edges)
        if col != list(range(n)):
            raise InputError(f"matching does not cover part {j} exactly once per vertex")
    for e in edges:
        if h.has_edge(e):
            raise InputError(f"matching edge {e} is an edge of H, not of its complement")
    classes = [[[e[j]] for j in range(h.r)] for e in sorted(edges)]
    return BalancedColoring.from_classes(h.part_sizes, classes)


def colorability_by_degree(
    h: PartiteHypergraph,
    budget: OracleBudget | None = None,
    cap: int = DEFAULT_COMPLEMENT_CAP,
) -> BalancedColoring:
    """Matching-based n-coloring under the codegree hypothesis Delta_{r-1} <= n/2.

    The complement then has min codegree >= n/2 and contains a perfect
    matching; we find one by backtracking and convert it to a coloring.
    """
    n = _require_balanced(h)
    codeg = h.max_codegree()
    if 2 * codeg > n:
        raise InputError(
            f"colorability_by_degree requires Delta_(r-1) <= n/2; got {codeg} > {n}/2"
        )
    result = perfect_matching_exists(h.complement(cap=cap), budget)
    if result.status == BUDGET_EXCEEDED:
        raise BudgetError("matching search exhausted its budget (a matching still exists)")
    if not result.exists:  # contradicts the codegree guarantee
        raise AssertionError("no complement matching despite Delta_(r-1) <= n/2")
    return matching_to_coloring(h, result.matching)


# ---------------------------------------------------------------------------
# triple-merge reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TripleReduction:
    """A triple of classes whose union is sparse enough to recolor with 2 colors."""

    triple: tuple[int, int, int]
    induced_edge_count: int
    first_part_sizes: tuple[int, int, int]
    applied: bool = False


def _edge_colorset_counts(h: PartiteHypergraph, phi: BalancedColoring):
    """Counts of edges by their (sorted) set of vertex colors, sizes 2 and 3.

    Raises InputError on a monochromatic edge (the coloring would be invalid)
    and returns (pair_counts, triple_counts, larger) where `larger` is the
    number of edges spanning more than 3 colors (irrelevant to any triple).
    """
    pair: dict[tuple[int, int], int] = {}
    triple: dict[tuple[int, int, int], int] = {}
    larger = 0
    if h.edge_count == 0:
        return pair, triple, larger
    cols = np.stack([phi.colors[j][h.edge_array[:, j]] for j in range(h.r)], axis=1)
    if np.any(cols < 0):
        raise InputError("coloring must be total")
    for row in cols:
        cs = sorted(set(int(c) for c in row))
        if len(cs) == 1:
            raise InputError("initial coloring has a monochromatic edge")
        if len(cs) == 2:
            pair[(cs[0], cs[1])] = pair.get((cs[0], cs[1]), 0) + 1
        elif len(cs) == 3:
            key = (cs[0], cs[1], cs[2])
            triple[key] = triple.get(key, 0) + 1
        else:
            larger += 1
    return pair, triple, larger


def find_reducible_triple(h: PartiteHypergraph, phi: BalancedColoring) -> TripleReduction | None:
    """Lexicographically first triple i<j<k with fewer induced edges than the
    sum of the three first-part class sizes, or None."""
    q = phi.num_colors
    if q < 3:
        raise InputError(f"need at least 3 colors, got {q}")
    class_lists = phi.classes()
    s1 = [len(cls[0]) for cls in class_lists]
    pair, triple, _ = _edge_colorset_counts(h, phi)
    for i in range(q):
        for j in range(i + 1, q):
            cij = pair.get((i, j), 0)
            for k in range(j + 1, q):
                cnt = cij + pair.get((i, k), 0) + pair.get((j, k), 0) + triple.get((i, j, k), 0)
                if cnt < s1[i] + s1[j] + s1[k]:
                    return TripleReduction(
                        triple=(i, j, k),
                        induced_edge_count=cnt,
                        first_part_sizes=(s1[i], s1[j], s1[k]),
                    )
    return None


def triple_merge_reduce(
    h: PartiteHypergraph,
    phi_init: BalancedColoring,
    log: list[TripleReduction] | None = None,
) -> BalancedColoring:
    """Shrink a valid total balanced coloring by recoloring sparse triples.

    While q >= 3 and some triple of classes induces fewer edges than the sum
    of its first-part sizes, that triple's union (balanced, with part size
    equal to that sum) is recolored via two_color_sparse and q drops by one.
    On exit q <= 2 or no triple qualifies, which forces
    q <= r(r-1)|E|/n + 1 by the counting argument over class triples.
    """
    n = _require_balanced(h)
    report = validate_coloring(h, phi_init, mode="total")
    if not report.ok:
        raise InputError(f"initial coloring invalid: {report.summary()}")
    if phi_init.num_colors < 1 and n > 0:
        raise InputError("initial coloring must use at least one color")

    classes = [[sorted(p) for p in cls] for cls in phi_init.classes()]
    while len(classes) >= 3:
        phi = BalancedColoring.from_classes(h.part_sizes, classes)
        found = find_reducible_triple(h, phi)
        if found is None:
            break
        i, j, k = found.triple
        union = BalancedSubset.from_lists(
            [sorted(classes[i][p] + classes[j][p] + classes[k][p]) for p in range(h.r)]
        )
        sub, mapping = h.induced(union)
        if sub.edge_count != found.induced_edge_count:  # cross-check the pair/triple bookkeeping
            raise AssertionError("induced edge recount disagrees with colorset counts")
        two = two_color_sparse(sub)
        new_classes = [
            [[mapping[p][local] for local in cls[p]] for p in range(h.r)]
            for cls in two.classes()
        ]
        while len(new_classes) < 2:
            new_classes.append([[] for _ in range(h.r)])
        classes[i] = [sorted(c) for c in new_classes[0]]
        classes[j] = [sorted(c) for c in new_classes[1]]
        del classes[k]
        if log is not None:
            log.append(
                TripleReduction(
                    triple=found.triple,
                    induced_edge_count=found.induced_edge_count,
                    first_part_sizes=found.first_part_sizes,
                    applied=True,
                )
            )
    phi = BalancedColoring.from_classes(h.part_sizes, classes)
    return phi.without_empty_classes() if phi.num_colors else phi


def reduction_color_bound(r: int, edge_count: int, n: int) -> int:
    """max{2, floor(r(r-1)|E|/n) + 1}: the exit bound of the reduction."""
    if n <= 0:
        return 2
    return max(2, (r * (r - 1) * edge_count) // n + 1)


# ---------------------------------------------------------------------------
# randomized greedy growth of balanced independent classes
# ---------------------------------------------------------------------------

class _Grower:
    """Incremental machinery for growing balanced independent classes.

    Per class it tracks, for every edge, how many of its vertices the class
    holds; when an edge reaches r-1 members its one missing vertex becomes
    blocked.  Sweeps add one vertex per part (round-robin, per-part random
    order); a sweep that cannot complete is rolled back so the class stays
    balanced.
    """

    def __init__(self, h: PartiteHypergraph):
        self.h = h
        self.r = h.r
        self.edges = h.edge_array
        self.m = h.edge_count
        self.inc = [h.incidence(j) for j in range(h.r)]

    def _edge_ids(self, part: int, idx: int) -> np.ndarray:
        ids, indptr = self.inc[part]
        return ids[indptr[idx]:indptr[idx + 1]]

    def grow_class(self, rng: np.random.Generator, available: list[np.ndarray]) -> list[list[int]]:
        r = self.r
        cnt = np.zeros(self.m, dtype=np.int16)
        block = [np.zeros(self.h.part_sizes[j], dtype=np.int32) for j in range(r)]
        in_class = [np.zeros(self.h.part_sizes[j], dtype=bool) for j in range(r)]
        orders = []
        cursors = []
        for j in range(r):
            idxs = np.nonzero(available[j])[0]
            orders.append(idxs[rng.permutation(len(idxs))])
            cursors.append(0)
        members: list[list[int]] = [[] for _ in range(r)]

        def add(part: int, v: int) -> None:
            in_class[part][v] = True
            es = self._edge_ids(part, v)
            if len(es):
                cnt[es] += 1
                hot = es[cnt[es] == r - 1]
                for jj in range(r):
                    verts = self.edges[hot, jj]
                    verts = verts[~in_class[jj][verts]]
                    if len(verts):
                        np.add.at(block[jj], verts, 1)

        def undo(part: int, v: int) -> None:
            es = self._edge_ids(part, v)
            if len(es):
                hot = es[cnt[es] == r - 1]
                for jj in range(r):
                    verts = self.edges[hot, jj]
                    verts = verts[~in_class[jj][verts]]
                    if len(verts):
                        np.add.at(block[jj], verts, -1)
                cnt[es] -= 1
            in_class[part][v] = False

        while True:
            sweep: list[tuple[int, int]] = []
            complete = True
            for j in range(r):
                order = orders[j]
                pos = cursors[j]
                pick = -1
                while pos < len(order):
                    v = int(order[pos])
                    if not in_class[j][v] and block[j][v] == 0:
                        pick = v
                        break
                    pos += 1  # in-class or blocked; both stay that way for this class
                cursors[j] = pos
                if pick < 0:
                    complete = False
                    break
                add(j, pick)
                sweep.append((j, pick))
                cursors[j] = pos + 1
            if complete:
                for j, v in sweep:
                    members[j].append(v)
            else:
                for j, v in reversed(sweep):
                    undo(j, v)
                break
        return members


@dataclass(frozen=True)
class ColoringAttempt:
    """Outcome of a heuristic coloring: possibly partial, always valid where colored."""

    success: bool
    coloring: BalancedColoring
    colors_used: int
    reason: str | None = None


def heuristic_balanced_color(
    h: PartiteHypergraph,
    palette_budget: int,
    seed,
    available: list[np.ndarray] | None = None,
) -> ColoringAttempt:
    """Greedy randomized extraction of balanced independent classes.

    Repeatedly grows a maximal balanced independent class over the remaining
    vertices and assigns it the next color.  Fails (carrying the partial
    coloring) when the palette budget is exhausted or no nonempty balanced
    class can grow while vertices remain.
    """
    _require_balanced(h)
    if palette_budget < 1:
        raise InputError("palette_budget must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    grower = _Grower(h)
    if available is None:
        avail = [np.ones(nj, dtype=bool) for nj in h.part_sizes]
    else:
        avail = [a.copy() for a in available]

    phi = BalancedColoring(h.part_sizes)
    color = 0
    reason = None
    while any(a.any() for a in avail):
        if color >= palette_budget:
            reason = "palette budget exhausted"
            break
        members = grower.grow_class(rng, avail)
        if not members[0]:
            reason = "no nonempty balanced independent class can grow"
            break
        for j in range(h.r):
            idx = np.asarray(members[j], dtype=np.int64)
            phi.colors[j][idx] = color
            avail[j][idx] = False
        color += 1
    phi.num_colors = color
    success = not any(a.any() for a in avail)
    return ColoringAttempt(success=success, coloring=phi, colors_used=color, reason=None if success else reason)


def greedy_balanced_set(h: PartiteHypergraph, seed, restarts: int = 3) -> BalancedSubset:
    """Best single balanced independent set over a few randomized greedy runs."""
    _require_balanced(h)
    if restarts < 1:
        raise InputError("restarts must be at least 1")
    grower = _Grower(h)
    best: list[list[int]] | None = None
    for attempt in range(restarts):
        rng = make_rng((seed, attempt))
        avail = [np.ones(nj, dtype=bool) for nj in h.part_sizes]
        members = grower.grow_class(rng, avail)
        if best is None or len(members[0]) > len(best[0]):
            best = members
    return BalancedSubset.from_lists([sorted(p) for p in best])


# ---------------------------------------------------------------------------
# iterative peel-and-color pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeelRound:
    size: int
    peel_count: int
    palette_budget: int


@dataclass(frozen=True)
class PeelSchedule:
    """Deterministic schedule of the peel-and-color pipeline.

    Round sizes fall by roughly d^(delta/2) per round (peel counts are
    ceilings, size thresholds floors); the loop stops at the size threshold
    floor(n/d) or after max_rounds, whichever comes first.
    """

    eps: float
    delta: float
    d: float
    n: int
    rounds: tuple[PeelRound, ...]
    final_size: int
    final_budget: int
    max_rounds: int
    size_threshold: int
    start_cap: int

    @classmethod
    def build(cls, n: int, d: float, r: int, eps: float, s0: int) -> "PeelSchedule":
        if d < 2:
            raise InputError(f"d must be >= 2, got {d}")
        if not 0.0 < eps < 1.0:
            raise InputError(f"eps must lie in (0, 1), got {eps}")
        delta = eps * (1.0 - eps) / (r - 1)
        start_cap = int(math.floor(n / d**eps))
        if s0 > start_cap:
            raise InputError(
                f"subset per-part size {s0} exceeds the admission cap floor(n/d^eps) = {start_cap}"
            )
        threshold = int(math.floor(n / d))
        max_rounds = int(math.ceil((1.0 - eps) * math.log(d)))
        budget = int(math.ceil(d ** ((1.0 - delta / 2.0) / (r - 1))))
        rounds: list[PeelRound] = []
        s = s0
        while s > threshold and len(rounds) < max_rounds:
            peel = int(math.ceil(s * d ** (-delta / 2.0)))
            if peel >= s:
                break
            rounds.append(PeelRound(size=s, peel_count=peel, palette_budget=budget))
            s = peel
        final_budget = int(math.ceil(r * r * math.log(d)))
        return cls(
            eps=eps,
            delta=delta,
            d=float(d),
            n=n,
            rounds=tuple(rounds),
            final_size=s,
            final_budget=final_budget,
            max_rounds=max_rounds,
            size_threshold=threshold,
            start_cap=start_cap,
        )


@dataclass(frozen=True)
class IterativeColoringResult:
    success: bool
    coloring: BalancedColoring | None
    colors_used: int
    schedule: PeelSchedule
    failure_stage: str | None = None
    failure_reason: str | None = None


def _subset_degrees(h: PartiteHypergraph, member_mask: list[np.ndarray]) -> list[np.ndarray]:
    """Per-part degrees within the induced subgraph on the masked vertex set."""
    if h.edge_count == 0:
        return [np.zeros(nj, dtype=np.int64) for nj in h.part_sizes]
    inside = np.ones(h.edge_count, dtype=bool)
    for j in range(h.r):
        inside &= member_mask[j][h.edge_array[:, j]]
    return [
        np.bincount(h.edge_array[inside, j], minlength=h.part_sizes[j])
        for j in range(h.r)
    ]


def _color_subset_by_matching(
    h: PartiteHypergraph,
    per_part: list[np.ndarray],
    compress: bool,
    budget: OracleBudget | None = None,
) -> tuple[list[list[list[int]]], int]:
    """Matching-based coloring of H[W] (optionally compressed), as global classes."""
    subset = BalancedSubset.from_lists([list(map(int, p)) for p in per_part])
    sub, mapping = h.induced(subset)
    phi_sub = colorability_by_degree(sub, budget=budget)
    if compress:
        phi_sub = triple_merge_reduce(sub, phi_sub)
    classes = [
        [[mapping[p][local] for local in cls[p]] for p in range(h.r)]
        for cls in phi_sub.classes()
    ]
    return classes, phi_sub.num_colors


def iterative_sparse_color(
    h: PartiteHypergraph,
    subset: BalancedSubset,
    d: float,
    eps: float,
    seed,
) -> IterativeColoringResult:
    """Peel-and-color a small balanced subset of an n-balanced hypergraph.

    While the working set is larger than floor(n/d) (and the round cap is not
    hit), peel the ceil(s * d^(-delta/2)) highest-degree vertices per part
    (ties toward lower index), color the remaining bulk with a fresh palette
    of ceil(d^((1-delta/2)/(r-1))) colors via the greedy heuristic (falling
    back to the matching route plus triple-merge compression on any stuck
    remainder), then recurse on the peeled set.  The final residue must have
    Delta_{r-1} <= s/2 -- otherwise a failure result is returned -- and is
    colored through the matching route, compressed to at most
    ceil(r^2 log d) colors.
    """
    n = _require_balanced(h)
    subset.validate_in(h)
    schedule = PeelSchedule.build(n, d, h.r, eps, subset.s)
    rng = make_rng(seed)

    working = [np.asarray(sorted(p), dtype=np.int64) for p in subset.per_part]
    phi = BalancedColoring(h.part_sizes)
    offset = 0

    if subset.s:  # edgeless case: the whole subset is one balanced independent class
        edgeless = True
        if h.edge_count:
            masks0 = [np.zeros(nj, dtype=bool) for nj in h.part_sizes]
            for j in range(h.r):
                masks0[j][working[j]] = True
            inside = np.ones(h.edge_count, dtype=bool)
            for j in range(h.r):
                inside &= masks0[j][h.edge_array[:, j]]
            edgeless = not bool(inside.any())
        if edgeless:
            for j in range(h.r):
                phi.colors[j][working[j]] = 0
            phi.num_colors = 1
            return IterativeColoringResult(True, phi, 1, schedule)

    def fail(stage: str, reason: str) -> IterativeColoringResult:
        phi.num_colors = offset
        return IterativeColoringResult(
            success=False,
            coloring=phi,
            colors_used=offset,
            schedule=schedule,
            failure_stage=stage,
            failure_reason=reason,
        )

    def splice(classes: list[list[list[int]]]) -> int:
        nonlocal offset
        for c, cls in enumerate(classes):
            for j in range(h.r):
                idx = np.asarray(cls[j], dtype=np.int64)
                phi.colors[j][idx] = offset + c
        offset += len(classes)
        return len(classes)

    for rnd in schedule.rounds:
        masks = [np.zeros(nj, dtype=bool) for nj in h.part_sizes]
        for j in range(h.r):
            masks[j][working[j]] = True
        degs = _subset_degrees(h, masks)
        peeled = []
        bulk_masks = []
        for j in range(h.r):
            w = working[j]
            order = np.lexsort((w, -degs[j][w]))  # highest degree first, ties lower index
            peel_idx = w[order[: rnd.peel_count]]
            peeled.append(np.sort(peel_idx))
            bulk_mask = masks[j].copy()
            bulk_mask[peel_idx] = False
            bulk_masks.append(bulk_mask)

        attempt = heuristic_balanced_color(h, rnd.palette_budget, rng, available=bulk_masks)
        used = attempt.colors_used
        for j in range(h.r):
            colored = attempt.coloring.colors[j] >= 0
            phi.colors[j][colored] = attempt.coloring.colors[j][colored] + offset
        if not attempt.success:
            leftover = [
                np.nonzero(bulk_masks[j] & (attempt.coloring.colors[j] < 0))[0]
                for j in range(h.r)
            ]
            s_left = len(leftover[0])
            if s_left:
                left_masks = [np.zeros(nj, dtype=bool) for nj in h.part_sizes]
                for j in range(h.r):
                    left_masks[j][leftover[j]] = True
                sub_left = BalancedSubset.from_lists([list(map(int, p)) for p in leftover])
                sub_h, _ = h.induced(sub_left)
                if 2 * sub_h.max_codegree() > s_left:
                    return fail("round", "stuck remainder violates the codegree condition")
                classes, extra = _color_subset_by_matching(h, leftover, compress=True)
                for c, cls in enumerate(classes):
                    for j in range(h.r):
                        idx = np.asarray(cls[j], dtype=np.int64)
                        phi.colors[j][idx] = offset + used + c
                used += extra
        offset += used
        if used > rnd.palette_budget:
            return fail("round", f"round used {used} colors, budget {rnd.palette_budget}")
        working = peeled

    s_final = len(working[0])
    if s_final:
        subset_final = BalancedSubset.from_lists([list(map(int, p)) for p in working])
        sub, _ = h.induced(subset_final)
        codeg = sub.max_codegree()
        if 2 * codeg > s_final:
            return fail("final", f"Delta_(r-1) = {codeg} exceeds s/2 = {s_final / 2}")
        classes, extra = _color_subset_by_matching(h, working, compress=True)
        if extra > schedule.final_budget:
            return fail("final", f"residue needed {extra} colors, budget {schedule.final_budget}")
        splice(classes)

    phi.num_colors = offset
    return IterativeColoringResult(
        success=True,
        coloring=phi,
        colors_used=offset,
        schedule=schedule,
    )


# ---------------------------------------------------------------------------
# completion of partial colorings (absorb the tail, rematch, compress)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompletionResult:
    success: bool
    coloring: BalancedColoring | None
    colors_used: int
    absorbed_classes: int
    reason: str | None = None


def complete_coloring(
    h: PartiteHypergraph,
    phi: BalancedColoring,
    compress_limit: int = 250,
    cap: int = DEFAULT_COMPLEMENT_CAP,
) -> CompletionResult:
    """Finish a valid partial coloring whose classes came in creation order.

    The uncolored remainder (balanced by construction) is merged with as few
    trailing classes as needed for the codegree condition Delta_{r-1} <= s/2,
    then recolored through the matching route and compressed by triple-merge
    when small enough.  Fails honestly when no prefix of absorptions works
    within the complement capacity cap.
    """
    n = _require_balanced(h)
    uncolored = [np.nonzero(phi.colors[j] < 0)[0] for j in range(h.r)]
    sizes = {len(u) for u in uncolored}
    if len(sizes) != 1:
        raise InputError("uncolored remainder is not balanced")
    if sizes == {0}:
        return CompletionResult(True, phi, phi.num_colors, 0)

    classes = phi.classes()
    absorbed = 0
    working = [set(map(int, u)) for u in uncolored]
    while True:
        s_w = len(working[0])
        if s_w**h.r <= cap:
            per_part = [np.asarray(sorted(p), dtype=np.int64) for p in working]
            subset = BalancedSubset.from_lists([list(map(int, p)) for p in per_part])
            sub, _ = h.induced(subset)
            if 2 * sub.max_codegree() <= s_w:
                compress = s_w <= compress_limit
                new_classes, extra = _color_subset_by_matching(h, per_part, compress=compress)
                kept = len(classes) - absorbed
                out = BalancedColoring(h.part_sizes)
                for c in range(kept):
                    for j in range(h.r):
                        idx = np.asarray(classes[c][j], dtype=np.int64)
                        out.colors[j][idx] = c
                for c, cls in enumerate(new_classes):
                    for j in range(h.r):
                        idx = np.asarray(cls[j], dtype=np.int64)
                        out.colors[j][idx] = kept + c
                out.num_colors = kept + extra
                return CompletionResult(True, out, out.num_colors, absorbed)
        if absorbed >= len(classes):
            return CompletionResult(False, phi, phi.num_colors, absorbed,
                                    reason="no absorption prefix satisfies the codegree condition")
        nxt = classes[len(classes) - 1 - absorbed]
        for j in range(h.r):
            working[j].update(int(i) for i in nxt[j])
        absorbed += 1
