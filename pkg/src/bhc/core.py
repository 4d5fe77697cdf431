"""Core data model for r-uniform r-partite hypergraphs.

Vertices are identified by (part, index) pairs; edges are position-indexed
r-tuples, so part membership is implicit in the tuple position.  Hypergraphs
are immutable after construction and safe to share across threads read-only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

DEFAULT_COMPLEMENT_CAP = 10_000_000

_CODE_LIMIT = 2**62  # mixed-radix tuple codes must fit in int64


class InputError(ValueError):
    """An argument violates an operation's preconditions."""


class CapacityError(RuntimeError):
    """An operation would materialize more state than its configured cap."""


class BudgetError(RuntimeError):
    """A bounded computation ran out of its node or time budget."""


class VertexRef(NamedTuple):
    part: int
    index: int


@dataclass(frozen=True)
class DegreeSummary:
    """Degree statistics of a partite hypergraph.

    ``delta_j[j]`` is the maximum number of edges containing a fixed j-set of
    vertices from pairwise-distinct parts; ``small_delta_j[j]`` is the minimum
    over such sets with at least one edge, or None when the hypergraph has no
    edges at all.
    """

    max_degree: int
    delta_j: dict[int, int]
    small_delta_j: dict[int, int | None]
    edge_count: int
    average_degree: float | None


class PartiteHypergraph:
    """An r-uniform r-partite hypergraph with 0-based per-part vertex indices."""

    __slots__ = ("r", "part_sizes", "_edges", "_codes", "_incidence", "_tuple_set")

    def __init__(self, r: int, part_sizes: Sequence[int], edges: Iterable[Sequence[int]] | np.ndarray = ()):
        if r < 2:
            raise InputError(f"uniformity r must be >= 2, got {r}")
        sizes = tuple(int(s) for s in part_sizes)
        if len(sizes) != r:
            raise InputError(f"expected {r} part sizes, got {len(sizes)}")
        if any(s < 0 for s in sizes):
            raise InputError(f"part sizes must be nonnegative, got {sizes}")
        self.r = int(r)
        self.part_sizes = sizes
        self._edges = self._canonical_edge_array(edges)
        self._codes: np.ndarray | None = None
        self._incidence: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._tuple_set: frozenset | None = None

    def _canonical_edge_array(self, edges) -> np.ndarray:
        arr = np.asarray(edges, dtype=np.int64)
        if arr.size == 0:
            return np.empty((0, self.r), dtype=np.int32)
        if arr.ndim != 2 or arr.shape[1] != self.r:
            raise InputError(f"edges must be {self.r}-tuples")
        for j, nj in enumerate(self.part_sizes):
            col = arr[:, j]
            if col.min() < 0 or col.max() >= nj:
                raise InputError(f"edge index out of range in part {j} (size {nj})")
        order = np.lexsort(tuple(arr[:, j] for j in reversed(range(self.r))))
        arr = np.ascontiguousarray(arr[order], dtype=np.int32)
        if len(arr) > 1 and bool(np.any(np.all(arr[1:] == arr[:-1], axis=1))):
            raise InputError("duplicate edges are not allowed")
        return arr

    # -- constructors ------------------------------------------------------

    @classmethod
    def complete(cls, r: int, part_sizes: Sequence[int] | int, cap: int = DEFAULT_COMPLEMENT_CAP) -> "PartiteHypergraph":
        if isinstance(part_sizes, int):
            part_sizes = [part_sizes] * r
        empty = cls(r, part_sizes)
        return empty.complement(cap=cap)

    @classmethod
    def _from_sorted_codes(cls, r: int, part_sizes: Sequence[int], codes: np.ndarray) -> "PartiteHypergraph":
        h = cls(r, part_sizes)
        h._edges = _decode_tuples(codes, h.part_sizes)
        h._codes = codes.astype(np.int64, copy=False)
        return h

    # -- basic accessors ---------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def edge_array(self) -> np.ndarray:
        """Edges as an (m, r) int array, sorted lexicographically. Do not mutate."""
        return self._edges

    @property
    def num_vertices(self) -> int:
        return sum(self.part_sizes)

    @property
    def is_balanced(self) -> bool:
        return len(set(self.part_sizes)) <= 1

    @property
    def n(self) -> int:
        """Common part size of an n-balanced hypergraph."""
        if not self.is_balanced:
            raise InputError("hypergraph is not n-balanced")
        return self.part_sizes[0]

    @property
    def total_tuples(self) -> int:
        prod = 1
        for s in self.part_sizes:
            prod *= s
        return prod

    def edges(self) -> Iterator[tuple[int, ...]]:
        for row in self._edges:
            yield tuple(int(x) for x in row)

    def vertices(self) -> Iterator[VertexRef]:
        for j, nj in enumerate(self.part_sizes):
            for i in range(nj):
                yield VertexRef(j, i)

    def codes(self) -> np.ndarray:
        """Edges as sorted mixed-radix int64 codes (part 0 most significant)."""
        if self._codes is None:
            if self.total_tuples >= _CODE_LIMIT:
                raise CapacityError("tuple space too large for int64 codes")
            self._codes = _encode_tuples(self._edges, self.part_sizes)
        return self._codes

    def has_edge(self, edge: Sequence[int]) -> bool:
        tup = tuple(int(x) for x in edge)
        if len(tup) != self.r:
            raise InputError(f"edge must have {self.r} entries")
        for j, nj in enumerate(self.part_sizes):
            if not 0 <= tup[j] < nj:
                raise InputError(f"edge index out of range in part {j}")
        if self.total_tuples < _CODE_LIMIT:
            code = _encode_tuples(np.asarray([tup], dtype=np.int64), self.part_sizes)[0]
            pos = int(np.searchsorted(self.codes(), code))
            return pos < self.edge_count and self.codes()[pos] == code
        if self._tuple_set is None:
            self._tuple_set = frozenset(self.edges())
        return tup in self._tuple_set

    def _check_vertex(self, v: VertexRef) -> VertexRef:
        part, index = int(v[0]), int(v[1])
        if not 0 <= part < self.r:
            raise InputError(f"part {part} out of range [0, {self.r})")
        if not 0 <= index < self.part_sizes[part]:
            raise InputError(f"index {index} out of range for part {part} (size {self.part_sizes[part]})")
        return VertexRef(part, index)

    # -- incidence and degrees ---------------------------------------------

    def incidence(self, part: int) -> tuple[np.ndarray, np.ndarray]:
        """(edge_ids, indptr): edge ids grouped by the vertex in `part`."""
        if part not in self._incidence:
            col = self._edges[:, part]
            order = np.argsort(col, kind="stable").astype(np.int64)
            counts = np.bincount(col, minlength=self.part_sizes[part])
            indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
            self._incidence[part] = (order, indptr)
        return self._incidence[part]

    def incident_edge_ids(self, v: VertexRef) -> np.ndarray:
        v = self._check_vertex(v)
        ids, indptr = self.incidence(v.part)
        return ids[indptr[v.index]:indptr[v.index + 1]]

    def degree(self, v: VertexRef) -> int:
        """Number of edges containing v."""
        return len(self.incident_edge_ids(v))

    def subset_degree(self, S: Iterable[VertexRef]) -> int:
        """Number of edges containing every vertex of S (vertices in distinct parts)."""
        refs = [self._check_vertex(v) for v in S]
        if not refs:
            raise InputError("S must be non-empty")
        if len(refs) > self.r - 1:
            raise InputError(f"|S| must be at most r-1 = {self.r - 1}")
        parts = [v.part for v in refs]
        if len(set(parts)) != len(parts):
            raise InputError("vertices of S must lie in pairwise-distinct parts")
        ids = self.incident_edge_ids(refs[0])
        for v in refs[1:]:
            ids = ids[self._edges[ids, v.part] == v.index]
        return len(ids)

    def degree_summary(self) -> DegreeSummary:
        """Exhaustive Delta_j / delta_j statistics for j in [1, r-1]."""
        m = self.edge_count
        delta: dict[int, int] = {}
        small: dict[int, int | None] = {}
        for j in range(1, self.r):
            best = 0
            least: int | None = None
            for combo in itertools.combinations(range(self.r), j):
                if m == 0:
                    continue
                sub = self._edges[:, combo].astype(np.int64)
                code = np.zeros(m, dtype=np.int64)
                for k, pos in enumerate(combo):
                    code = code * self.part_sizes[pos] + sub[:, k]
                counts = np.unique(code, return_counts=True)[1]
                best = max(best, int(counts.max()))
                cmin = int(counts.min())
                least = cmin if least is None else min(least, cmin)
            delta[j] = best
            small[j] = least
        avg = m / self.part_sizes[0] if self.is_balanced and self.part_sizes[0] > 0 else None
        return DegreeSummary(
            max_degree=delta.get(1, 0),
            delta_j=delta,
            small_delta_j=small,
            edge_count=m,
            average_degree=avg,
        )

    def max_codegree(self) -> int:
        """Delta_{r-1}: the maximum number of edges through a fixed (r-1)-set."""
        m = self.edge_count
        if m == 0:
            return 0
        best = 0
        for combo in itertools.combinations(range(self.r), self.r - 1):
            code = np.zeros(m, dtype=np.int64)
            for pos in combo:
                code = code * self.part_sizes[pos] + self._edges[:, pos]
            counts = np.unique(code, return_counts=True)[1]
            best = max(best, int(counts.max()))
        return best

    # -- structural operations ----------------------------------------------

    def complement(self, cap: int = DEFAULT_COMPLEMENT_CAP) -> "PartiteHypergraph":
        """The r-partite complement: all valid transversal tuples not present here."""
        total = self.total_tuples
        if total > cap:
            raise CapacityError(
                f"complement would hold up to {total} tuples, above the cap of {cap}"
            )
        all_codes = np.arange(total, dtype=np.int64)
        keep = np.ones(total, dtype=bool)
        keep[self.codes()] = False
        return PartiteHypergraph._from_sorted_codes(self.r, self.part_sizes, all_codes[keep])

    def induced(self, subset: "BalancedSubset") -> tuple["PartiteHypergraph", tuple[tuple[int, ...], ...]]:
        """Subgraph on a balanced subset, vertices reindexed 0..s-1 per part.

        Returns (subgraph, mapping) where mapping[j][new_index] = old_index.
        """
        subset.validate_in(self)
        mapping = tuple(tuple(sorted(p)) for p in subset.per_part)
        masks = []
        for j in range(self.r):
            mask = np.zeros(self.part_sizes[j], dtype=bool)
            mask[list(mapping[j])] = True
            masks.append(mask)
        if self.edge_count:
            inside = np.ones(self.edge_count, dtype=bool)
            for j in range(self.r):
                inside &= masks[j][self._edges[:, j]]
            rows = self._edges[inside]
            remapped = np.empty_like(rows)
            for j in range(self.r):
                remapped[:, j] = np.searchsorted(np.asarray(mapping[j]), rows[:, j])
        else:
            remapped = np.empty((0, self.r), dtype=np.int32)
        sub = PartiteHypergraph(self.r, [subset.s] * self.r, remapped)
        return sub, mapping

    def components(self) -> list[list[VertexRef]]:
        """Connected components under the relation "share an edge".

        Components are listed in order of their smallest vertex and each
        component is sorted; isolated vertices form singleton components.
        """
        comp_of: dict[VertexRef, int] = {}
        comps: list[list[VertexRef]] = []
        edge_rows = self._edges
        for v in self.vertices():
            if v in comp_of:
                continue
            cid = len(comps)
            stack = [v]
            comp_of[v] = cid
            members = []
            while stack:
                u = stack.pop()
                members.append(u)
                for eid in self.incident_edge_ids(u):
                    row = edge_rows[eid]
                    for j in range(self.r):
                        w = VertexRef(j, int(row[j]))
                        if w not in comp_of:
                            comp_of[w] = cid
                            stack.append(w)
            comps.append(sorted(members))
        return comps

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartiteHypergraph):
            return NotImplemented
        return (
            self.r == other.r
            and self.part_sizes == other.part_sizes
            and self._edges.shape == other._edges.shape
            and bool(np.array_equal(self._edges, other._edges))
        )

    def __hash__(self):
        return hash((self.r, self.part_sizes, self._edges.tobytes()))

    def __repr__(self) -> str:
        return f"PartiteHypergraph(r={self.r}, part_sizes={self.part_sizes}, m={self.edge_count})"


def _encode_tuples(rows: np.ndarray, part_sizes: Sequence[int]) -> np.ndarray:
    code = np.zeros(len(rows), dtype=np.int64)
    for j, nj in enumerate(part_sizes):
        code = code * nj + rows[:, j].astype(np.int64)
    return code


def _decode_tuples(codes: np.ndarray, part_sizes: Sequence[int]) -> np.ndarray:
    r = len(part_sizes)
    out = np.empty((len(codes), r), dtype=np.int32)
    rem = codes.astype(np.int64, copy=True)
    for j in range(r - 1, -1, -1):
        out[:, j] = rem % part_sizes[j]
        rem //= part_sizes[j]
    return out


@dataclass(frozen=True)
class BalancedSubset:
    """Per-part index sets of one common cardinality s."""

    per_part: tuple[frozenset[int], ...]
    s: int = field(default=-1)

    def __post_init__(self):
        parts = tuple(frozenset(int(i) for i in p) for p in self.per_part)
        object.__setattr__(self, "per_part", parts)
        sizes = {len(p) for p in parts}
        if len(sizes) != 1:
            raise InputError(f"subset is not balanced: per-part sizes {[len(p) for p in parts]}")
        s = sizes.pop()
        if self.s == -1:
            object.__setattr__(self, "s", s)
        elif self.s != s:
            raise InputError(f"declared cardinality {self.s} != actual {s}")
        for p in parts:
            if any(i < 0 for i in p):
                raise InputError("negative vertex index in subset")

    @classmethod
    def from_lists(cls, per_part: Sequence[Iterable[int]]) -> "BalancedSubset":
        return cls(tuple(frozenset(p) for p in per_part))

    def validate_in(self, h: PartiteHypergraph) -> None:
        if len(self.per_part) != h.r:
            raise InputError(f"subset has {len(self.per_part)} parts, hypergraph has {h.r}")
        for j, p in enumerate(self.per_part):
            if p and max(p) >= h.part_sizes[j]:
                raise InputError(f"subset index out of range in part {j}")

    def sorted_lists(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(p)) for p in self.per_part)

    def vertex_refs(self) -> list[VertexRef]:
        out = []
        for j, p in enumerate(self.per_part):
            out.extend(VertexRef(j, i) for i in sorted(p))
        return out


UNCOLORED = -1


class BalancedColoring:
    """Partial or total vertex -> color assignment.

    Stored as one int32 array per part with -1 marking uncolored vertices.
    A coloring is proper when no edge has all r vertices in one common color
    and balanced when every color class meets all parts equally often.
    """

    __slots__ = ("part_sizes", "colors", "num_colors")

    def __init__(self, part_sizes: Sequence[int], colors: Sequence[np.ndarray] | None = None, num_colors: int = 0):
        self.part_sizes = tuple(int(s) for s in part_sizes)
        if colors is None:
            self.colors = [np.full(nj, UNCOLORED, dtype=np.int32) for nj in self.part_sizes]
        else:
            if len(colors) != len(self.part_sizes):
                raise InputError("one color array per part required")
            self.colors = []
            for j, arr in enumerate(colors):
                a = np.asarray(arr, dtype=np.int32)
                if a.shape != (self.part_sizes[j],):
                    raise InputError(f"color array for part {j} has wrong length")
                self.colors.append(a.copy())
        self.num_colors = int(num_colors)

    @classmethod
    def from_assignment(cls, part_sizes: Sequence[int], mapping: Mapping[VertexRef, int], num_colors: int | None = None) -> "BalancedColoring":
        phi = cls(part_sizes)
        top = -1
        for v, c in mapping.items():
            part, index = int(v[0]), int(v[1])
            phi.colors[part][index] = int(c)
            top = max(top, int(c))
        phi.num_colors = top + 1 if num_colors is None else int(num_colors)
        return phi

    @classmethod
    def from_classes(cls, part_sizes: Sequence[int], classes: Sequence[Sequence[Iterable[int]]]) -> "BalancedColoring":
        phi = cls(part_sizes)
        for c, per_part in enumerate(classes):
            for j, idxs in enumerate(per_part):
                for i in idxs:
                    if phi.colors[j][i] != UNCOLORED:
                        raise InputError(f"vertex (part {j}, index {i}) assigned twice")
                    phi.colors[j][i] = c
        phi.num_colors = len(classes)
        return phi

    def color_of(self, v: VertexRef) -> int | None:
        c = int(self.colors[int(v[0])][int(v[1])])
        return None if c == UNCOLORED else c

    def assignment(self) -> dict[VertexRef, int]:
        out = {}
        for j, arr in enumerate(self.colors):
            for i in np.nonzero(arr != UNCOLORED)[0]:
                out[VertexRef(j, int(i))] = int(arr[i])
        return out

    def classes(self) -> list[list[list[int]]]:
        """Per color, per part, sorted member indices."""
        out = [[[] for _ in self.part_sizes] for _ in range(self.num_colors)]
        for j, arr in enumerate(self.colors):
            for i in np.nonzero(arr != UNCOLORED)[0]:
                c = int(arr[i])
                if 0 <= c < self.num_colors:
                    out[c][j].append(int(i))
        return out

    @property
    def domain_size(self) -> int:
        return int(sum(int(np.count_nonzero(arr != UNCOLORED)) for arr in self.colors))

    @property
    def is_total(self) -> bool:
        return self.domain_size == sum(self.part_sizes)

    def colors_used(self) -> list[int]:
        used = set()
        for arr in self.colors:
            used.update(int(c) for c in np.unique(arr) if c != UNCOLORED)
        return sorted(used)

    def without_empty_classes(self) -> "BalancedColoring":
        """Renumber so the colors actually used are exactly 0..k-1."""
        used = self.colors_used()
        remap = {c: k for k, c in enumerate(used)}
        phi = BalancedColoring(self.part_sizes, num_colors=len(used))
        for j, arr in enumerate(self.colors):
            mask = arr != UNCOLORED
            phi.colors[j][mask] = np.asarray([remap[int(c)] for c in arr[mask]], dtype=np.int32)
        return phi

    def copy(self) -> "BalancedColoring":
        return BalancedColoring(self.part_sizes, self.colors, self.num_colors)

    def __repr__(self) -> str:
        return (
            f"BalancedColoring(parts={self.part_sizes}, colored={self.domain_size}/"
            f"{sum(self.part_sizes)}, num_colors={self.num_colors})"
        )


@dataclass(frozen=True)
class ValidationReport:
    """Violations found by validate_coloring; an empty report means valid."""

    monochromatic_edges: tuple[tuple[int, ...], ...]
    unbalanced_colors: tuple[tuple[int, tuple[int, ...]], ...]
    out_of_range_colors: tuple[int, ...]
    uncolored_count: int
    mode: str

    @property
    def ok(self) -> bool:
        return (
            not self.monochromatic_edges
            and not self.unbalanced_colors
            and not self.out_of_range_colors
            and (self.mode != "total" or self.uncolored_count == 0)
        )

    def summary(self) -> str:
        if self.ok:
            return "valid"
        lines = []
        if self.monochromatic_edges:
            shown = ", ".join(str(e) for e in self.monochromatic_edges[:10])
            lines.append(f"{len(self.monochromatic_edges)} monochromatic edge(s): {shown}")
        if self.unbalanced_colors:
            shown = ", ".join(f"color {c} part counts {cnt}" for c, cnt in self.unbalanced_colors[:10])
            lines.append(f"{len(self.unbalanced_colors)} unbalanced class(es): {shown}")
        if self.out_of_range_colors:
            lines.append(f"colors outside [0, num_colors): {sorted(self.out_of_range_colors)[:10]}")
        if self.mode == "total" and self.uncolored_count:
            lines.append(f"{self.uncolored_count} uncolored vertex/vertices in total mode")
        return "; ".join(lines)


def validate_coloring(h: PartiteHypergraph, phi: BalancedColoring, mode: str = "partial") -> ValidationReport:
    """Check properness (weak: no edge entirely in one color) and balance.

    In total mode, uncolored vertices are also violations.  Violations are
    reported as data; this function never raises for an invalid coloring.
    """
    if mode not in ("partial", "total"):
        raise InputError(f"mode must be 'partial' or 'total', got {mode!r}")
    if tuple(phi.part_sizes) != tuple(h.part_sizes):
        raise InputError("coloring and hypergraph have different part sizes")

    mono: list[tuple[int, ...]] = []
    if h.edge_count:
        cols = np.stack([phi.colors[j][h.edge_array[:, j]] for j in range(h.r)], axis=1)
        all_colored = np.all(cols != UNCOLORED, axis=1)
        same = np.all(cols == cols[:, :1], axis=1)
        for eid in np.nonzero(all_colored & same)[0]:
            mono.append(tuple(int(x) for x in h.edge_array[eid]))

    out_of_range: set[int] = set()
    top = -1
    for arr in phi.colors:
        used = arr[arr != UNCOLORED]
        if len(used):
            top = max(top, int(used.max()))
            out_of_range.update(int(c) for c in np.unique(used) if c < 0 or c >= phi.num_colors)
    ncls = max(phi.num_colors, top + 1)

    unbalanced: list[tuple[int, tuple[int, ...]]] = []
    if ncls > 0:
        counts = np.zeros((ncls, h.r), dtype=np.int64)
        for j, arr in enumerate(phi.colors):
            used = arr[arr != UNCOLORED]
            if len(used):
                counts[:, j] = np.bincount(used, minlength=ncls)
        for c in range(ncls):
            row = counts[c]
            if row.min() != row.max():
                unbalanced.append((c, tuple(int(x) for x in row)))

    uncolored = sum(h.part_sizes) - phi.domain_size
    return ValidationReport(
        monochromatic_edges=tuple(mono),
        unbalanced_colors=tuple(unbalanced),
        out_of_range_colors=tuple(sorted(out_of_range)),
        uncolored_count=uncolored,
        mode=mode,
    )
