"""Text formats: "HPG v1" hypergraph files and vertex-coloring files.

HPG v1: line 1 is ``r n_1 ... n_r``, line 2 is ``m``, followed by m lines of
r space-separated 0-based vertex indices (position = part).  Coloring files
hold one ``part index color`` line per colored vertex.  Lines starting with
``#`` are comments and ignored by the readers; the writers emit edges and
assignments in sorted order, so write -> read -> write is byte-stable.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import BalancedColoring, InputError, PartiteHypergraph, UNCOLORED


def dump_hpg(h: PartiteHypergraph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{h.r} " + " ".join(str(s) for s in h.part_sizes))
    lines.append(str(h.edge_count))
    for row in h.edge_array:
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def load_hpg(text: str) -> PartiteHypergraph:
    rows = [ln.strip() for ln in text.splitlines()]
    rows = [ln for ln in rows if ln and not ln.startswith("#")]
    if len(rows) < 2:
        raise InputError("HPG v1 needs a header line and an edge-count line")
    head = rows[0].split()
    r = int(head[0])
    sizes = [int(x) for x in head[1:]]
    if len(sizes) != r:
        raise InputError(f"header declares r={r} but lists {len(sizes)} part sizes")
    m = int(rows[1])
    if len(rows) != 2 + m:
        raise InputError(f"expected {m} edge lines, found {len(rows) - 2}")
    edges = []
    for ln in rows[2:]:
        parts = [int(x) for x in ln.split()]
        if len(parts) != r:
            raise InputError(f"edge line {ln!r} does not have {r} entries")
        edges.append(parts)
    return PartiteHypergraph(r, sizes, edges)


def write_hpg(h: PartiteHypergraph, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(dump_hpg(h, comments))


def read_hpg(path: str | Path) -> PartiteHypergraph:
    return load_hpg(Path(path).read_text())


def dump_coloring(phi: BalancedColoring, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    for j, arr in enumerate(phi.colors):
        for i in np.nonzero(arr != UNCOLORED)[0]:
            lines.append(f"{j} {int(i)} {int(arr[i])}")
    return "\n".join(lines) + "\n" if lines else ""


def load_coloring(text: str, part_sizes: Sequence[int], num_colors: int | None = None) -> BalancedColoring:
    phi = BalancedColoring(part_sizes)
    top = -1
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        fields = ln.split()
        if len(fields) != 3:
            raise InputError(f"coloring line {ln!r} is not 'part index color'")
        part, index, color = (int(x) for x in fields)
        if not 0 <= part < len(phi.part_sizes):
            raise InputError(f"part {part} out of range")
        if not 0 <= index < phi.part_sizes[part]:
            raise InputError(f"index {index} out of range for part {part}")
        if color < 0:
            raise InputError(f"negative color {color}")
        phi.colors[part][index] = color
        top = max(top, color)
    phi.num_colors = top + 1 if num_colors is None else int(num_colors)
    return phi


def write_coloring(phi: BalancedColoring, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(dump_coloring(phi, comments))


def read_coloring(path: str | Path, part_sizes: Sequence[int], num_colors: int | None = None) -> BalancedColoring:
    return load_coloring(Path(path).read_text(), part_sizes, num_colors)
