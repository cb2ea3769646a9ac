"""graph6 and DIMACS edge-format export/import, plus the vertex-label sidecar.

graph6 packs the upper triangle column by column (bit for (i, j), i < j,
sits at position j(j-1)/2 + i) into 6-bit groups offset by 63, after an
``N(n)`` size header.  Everything here works on ``(E, 2)`` edge arrays so
the same readers serve tests and external tools.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .codegraph import GraphHandle

__all__ = [
    "graph6_encode",
    "graph6_decode",
    "dimacs_encode",
    "dimacs_decode",
    "label_lines",
    "write_graph",
]

FORMATS = ("graph6", "dimacs")


def _size_header(n: int) -> bytes:
    if n < 0:
        raise ValueError("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise ValueError("graph6 cannot encode more than 2^36 - 1 vertices")


def _canonical_edges(edges: np.ndarray, n: int) -> np.ndarray:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(e) and (e.min() < 0 or e.max() >= n):
        raise ValueError("edge endpoint out of range")
    if (e[:, 0] == e[:, 1]).any():
        raise ValueError("graph6 has no loops")
    lo, hi = np.minimum(e[:, 0], e[:, 1]), np.maximum(e[:, 0], e[:, 1])
    return np.unique(np.stack([lo, hi], axis=1), axis=0)


def graph6_encode(n: int, edges: np.ndarray) -> bytes:
    """One graph6 line (trailing newline included)."""
    e = _canonical_edges(edges, n)
    total = n * (n - 1) // 2
    groups = np.zeros(-(-total // 6), dtype=np.uint8)
    pos = e[:, 1] * (e[:, 1] - 1) // 2 + e[:, 0]
    np.bitwise_or.at(groups, pos // 6, (1 << (5 - pos % 6)).astype(np.uint8))
    return _size_header(n) + (groups + 63).tobytes() + b"\n"


def graph6_decode(data: bytes) -> tuple[int, np.ndarray]:
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    raw = np.frombuffer(data, dtype=np.uint8)
    if len(raw) == 0 or (raw < 63).any() or (raw > 126).any():
        raise ValueError("not a graph6 string")
    vals = raw.astype(np.int64) - 63
    if raw[0] != 126:
        n, body = int(vals[0]), vals[1:]
    elif len(raw) > 1 and raw[1] == 126:
        n, body = int(sum(int(v) << (6 * (5 - i)) for i, v in enumerate(vals[2:8]))), vals[8:]
    else:
        n, body = int(sum(int(v) << (6 * (2 - i)) for i, v in enumerate(vals[1:4]))), vals[4:]
    total = n * (n - 1) // 2
    if len(body) != -(-total // 6):
        raise ValueError(f"graph6 body has {len(body)} bytes, expected {-(-total // 6)} for n={n}")
    bits = ((body[:, None] >> np.arange(5, -1, -1)) & 1).ravel()
    if bits[total:].any():
        raise ValueError("non-zero padding bits")
    pos = np.flatnonzero(bits[:total])
    j = ((1 + np.sqrt(1 + 8 * pos.astype(np.float64))) / 2).astype(np.int64)
    # float rounding guard
    j -= j * (j - 1) // 2 > pos
    j += (j + 1) * j // 2 <= pos
    i = pos - j * (j - 1) // 2
    edges = np.stack([i, j], axis=1)
    return n, edges[np.lexsort((edges[:, 1], edges[:, 0]))]


def dimacs_encode(n: int, edges: np.ndarray, comments: tuple[str, ...] = ()) -> str:
    e = _canonical_edges(edges, n)
    lines = [f"c {c}" for c in comments]
    lines.append(f"p edge {n} {len(e)}")
    lines.extend(f"e {a + 1} {b + 1}" for a, b in e.tolist())
    return "\n".join(lines) + "\n"


def dimacs_decode(text: str) -> tuple[int, np.ndarray]:
    n = m = None
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ValueError(f"line {lineno}: bad problem line")
            n, m = int(parts[2]), int(parts[3])
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {lineno}: edge before problem line")
            a, b = int(parts[1]), int(parts[2])
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"line {lineno}: vertex out of range")
            pairs.append((a - 1, b - 1))
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise ValueError("missing problem line")
    edges = _canonical_edges(np.array(pairs, dtype=np.int64), n)
    if len(edges) != m:
        raise ValueError(f"problem line declares {m} edges, found {len(edges)}")
    return n, edges


def label_lines(g: GraphHandle) -> str:
    return "".join(X.serialize() + "\n" for X in g.vertices)


def write_graph(g: GraphHandle, out: str | Path, fmt: str = "graph6") -> tuple[Path, Path]:
    """Write the graph and its ``.labels`` sidecar; returns both paths."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
    out = Path(out)
    p = g.params
    if fmt == "graph6":
        out.write_bytes(graph6_encode(g.num_vertices, g.edge_array()))
    else:
        note = f"grassmann graph n={p.n} k={p.k} q={p.q} variant={g.variant}"
        out.write_text(dimacs_encode(g.num_vertices, g.edge_array(), (note,)))
    labels = out.with_name(out.name + ".labels")
    labels.write_text(label_lines(g))
    return out, labels
