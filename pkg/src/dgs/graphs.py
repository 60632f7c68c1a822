"""Simple undirected graphs: representation, codecs, sampling, switching.

Vertices are 0..n-1.  Adjacency is stored as one int bitmask per row, which
keeps the mod-2 linear algebra elsewhere in the package cheap.  Graphs are
immutable; every operation returns a new instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .rng import SplitMix64


class Graph6Error(ValueError):
    """Malformed graph6 record; `offset` is the byte position at fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class AdjacencyTextError(ValueError):
    """Malformed adjacency-matrix text; carries 0-based `row` and `col`."""

    def __init__(self, message: str, row: Optional[int] = None, col: Optional[int] = None):
        where = ""
        if row is not None:
            where = f" at row {row}" + (f", col {col}" if col is not None else "")
        super().__init__(message + where)
        self.row = row
        self.col = col


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Sequence[int]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(rows) != n:
            raise ValueError("row count does not match vertex count")
        rows = tuple(rows)
        full = (1 << n) - 1
        for i, r in enumerate(rows):
            if r & ~full:
                raise ValueError(f"row {i} has bits outside 0..{n - 1}")
            if (r >> i) & 1:
                raise ValueError(f"self-loop at vertex {i}")
        for i in range(n):
            for j in range(i + 1, n):
                if ((rows[i] >> j) & 1) != ((rows[j] >> i) & 1):
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")
        self.n = n
        self.rows = rows

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def from_adjacency_rows(cls, mat: Sequence[Sequence[int]]) -> "Graph":
        n = len(mat)
        rows = []
        for r in mat:
            if len(r) != n:
                raise ValueError("adjacency matrix must be square")
            rows.append(sum((1 << j) for j, x in enumerate(r) if x))
        return cls(n, rows)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degree_sequence(self) -> Tuple[int, ...]:
        return tuple(sorted(r.bit_count() for r in self.rows))

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> Iterator[Tuple[int, int]]:
        for u in range(self.n):
            m = self.rows[u] >> (u + 1)
            v = u + 1
            while m:
                if m & 1:
                    yield (u, v)
                m >>= 1
                v += 1

    def neighbors(self, v: int) -> List[int]:
        return [u for u in range(self.n) if (self.rows[v] >> u) & 1]

    def adjacency_rows(self) -> List[List[int]]:
        """Dense 0/1 matrix, row-major."""
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [(~r & full) & ~(1 << i) for i, r in enumerate(self.rows)])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image graph where old vertex v becomes perm[v]."""
        rows = [0] * self.n
        for u, v in self.edges():
            a, b = perm[u], perm[v]
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        return Graph(self.n, rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count()})"


def complement(g: Graph) -> Graph:
    return g.complement()


# --- graph6 codec ------------------------------------------------------
#
# Standard format: byte values 63..126 carry 6 bits each.  After the size
# header, the upper triangle is packed column by column ((0,1), (0,2),
# (1,2), (0,3), ...), most significant bit first, zero-padded.


def _pair_order(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for j in range(1, n) for i in range(j)]


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = s.encode("ascii", errors="replace")
    if not data:
        raise Graph6Error("empty graph6 record", 0)
    for off, b in enumerate(data):
        if b < 63 or b > 126:
            raise Graph6Error(f"byte {b!r} outside graph6 alphabet", off)

    if data[0] != 126:
        n = data[0] - 63
        pos = 1
    else:
        if len(data) >= 2 and data[1] == 126:
            raise Graph6Error("8-byte size header (n > 258047) not supported", 0)
        if len(data) < 4:
            raise Graph6Error("truncated size header", len(data))
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        if n < 63:
            raise Graph6Error("non-canonical long size header for n < 63", 0)
        pos = 4

    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - pos < nbytes:
        raise Graph6Error(
            f"truncated bit payload: need {nbytes} bytes, have {len(data) - pos}",
            len(data),
        )
    if len(data) - pos > nbytes:
        raise Graph6Error("trailing bytes after bit payload", pos + nbytes)

    bits = 0
    for k in range(nbytes):
        bits = (bits << 6) | (data[pos + k] - 63)
    pad = nbytes * 6 - nbits
    if pad and (bits & ((1 << pad) - 1)):
        raise Graph6Error("non-canonical padding bits", pos + nbytes - 1)
    bits >>= pad

    rows = [0] * n
    order = _pair_order(n)
    for k, (i, j) in enumerate(order):
        if (bits >> (nbits - 1 - k)) & 1:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return Graph(n, rows)


def encode_graph6(g: Graph) -> str:
    n = g.n
    if n > 258047:
        raise ValueError("graph6 encoding supported up to n = 258047")
    if n < 63:
        head = bytes([n + 63])
    else:
        head = bytes([126, 63 + (n >> 12), 63 + ((n >> 6) & 63), 63 + (n & 63)])
    nbits = n * (n - 1) // 2
    bits = 0
    for i, j in _pair_order(n):
        bits = (bits << 1) | (1 if g.has_edge(i, j) else 0)
    pad = (6 - nbits % 6) % 6
    bits <<= pad
    nbytes = (nbits + 5) // 6
    payload = bytes(63 + ((bits >> (6 * (nbytes - 1 - k))) & 63) for k in range(nbytes))
    return (head + payload).decode("ascii")


# --- adjacency-matrix text ---------------------------------------------


def parse_adjacency_text(text: str) -> Graph:
    """Parse a square 0/1 matrix given as whitespace/comma separated rows."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise AdjacencyTextError("empty adjacency matrix")
    mat: List[List[int]] = []
    for i, ln in enumerate(lines):
        tokens = ln.replace(",", " ").split()
        row = []
        for j, tok in enumerate(tokens):
            if tok == "0":
                row.append(0)
            elif tok == "1":
                row.append(1)
            else:
                raise AdjacencyTextError(f"non-binary token {tok!r}", i, j)
        mat.append(row)
    n = len(mat)
    for i, row in enumerate(mat):
        if len(row) != n:
            raise AdjacencyTextError(
                f"matrix is not square: row has {len(row)} entries, expected {n}", i
            )
    for i in range(n):
        if mat[i][i] != 0:
            raise AdjacencyTextError("nonzero diagonal entry", i, i)
        for j in range(i + 1, n):
            if mat[i][j] != mat[j][i]:
                raise AdjacencyTextError("matrix is not symmetric", i, j)
    return Graph.from_adjacency_rows(mat)


# --- random graphs ------------------------------------------------------


def random_gnp_half(n: int, seed: int) -> Graph:
    """G(n, 1/2) sample: one SplitMix64 word per vertex pair, in
    lexicographic pair order (0,1), (0,2), ..., (n-2,n-1); the word's low
    bit decides the edge.  Same (n, seed) gives the same graph everywhere.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    stream = SplitMix64(seed)
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if stream.next_bit():
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return Graph(n, rows)


# --- isomorphism (small n) ----------------------------------------------


def _refine_colors(g: Graph) -> List[int]:
    """Iterated neighborhood refinement; returns a stable color per vertex."""
    colors = [g.degree(v) for v in range(g.n)]
    for _ in range(g.n):
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in g.neighbors(v))))
            for v in range(g.n)
        ]
        palette = {s: c for c, s in enumerate(sorted(set(sigs)))}
        new = [palette[s] for s in sigs]
        if new == colors:
            break
        colors = new
    return colors


def is_isomorphic(g: Graph, h: Graph) -> bool:
    """Exact isomorphism test by pruned backtracking; meant for small n."""
    if g.n != h.n:
        return False
    if g.edge_count() != h.edge_count():
        return False
    cg, ch = _refine_colors(g), _refine_colors(h)
    if sorted(cg) != sorted(ch):
        return False

    n = g.n
    by_color: dict = {}
    for v in range(n):
        by_color.setdefault(ch[v], []).append(v)
    # most-constrained-first: rare colors, then high degree
    color_freq = {c: len(vs) for c, vs in by_color.items()}
    order = sorted(range(n), key=lambda v: (color_freq[cg[v]], -g.degree(v), v))

    mapping = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for w in by_color.get(cg[v], ()):
            if used[w]:
                continue
            ok = True
            for prev in order[:k]:
                if g.has_edge(v, prev) != h.has_edge(w, mapping[prev]):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = w
            used[w] = True
            if extend(k + 1):
                return True
            used[w] = False
            mapping[v] = -1
        return False

    return extend(0)


def canonical_edge_code(g: Graph) -> int:
    """Minimum upper-triangle edge bitstring over all vertex orderings.

    Bits are taken in graph6 column order with the first pair most
    significant, so the code is comparable as a plain integer.  Exponential
    in the worst case; fine for the n <= 7 enumeration it serves.
    """
    n = g.n
    if n <= 1:
        return 0
    best: List[Optional[List[int]]] = [None]  # chunks per level, or None

    placed: List[int] = []
    chunks: List[int] = []

    def chunk_for(v: int, m: int) -> int:
        c = 0
        for i in range(m):
            c = (c << 1) | (1 if g.has_edge(placed[i], v) else 0)
        return c

    def dfs(m: int) -> None:
        if m == n:
            if best[0] is None or chunks < best[0]:
                best[0] = chunks.copy()
            return
        cands = [v for v in range(n) if v not in placed]
        scored = sorted((chunk_for(v, m), v) for v in cands)
        for c, v in scored:
            chunks.append(c)
            # compare the whole prefix against the current best each time:
            # best may have changed while exploring an earlier subtree
            if best[0] is not None and chunks > best[0][:m]:
                chunks.pop()
                break  # candidates are sorted; the rest are worse too
            placed.append(v)
            dfs(m + 1)
            placed.pop()
            chunks.pop()

    for v0 in range(n):
        placed.append(v0)
        dfs(1)
        placed.pop()

    code = 0
    assert best[0] is not None
    for m, c in enumerate(best[0], start=1):
        code = (code << m) | c
    return code


# --- Godsil-McKay switching (single cell) --------------------------------


@dataclass(frozen=True)
class GmPartition:
    """A switching cell C plus the remaining vertices.

    Valid when |C| is even and >= 4, C induces a regular subgraph, and every
    outside vertex has 0, |C|/2, or |C| neighbors inside C.
    """

    cell: Tuple[int, ...]
    outside: Tuple[int, ...]


def _cell_ok(g: Graph, cell: Sequence[int]) -> bool:
    mask = 0
    for v in cell:
        mask |= 1 << v
    degs = {(g.rows[v] & mask).bit_count() for v in cell}
    if len(degs) != 1:
        return False
    c = len(cell)
    for v in range(g.n):
        if (mask >> v) & 1:
            continue
        k = (g.rows[v] & mask).bit_count()
        if k not in (0, c // 2, c):
            return False
    return True


def is_valid_gm_partition(g: Graph, p: GmPartition) -> bool:
    c = len(p.cell)
    if c < 4 or c % 2:
        return False
    if sorted(p.cell + p.outside) != list(range(g.n)):
        return False
    return _cell_ok(g, p.cell)


def find_gm_partitions(g: Graph, cell_sizes: Sequence[int] = (4,)) -> List[GmPartition]:
    """All switching cells of the requested even sizes, by subset scan."""
    out: List[GmPartition] = []
    for c in cell_sizes:
        if c < 4 or c % 2:
            raise ValueError("cell sizes must be even and at least 4")
        if c > g.n:
            continue
        for cell in combinations(range(g.n), c):
            if _cell_ok(g, cell):
                rest = tuple(v for v in range(g.n) if v not in cell)
                out.append(GmPartition(cell, rest))
    return out


def gm_switch(g: Graph, p: GmPartition) -> Graph:
    """Complement the edges between C and every outside vertex that sees
    exactly half of C.  Preserves the spectra of the graph and of its
    complement; applying the same switch twice restores the input.
    """
    if not is_valid_gm_partition(g, p):
        raise ValueError("partition does not satisfy the switching conditions")
    mask = 0
    for v in p.cell:
        mask |= 1 << v
    half = len(p.cell) // 2
    rows = list(g.rows)
    for v in p.outside:
        if (rows[v] & mask).bit_count() == half:
            flipped = (rows[v] & mask) ^ mask
            rows[v] = (rows[v] & ~mask) | flipped
            for u in p.cell:
                rows[u] ^= 1 << v  # exact flip: u-v toggles for every u in C
    return Graph(g.n, rows)
