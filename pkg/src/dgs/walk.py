"""Walk matrix construction and its arithmetic companions.

For a graph with adjacency matrix A and all-one vector e, the walk matrix
is W = [e, Ae, ..., A^(n-1)e]; entry (i, j) counts walks of length j-1
starting at vertex i.  The even-power variant W1 = [e, A^2 e, ..., A^(2n-2)e]
and the half Gram matrices (W^T W1)/2 and (W^T Wtil1)/2 drive the
certification tests; all of them are integral because e^T A^l e is even for
every l >= 1.

When n is odd the (1,1) entry of W^T W1 would be n, which is odd, so the
first column of W1 is replaced by 2e.  The `w1_first_col_doubled` flag
records this.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple, Tuple

from .graphs import Graph
from .linalg import F2Matrix, IntMatrix, det_bareiss


class InternalInvariantError(RuntimeError):
    """A mathematically guaranteed property failed; indicates a bug."""


def power_vectors(g: Graph, top: int) -> List[List[int]]:
    """[A^0 e, A^1 e, ..., A^top e] as exact integer vectors."""
    n = g.n
    vecs = [[1] * n]
    for _ in range(top):
        prev = vecs[-1]
        nxt = []
        for i in range(n):
            row = g.rows[i]
            acc = 0
            while row:
                u = (row & -row).bit_length() - 1
                acc += prev[u]
                row &= row - 1
            nxt.append(acc)
        vecs.append(nxt)
    return vecs


def walk_matrix(g: Graph) -> IntMatrix:
    return IntMatrix.from_columns(power_vectors(g, g.n - 1))


def det_walk(g: Graph) -> int:
    """det(W); zero exactly when the graph is not controllable."""
    return det_bareiss(walk_matrix(g))


class Valuation2(NamedTuple):
    """x = sign * 2^alpha * odd_part with odd_part odd and positive."""

    alpha: int
    odd_part: int
    sign: int


def valuation2(x: int) -> Valuation2:
    if x == 0:
        raise ValueError("2-adic valuation of zero is undefined")
    sign = 1 if x > 0 else -1
    ax = abs(x)
    alpha = (ax & -ax).bit_length() - 1
    return Valuation2(alpha, ax >> alpha, sign)


@dataclass(frozen=True)
class WalkBundle:
    """The walk matrix and every derived matrix the certification needs.

    half_gram is the n x n matrix (W^T W1)/2 whose mod-2 kernel feeds the
    extended test; half_gram_slim is (W^T Wtil1)/2, the full-column-rank
    matrix behind the strongest rank identity.
    """

    n: int
    w: IntMatrix
    w1: IntMatrix
    wtil: IntMatrix
    wtil1: IntMatrix
    half_gram: IntMatrix
    half_gram_slim: IntMatrix
    w1_first_col_doubled: bool

    @property
    def k(self) -> int:
        return (self.n + 1) // 2


def _halve(m: IntMatrix, what: str) -> IntMatrix:
    rows = []
    for row in m.data:
        out = []
        for x in row:
            if x & 1:
                raise InternalInvariantError(f"{what} has an odd entry; it must be even")
            out.append(x >> 1)
        rows.append(out)
    return IntMatrix(rows)


def build_walk_bundle(g: Graph) -> WalkBundle:
    n = g.n
    k = (n + 1) // 2
    vecs = power_vectors(g, max(2 * n - 2, n - 1))
    w = IntMatrix.from_columns(vecs[:n])

    even_cols = [vecs[2 * j] for j in range(n)]
    doubled = bool(n % 2)
    if doubled:
        even_cols[0] = [2] * n
    w1 = IntMatrix.from_columns(even_cols)

    if n % 2 == 0:
        wtil = IntMatrix.from_columns(vecs[:k], nrows=n)
        wtil1 = IntMatrix.from_columns([vecs[2 * j] for j in range(k)], nrows=n)
    else:
        wtil = IntMatrix.from_columns(vecs[1:k], nrows=n)
        wtil1 = IntMatrix.from_columns([vecs[2 * j] for j in range(1, k)], nrows=n)

    wt = w.transpose()
    half_gram = _halve(wt @ w1, "W^T W1")
    half_gram_slim = _halve(wt @ wtil1, "W^T Wtil1")
    return WalkBundle(n, w, w1, wtil, wtil1, half_gram, half_gram_slim, doubled)


# --- fast mod-2 / mod-4 paths --------------------------------------------
#
# The certification only ever inspects these matrices mod 2, and the halved
# Gram entries mod 2 are determined by the raw products mod 4.  Working with
# small residues keeps large-n property sweeps cheap; the exact bundle above
# is the reference the fast path is tested against.


def power_vectors_f2(g: Graph, top: int) -> List[int]:
    """[A^j e mod 2] for j = 0..top, each a bitmask over vertices."""
    n = g.n
    vecs = [(1 << n) - 1]
    for _ in range(top):
        prev = vecs[-1]
        cur = 0
        for i in range(n):
            if (g.rows[i] & prev).bit_count() & 1:
                cur |= 1 << i
        vecs.append(cur)
    return vecs


def _from_column_masks(cols: List[int], nrows: int) -> F2Matrix:
    rows = []
    for i in range(nrows):
        m = 0
        for j, c in enumerate(cols):
            m |= ((c >> i) & 1) << j
        rows.append(m)
    return F2Matrix(rows, len(cols))


def walk_matrix_f2(g: Graph) -> F2Matrix:
    return _from_column_masks(power_vectors_f2(g, g.n - 1), g.n)


def walk_even_matrix_f2(g: Graph, repaired: bool) -> F2Matrix:
    """W1 mod 2.  `repaired` replaces the first column e by 2e (= 0 mod 2),
    matching the integral half-Gram construction; the raw variant keeps e."""
    n = g.n
    vecs = power_vectors_f2(g, 2 * n - 2)
    cols = [vecs[2 * j] for j in range(n)]
    if repaired and n % 2:
        cols[0] = 0
    return _from_column_masks(cols, n)


def wtil_f2(g: Graph) -> F2Matrix:
    n, k = g.n, (g.n + 1) // 2
    vecs = power_vectors_f2(g, k - 1)
    cols = vecs[:k] if n % 2 == 0 else vecs[1:k]
    return _from_column_masks(cols, n)


def wtil1_f2(g: Graph) -> F2Matrix:
    n, k = g.n, (g.n + 1) // 2
    vecs = power_vectors_f2(g, 2 * k - 2)
    if n % 2 == 0:
        cols = [vecs[2 * j] for j in range(k)]
    else:
        cols = [vecs[2 * j] for j in range(1, k)]
    return _from_column_masks(cols, n)


def _power_vectors_mod4(g: Graph, top: int) -> List[List[int]]:
    n = g.n
    vecs = [[1] * n]
    for _ in range(top):
        prev = vecs[-1]
        nxt = []
        for i in range(n):
            row = g.rows[i]
            acc = 0
            while row:
                u = (row & -row).bit_length() - 1
                acc += prev[u]
                row &= row - 1
            nxt.append(acc & 3)
        vecs.append(nxt)
    return vecs


def _half_dot_mod2(a: List[int], b: List[int], what: str) -> int:
    s = 0
    for x, y in zip(a, b):
        s += x * y
    if s & 1:
        raise InternalInvariantError(f"{what} has an odd entry; it must be even")
    return (s >> 1) & 1


def half_gram_f2(g: Graph) -> F2Matrix:
    """(W^T W1)/2 mod 2 without big integers (products taken mod 4)."""
    n = g.n
    vecs = _power_vectors_mod4(g, 2 * n - 2)
    w_cols = vecs[:n]
    w1_cols = [vecs[2 * j] for j in range(n)]
    if n % 2:
        w1_cols[0] = [2] * n
    rows = []
    for i in range(n):
        m = 0
        for j in range(n):
            m |= _half_dot_mod2(w_cols[i], w1_cols[j], "W^T W1") << j
        rows.append(m)
    return F2Matrix(rows, n)


def half_gram_slim_f2(g: Graph) -> F2Matrix:
    """(W^T Wtil1)/2 mod 2 without big integers."""
    n, k = g.n, (g.n + 1) // 2
    vecs = _power_vectors_mod4(g, max(2 * k - 2, n - 1))
    w_cols = vecs[:n]
    if n % 2 == 0:
        w1_cols = [vecs[2 * j] for j in range(k)]
    else:
        w1_cols = [vecs[2 * j] for j in range(1, k)]
    rows = []
    for i in range(n):
        m = 0
        for j in range(len(w1_cols)):
            m |= _half_dot_mod2(w_cols[i], w1_cols[j], "W^T Wtil1") << j
        rows.append(m)
    return F2Matrix(rows, len(w1_cols))
