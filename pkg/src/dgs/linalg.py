"""Exact linear algebra over the integers, the rationals, and GF(2).

Everything is arbitrary precision: integer matrices use Python ints,
rational ones use Fraction, and GF(2) matrices pack each row into one int
bitmask.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple


class SingularMatrixError(ValueError):
    pass


class RankDeficientError(ValueError):
    """Input expected to be full rank was not; `rank` is the detected rank."""

    def __init__(self, message: str, rank: int):
        super().__init__(f"{message} (detected rank {rank})")
        self.rank = rank


class IntMatrix:
    """Dense integer matrix; immutable once constructed."""

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, data: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in data)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        self.data = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls([[0] * c for _ in range(r)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]],
                     nrows: Optional[int] = None) -> "IntMatrix":
        if not cols:
            return cls([[] for _ in range(nrows or 0)])
        n = len(cols[0])
        return cls([[col[i] for col in cols] for i in range(n)])

    def at(self, i: int, j: int) -> int:
        return self.data[i][j]

    def to_rows(self) -> List[List[int]]:
        return [list(r) for r in self.data]

    def column(self, j: int) -> List[int]:
        return [r[j] for r in self.data]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self.data[i][j] for i in range(self.nrows)]
                          for j in range(self.ncols)])

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        bt = other.transpose().data
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in bt]
                          for row in self.data])

    def mul_vec(self, v: Sequence[int]) -> List[int]:
        return [sum(a * b for a, b in zip(row, v)) for row in self.data]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntMatrix) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols})"


def det_bareiss(m: IntMatrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    if not m.is_square():
        raise ValueError("determinant needs a square matrix")
    n = m.nrows
    if n == 0:
        return 1
    a = m.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i = a[i]
            row_k = a[k]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


# --- Smith Normal Form ---------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    """Invariant factors d_1 | d_2 | ... | d_n, optionally with unimodular
    U, V satisfying  input = U @ diag @ V."""

    diag: Tuple[int, ...]
    u: Optional[IntMatrix] = None
    v: Optional[IntMatrix] = None

    def diag_matrix(self) -> IntMatrix:
        n = len(self.diag)
        return IntMatrix([[self.diag[i] if i == j else 0 for j in range(n)]
                          for i in range(n)])


def smith_normal_form(m: IntMatrix, with_transforms: bool = False) -> SnfResult:
    """SNF by elementary row/column operations, smallest-pivot first.

    Requires a square full-rank input; raises RankDeficientError otherwise.
    """
    if not m.is_square():
        raise ValueError("SNF implemented for square matrices only")
    n = m.nrows
    s = m.to_rows()
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if with_transforms else None
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if with_transforms else None

    # Maintain  m = U @ s @ V : each op on s is compensated in U or V.
    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        if u is not None:
            for r in u:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        srow = s[src]
        drow = s[dst]
        for k in range(n):
            drow[k] += q * srow[k]
        if u is not None:
            for r in u:
                r[src] -= q * r[dst]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        if u is not None:
            for r in u:
                r[i] = -r[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        if v is not None:
            v[i], v[j] = v[j], v[i]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for r in s:
            r[dst] += q * r[src]
        if v is not None:
            vs = v[src]
            vd = v[dst]
            for k in range(n):
                vs[k] -= q * vd[k]

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                row = s[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                raise RankDeficientError("matrix is not full rank", t)
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            if s[t][t] < 0:
                negate_row(t)
            p = s[t][t]
            clean = True
            for i in range(t + 1, n):
                if s[i][t]:
                    q = s[i][t] // p
                    if q:
                        add_row(t, i, -q)
                    if s[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if s[t][j]:
                    q = s[t][j] // p
                    if q:
                        add_col(t, j, -q)
                    if s[t][j]:
                        clean = False
            if not clean:
                continue
            # pivot row/col are clear; force divisibility of the rest
            offender = None
            for i in range(t + 1, n):
                row = s[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)

    diag = tuple(s[i][i] for i in range(n))
    return SnfResult(
        diag,
        IntMatrix(u) if u is not None else None,
        IntMatrix(v) if v is not None else None,
    )


# --- characteristic polynomial -------------------------------------------


@dataclass(frozen=True)
class CharPoly:
    """Monic integer polynomial, coefficients highest degree first."""

    coeffs: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __iter__(self):
        return iter(self.coeffs)


def _interpolate_at_integers(ys: Sequence[int]) -> List[int]:
    """Integer coefficients (ascending) of the degree-(len(ys)-1) polynomial
    through (0, ys[0]), (1, ys[1]), ...  via Newton divided differences."""
    n = len(ys) - 1
    level = [Fraction(y) for y in ys]
    newton = [level[0]]
    for k in range(1, n + 1):
        level = [(level[i + 1] - level[i]) / k for i in range(len(level) - 1)]
        newton.append(level[0])
    # Horner over the Newton basis: p = (...((a_n)(x - x_{n-1}) + a_{n-1})...)
    coeffs = [newton[n]]
    for k in range(n - 1, -1, -1):
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= c * k
        nxt[0] += newton[k]
        coeffs = nxt
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("interpolation produced a non-integer coefficient")
        out.append(c.numerator)
    return out


def char_poly(m: IntMatrix) -> CharPoly:
    """Exact det(xI - m) by evaluating at x = 0..n and interpolating."""
    if not m.is_square():
        raise ValueError("characteristic polynomial needs a square matrix")
    n = m.nrows
    ys = []
    for x in range(n + 1):
        shifted = IntMatrix([
            [(x if i == j else 0) - m.at(i, j) for j in range(n)]
            for i in range(n)
        ])
        ys.append(det_bareiss(shifted))
    asc = _interpolate_at_integers(ys)
    coeffs = tuple(reversed(asc))
    if coeffs[0] != 1:
        raise ArithmeticError("characteristic polynomial is not monic")
    return CharPoly(coeffs)


# --- GF(2) ---------------------------------------------------------------


class F2Matrix:
    """Matrix over GF(2); row i is the int bitmask `rows[i]` (bit j = entry)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[int], ncols: int):
        full = (1 << ncols) - 1
        for i, r in enumerate(rows):
            if r & ~full:
                raise ValueError(f"row {i} has bits beyond column {ncols - 1}")
        self.rows = list(rows)
        self.nrows = len(self.rows)
        self.ncols = ncols

    @classmethod
    def from_int_matrix(cls, m: IntMatrix) -> "F2Matrix":
        return cls([sum((x & 1) << j for j, x in enumerate(row)) for row in m.data],
                   m.ncols)

    @classmethod
    def from_int_rows(cls, data: Sequence[Sequence[int]]) -> "F2Matrix":
        ncols = len(data[0]) if data else 0
        return cls([sum((x & 1) << j for j, x in enumerate(row)) for row in data], ncols)

    def mul_vec(self, v: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            out |= ((r & v).bit_count() & 1) << i
        return out

    def transpose(self) -> "F2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                j = (r & -r).bit_length() - 1
                cols[j] |= 1 << i
                r &= r - 1
        return F2Matrix(cols, self.nrows)

    def copy(self) -> "F2Matrix":
        return F2Matrix(list(self.rows), self.ncols)


def _rref_f2(rows: List[int], ncols: int) -> Tuple[List[int], List[int]]:
    """In-place reduced row echelon form; returns (work rows, pivot cols)."""
    work = rows
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(work)):
            if (work[i] >> c) & 1:
                sel = i
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        for i in range(len(work)):
            if i != r and ((work[i] >> c) & 1):
                work[i] ^= work[r]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work, pivots


def rank_f2(m: F2Matrix) -> int:
    _, pivots = _rref_f2(list(m.rows), m.ncols)
    return len(pivots)


def kernel_basis_f2(m: F2Matrix) -> List[int]:
    """Basis of {v : m @ v = 0 over GF(2)}, each vector an int bitmask."""
    work, pivots = _rref_f2(list(m.rows), m.ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for r, c in enumerate(pivots):
            if (work[r] >> free) & 1:
                vec |= 1 << c
        basis.append(vec)
    return basis


def char_poly_f2(m: F2Matrix) -> int:
    """Characteristic polynomial over GF(2) as a coefficient bitmask
    (bit k = coefficient of x^k).  Hessenberg reduction + recurrence."""
    if m.nrows != m.ncols:
        raise ValueError("characteristic polynomial needs a square matrix")
    n = m.nrows
    h = list(m.rows)

    def swap_sym(a: int, b: int) -> None:
        h[a], h[b] = h[b], h[a]
        mask_a, mask_b = 1 << a, 1 << b
        for i in range(n):
            bits = h[i]
            ba = (bits >> a) & 1
            bb = (bits >> b) & 1
            if ba != bb:
                h[i] = bits ^ mask_a ^ mask_b

    for j in range(n - 2):
        if not ((h[j + 1] >> j) & 1):
            for i in range(j + 2, n):
                if (h[i] >> j) & 1:
                    swap_sym(j + 1, i)
                    break
            else:
                continue
        for i in range(j + 2, n):
            if (h[i] >> j) & 1:
                h[i] ^= h[j + 1]            # row_i += row_{j+1}
                for r in range(n):           # col_{j+1} += col_i
                    if (h[r] >> i) & 1:
                        h[r] ^= 1 << (j + 1)

    # p_m = (x + h_mm) p_{m-1} + sum_i h_im (prod subdiag) p_{i-1}  (char 2)
    p = [1]
    for mi in range(1, n + 1):
        hm = h[mi - 1]
        cur = (p[mi - 1] << 1)
        if (hm >> (mi - 1)) & 1:
            cur ^= p[mi - 1]
        prod = 1
        for i in range(mi - 1, 0, -1):
            prod &= (h[i] >> (i - 1)) & 1
            if not prod:
                break
            if (h[i - 1] >> (mi - 1)) & 1:
                cur ^= p[i - 1]
        p.append(cur)
    return p[n]


# --- rational matrices ----------------------------------------------------


class RationalMatrix:
    """Dense matrix of Fractions (always stored in lowest terms)."""

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, data: Sequence[Sequence[Fraction]]):
        rows = tuple(tuple(Fraction(x) for x in r) for r in data)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        self.data = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0

    @classmethod
    def from_int_matrix(cls, m: IntMatrix) -> "RationalMatrix":
        return cls([[Fraction(x) for x in row] for row in m.data])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)])

    @property
    def level(self) -> int:
        """Least positive integer making every entry integral."""
        out = 1
        for row in self.data:
            for x in row:
                out = lcm(out, x.denominator)
        return out

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.data for x in row)

    def at(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([[self.data[i][j] for i in range(self.nrows)]
                               for j in range(self.ncols)])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        bt = other.transpose().data
        return RationalMatrix([[sum(a * b for a, b in zip(row, col)) for col in bt]
                               for row in self.data])

    def mul_vec(self, v: Sequence[Fraction]) -> List[Fraction]:
        return [sum(a * b for a, b in zip(row, v)) for row in self.data]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalMatrix) and self.data == other.data

    def __repr__(self) -> str:
        return f"RationalMatrix({self.nrows}x{self.ncols})"


def solve_rational(a: IntMatrix, b: IntMatrix) -> RationalMatrix:
    """Exact solution X of a @ X = b over the rationals."""
    if not a.is_square():
        raise ValueError("coefficient matrix must be square")
    if a.nrows != b.nrows:
        raise ValueError("dimension mismatch")
    n = a.nrows
    w = [[Fraction(a.at(i, j)) for j in range(n)] +
         [Fraction(b.at(i, j)) for j in range(b.ncols)] for i in range(n)]
    width = n + b.ncols
    for c in range(n):
        sel = None
        for i in range(c, n):
            if w[i][c]:
                sel = i
                break
        if sel is None:
            raise SingularMatrixError("coefficient matrix is singular")
        w[c], w[sel] = w[sel], w[c]
        inv = 1 / w[c][c]
        w[c] = [x * inv for x in w[c]]
        for i in range(n):
            if i != c and w[i][c]:
                f = w[i][c]
                w[i] = [x - f * y for x, y in zip(w[i], w[c])]
    return RationalMatrix([row[n:width] for row in w])
