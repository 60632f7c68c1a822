"""Ground truth at small orders, plus forensics for cospectral pairs.

The oracle enumerates every graph on up to 7 vertices (up to isomorphism),
groups them by exact generalized-spectrum key, and cross-checks the
certification: a certified graph must never share its key with a
non-isomorphic graph.  For a concrete cospectral pair it reconstructs the
rational orthogonal matrix Q linking the two adjacency matrices and
measures its level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .arith import FactorBudget, factor_within_budget
from .criterion import certify
from .graphs import Graph, canonical_edge_code, encode_graph6
from .linalg import (
    IntMatrix,
    RationalMatrix,
    char_poly,
    det_bareiss,
    smith_normal_form,
    solve_rational,
)
from .walk import walk_matrix

ENUMERATION_LIMIT = 7


@dataclass(frozen=True)
class SpectrumKey:
    """Exact characteristic polynomials of a graph and of its complement."""

    poly: Tuple[int, ...]
    poly_complement: Tuple[int, ...]


def adjacency_matrix(g: Graph) -> IntMatrix:
    return IntMatrix(g.adjacency_rows())


def spectrum_key(g: Graph) -> SpectrumKey:
    return SpectrumKey(
        char_poly(adjacency_matrix(g)).coeffs,
        char_poly(adjacency_matrix(g.complement())).coeffs,
    )


# --- exhaustive enumeration ----------------------------------------------

_reps_cache: Dict[int, List[Graph]] = {}


def enumerate_graphs(n: int) -> List[Graph]:
    """All non-isomorphic graphs on n vertices (n <= 7), one canonical
    representative each, generated by vertex augmentation."""
    if n < 1:
        raise ValueError("need at least one vertex")
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"exhaustive enumeration capped at n = {ENUMERATION_LIMIT}")
    if n in _reps_cache:
        return _reps_cache[n]
    if n == 1:
        reps = [Graph(1, [0])]
    else:
        seen: Dict[int, Graph] = {}
        for parent in enumerate_graphs(n - 1):
            for nb in range(1 << (n - 1)):
                rows = [
                    r | (((nb >> i) & 1) << (n - 1))
                    for i, r in enumerate(parent.rows)
                ]
                rows.append(nb)
                child = Graph(n, rows)
                code = canonical_edge_code(child)
                if code not in seen:
                    seen[code] = child
        reps = [seen[c] for c in sorted(seen)]
    _reps_cache[n] = reps
    return reps


@dataclass(frozen=True)
class CospectralClass:
    key: SpectrumKey
    members: Tuple[Graph, ...]


def enumerate_cospectral_classes(n: int) -> List[CospectralClass]:
    """Partition of the order-n graphs (up to isomorphism) by generalized
    spectrum.  Classes with two or more members are exactly the graphs not
    determined by their generalized spectrum at this order."""
    groups: Dict[SpectrumKey, List[Graph]] = {}
    for g in enumerate_graphs(n):
        groups.setdefault(spectrum_key(g), []).append(g)
    classes = [
        CospectralClass(key, tuple(sorted(members, key=canonical_edge_code)))
        for key, members in groups.items()
    ]
    classes.sort(key=lambda c: (c.key.poly, c.key.poly_complement))
    return classes


# --- Q reconstruction -----------------------------------------------------


@dataclass(frozen=True)
class QReconstruction:
    """The rational orthogonal matrix with W(g)^T Q = W(h), verified."""

    q: RationalMatrix
    level: int
    orthogonal: bool
    fixes_all_ones: bool
    conjugates_adjacency: bool

    @property
    def verified(self) -> bool:
        return self.orthogonal and self.fixes_all_ones and self.conjugates_adjacency


def reconstruct_q(g: Graph, h: Graph) -> QReconstruction:
    """Solve Q^T W(g) = W(h) exactly and verify Q^T Q = I, Qe = e and
    Q^T A(g) Q = A(h).  Requires g controllable; for a genuine pair of
    generalized-cospectral graphs all three identities must verify, so a
    failure flags an implementation bug, not a mathematical discovery."""
    if g.n != h.n:
        raise ValueError("graphs must have the same order")
    wg = walk_matrix(g)
    if det_bareiss(wg) == 0:
        raise ValueError("first graph is not controllable")
    q = solve_rational(wg.transpose(), walk_matrix(h).transpose())

    qt = q.transpose()
    orthogonal = (qt @ q) == RationalMatrix.identity(g.n)
    from fractions import Fraction

    ones = [Fraction(1)] * g.n
    fixes = q.mul_vec(ones) == ones
    ag = RationalMatrix.from_int_matrix(adjacency_matrix(g))
    ah = RationalMatrix.from_int_matrix(adjacency_matrix(h))
    conjugates = (qt @ ag @ q) == ah
    return QReconstruction(q, q.level, orthogonal, fixes, conjugates)


def gm_switch_matrix(cell: Tuple[int, ...], n: int) -> RationalMatrix:
    """The switching similarity: (2/|C|) J - I on the cell, identity off it."""
    from fractions import Fraction

    c = len(cell)
    inside = set(cell)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i in inside and j in inside:
                row.append(Fraction(2, c) - (1 if i == j else 0))
            else:
                row.append(Fraction(1 if i == j else 0))
        rows.append(row)
    return RationalMatrix(rows)


def level_prime_support(q: RationalMatrix, budget: Optional[FactorBudget] = None) -> Set[int]:
    """Primes dividing the level of q, factoring within the budget (levels
    arising here are tiny, so the budget is never the binding constraint)."""
    level = q.level
    if level == 1:
        return set()
    factors, _residual = factor_within_budget(level, budget)
    return set(factors)


def level_divides_dn(g: Graph, level: int) -> bool:
    """Whether level | d_n for the walk matrix of g."""
    diag = smith_normal_form(walk_matrix(g)).diag
    return diag[-1] % level == 0


# --- summary report -------------------------------------------------------


@dataclass(frozen=True)
class OracleSummary:
    n: int
    graph_count: int
    class_count: int
    nontrivial_classes: Tuple[CospectralClass, ...]
    certified_dgs: int
    violations: Tuple[str, ...]  # graph6 of certified graphs with a mate


def summarize_order(n: int, budget: Optional[FactorBudget] = None) -> OracleSummary:
    classes = enumerate_cospectral_classes(n)
    nontrivial = tuple(c for c in classes if len(c.members) >= 2)
    certified = 0
    violations: List[str] = []
    for c in classes:
        for g in c.members:
            verdict = certify(g, budget)
            if verdict.is_dgs:
                certified += 1
                if len(c.members) >= 2:
                    violations.append(encode_graph6(g))
    total = sum(len(c.members) for c in classes)
    return OracleSummary(n, total, len(classes), nontrivial, certified, tuple(violations))


def format_oracle_report(summaries: List[OracleSummary]) -> str:
    """Fixed-width table, one row per order, then one line per class of
    mutually cospectral non-isomorphic graphs (as graph6)."""
    lines = [
        f"{'n':>2}  {'graphs':>7}  {'classes':>7}  {'mates':>6}  "
        f"{'certified':>9}  {'violations':>10}"
    ]
    for s in summaries:
        lines.append(
            f"{s.n:>2}  {s.graph_count:>7}  {s.class_count:>7}  "
            f"{len(s.nontrivial_classes):>6}  {s.certified_dgs:>9}  "
            f"{len(s.violations):>10}"
        )
    for s in summaries:
        for c in s.nontrivial_classes:
            mates = " ".join(encode_graph6(g) for g in c.members)
            lines.append(f"cospectral n={s.n}: {mates}")
    return "\n".join(lines)
