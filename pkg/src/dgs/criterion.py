"""The two walk-matrix certification tests and their combined driver.

A graph with nonsingular walk matrix W is certified DGS (determined by its
generalized spectrum) when either

  * det(W) / 2^floor(n/2) is an odd square-free integer, or
  * rank_2(W) = ceil(n/2), the Smith normal form of W is
    diag(1,...,1, 2^l1, ..., 2^lt * b) with b odd square-free, and the mod-2
    kernel of (W^T W1)/2 is contained in the mod-2 kernel of W.

Both tests are sufficient conditions only: a failed test never implies a
cospectral mate exists.  All outcomes are verdicts carrying the full
evidence chain; nothing raises on a mere negative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

from .arith import (
    FactorBudget,
    SquarefreeCertificate,
    SquarefreeStatus,
    certify_squarefree,
)
from .graphs import Graph
from .linalg import det_bareiss, kernel_basis_f2, rank_f2, smith_normal_form
from .walk import half_gram_f2, valuation2, walk_matrix, walk_matrix_f2

SCHEMA = "dgs-verdict/1"


class VerdictKind(Enum):
    NOT_CONTROLLABLE = "NotControllable"
    DGS_BY_FN = "DgsByFn"
    DGS_BY_EXTENDED = "DgsByExtended"
    CRITERION_INCONCLUSIVE = "CriterionInconclusive"
    FACTORIZATION_UNKNOWN = "FactorizationUnknown"


@dataclass
class Evidence:
    """Everything needed to re-derive a verdict by hand."""

    n: int
    det_w: int
    alpha: Optional[int] = None
    odd_part: Optional[int] = None
    sign: Optional[int] = None
    rank2_w: Optional[int] = None
    squarefree: Optional[SquarefreeCertificate] = None
    snf_diag: Optional[Tuple[int, ...]] = None
    snf_b: Optional[int] = None
    kernel_dim: Optional[int] = None
    kernel_witness: Optional[Tuple[Tuple[int, int], ...]] = None
    eq4_holds: Optional[bool] = None
    w1_first_col_doubled: Optional[bool] = None
    failed_clause: Optional[str] = None
    extended_cross_check: Optional[str] = None


@dataclass(frozen=True)
class DgsVerdict:
    kind: VerdictKind
    evidence: Evidence

    @property
    def is_dgs(self) -> bool:
        return self.kind in (VerdictKind.DGS_BY_FN, VerdictKind.DGS_BY_EXTENDED)


def _base_evidence(g: Graph) -> Tuple[Evidence, int]:
    w = walk_matrix(g)
    det = det_bareiss(w)
    ev = Evidence(n=g.n, det_w=det)
    ev.rank2_w = rank_f2(walk_matrix_f2(g))
    return ev, det


def check_fn(g: Graph, budget: Optional[FactorBudget] = None) -> DgsVerdict:
    """Membership test for the square-free family: det(W) = +-2^floor(n/2) b
    with b odd square-free."""
    ev, det = _base_evidence(g)
    if det == 0:
        ev.failed_clause = "controllable"
        return DgsVerdict(VerdictKind.NOT_CONTROLLABLE, ev)
    val = valuation2(det)
    ev.alpha, ev.odd_part, ev.sign = val.alpha, val.odd_part, val.sign
    if val.alpha != g.n // 2:
        ev.failed_clause = "two_adic_valuation"
        return DgsVerdict(VerdictKind.CRITERION_INCONCLUSIVE, ev)
    cert = certify_squarefree(val.odd_part, budget)
    ev.squarefree = cert
    if cert.status is SquarefreeStatus.SQUARE_FREE:
        return DgsVerdict(VerdictKind.DGS_BY_FN, ev)
    if cert.status is SquarefreeStatus.NOT_SQUARE_FREE:
        ev.failed_clause = "odd_part_square_free"
        return DgsVerdict(VerdictKind.CRITERION_INCONCLUSIVE, ev)
    ev.failed_clause = "odd_part_square_free_unknown"
    return DgsVerdict(VerdictKind.FACTORIZATION_UNKNOWN, ev)


def _snf_shape(diag: Tuple[int, ...], k: int) -> Optional[int]:
    """Trailing odd part b when diag = (1,...,1, 2^l1, ..., 2^lt * b) with
    exactly k ones and every power positive; None when the shape is off."""
    n = len(diag)
    if any(d != 1 for d in diag[:k]):
        return None
    if n == k:
        return 1
    for d in diag[k : n - 1]:
        v = valuation2(d)
        if v.alpha < 1 or v.odd_part != 1:
            return None
    last = valuation2(diag[n - 1])
    if last.alpha < 1:
        return None
    return last.odd_part


def check_extended(g: Graph, budget: Optional[FactorBudget] = None) -> DgsVerdict:
    """The wider test: Smith normal form shape plus kernel containment.

    Requires rank_2(W) = ceil(n/2), SNF diag(1,...,1, 2^l1, ..., 2^lt b)
    with b square-free, and every mod-2 kernel vector of (W^T W1)/2 to lie
    in the mod-2 kernel of W.
    """
    ev, det = _base_evidence(g)
    ev.w1_first_col_doubled = bool(g.n % 2)
    if det == 0:
        ev.failed_clause = "controllable"
        return DgsVerdict(VerdictKind.NOT_CONTROLLABLE, ev)
    val = valuation2(det)
    ev.alpha, ev.odd_part, ev.sign = val.alpha, val.odd_part, val.sign

    k = (g.n + 1) // 2
    if ev.rank2_w != k:
        ev.failed_clause = "rank2"
        return DgsVerdict(VerdictKind.CRITERION_INCONCLUSIVE, ev)

    diag = smith_normal_form(walk_matrix(g)).diag
    ev.snf_diag = diag
    b = _snf_shape(diag, k)
    if b is None:
        ev.failed_clause = "snf_shape"
        return DgsVerdict(VerdictKind.CRITERION_INCONCLUSIVE, ev)
    ev.snf_b = b

    cert = certify_squarefree(b, budget)
    ev.squarefree = cert
    if cert.status is SquarefreeStatus.NOT_SQUARE_FREE:
        ev.failed_clause = "snf_b_square_free"
        return DgsVerdict(VerdictKind.CRITERION_INCONCLUSIVE, ev)
    if cert.status is SquarefreeStatus.UNKNOWN:
        ev.failed_clause = "snf_b_square_free_unknown"
        return DgsVerdict(VerdictKind.FACTORIZATION_UNKNOWN, ev)

    hg = half_gram_f2(g)
    basis = kernel_basis_f2(hg)
    wf2 = walk_matrix_f2(g)
    witness = tuple((v, wf2.mul_vec(v)) for v in basis)
    ev.kernel_dim = len(basis)
    ev.kernel_witness = witness
    ev.eq4_holds = all(wv == 0 for _, wv in witness)
    if not ev.eq4_holds:
        ev.failed_clause = "kernel_containment"
        return DgsVerdict(VerdictKind.CRITERION_INCONCLUSIVE, ev)
    return DgsVerdict(VerdictKind.DGS_BY_EXTENDED, ev)


def _merge_evidence(primary: Evidence, other: Evidence) -> Evidence:
    out = replace(primary)
    for name in (
        "alpha", "odd_part", "sign", "rank2_w", "squarefree", "snf_diag",
        "snf_b", "kernel_dim", "kernel_witness", "eq4_holds",
        "w1_first_col_doubled",
    ):
        if getattr(out, name) is None:
            setattr(out, name, getattr(other, name))
    return out


def certify(g: Graph, budget: Optional[FactorBudget] = None) -> DgsVerdict:
    """Run the square-free test, then the extended test.

    A graph passing the first test must also pass the second; the combined
    driver runs both anyway and records the cross-check.  When a test dies
    only because factoring ran out of budget, that outcome wins over a
    plain inconclusive, so callers can retry with a bigger budget.
    """
    fn = check_fn(g, budget)
    if fn.kind is VerdictKind.NOT_CONTROLLABLE:
        return fn
    ext = check_extended(g, budget)
    if fn.kind is VerdictKind.DGS_BY_FN:
        ev = _merge_evidence(fn.evidence, ext.evidence)
        ev.extended_cross_check = ext.kind.value
        return DgsVerdict(VerdictKind.DGS_BY_FN, ev)
    if ext.kind is VerdictKind.DGS_BY_EXTENDED:
        return DgsVerdict(VerdictKind.DGS_BY_EXTENDED,
                          _merge_evidence(ext.evidence, fn.evidence))
    if VerdictKind.FACTORIZATION_UNKNOWN in (fn.kind, ext.kind):
        src = ext if ext.kind is VerdictKind.FACTORIZATION_UNKNOWN else fn
        return DgsVerdict(VerdictKind.FACTORIZATION_UNKNOWN,
                          _merge_evidence(src.evidence,
                                          fn.evidence if src is ext else ext.evidence))
    return DgsVerdict(VerdictKind.CRITERION_INCONCLUSIVE,
                      _merge_evidence(ext.evidence, fn.evidence))


# --- serialization --------------------------------------------------------


def _bits_to_str(mask: int, n: int) -> str:
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(n))


def _cert_to_dict(c: SquarefreeCertificate) -> dict:
    return {
        "value": str(c.value),
        "status": c.status.value,
        "found_factors": [[str(p), e] for p, e in c.found_factors],
        "residual": str(c.residual),
        "residual_class": c.residual_class.value,
        "repeated_prime": None if c.repeated_prime is None else str(c.repeated_prime),
        "effort": {
            "trial_bound": c.effort.trial_bound,
            "rho_iterations_used": c.effort.rho_iterations_used,
            "mr_tests": c.effort.mr_tests,
        },
    }


def verdict_to_dict(v: DgsVerdict) -> dict:
    ev = v.evidence
    n = ev.n
    doc = {
        "schema": SCHEMA,
        "kind": v.kind.value,
        "n": n,
        "det_w": str(ev.det_w),
        "alpha": ev.alpha,
        "odd_part": None if ev.odd_part is None else str(ev.odd_part),
        "sign": ev.sign,
        "rank2_w": ev.rank2_w,
        "squarefree": None if ev.squarefree is None else _cert_to_dict(ev.squarefree),
        "snf_diag": None if ev.snf_diag is None else [str(d) for d in ev.snf_diag],
        "snf_b": None if ev.snf_b is None else str(ev.snf_b),
        "kernel_dim": ev.kernel_dim,
        "kernel_witness": None if ev.kernel_witness is None else [
            {"vector": _bits_to_str(vec, n), "w_times_v": _bits_to_str(wv, n)}
            for vec, wv in ev.kernel_witness
        ],
        "eq4_holds": ev.eq4_holds,
        "w1_first_col_doubled": ev.w1_first_col_doubled,
        "failed_clause": ev.failed_clause,
        "extended_cross_check": ev.extended_cross_check,
    }
    return doc


def verdict_to_json(v: DgsVerdict, indent: Optional[int] = None) -> str:
    return json.dumps(verdict_to_dict(v), indent=indent, sort_keys=False)
