"""Certification tests: family membership, extended test, combined driver."""

import json

import pytest

from conftest import EXAMPLE20_B

from dgs.arith import FactorBudget, SquarefreeStatus
from dgs.criterion import (
    VerdictKind,
    certify,
    check_extended,
    check_fn,
    verdict_to_dict,
    verdict_to_json,
)
from dgs.graphs import Graph, parse_graph6, random_gnp_half
from dgs.rng import SplitMix64


def test_check_fn_k1():
    v = check_fn(Graph(1, [0]))
    assert v.kind is VerdictKind.DGS_BY_FN
    assert v.evidence.det_w == 1
    assert v.evidence.alpha == 0 and v.evidence.odd_part == 1


def test_check_fn_k2_not_controllable():
    v = check_fn(Graph.from_edges(2, [(0, 1)]))
    assert v.kind is VerdictKind.NOT_CONTROLLABLE
    assert not v.is_dgs


def test_check_fn_worked_example_inconclusive(example20):
    v = check_fn(example20)
    assert v.kind is VerdictKind.CRITERION_INCONCLUSIVE
    assert v.evidence.failed_clause == "two_adic_valuation"
    assert v.evidence.alpha == 13


def test_check_extended_k1_degenerate():
    v = check_extended(Graph(1, [0]))
    assert v.kind is VerdictKind.DGS_BY_EXTENDED
    assert v.evidence.kernel_dim == 0


def test_check_extended_worked_example(example20):
    v = check_extended(example20)
    assert v.kind is VerdictKind.DGS_BY_EXTENDED
    ev = v.evidence
    assert ev.rank2_w == 10
    assert ev.snf_diag[:10] == (1,) * 10
    assert ev.snf_diag[10:17] == (2,) * 7
    assert ev.snf_diag[17:19] == (4, 4)
    assert ev.snf_diag[19] == 4 * EXAMPLE20_B
    assert ev.snf_b == EXAMPLE20_B
    assert ev.eq4_holds is True
    assert ev.kernel_dim == 10
    assert all(wv == 0 for _v, wv in ev.kernel_witness)


def test_check_extended_rank_clause():
    # K3 is singular, so build a graph that is controllable but rank-deficient
    # over GF(2); scan a few random graphs for one
    rng = SplitMix64(2)
    found = False
    for _ in range(4000):
        g = random_gnp_half(6 + rng.next_u64() % 6, rng.next_u64())
        v = check_extended(g)
        if v.kind is VerdictKind.CRITERION_INCONCLUSIVE and \
                v.evidence.failed_clause == "rank2":
            found = True
            assert v.evidence.rank2_w < (g.n + 1) // 2
            break
    assert found


def test_certify_worked_example(example20):
    v = certify(example20)
    assert v.kind is VerdictKind.DGS_BY_EXTENDED


def test_certify_k2(example20):
    assert certify(Graph.from_edges(2, [(0, 1)])).kind is VerdictKind.NOT_CONTROLLABLE


def test_fn_members_also_pass_extended():
    """A graph passing the square-free test always satisfies the wider test;
    the combined driver records the cross-check."""
    rng = SplitMix64(71)
    confirmed = 0
    for n in range(4, 17):
        for _ in range(60):
            g = random_gnp_half(n, rng.next_u64())
            fn = check_fn(g)
            if fn.kind is not VerdictKind.DGS_BY_FN:
                continue
            v = certify(g)
            assert v.kind is VerdictKind.DGS_BY_FN
            assert v.evidence.extended_cross_check == "DgsByExtended"
            ext = check_extended(g)
            assert ext.kind is VerdictKind.DGS_BY_EXTENDED
            confirmed += 1
    assert confirmed >= 40


def test_factorization_unknown_routing():
    """When the only obstruction is an uncracked composite, the verdict says
    so (exit-code-3 path: retry with a bigger budget)."""
    rng = SplitMix64(72)
    starved = FactorBudget(trial_bound=101, rho_iterations=0)
    seen = False
    for _ in range(400):
        g = random_gnp_half(12 + rng.next_u64() % 4, rng.next_u64())
        fn = check_fn(g, starved)
        if fn.kind is VerdictKind.FACTORIZATION_UNKNOWN:
            seen = True
            assert fn.evidence.squarefree.status is SquarefreeStatus.UNKNOWN
            both = certify(g, starved)
            assert both.kind in (VerdictKind.FACTORIZATION_UNKNOWN,
                                 VerdictKind.CRITERION_INCONCLUSIVE)
            break
    assert seen


def test_verdicts_deterministic():
    rng = SplitMix64(73)
    for _ in range(10):
        g = random_gnp_half(10, rng.next_u64())
        assert certify(g).kind == certify(g).kind


def test_verdict_json_schema(example20):
    v = certify(example20)
    doc = verdict_to_dict(v)
    assert doc["schema"] == "dgs-verdict/1"
    assert doc["kind"] == "DgsByExtended"
    assert doc["n"] == 20
    assert doc["det_w"] == str(-(1 << 13) * EXAMPLE20_B)
    assert doc["snf_diag"][-1] == str(4 * EXAMPLE20_B)
    assert doc["rank2_w"] == 10
    assert doc["eq4_holds"] is True
    assert len(doc["kernel_witness"]) == 10
    w = doc["kernel_witness"][0]
    assert set(w["vector"]) <= {"0", "1"} and len(w["vector"]) == 20
    assert w["w_times_v"] == "0" * 20
    # big integers travel as decimal strings
    assert isinstance(doc["odd_part"], str)
    json.loads(verdict_to_json(v))


def test_verdict_json_handles_all_kinds():
    for g in (Graph(1, [0]), Graph.from_edges(2, [(0, 1)]),
              parse_graph6("Bg")):
        doc = verdict_to_dict(certify(g))
        assert doc["kind"] in {k.value for k in VerdictKind}
        json.loads(json.dumps(doc))
