"""Graph representation, codecs, sampling and switching."""

import networkx as nx
import pytest

from dgs.graphs import (
    AdjacencyTextError,
    Graph,
    Graph6Error,
    canonical_edge_code,
    complement,
    encode_graph6,
    find_gm_partitions,
    gm_switch,
    is_isomorphic,
    parse_adjacency_text,
    parse_graph6,
    random_gnp_half,
)
from dgs.rng import SplitMix64


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


# --- graph6 ---------------------------------------------------------------


def test_graph6_singleton():
    g = parse_graph6("@")
    assert g.n == 1 and g.edge_count() == 0


def test_graph6_k2():
    g = parse_graph6("A_")
    assert g.n == 2 and g.has_edge(0, 1)


def test_graph6_path3():
    g = parse_graph6("Bg")
    assert g.n == 3
    assert g.has_edge(0, 1) and g.has_edge(1, 2) and not g.has_edge(0, 2)


def test_graph6_header_stripped():
    assert parse_graph6(">>graph6<<A_") == parse_graph6("A_")


def test_graph6_roundtrip_matches_networkx():
    rng = SplitMix64(2024)
    for _ in range(150):
        n = 1 + rng.next_u64() % 30
        g = random_gnp_half(n, rng.next_u64())
        s = encode_graph6(g)
        assert parse_graph6(s) == g
        h = nx.from_graph6_bytes(s.encode("ascii"))
        assert h.number_of_nodes() == g.n
        assert {tuple(sorted(e)) for e in h.edges()} == set(g.edges())


def test_graph6_encoding_matches_networkx():
    rng = SplitMix64(99)
    for _ in range(60):
        n = 1 + rng.next_u64() % 25
        g = random_gnp_half(n, rng.next_u64())
        ref = nx.to_graph6_bytes(_nx_graph(g), header=False).decode().strip()
        assert encode_graph6(g) == ref


def _nx_graph(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def test_graph6_large_n_header():
    g = random_gnp_half(70, 5)
    assert parse_graph6(encode_graph6(g)) == g


def test_graph6_errors_carry_offset():
    with pytest.raises(Graph6Error):
        parse_graph6("")
    with pytest.raises(Graph6Error) as ei:
        parse_graph6("C")  # truncated payload for n=4
    assert ei.value.offset >= 1
    with pytest.raises(Graph6Error):
        parse_graph6("A_        _")
    # non-canonical padding: n=2 payload with a stray low bit set
    with pytest.raises(Graph6Error):
        parse_graph6("A" + chr(63 + 0b100001))


# --- adjacency text -------------------------------------------------------


def test_parse_adjacency_k2():
    assert parse_adjacency_text("0 1\n1 0") == Graph.from_edges(2, [(0, 1)])


def test_parse_adjacency_commas():
    g = parse_adjacency_text("0, 1, 0\n1, 0, 1\n0, 1, 0")
    assert g == path_graph(3)


def test_parse_adjacency_rejects_asymmetric():
    with pytest.raises(AdjacencyTextError) as ei:
        parse_adjacency_text("0 1\n0 0")
    assert ei.value.row == 0 and ei.value.col == 1


def test_parse_adjacency_rejects_junk():
    with pytest.raises(AdjacencyTextError):
        parse_adjacency_text("0 2\n2 0")
    with pytest.raises(AdjacencyTextError):
        parse_adjacency_text("0 1 0\n1 0")
    with pytest.raises(AdjacencyTextError):
        parse_adjacency_text("1 0\n0 1")


# --- complement -----------------------------------------------------------


def test_complement_examples():
    k2 = Graph.from_edges(2, [(0, 1)])
    assert complement(k2).edge_count() == 0
    k1 = Graph(1, [0])
    assert complement(k1) == k1
    c5 = cycle_graph(5)
    assert is_isomorphic(complement(c5), c5)


def test_complement_involution():
    rng = SplitMix64(7)
    for _ in range(50):
        g = random_gnp_half(1 + rng.next_u64() % 12, rng.next_u64())
        assert complement(complement(g)) == g


# --- random sampling ------------------------------------------------------


def test_random_gnp_half_trivial():
    g = random_gnp_half(1, 999)
    assert g.n == 1


def test_random_gnp_half_deterministic():
    assert random_gnp_half(5, 42) == random_gnp_half(5, 42)
    assert random_gnp_half(17, 1) == random_gnp_half(17, 1)


def test_random_gnp_half_density():
    draws = 10_000
    n = 20
    total_pairs = draws * n * (n - 1) // 2
    edges = sum(random_gnp_half(n, seed).edge_count() for seed in range(draws))
    assert abs(edges / total_pairs - 0.5) < 0.02


# --- isomorphism ----------------------------------------------------------


def test_is_isomorphic_examples():
    p3 = path_graph(3)
    relabeled = p3.relabel([2, 0, 1])
    assert is_isomorphic(p3, relabeled)
    assert not is_isomorphic(p3, complete_graph(3))
    c4k1 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0)])
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    assert not is_isomorphic(c4k1, star)
    assert not is_isomorphic(path_graph(3), path_graph(4))


def test_is_isomorphic_matches_networkx():
    rng = SplitMix64(31337)
    for _ in range(120):
        n = 1 + rng.next_u64() % 8
        g = random_gnp_half(n, rng.next_u64())
        h = random_gnp_half(n, rng.next_u64())
        assert is_isomorphic(g, h) == nx.is_isomorphic(_nx_graph(g), _nx_graph(h))


def test_canonical_code_is_isomorphism_invariant():
    rng = SplitMix64(555)
    for _ in range(100):
        n = 1 + rng.next_u64() % 7
        g = random_gnp_half(n, rng.next_u64())
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = rng.next_u64() % (i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        assert canonical_edge_code(g) == canonical_edge_code(g.relabel(perm))


# --- switching ------------------------------------------------------------


def test_find_gm_partitions_empty_graph():
    g = Graph(5, [0] * 5)
    cells = {p.cell for p in find_gm_partitions(g)}
    assert len(cells) == 5  # any 4 of 5 vertices works


def test_find_gm_partitions_k5():
    assert len(find_gm_partitions(complete_graph(5))) == 5


def test_find_gm_partitions_p4():
    assert find_gm_partitions(path_graph(4)) == []


def test_gm_switch_involution_and_noop():
    g = Graph(5, [0] * 5)  # no outside vertex has half the cell
    p = find_gm_partitions(g)[0]
    assert gm_switch(g, p) == g

    rng = SplitMix64(6060)
    switched = 0
    for _ in range(300):
        h = random_gnp_half(8, rng.next_u64())
        for p in find_gm_partitions(h):
            s = gm_switch(h, p)
            assert gm_switch(s, p) == h
            if s != h:
                switched += 1
        if switched > 20:
            break
    assert switched > 20


def test_gm_switch_rejects_bad_partition():
    from dgs.graphs import GmPartition

    g = path_graph(4)
    with pytest.raises(ValueError):
        gm_switch(g, GmPartition((0, 1, 2, 3), ()))
