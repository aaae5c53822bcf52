from __future__ import annotations

import random
from itertools import combinations, permutations, product

import pytest

from hollowspec.errors import CapExceeded, EmptySubset, InvalidGraph
from hollowspec.matrixcore import HollowSymMatrix, principal_submatrix, switching_equivalent
from hollowspec.signedgraph import (
    SignedGraph,
    adjacency_matrix,
    canonical_form,
    canonical_key,
    connected_components,
    enumerate_signed_graphs,
    extend_classes,
    induced_subgraph,
    random_signed_graph,
    relabel,
    switch_graph,
)


def labelled_graphs(n):
    pairs = list(combinations(range(n), 2))
    for pattern in product((0, 1, -1), repeat=len(pairs)):
        yield SignedGraph(n, frozenset((u, v, s) for (u, v), s in zip(pairs, pattern) if s))


def brute_class(F: SignedGraph) -> tuple:
    """Least upper triangle over every relabelling and switching."""
    n = F.order
    m = F.sign_matrix()
    best = None
    for perm in permutations(range(n)):
        for D in product((1, -1), repeat=n):
            code = tuple(D[i] * D[j] * m[perm[i]][perm[j]] for i in range(n) for j in range(i + 1, n))
            if best is None or code < best:
                best = code
    return best


def isomorphic_by_brute_force(F: SignedGraph, G: SignedGraph) -> bool:
    A = adjacency_matrix(G)
    m = F.sign_matrix()
    n = F.order
    for perm in permutations(range(n)):
        B = HollowSymMatrix(tuple(tuple(m[perm[i]][perm[j]] for j in range(n)) for i in range(n)))
        if switching_equivalent(A, B) is not None:
            return True
    return False


class TestGraph:
    def test_validation(self):
        with pytest.raises(InvalidGraph):
            SignedGraph(2, frozenset({(0, 0, 1)}))
        with pytest.raises(InvalidGraph):
            SignedGraph(2, frozenset({(0, 2, 1)}))
        with pytest.raises(InvalidGraph):
            SignedGraph(2, frozenset({(0, 1, 2)}))
        with pytest.raises(InvalidGraph):
            SignedGraph(2, frozenset({(0, 1, 1), (1, 0, -1)}))
        with pytest.raises(InvalidGraph):
            SignedGraph(0)

    def test_edge_normalisation(self):
        assert SignedGraph(3, frozenset({(2, 0, -1)})).edges == frozenset({(0, 2, -1)})

    def test_induced_subgraph_commutes_with_adjacency(self):
        rng = random.Random(3)
        for _ in range(300):
            F = random_signed_graph(rng, rng.randint(1, 8))
            S = [v for v in range(F.order) if rng.random() < 0.6] or [0]
            assert adjacency_matrix(induced_subgraph(F, S)) == principal_submatrix(adjacency_matrix(F), S)
        with pytest.raises(EmptySubset):
            induced_subgraph(SignedGraph(2), [])

    def test_components(self):
        F = SignedGraph(5, frozenset({(0, 3, 1), (1, 4, -1)}))
        assert connected_components(F) == [[0, 3], [1, 4], [2]]
        assert not F.is_connected()
        assert SignedGraph.star(3).is_connected()


class TestCanonicalKey:
    def test_invariant_under_relabelling_and_switching(self):
        rng = random.Random(5)
        for _ in range(1000):
            F = random_signed_graph(rng, rng.randint(1, 7), rng.uniform(0.1, 0.9))
            perm = list(range(F.order))
            rng.shuffle(perm)
            D = [rng.choice((1, -1)) for _ in range(F.order)]
            assert canonical_key(relabel(switch_graph(F, D), perm)) == canonical_key(F)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_classes_match_brute_force(self, n):
        by_key, by_brute = {}, {}
        for F in labelled_graphs(n):
            k, b = canonical_key(F), brute_class(F)
            assert by_key.setdefault(k, b) == b
            assert by_brute.setdefault(b, k) == k
        assert len(by_key) == [1, 2, 5, 18][n - 1]

    def test_canonical_form_is_in_class(self):
        rng = random.Random(9)
        for _ in range(150):
            F = random_signed_graph(rng, rng.randint(1, 6))
            C = canonical_form(F)
            assert canonical_key(C) == canonical_key(F)
            assert isomorphic_by_brute_force(F, C)

    def test_forests_lose_their_signs(self):
        rng = random.Random(13)
        for _ in range(200):
            n = rng.randint(1, 9)
            edges = [(rng.randrange(v), v, rng.choice((1, -1))) for v in range(1, n) if rng.random() < 0.8]
            F = SignedGraph(n, frozenset(edges))
            positive = SignedGraph(n, frozenset((u, v, 1) for u, v, _ in edges))
            assert canonical_key(F) == canonical_key(positive)

    def test_triangles_split_by_balance(self):
        balanced = SignedGraph(3, frozenset({(0, 1, 1), (1, 2, 1), (0, 2, 1)}))
        unbalanced = SignedGraph(3, frozenset({(0, 1, 1), (1, 2, 1), (0, 2, -1)}))
        assert canonical_key(balanced) != canonical_key(unbalanced)

    def test_regular_graphs_need_search(self):
        # cube and the 4x2 rook graph are not separated by colour refinement
        cube = SignedGraph(8, frozenset((u, u ^ b, 1) for u in range(8) for b in (1, 2, 4) if u < u ^ b))
        rng = random.Random(17)
        for _ in range(20):
            perm = list(range(8))
            rng.shuffle(perm)
            D = [rng.choice((1, -1)) for _ in range(8)]
            assert canonical_key(relabel(switch_graph(cube, D), perm)) == canonical_key(cube)


class TestEnumeration:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_matches_all_labelled_graphs(self, n):
        keys = {canonical_key(F) for F in labelled_graphs(n)}
        listed = list(enumerate_signed_graphs(n))
        assert [canonical_key(F) for F in listed] == sorted(keys)

    def test_count_order_six(self):
        assert len(list(enumerate_signed_graphs(6))) == 1242

    def test_representatives_are_canonical(self):
        for F in enumerate_signed_graphs(4):
            assert canonical_form(F) == F

    def test_prune(self):
        # rejecting every graph with an edge leaves only extensions of the edgeless
        # graph: a star K_{1,k} plus isolated vertices, k = 0..3
        out = list(enumerate_signed_graphs(4, prune=lambda g: bool(g.edges)))
        assert len(out) == 4
        for g in out:
            degrees = [sum(v in (a, b) for a, b, _ in g.edges) for v in range(4)]
            assert max(degrees) == len(g.edges)

    def test_workers_do_not_change_output(self):
        level = list(enumerate_signed_graphs(4))
        assert extend_classes(level, workers=3) == extend_classes(level)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            list(enumerate_signed_graphs(11))
