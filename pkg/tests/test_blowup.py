from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest

from hollowspec.blowup import (
    blowup_char_poly,
    blowup_index,
    build_blowup,
    classify_blowup,
    decompose_blowup,
    psd_lift_blowup,
    psd_lift_rowmerge,
)
from hollowspec.errors import DomainMismatch, EntryTooLarge, NotBlowup, PreconditionViolated
from hollowspec.exactnum import lambda_star, threshold_from_rational, threshold_sqrt
from hollowspec.matrixcore import (
    HollowSymMatrix,
    MembershipStatus,
    char_poly,
    membership_status,
    principal_submatrix,
    switch,
    switching_equivalent,
)
from hollowspec.search import random_decomposable, random_in_s2, random_matrix, root5_matrix
from hollowspec.signedgraph import SignedGraph, adjacency_matrix, canonical_key, random_signed_graph

TWO = threshold_from_rational(2)
THRESHOLDS = [TWO, threshold_from_rational(Fraction(201, 100)), lambda_star(), threshold_sqrt(5), threshold_from_rational(3)]


def random_case(rng, max_order=6, max_mult=4):
    F = random_signed_graph(rng, rng.randint(1, max_order), rng.uniform(0.2, 0.8))
    return F, tuple(rng.randint(1, max_mult) for _ in range(F.order))


class TestBuild:
    def test_small_example(self):
        F = SignedGraph(2, frozenset({(0, 1, -1)}))
        assert build_blowup(F, (2, 1)).rows == ((0, 2, -1), (2, 0, -1), (-1, -1, 0))
        assert blowup_index((2, 1)) == [(0, 1), (0, 2), (1, 1)]

    def test_single_vertex(self):
        A = build_blowup(SignedGraph(1), (4,))
        assert all(A.rows[i][j] == (0 if i == j else 2) for i in range(4) for j in range(4))

    def test_domain(self):
        with pytest.raises(DomainMismatch):
            build_blowup(SignedGraph(2), (1,))
        with pytest.raises(DomainMismatch):
            build_blowup(SignedGraph(2), (1, 0))

    def test_quotient_char_poly_matches_full_matrix(self):
        rng = random.Random(1)
        for _ in range(150):
            F, a = random_case(rng)
            assert blowup_char_poly(F, a) == char_poly(build_blowup(F, a))

    def test_classification_matches_full_matrix(self):
        rng = random.Random(2)
        for _ in range(150):
            F, a = random_case(rng)
            A = build_blowup(F, a)
            for lam in THRESHOLDS:
                assert classify_blowup(F, a, lam) is membership_status(A, lam)

    def test_monotone_embedding(self):
        rng = random.Random(3)
        for _ in range(100):
            F, b = random_case(rng)
            a = tuple(rng.randint(1, v) for v in b)
            big = build_blowup(F, b)
            pos = {lab: k for k, lab in enumerate(blowup_index(b))}
            keep = [pos[lab] for lab in blowup_index(a)]
            assert principal_submatrix(big, keep) == build_blowup(F, a)
            for lam in THRESHOLDS:
                if membership_status(big, lam).inside:
                    assert membership_status(build_blowup(F, a), lam).inside


class TestLift:
    def test_blowups_of_s2_graphs_stay_in_m2(self):
        rng = random.Random(4)
        for _ in range(150):
            F = random_in_s2(rng)
            a = tuple(rng.randint(1, 4) for _ in range(F.order))
            rep = psd_lift_blowup(F, a)
            assert rep.identity_holds and rep.base_in_m2 and rep.implies_in_m2
            assert membership_status(build_blowup(F, a), TWO).inside

    def test_identity_holds_outside_s2_too(self):
        F = SignedGraph.star(5)
        rep = psd_lift_blowup(F, (1, 2, 1, 1, 1, 1))
        assert rep.identity_holds and not rep.base_in_m2

    def test_rowmerge(self):
        F = SignedGraph(3, frozenset({(0, 1, 1), (1, 2, -1)}))
        rep = psd_lift_rowmerge(build_blowup(F, (2, 1, 2)))
        assert rep.identity_holds and rep.implies_in_m2
        assert len(rep.merge_matrix) == 4 and len(rep.merge_matrix[0]) == 5

    def test_rowmerge_preconditions(self):
        with pytest.raises(PreconditionViolated):
            psd_lift_rowmerge(HollowSymMatrix(((0, 1), (1, 0))))
        with pytest.raises(PreconditionViolated):
            psd_lift_rowmerge(root5_matrix(1, 0))


class TestDecompose:
    def test_round_trip_tracks_vertices(self):
        rng = random.Random(5)
        for _ in range(200):
            F = random_signed_graph(rng, rng.randint(1, 6), rng.uniform(0.2, 0.8))
            a = tuple(rng.randint(1, 4) for _ in range(F.order))
            A = build_blowup(F, a)
            n = A.order
            perm = list(range(n))
            rng.shuffle(perm)
            D = [rng.choice((1, -1)) for _ in range(n)]
            B = switch(HollowSymMatrix(tuple(tuple(A.rows[perm[i]][perm[j]] for j in range(n)) for i in range(n))), D)
            dec = decompose_blowup(B)
            assert dec.reconstruct() == B
            assert canonical_key(dec.graph) == canonical_key(F)
            labels = blowup_index(a)
            vertex_of = {}
            for i, (k, _) in enumerate(dec.index_map):
                u = labels[perm[i]][0]
                assert vertex_of.setdefault(k, u) == u
            assert sorted(vertex_of.values()) == list(range(F.order))
            assert all(dec.mult[k] == a[u] for k, u in vertex_of.items())
            # the recovered graph is F relabelled by vertex_of, up to switching
            inv = [0] * F.order
            for k, u in vertex_of.items():
                inv[u] = k
            m = F.sign_matrix()
            moved = [[0] * F.order for _ in range(F.order)]
            for u in range(F.order):
                for v in range(F.order):
                    moved[inv[u]][inv[v]] = m[u][v]
            assert switching_equivalent(adjacency_matrix(dec.graph), HollowSymMatrix(tuple(map(tuple, moved)))) is not None

    def test_vertex_order_follows_smallest_index(self):
        A = HollowSymMatrix(((0, 1, 2), (1, 0, 1), (2, 1, 0)))
        dec = decompose_blowup(A)
        assert dec.mult == (2, 1)
        assert dec.index_map == ((0, 1), (1, 1), (0, 2))
        assert dec.switching == (1, 1, 1)

    def test_negative_block_entry_is_switched(self):
        A = HollowSymMatrix(((0, -2), (-2, 0)))
        dec = decompose_blowup(A)
        assert dec.graph == SignedGraph(1) and dec.mult == (2,) and dec.switching == (1, -1)

    def test_errors(self):
        with pytest.raises(EntryTooLarge):
            decompose_blowup(HollowSymMatrix(((0, 3), (3, 0))))
        with pytest.raises(NotBlowup):
            decompose_blowup(root5_matrix(1, 0))
        with pytest.raises(NotBlowup):
            # three mutually +-2 indices whose product is negative
            decompose_blowup(HollowSymMatrix(((0, 2, 2), (2, 0, -2), (2, -2, 0))))

    def test_root5_pattern_never_decomposes(self):
        rng = random.Random(6)
        for _ in range(600):
            A = random_matrix(rng, rng.randint(3, 6), 2)
            has_pattern = False
            for i, j, k in combinations(range(A.order), 3):
                for x, y, z in ((i, j, k), (i, k, j), (j, k, i)):
                    if abs(A.rows[x][y]) == 2:
                        s = A.rows[x][y] // 2
                        has_pattern |= A.rows[x][z] != s * A.rows[y][z]
            if has_pattern:
                with pytest.raises(NotBlowup):
                    decompose_blowup(A)

    def test_random_matrices_decompose_only_when_exact(self):
        rng = random.Random(7)
        hits = 0
        for _ in range(500):
            A = random_matrix(rng, rng.randint(1, 5), 2)
            try:
                dec = decompose_blowup(A)
            except NotBlowup:
                continue
            hits += 1
            assert dec.reconstruct() == A
        assert hits > 0

    def test_suite_generator(self):
        rng = random.Random(8)
        for _ in range(50):
            F, a, B = random_decomposable(rng)
            dec = decompose_blowup(B)
            assert sorted(dec.mult) == sorted(a) and canonical_key(dec.graph) == canonical_key(F)

    def test_boundary_star_stays_on_boundary(self):
        F = SignedGraph.star(4)
        for a in [(1, 1, 1, 1, 1), (2, 1, 1, 1, 1), (3, 4, 1, 2, 1)]:
            assert classify_blowup(F, a, TWO) is MembershipStatus.ON_BOUNDARY
