"""Blow-ups ``A_{F,a}`` of signed graphs and their decomposition.

Each vertex ``u`` of ``F`` is replaced by ``a[u]`` indices that pairwise
carry ``+2``; indices in different blocks carry the sign of the edge
between their vertices (0 when non-adjacent).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainMismatch, EntryTooLarge, NotBlowup, PreconditionViolated
from .exactnum import IntPolynomial, SpectralThreshold, threshold_from_rational
from .matrixcore import (
    HollowSymMatrix,
    MembershipStatus,
    SwitchingVector,
    berkowitz,
    classify_char_poly,
    membership_status,
    principal_submatrix,
    switch,
    worst_status,
)
from .signedgraph import SignedGraph, adjacency_matrix, components

Multiplicity = tuple[int, ...]

_TWO = threshold_from_rational(2)


def check_multiplicity(F: SignedGraph, a: Sequence[int]) -> Multiplicity:
    a = tuple(int(v) for v in a)
    if len(a) != F.order:
        raise DomainMismatch(f"multiplicity has {len(a)} entries, graph has {F.order} vertices")
    if any(v < 1 for v in a):
        raise DomainMismatch(f"multiplicities must be positive, got {a}")
    return a


def blowup_index(a: Multiplicity) -> list[tuple[int, int]]:
    """Row labels ``(vertex, copy)`` of ``A_{F,a}``, copies numbered from 1."""
    return [(u, i) for u, k in enumerate(a) for i in range(1, k + 1)]


def build_blowup(F: SignedGraph, a: Sequence[int]) -> HollowSymMatrix:
    a = check_multiplicity(F, a)
    m = F.sign_matrix()
    labels = blowup_index(a)
    rows = []
    for u, i in labels:
        row = []
        for v, j in labels:
            if u == v:
                row.append(0 if i == j else 2)
            else:
                row.append(m[u][v])
        rows.append(tuple(row))
    return HollowSymMatrix(tuple(rows))


def _quotient_char_poly(F: SignedGraph, a: Multiplicity) -> IntPolynomial:
    """``det(xI - (A_F + 2I) diag(a))``."""
    m = F.sign_matrix()
    k = F.order
    q = [[(m[u][v] + (2 if u == v else 0)) * a[v] for v in range(k)] for u in range(k)]
    return IntPolynomial(tuple(reversed(berkowitz(q))))


def blowup_char_poly(F: SignedGraph, a: Sequence[int]) -> IntPolynomial:
    """Characteristic polynomial of ``A_{F,a}`` from a ``|F| x |F|`` computation.

    Since ``A_{F,a} + 2I = B^T (A_F + 2I) B`` with ``B B^T = diag(a)``,
    ``det(xI - A_{F,a}) = (x+2)^(N-k) * q(x+2)`` where ``q`` is the
    characteristic polynomial of ``(A_F + 2I) diag(a)``.
    """
    a = check_multiplicity(F, a)
    extra = sum(a) - F.order
    return IntPolynomial((2, 1)) ** extra * _quotient_char_poly(F, a).shift(2)


def classify_blowup(F: SignedGraph, a: Sequence[int], lam: SpectralThreshold) -> MembershipStatus:
    """Membership status of ``A_{F,a}`` using the quotient polynomial only."""
    a = check_multiplicity(F, a)
    statuses = [classify_char_poly(_quotient_char_poly(F, a).shift(2), lam)]
    if sum(a) > F.order:
        statuses.append(classify_char_poly(IntPolynomial((2, 1)), lam))
    return worst_status(statuses)


@dataclass(frozen=True)
class BlowupDecomposition:
    """``switch(reindex(build_blowup(graph, mult)), switching)`` equals the input matrix.

    ``index_map[i]`` is the ``(vertex, copy)`` label of input index ``i``.
    """

    graph: SignedGraph
    mult: Multiplicity
    switching: SwitchingVector
    index_map: tuple[tuple[int, int], ...]

    def reconstruct(self) -> HollowSymMatrix:
        blown = build_blowup(self.graph, self.mult)
        pos = {lab: k for k, lab in enumerate(blowup_index(self.mult))}
        order = [pos[lab] for lab in self.index_map]
        reindexed = HollowSymMatrix(tuple(tuple(blown.rows[p][q] for q in order) for p in order))
        return switch(reindexed, self.switching)


def decompose_blowup(A: HollowSymMatrix) -> BlowupDecomposition:
    """Find ``F``, ``a`` and a switching with ``A`` switching equivalent to ``A_{F,a}``.

    Raises EntryTooLarge for an entry of absolute value at least 3 and
    NotBlowup when the block structure fails.
    """
    n = A.order
    rows = A.rows
    for i in range(n):
        for j in range(i + 1, n):
            if abs(rows[i][j]) >= 3:
                raise EntryTooLarge(f"entry ({i}, {j}) = {rows[i][j]} has absolute value >= 3")
    blocks = components(n, lambda u, w: abs(rows[u][w]) == 2)
    d = [0] * n
    for comp in blocks:
        root = comp[0]
        d[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in comp:
                if abs(rows[u][w]) == 2 and not d[w]:
                    # make the tree entry +2 after switching
                    d[w] = d[u] * (rows[u][w] // 2)
                    queue.append(w)
    b = switch(A, d).rows
    for comp in blocks:
        for x in range(len(comp)):
            for y in range(x + 1, len(comp)):
                i, j = comp[x], comp[y]
                if b[i][j] != 2:
                    raise NotBlowup(f"entry ({i}, {j}) inside a +2 block is {b[i][j]} after switching")
    edges = []
    for k in range(len(blocks)):
        for l in range(k + 1, len(blocks)):
            vals = {b[i][j] for i in blocks[k] for j in blocks[l]}
            if len(vals) != 1:
                raise NotBlowup(f"entries between blocks {k} and {l} are not constant: {sorted(vals)}")
            c = vals.pop()
            if c:
                edges.append((k, l, c))
    graph = SignedGraph(len(blocks), frozenset(edges))
    mult = tuple(len(comp) for comp in blocks)
    index_map = [None] * n
    for k, comp in enumerate(blocks):
        for copy, i in enumerate(comp, start=1):
            index_map[i] = (k, copy)
    dec = BlowupDecomposition(graph, mult, tuple(d), tuple(index_map))
    if dec.reconstruct() != A:
        raise NotBlowup("reconstruction does not reproduce the input")
    return dec


def _matmul(x: Sequence[Sequence[int]], y: Sequence[Sequence[int]]) -> list[list[int]]:
    yt = list(zip(*y))
    return [[sum(p * q for p, q in zip(r, c)) for c in yt] for r in x]


def _transpose(x: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(c) for c in zip(*x)]


def _plus_two(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[v + (2 if i == j else 0) for j, v in enumerate(r)] for i, r in enumerate(rows)]


@dataclass(frozen=True)
class LiftReport:
    """Outcome of checking ``M + 2I = B^T (M' + 2I) B`` exactly.

    ``base_in_m2`` records whether the smaller matrix lies in ``M(2)``;
    when the identity holds this forces the larger one into ``M(2)``.
    """

    identity_holds: bool
    merge_matrix: tuple[tuple[int, ...], ...]
    base_in_m2: bool

    @property
    def implies_in_m2(self) -> bool:
        return self.identity_holds and self.base_in_m2


def psd_lift_blowup(F: SignedGraph, a: Sequence[int]) -> LiftReport:
    a = check_multiplicity(F, a)
    labels = blowup_index(a)
    B = [[1 if u == v else 0 for v, _ in labels] for u in range(F.order)]
    base = adjacency_matrix(F)
    rhs = _matmul(_transpose(B), _matmul(_plus_two(base.rows), B))
    lhs = _plus_two(build_blowup(F, a).rows)
    return LiftReport(
        lhs == rhs,
        tuple(map(tuple, B)),
        membership_status(base, _TWO).inside,
    )


def psd_lift_rowmerge(A: HollowSymMatrix) -> LiftReport:
    """Check the merge identity when indices 0 and 1 carry ``+2`` and equal rows elsewhere."""
    n = A.order
    if n < 2 or A.rows[0][1] != 2:
        raise PreconditionViolated("entry (0, 1) must equal 2")
    for k in range(2, n):
        if A.rows[0][k] != A.rows[1][k]:
            raise PreconditionViolated(f"rows 0 and 1 differ at column {k}")
    reduced = principal_submatrix(A, range(1, n))
    B = [[0] * n for _ in range(n - 1)]
    B[0][0] = B[0][1] = 1
    for i in range(1, n - 1):
        B[i][i + 1] = 1
    rhs = _matmul(_transpose(B), _matmul(_plus_two(reduced.rows), B))
    return LiftReport(
        _plus_two(A.rows) == rhs,
        tuple(map(tuple, B)),
        membership_status(reduced, _TWO).inside,
    )
