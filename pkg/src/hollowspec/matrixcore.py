"""Symmetric hollow integer matrices and exact smallest-eigenvalue classification.

Indices are 0-based throughout the library; file formats and the CLI use
1-based labels.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import EmptySubset, LengthMismatch, NotHollowSymmetric, OrderMismatch
from .exactnum import IntPolynomial, SpectralThreshold, isolate_real_roots, squarefree_part

SwitchingVector = tuple[int, ...]


@dataclass(frozen=True)
class HollowSymMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        n = len(rows)
        if n == 0:
            raise NotHollowSymmetric("matrix must have positive order")
        for i, r in enumerate(rows):
            if len(r) != n:
                raise NotHollowSymmetric(f"row {i} has length {len(r)}, expected {n}")
            if r[i] != 0:
                raise NotHollowSymmetric(f"diagonal entry ({i}, {i}) is {r[i]}, not 0")
            for j in range(i):
                if r[j] != rows[j][i]:
                    raise NotHollowSymmetric(f"entries ({i}, {j}) and ({j}, {i}) differ")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zeros(cls, n: int) -> HollowSymMatrix:
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def from_upper(cls, n: int, upper: Sequence[int]) -> HollowSymMatrix:
        """Build from the strict upper triangle listed row by row."""
        m = [[0] * n for _ in range(n)]
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                m[i][j] = m[j][i] = upper[k]
                k += 1
        return cls(tuple(map(tuple, m)))

    @property
    def order(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def upper(self) -> tuple[int, ...]:
        n = self.order
        return tuple(self.rows[i][j] for i in range(n) for j in range(i + 1, n))

    def max_abs_entry(self) -> int:
        return max((abs(v) for r in self.rows for v in r), default=0)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in r) for r in self.rows)


class MembershipStatus(enum.Enum):
    STRICTLY_INSIDE = "StrictlyInside"
    ON_BOUNDARY = "OnBoundary"
    OUTSIDE = "Outside"

    @property
    def inside(self) -> bool:
        return self is not MembershipStatus.OUTSIDE


_SEVERITY = {MembershipStatus.STRICTLY_INSIDE: 0, MembershipStatus.ON_BOUNDARY: 1, MembershipStatus.OUTSIDE: 2}


def worst_status(statuses: Iterable[MembershipStatus]) -> MembershipStatus:
    return max(statuses, key=_SEVERITY.__getitem__, default=MembershipStatus.STRICTLY_INSIDE)


@dataclass(frozen=True)
class MembershipVerdict:
    status: MembershipStatus
    witness: tuple[int, ...] | None = None

    def __post_init__(self):
        if (self.witness is not None) != (self.status is MembershipStatus.OUTSIDE):
            raise ValueError("witness must be given exactly for Outside verdicts")

    @property
    def inside(self) -> bool:
        return self.status.inside


def berkowitz(rows: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of ``det(xI - M)``, highest degree first, by Berkowitz's algorithm.

    Division free, so it is exact over the integers for any square matrix.
    """
    n = len(rows)
    poly = [1]
    for k in range(n):
        # column of the Toeplitz factor: 1, -a_kk, -R C, -R A C, ..., -R A^{k-1} C
        col = [1, -rows[k][k]]
        r = rows[k][:k]
        v = [rows[i][k] for i in range(k)]
        for _ in range(k):
            col.append(-sum(a * b for a, b in zip(r, v)))
            v = [sum(rows[i][j] * v[j] for j in range(k)) for i in range(k)]
        new = [0] * (k + 2)
        for i in range(k + 2):
            s = 0
            for j in range(max(0, i - len(col) + 1), min(i, len(poly) - 1) + 1):
                s += col[i - j] * poly[j]
            new[i] = s
        poly = new
    return poly


def char_poly(A: HollowSymMatrix) -> IntPolynomial:
    """``det(xI - A)`` with exact integer coefficients."""
    return _char_poly_cached(A.rows)


@lru_cache(maxsize=200_000)
def _char_poly_cached(rows: tuple[tuple[int, ...], ...]) -> IntPolynomial:
    return IntPolynomial(tuple(reversed(berkowitz(rows))))


def principal_submatrix(A: HollowSymMatrix, S: Iterable[int]) -> HollowSymMatrix:
    idx = sorted(set(S))
    if not idx:
        raise EmptySubset("principal submatrix of an empty index set")
    if idx[0] < 0 or idx[-1] >= A.order:
        raise IndexError(f"index set {idx} out of range for order {A.order}")
    return HollowSymMatrix(tuple(tuple(A.rows[i][j] for j in idx) for i in idx))


def delete_index(A: HollowSymMatrix, i: int) -> HollowSymMatrix:
    return principal_submatrix(A, (j for j in range(A.order) if j != i))


def classify_char_poly(cp: IntPolynomial, lam: SpectralThreshold) -> MembershipStatus:
    """Place the smallest real root of ``cp`` relative to ``-lam``.

    ``cp`` must have only real roots (true for characteristic polynomials
    of symmetric matrices).  Roots of ``cp(-x)`` above ``lam`` are
    eigenvalues below ``-lam``.
    """
    reflected = cp.reflect()
    if lam.count_roots_above(reflected):
        return MembershipStatus.OUTSIDE
    if lam.is_root_of(reflected):
        return MembershipStatus.ON_BOUNDARY
    return MembershipStatus.STRICTLY_INSIDE


@lru_cache(maxsize=500_000)
def _status(rows: tuple[tuple[int, ...], ...], lam: SpectralThreshold) -> MembershipStatus:
    return classify_char_poly(_char_poly_cached(rows), lam)


def membership_status(A: HollowSymMatrix, lam: SpectralThreshold) -> MembershipStatus:
    return _status(A.rows, lam)


def classify_membership(A: HollowSymMatrix, lam: SpectralThreshold, *, shrink_witness: bool = False) -> MembershipVerdict:
    """Exact verdict for ``A`` against ``M(lam)``.

    For Outside verdicts the witness is the full index set, or with
    ``shrink_witness`` an inclusion-minimal index set whose principal
    submatrix is still Outside.
    """
    status = membership_status(A, lam)
    if status is not MembershipStatus.OUTSIDE:
        return MembershipVerdict(status)
    if not shrink_witness:
        return MembershipVerdict(status, tuple(range(A.order)))
    return MembershipVerdict(status, shrink_outside(A, lam))


def shrink_outside(A: HollowSymMatrix, lam: SpectralThreshold) -> tuple[int, ...]:
    """Greedily delete indices while the principal submatrix stays Outside.

    By interlacing, the result is a minimal forbidden principal submatrix.
    """
    idx = list(range(A.order))
    changed = True
    while changed:
        changed = False
        for k in range(len(idx)):
            trial = idx[:k] + idx[k + 1:]
            if trial and membership_status(principal_submatrix(A, trial), lam) is MembershipStatus.OUTSIDE:
                idx = trial
                changed = True
                break
    return tuple(idx)


def check_signs(D: Sequence[int]) -> SwitchingVector:
    D = tuple(int(d) for d in D)
    if any(d not in (1, -1) for d in D):
        raise ValueError(f"switching vector entries must be +1 or -1, got {D}")
    return D


def switch(A: HollowSymMatrix, D: Sequence[int]) -> HollowSymMatrix:
    """Return ``D A D`` for the diagonal sign matrix ``D``."""
    D = check_signs(D)
    if len(D) != A.order:
        raise LengthMismatch(f"switching vector has length {len(D)}, matrix has order {A.order}")
    return HollowSymMatrix(tuple(tuple(D[i] * D[j] * v for j, v in enumerate(r)) for i, r in enumerate(A.rows)))


def switching_equivalent(A: HollowSymMatrix, B: HollowSymMatrix) -> SwitchingVector | None:
    """A sign vector ``D`` with ``switch(B, D) == A``, or None.

    Signs propagate along a BFS forest of the support of ``B``; the root of
    each component (its smallest index) gets +1.
    """
    n = A.order
    if B.order != n:
        raise OrderMismatch(f"orders differ: {n} vs {B.order}")
    for i in range(n):
        for j in range(n):
            if abs(A.rows[i][j]) != abs(B.rows[i][j]):
                return None
    D = [0] * n
    for root in range(n):
        if D[root]:
            continue
        D[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in range(n):
                b = B.rows[u][w]
                if b and not D[w]:
                    D[w] = D[u] * (1 if A.rows[u][w] == b else -1)
                    queue.append(w)
    for i in range(n):
        for j in range(i + 1, n):
            if D[i] * D[j] * B.rows[i][j] != A.rows[i][j]:
                return None
    return tuple(D)


def support_components(A: HollowSymMatrix) -> list[list[int]]:
    """Connected components of the nonzero pattern, sorted by smallest index."""
    n = A.order
    seen = [False] * n
    comps = []
    for r in range(n):
        if seen[r]:
            continue
        seen[r] = True
        comp, queue = [r], deque([r])
        while queue:
            u = queue.popleft()
            for w in range(n):
                if A.rows[u][w] and not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def smallest_eigenvalue_bounds(A: HollowSymMatrix, width: Fraction = Fraction(1, 10**6)) -> tuple[Fraction, Fraction]:
    """Rational bracket of the smallest eigenvalue, for reporting."""
    sq = squarefree_part(char_poly(A))
    iv = isolate_real_roots(sq)[0]
    lo, hi = iv.lo, iv.hi
    while hi - lo >= width:
        m = (lo + hi) / 2
        s = sq.sign_at(m)
        if s == 0:
            return m, m
        if sq.sign_at(lo) * s < 0:
            hi = m
        else:
            lo = m
    return lo, hi
