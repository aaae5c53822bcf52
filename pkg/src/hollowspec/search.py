"""Minimal forbidden certificates, bounded exhaustive searches and the blow-up frontier.

A certificate for a matrix of order ``n`` only inspects the ``n``
principal submatrices of order ``n - 1``: by Cauchy interlacing every
smaller principal submatrix sits inside one of them, so membership of
those ``n`` implies membership of all proper principal submatrices.
"""
from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import gcd
from typing import Callable, Iterator, Sequence

from .blowup import (
    Multiplicity,
    build_blowup,
    classify_blowup,
    decompose_blowup,
    psd_lift_blowup,
    psd_lift_rowmerge,
)
from .errors import CapExceeded, HollowSpecError
from .exactnum import (
    IntPolynomial,
    Ordering,
    SpectralThreshold,
    compare_thresholds,
    count_roots_above,
    lambda_prime,
    lambda_star,
    threshold_from_rational,
    threshold_sqrt,
)
from .matrixcore import (
    HollowSymMatrix,
    MembershipStatus,
    berkowitz,
    char_poly,
    classify_char_poly,
    delete_index,
    membership_status,
    principal_submatrix,
    switch,
)
from .signedgraph import (
    DEFAULT_ORDER_CAP,
    SignedGraph,
    adjacency_matrix,
    canonical_key,
    extend_classes,
    random_signed_graph,
    relabel,
    switch_graph,
)


class Verdict(enum.Enum):
    MINIMAL_FORBIDDEN = "MinimalForbidden"
    NOT_FORBIDDEN = "NotForbidden"
    FORBIDDEN_NOT_MINIMAL = "ForbiddenNotMinimal"


@dataclass(frozen=True)
class Certificate:
    """Replayable verdict for a matrix or signed graph at a threshold.

    ``evidence`` lists ``(deleted index, status)`` pairs: all ``order`` of
    them for MinimalForbidden, the single Outside deletion for
    ForbiddenNotMinimal, and nothing for NotForbidden (the inside
    ``subject_status`` is the evidence).
    """

    subject: HollowSymMatrix | SignedGraph
    threshold: SpectralThreshold
    verdict: Verdict
    subject_status: MembershipStatus
    evidence: tuple[tuple[int, MembershipStatus], ...] = ()

    @property
    def matrix(self) -> HollowSymMatrix:
        if isinstance(self.subject, SignedGraph):
            return adjacency_matrix(self.subject)
        return self.subject

    @property
    def order(self) -> int:
        return self.subject.order


def _certify(A: HollowSymMatrix, subject, lam: SpectralThreshold) -> Certificate:
    status = membership_status(A, lam)
    if status.inside:
        return Certificate(subject, lam, Verdict.NOT_FORBIDDEN, status)
    evidence = []
    for i in range(A.order):
        sub = membership_status(delete_index(A, i), lam)
        if sub is MembershipStatus.OUTSIDE:
            return Certificate(subject, lam, Verdict.FORBIDDEN_NOT_MINIMAL, status, ((i, sub),))
        evidence.append((i, sub))
    return Certificate(subject, lam, Verdict.MINIMAL_FORBIDDEN, status, tuple(evidence))


def certify_matrix(A: HollowSymMatrix, lam: SpectralThreshold) -> Certificate:
    return _certify(A, A, lam)


def certify_graph(F: SignedGraph, lam: SpectralThreshold) -> Certificate:
    return _certify(adjacency_matrix(F), F, lam)


def faddeev_leverrier(A: HollowSymMatrix) -> IntPolynomial:
    """``det(xI - A)`` by the Faddeev-LeVerrier recursion (independent of Berkowitz)."""
    n = A.order
    a = A.rows
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c = coeffs[n - k + 1]
        m = [[sum(a[i][t] * m[t][j] for t in range(n)) + (c if i == j else 0) for j in range(n)] for i in range(n)]
        tr = sum(sum(a[i][t] * m[t][i] for t in range(n)) for i in range(n))
        if tr % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier coefficient")
        coeffs[n - k] = -tr // k
    return IntPolynomial(tuple(coeffs))


def _independent_status(A: HollowSymMatrix, lam: SpectralThreshold) -> MembershipStatus:
    return classify_char_poly(faddeev_leverrier(A), lam)


def recheck_problems(cert: Certificate) -> list[str]:
    """Re-derive a certificate from scratch; an empty list means it is valid.

    Characteristic polynomials are recomputed by Faddeev-LeVerrier and no
    cached verdict is consulted.
    """
    A = cert.matrix
    lam = cert.threshold
    problems = []
    status = _independent_status(A, lam)
    if status is not cert.subject_status:
        problems.append(f"subject status is {status.value}, certificate says {cert.subject_status.value}")
    for i, claimed in cert.evidence:
        if not 0 <= i < A.order:
            problems.append(f"evidence index {i} out of range")
            continue
        got = _independent_status(delete_index(A, i), lam)
        if got is not claimed:
            problems.append(f"deleting {i} gives {got.value}, certificate says {claimed.value}")
    v = cert.verdict
    if v is Verdict.NOT_FORBIDDEN:
        if not cert.subject_status.inside:
            problems.append("NotForbidden but subject is Outside")
    elif v is Verdict.FORBIDDEN_NOT_MINIMAL:
        if cert.subject_status.inside:
            problems.append("ForbiddenNotMinimal but subject is inside")
        if len(cert.evidence) != 1 or cert.evidence[0][1] is not MembershipStatus.OUTSIDE:
            problems.append("ForbiddenNotMinimal needs one Outside deletion")
    else:
        if cert.subject_status.inside:
            problems.append("MinimalForbidden but subject is inside")
        if sorted(i for i, _ in cert.evidence) != list(range(A.order)):
            problems.append("MinimalForbidden must list every single-index deletion")
        if any(s is MembershipStatus.OUTSIDE for _, s in cert.evidence):
            problems.append("MinimalForbidden has an Outside deletion")
    return problems


def recheck(cert: Certificate) -> bool:
    return not recheck_problems(cert)


def brute_force_verdict(A: HollowSymMatrix, lam: SpectralThreshold) -> Verdict:
    """Verdict from the definition: every proper principal submatrix is checked."""
    if membership_status(A, lam).inside:
        return Verdict.NOT_FORBIDDEN
    n = A.order
    for mask in range(1, (1 << n) - 1):
        idx = [i for i in range(n) if mask >> i & 1]
        if membership_status(principal_submatrix(A, idx), lam) is MembershipStatus.OUTSIDE:
            return Verdict.FORBIDDEN_NOT_MINIMAL
    return Verdict.MINIMAL_FORBIDDEN


# bounded searches


def iter_minimal_forbidden_graphs(
    lam: SpectralThreshold, max_order: int, *, workers: int = 1, cap: int = DEFAULT_ORDER_CAP
) -> Iterator[Certificate]:
    """Stream minimal forbidden graphs for ``S(lam)`` in (order, canonical key) order.

    Only graphs inside ``S(lam)`` are extended: an extension of an Outside
    graph has an Outside proper induced subgraph and cannot be minimal.
    """
    if max_order > cap:
        raise CapExceeded(f"max order {max_order} exceeds the enumeration cap {cap}")
    level = [SignedGraph(1)]
    for k in range(1, max_order + 1):
        if k > 1:
            level = extend_classes(level, workers)
        inside = []
        for g in level:
            if membership_status(adjacency_matrix(g), lam).inside:
                inside.append(g)
                continue
            cert = certify_graph(g, lam)
            if cert.verdict is Verdict.MINIMAL_FORBIDDEN:
                yield cert
        level = inside


def search_minimal_forbidden_graphs(
    lam: SpectralThreshold, max_order: int, *, workers: int = 1, cap: int = DEFAULT_ORDER_CAP
) -> list[Certificate]:
    return list(iter_minimal_forbidden_graphs(lam, max_order, workers=workers, cap=cap))


def matrix_canonical_form(A: HollowSymMatrix) -> HollowSymMatrix:
    """Least representative under simultaneous permutation and switching.

    Exhaustive over permutations; intended for orders up to about 7.
    """
    n = A.order
    best = None
    for perm in permutations(range(n)):
        r = [[A.rows[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
        d = [0] * n
        for root in range(n):
            if d[root]:
                continue
            d[root] = 1
            stack = [root]
            while stack:
                u = stack.pop(0)
                for w in range(n):
                    if r[u][w] and not d[w]:
                        d[w] = d[u] * (1 if r[u][w] > 0 else -1)
                        stack.append(w)
        code = tuple(d[i] * d[j] * r[i][j] for i in range(n) for j in range(i + 1, n))
        key = tuple((abs(v), v < 0) for v in code)
        if best is None or key < best[0]:
            best = (key, code)
    return HollowSymMatrix.from_upper(n, best[1])


def switching_normalised_matrices(order: int, entry_bound: int) -> Iterator[HollowSymMatrix]:
    """Every hollow symmetric matrix with ``|entries| <= entry_bound`` up to switching.

    Switching index ``j`` flips the sign of entry ``(0, j)``, so row 0 is
    taken nonnegative.
    """
    first = range(0, entry_bound + 1)
    rest = range(-entry_bound, entry_bound + 1)
    m = order * (order - 1) // 2
    for head in product(first, repeat=order - 1):
        for tail in product(rest, repeat=m - (order - 1)):
            yield HollowSymMatrix.from_upper(order, head + tail)


def search_minimal_forbidden_matrices(
    lam: SpectralThreshold, max_order: int, *, entry_bound: int = 3
) -> list[Certificate]:
    """Minimal forbidden matrices with bounded entries, one per permutation/switching class.

    Sorted by (order, canonical form).
    """
    found: dict[HollowSymMatrix, Certificate] = {}
    for n in range(2, max_order + 1):
        for A in switching_normalised_matrices(n, entry_bound):
            if membership_status(A, lam).inside:
                continue
            cert = certify_matrix(A, lam)
            if cert.verdict is Verdict.MINIMAL_FORBIDDEN:
                canon = matrix_canonical_form(A)
                if canon not in found:
                    found[canon] = certify_matrix(canon, lam)
    return [found[k] for k in sorted(found, key=lambda A: (A.order, A.upper()))]


# frontier over multiplicity vectors


@dataclass(frozen=True)
class FrontierResult:
    """Minimal multiplicity vectors ``a <= cap`` with ``A_{F,a}`` outside ``M(lam)``.

    ``closed`` means the list is complete over all of ``N^k``: either every
    blow-up is provably inside (``reason == "lift"``), or every maximal
    good vector that touches the cap stays good when its capped
    coordinates are sent to infinity (``reason == "limit"``).
    """

    graph: SignedGraph
    threshold: SpectralThreshold
    minimal_bad: tuple[Multiplicity, ...]
    closed: bool
    cap: int
    certificates: tuple[Certificate, ...] = ()
    explored: int = 0
    reason: str = ""

    @property
    def certified(self) -> tuple[Multiplicity, ...]:
        return tuple(
            a for a, c in zip(self.minimal_bad, self.certificates) if c.verdict is Verdict.MINIMAL_FORBIDDEN
        )

    @property
    def max_certified_order(self) -> int:
        return max((sum(a) for a in self.certified), default=0)


def _psd_with_weights(F: SignedGraph, a: Sequence[int | None], eps: Fraction) -> bool:
    """Whether ``A_F + 2I + eps * diag(1/a)`` is PSD, with ``1/None`` read as 0."""
    m = F.sign_matrix()
    k = F.order
    scale = 1
    for v in a:
        if v is not None:
            scale = scale * v // gcd(scale, v)
    p, q = eps.numerator, eps.denominator
    rows = [
        [q * scale * (m[u][v] + (2 if u == v else 0)) + (p * scale // a[u] if u == v and a[u] is not None else 0)
         for v in range(k)]
        for u in range(k)
    ]
    cp = IntPolynomial(tuple(reversed(berkowitz(rows))))
    return count_roots_above(cp.reflect(), Fraction(0)) == 0


def good_at_infinity(F: SignedGraph, a: Sequence[int | None], lam: SpectralThreshold, max_steps: int = 64) -> bool:
    """Sound test that ``A_{F,b}`` is inside ``M(lam)`` for every ``b`` that agrees with
    ``a`` on its finite coordinates (``None`` marks an unbounded coordinate).

    For ``lam > 2`` membership of ``A_{F,b}`` is equivalent to positive
    semidefiniteness of ``A_F + 2I + (lam - 2) diag(1/b)``, which is monotone
    in ``b`` and closed under the limit ``1/b_i -> 0``.  For algebraic
    ``lam`` the answer is sandwiched between rational bounds; False is also
    returned when that does not settle within ``max_steps`` bisections.
    """
    two = threshold_from_rational(2)
    if compare_thresholds(lam, two) is not Ordering.GREATER:
        return False
    q = lam.rational_value
    if q is not None:
        return _psd_with_weights(F, a, q - 2)
    t = lam
    for _ in range(max_steps):
        lo, hi = t.isolation.lo, t.isolation.hi
        if lo > 2 and _psd_with_weights(F, a, lo - 2):
            return True
        if not _psd_with_weights(F, a, hi - 2):
            return False
        t = t.bisect()
    return False


def frontier_blowups(F: SignedGraph, lam: SpectralThreshold, cap: int = 12) -> FrontierResult:
    """Breadth-first search of the good (inside) region of the multiplicity box.

    A vector is classified only when all its immediate predecessors are
    good, so each bad vector reached is a minimal element of the bad set.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    k = F.order
    two = threshold_from_rational(2)
    if compare_thresholds(lam, two) is not Ordering.LESS and membership_status(adjacency_matrix(F), two).inside:
        return FrontierResult(F, lam, (), True, cap, reason="lift")
    good: set[Multiplicity] = set()
    maximal: list[Multiplicity] = []
    bad: list[Multiplicity] = []
    explored = 0
    level = {(1,) * k}
    while level:
        nxt: set[Multiplicity] = set()
        for a in sorted(level):
            if any(a[i] > 1 and a[:i] + (a[i] - 1,) + a[i + 1:] not in good for i in range(k)):
                continue
            explored += 1
            if classify_blowup(F, a, lam).inside:
                good.add(a)
                for i in range(k):
                    if a[i] < cap:
                        nxt.add(a[:i] + (a[i] + 1,) + a[i + 1:])
            else:
                bad.append(a)
        level = nxt
    for a in good:
        if all(a[i] == cap or a[:i] + (a[i] + 1,) + a[i + 1:] not in good for i in range(k)):
            maximal.append(a)
    bad.sort(key=lambda a: (sum(a), a))
    touching = [a for a in sorted(maximal) if cap in a]
    closed = all(good_at_infinity(F, [None if v == cap else v for v in a], lam) for a in touching)
    certs = tuple(certify_matrix(build_blowup(F, a), lam) for a in bad)
    return FrontierResult(F, lam, tuple(bad), closed, cap, certs, explored, "limit" if closed else "open")


def minimal_elements(vectors: Sequence[Multiplicity]) -> list[Multiplicity]:
    """Minimal elements under the componentwise order (quadratic scan)."""
    vs = sorted(set(vectors), key=lambda a: (sum(a), a))
    out: list[Multiplicity] = []
    for a in vs:
        if not any(all(x <= y for x, y in zip(m, a)) for m in out):
            out.append(a)
    return out


def brute_force_minimal_bad(F: SignedGraph, lam: SpectralThreshold, cap: int) -> list[Multiplicity]:
    """Minimal bad vectors in ``[1, cap]^k`` from full-matrix classification of every box point."""
    bad = [
        a
        for a in product(range(1, cap + 1), repeat=F.order)
        if membership_status(build_blowup(F, a), lam) is MembershipStatus.OUTSIDE
    ]
    return minimal_elements(bad)


# checks of the individual facts behind the threshold results


@dataclass(frozen=True)
class Root5Row:
    a: int
    b: int
    status: MembershipStatus

    @property
    def attains_equality(self) -> bool:
        return self.status is MembershipStatus.ON_BOUNDARY

    @property
    def ok(self) -> bool:
        return self.status is not MembershipStatus.STRICTLY_INSIDE


@dataclass(frozen=True)
class Root5Report:
    rows: tuple[Root5Row, ...]

    @property
    def passed(self) -> bool:
        return len(self.rows) == 20 and all(r.ok for r in self.rows) and any(r.attains_equality for r in self.rows)


def root5_matrix(a: int, b: int) -> HollowSymMatrix:
    return HollowSymMatrix(((0, 2, a), (2, 0, b), (a, b, 0)))


def verify_root5_table() -> Root5Report:
    """Smallest eigenvalue of ``[[0,2,a],[2,0,b],[a,b,0]]`` against ``-sqrt(5)`` for all ``a != b``."""
    r5 = threshold_sqrt(5)
    vals = (0, 1, -1, 2, -2)
    rows = tuple(Root5Row(a, b, membership_status(root5_matrix(a, b), r5)) for a in vals for b in vals if a != b)
    return Root5Report(rows)


@dataclass
class Section:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


@dataclass
class SuiteReport:
    sections: list[Section] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)


def _within(t: SpectralThreshold, value: str, tol: str = "1/100000") -> bool:
    return abs(t.approx(12) - Fraction(value)) <= Fraction(tol)


def check_thresholds() -> Section:
    star, prime = lambda_star(), lambda_prime()
    two, r5 = threshold_from_rational(2), threshold_sqrt(5)
    expected = IntPolynomial((-1, 0, 4, 0, -5, 0, 1))
    chain = [two, star, prime, r5]
    ordered = all(compare_thresholds(x, y) is Ordering.LESS for x, y in zip(chain, chain[1:]))
    ok = star.minpoly == expected and _within(star, "2.01980") and _within(prime, "2.05817") and ordered
    detail = (
        f"lambda* minpoly {star.minpoly}, value {star.display}; lambda' {prime.display}; "
        f"2 < lambda* < lambda' < sqrt5: {ordered}"
    )
    return Section("thresholds", ok, detail)


def check_root5() -> Section:
    rep = verify_root5_table()
    eq = [(r.a, r.b) for r in rep.rows if r.attains_equality]
    return Section("root5 table", rep.passed, f"{sum(r.ok for r in rep.rows)}/20 pairs at most -sqrt5; equality at {eq}")


def random_in_s2(rng: random.Random, max_order: int = 6) -> SignedGraph:
    two = threshold_from_rational(2)
    while True:
        F = random_signed_graph(rng, rng.randint(1, max_order), rng.uniform(0.1, 0.6))
        if membership_status(adjacency_matrix(F), two).inside:
            return F


def check_lifts(rng: random.Random, trials: int) -> Section:
    two = threshold_from_rational(2)
    failures = 0
    for _ in range(trials):
        F = random_in_s2(rng)
        a = tuple(rng.randint(1, 4) for _ in range(F.order))
        rep = psd_lift_blowup(F, a)
        if not (rep.identity_holds and rep.implies_in_m2 and membership_status(build_blowup(F, a), two).inside):
            failures += 1
        if a[0] >= 2 and not psd_lift_rowmerge(build_blowup(F, a)).identity_holds:
            failures += 1
    return Section("psd lifts", failures == 0, f"{trials} random (F, a) with F in S(2); {failures} failures")


def random_decomposable(rng: random.Random, max_order: int = 6, max_mult: int = 4):
    F = random_signed_graph(rng, rng.randint(1, max_order), rng.uniform(0.2, 0.8))
    a = tuple(rng.randint(1, max_mult) for _ in range(F.order))
    A = build_blowup(F, a)
    n = A.order
    perm = list(range(n))
    rng.shuffle(perm)
    D = [rng.choice((1, -1)) for _ in range(n)]
    B = switch(HollowSymMatrix(tuple(tuple(A.rows[perm[i]][perm[j]] for j in range(n)) for i in range(n))), D)
    return F, a, B


def check_decompositions(rng: random.Random, trials: int) -> Section:
    failures = 0
    for _ in range(trials):
        F, a, B = random_decomposable(rng)
        try:
            dec = decompose_blowup(B)
        except HollowSpecError:
            failures += 1
            continue
        ok = dec.reconstruct() == B and canonical_key(dec.graph) == canonical_key(F)
        ok = ok and sorted(dec.mult) == sorted(a)
        failures += not ok
    return Section("decomposition round trips", failures == 0, f"{trials} trials; {failures} failures")


def random_matrix(rng: random.Random, order: int, bound: int) -> HollowSymMatrix:
    return HollowSymMatrix.from_upper(order, [rng.randint(-bound, bound) for _ in range(order * (order - 1) // 2)])


def check_interlacing(rng: random.Random, trials: int) -> Section:
    lams = [threshold_from_rational(2), lambda_star(), threshold_sqrt(5), threshold_from_rational(Fraction(5, 2))]
    failures = 0
    for _ in range(trials):
        A = random_matrix(rng, rng.randint(2, 6), 3)
        for lam in lams:
            if membership_status(A, lam).inside:
                failures += any(
                    membership_status(delete_index(A, i), lam) is MembershipStatus.OUTSIDE for i in range(A.order)
                )
    return Section("interlacing", failures == 0, f"{trials} random matrices x {len(lams)} thresholds; {failures} violations")


def check_entry_bound(max_order: int = 4) -> Section:
    """Certified minimal forbidden matrices of order >= 3 have entries in [-2, 2]."""
    parts = []
    ok = True
    scans = [(threshold_from_rational(2), max_order), (lambda_star(), 3), (threshold_sqrt(5), 3)]
    for lam, order in scans:
        certs = search_minimal_forbidden_matrices(lam, order, entry_bound=3)
        big = [c for c in certs if c.order >= 3 and c.matrix.max_abs_entry() > 2]
        replay = all(recheck(c) for c in certs)
        ok = ok and not big and replay
        parts.append(f"lambda={lam.display}, order<={order}: {len(certs)} classes, {len(big)} with |entry|>2, replay {replay}")
    return Section("entry bound", ok, "; ".join(parts))


def check_known_objects() -> Section:
    two = threshold_from_rational(2)
    r5 = threshold_sqrt(5)
    star = SignedGraph.star(5)
    certs = [
        certify_matrix(HollowSymMatrix(((0, 3), (3, 0))), two),
        certify_matrix(root5_matrix(1, 0), two),
        certify_graph(star, two),
    ]
    ok = all(c.verdict is Verdict.MINIMAL_FORBIDDEN and recheck(c) for c in certs)
    ok = ok and membership_status(adjacency_matrix(star), r5) is MembershipStatus.ON_BOUNDARY
    return Section("known minimal forbidden objects", ok, ", ".join(c.verdict.value for c in certs))


def run_verification_suite(seed: int = 0, trials: int = 200) -> SuiteReport:
    rng = random.Random(seed)
    report = SuiteReport()
    steps: list[Callable[[], Section]] = [
        check_thresholds,
        check_root5,
        lambda: check_lifts(rng, trials),
        lambda: check_decompositions(rng, trials),
        lambda: check_interlacing(rng, trials),
        check_entry_bound,
        check_known_objects,
    ]
    for step in steps:
        t0 = time.perf_counter()
        sec = step()
        sec.seconds = time.perf_counter() - t0
        report.sections.append(sec)
    return report


def switching_trial(rng: random.Random, lam: SpectralThreshold) -> bool:
    """One randomised check that certificates and char polys ignore switching and relabelling."""
    A = random_matrix(rng, rng.randint(2, 6), 2)
    D = [rng.choice((1, -1)) for _ in range(A.order)]
    B = switch(A, D)
    if char_poly(A) != char_poly(B):
        return False
    if certify_matrix(A, lam).verdict is not certify_matrix(B, lam).verdict:
        return False
    F = random_signed_graph(rng, rng.randint(1, 6))
    perm = list(range(F.order))
    rng.shuffle(perm)
    G = relabel(switch_graph(F, [rng.choice((1, -1)) for _ in range(F.order)]), perm)
    return certify_graph(F, lam).verdict is certify_graph(G, lam).verdict

