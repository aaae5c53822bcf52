"""Signed graphs, switching-isomorphism canonical forms and isomorph-free enumeration.

Vertices are ``0..order-1``.  A canonical form is the labelled signed
graph that minimises a byte encoding over all labellings produced by an
individualisation-refinement search, after normalising signs so that a
BFS spanning forest carries only positive edges.  Within a fixed
labelling that normalisation is a complete switching invariant (cycle
sign products), so equal keys mean switching-isomorphic graphs.
"""
from __future__ import annotations

import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

from .errors import CapExceeded, EmptySubset, InvalidGraph
from .matrixcore import HollowSymMatrix

CanonicalKey = bytes

DEFAULT_ORDER_CAP = 10


@dataclass(frozen=True)
class SignedGraph:
    order: int
    edges: frozenset[tuple[int, int, int]] = frozenset()

    def __post_init__(self):
        if self.order < 1:
            raise InvalidGraph("a signed graph needs at least one vertex")
        seen: dict[tuple[int, int], int] = {}
        for u, v, s in self.edges:
            u, v, s = int(u), int(v), int(s)
            if u == v:
                raise InvalidGraph(f"loop at vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= self.order:
                raise InvalidGraph(f"edge ({u}, {v}) outside vertex range 0..{self.order - 1}")
            if s not in (1, -1):
                raise InvalidGraph(f"edge ({u}, {v}) has sign {s}")
            if (u, v) in seen:
                raise InvalidGraph(f"parallel edges between {u} and {v}")
            seen[u, v] = s
        object.__setattr__(self, "edges", frozenset((u, v, s) for (u, v), s in seen.items()))

    @classmethod
    def from_matrix(cls, A: HollowSymMatrix) -> SignedGraph:
        if A.max_abs_entry() > 1:
            raise InvalidGraph("signed adjacency matrices have entries in {-1, 0, 1}")
        n = A.order
        return cls(n, frozenset((i, j, A.rows[i][j]) for i in range(n) for j in range(i + 1, n) if A.rows[i][j]))

    @classmethod
    def star(cls, leaves: int, sign: int = 1) -> SignedGraph:
        """``K_{1,leaves}`` with centre 0."""
        return cls(leaves + 1, frozenset((0, v, sign) for v in range(1, leaves + 1)))

    def sign(self, u: int, v: int) -> int:
        return self.sign_matrix()[u][v]

    def sign_matrix(self) -> tuple[tuple[int, ...], ...]:
        m = [[0] * self.order for _ in range(self.order)]
        for u, v, s in self.edges:
            m[u][v] = m[v][u] = s
        return tuple(map(tuple, m))

    def sorted_edges(self) -> list[tuple[int, int, int]]:
        return sorted(self.edges)

    def is_connected(self) -> bool:
        return len(connected_components(self)) == 1


def adjacency_matrix(F: SignedGraph) -> HollowSymMatrix:
    return HollowSymMatrix(F.sign_matrix())


def induced_subgraph(F: SignedGraph, S: Iterable[int]) -> SignedGraph:
    """Subgraph on ``S``, relabelled ``0..|S|-1`` in increasing vertex order."""
    idx = sorted(set(S))
    if not idx:
        raise EmptySubset("induced subgraph on an empty vertex set")
    pos = {v: k for k, v in enumerate(idx)}
    return SignedGraph(len(idx), frozenset((pos[u], pos[v], s) for u, v, s in F.edges if u in pos and v in pos))


def delete_vertex(F: SignedGraph, v: int) -> SignedGraph:
    return induced_subgraph(F, (u for u in range(F.order) if u != v))


def relabel(F: SignedGraph, perm: Sequence[int]) -> SignedGraph:
    """Vertex ``v`` becomes ``perm[v]``."""
    return SignedGraph(F.order, frozenset((perm[u], perm[v], s) for u, v, s in F.edges))


def switch_graph(F: SignedGraph, D: Sequence[int]) -> SignedGraph:
    return SignedGraph(F.order, frozenset((u, v, s * D[u] * D[v]) for u, v, s in F.edges))


def random_signed_graph(rng: random.Random, order: int, density: float = 0.5) -> SignedGraph:
    edges = [
        (u, v, rng.choice((1, -1)))
        for u in range(order)
        for v in range(u + 1, order)
        if rng.random() < density
    ]
    return SignedGraph(order, frozenset(edges))


def components(n: int, adjacent: Callable[[int, int], bool]) -> list[list[int]]:
    """Connected components of a graph on ``0..n-1``, each sorted, ordered by smallest vertex."""
    seen = [False] * n
    out = []
    for r in range(n):
        if seen[r]:
            continue
        seen[r] = True
        comp, queue = [r], deque([r])
        while queue:
            u = queue.popleft()
            for w in range(n):
                if not seen[w] and adjacent(u, w):
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def connected_components(F: SignedGraph) -> list[list[int]]:
    m = F.sign_matrix()
    return components(F.order, lambda u, w: m[u][w] != 0)


# canonical labelling


def _initial_colors(m: Sequence[Sequence[int]]) -> list[tuple]:
    """Relabelling- and switching-invariant vertex colours."""
    n = len(m)
    out = []
    for v in range(n):
        nb = [w for w in range(n) if m[v][w]]
        balanced = unbalanced = 0
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                if m[a][b]:
                    if m[v][a] * m[a][b] * m[b][v] > 0:
                        balanced += 1
                    else:
                        unbalanced += 1
        out.append((len(nb), balanced, unbalanced))
    return out


def _rank(keys: Sequence) -> list[int]:
    order = sorted(set(keys))
    index = {k: i for i, k in enumerate(order)}
    return [index[k] for k in keys]


def _refine(nbrs: Sequence[Sequence[int]], colors: list[int]) -> list[int]:
    ncolors = len(set(colors))
    while True:
        sig = [(colors[v], tuple(sorted(colors[w] for w in nbrs[v]))) for v in range(len(colors))]
        new = _rank(sig)
        k = len(set(new))
        if k == ncolors:
            return new
        colors, ncolors = new, k


def _twins(m: Sequence[Sequence[int]], u: int, v: int) -> bool:
    """Whether swapping ``u`` and ``v`` (plus a switching) is an automorphism."""
    eps = 0
    for w in range(len(m)):
        if w == u or w == v:
            continue
        a, b = m[u][w], m[v][w]
        if abs(a) != abs(b):
            return False
        if a:
            p = a * b
            if eps and p != eps:
                return False
            eps = p
    return True


def _encode(m: Sequence[Sequence[int]], label: Sequence[int]) -> bytes:
    """Forest-normalised upper triangle of the graph relabelled by ``label``."""
    n = len(m)
    inv = [0] * n
    for v, lab in enumerate(label):
        inv[lab] = v
    r = [[m[inv[i]][inv[j]] for j in range(n)] for i in range(n)]
    d = [0] * n
    for root in range(n):
        if d[root]:
            continue
        d[root] = 1
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b in range(n):
                if r[a][b] and not d[b]:
                    d[b] = d[a] * r[a][b]
                    queue.append(b)
    out = bytearray([n])
    for i in range(n):
        for j in range(i + 1, n):
            s = d[i] * d[j] * r[i][j]
            out.append(0 if s == 0 else 1 if s > 0 else 2)
    return bytes(out)


def _search_labelling(m: Sequence[Sequence[int]]) -> bytes:
    n = len(m)
    nbrs = [[w for w in range(n) if m[v][w]] for v in range(n)]
    best: list[bytes] = []

    def descend(colors: list[int]) -> None:
        colors = _refine(nbrs, colors)
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min((c for c, k in counts.items() if k > 1), default=None)
        if target is None:
            code = _encode(m, colors)
            if not best or code < best[0]:
                best[:] = [code]
            return
        tried: list[int] = []
        for v in range(n):
            if colors[v] != target or any(_twins(m, u, v) for u in tried):
                continue
            tried.append(v)
            child = [2 * c + (1 if c >= target else 0) for c in colors]
            child[v] = 2 * target
            descend(_rank(child))

    descend(_rank(_initial_colors(m)))
    return best[0]


def _decode(code: bytes) -> SignedGraph:
    n = code[0]
    edges = []
    k = 1
    for i in range(n):
        for j in range(i + 1, n):
            b = code[k]
            k += 1
            if b:
                edges.append((i, j, 1 if b == 1 else -1))
    return SignedGraph(n, frozenset(edges))


def canonical_key(F: SignedGraph) -> CanonicalKey:
    """Byte string equal for two graphs iff they are switching-isomorphic."""
    return _search_labelling(F.sign_matrix())


def canonical_form(F: SignedGraph) -> SignedGraph:
    """The representative of ``F``'s switching-isomorphism class that the key encodes."""
    return _decode(canonical_key(F))


# enumeration


def _children(parent: SignedGraph) -> dict[CanonicalKey, SignedGraph]:
    k = parent.order
    out: dict[CanonicalKey, SignedGraph] = {}
    for pattern in product((0, 1, -1), repeat=k):
        # the new vertex can be switched, so fix its first edge positive
        first = next((s for s in pattern if s), 1)
        if first < 0:
            continue
        edges = set(parent.edges)
        edges.update((u, k, s) for u, s in enumerate(pattern) if s)
        key = canonical_key(SignedGraph(k + 1, frozenset(edges)))
        if key not in out:
            out[key] = _decode(key)
    return out


def _children_batch(parents: Sequence[SignedGraph]) -> dict[CanonicalKey, SignedGraph]:
    out: dict[CanonicalKey, SignedGraph] = {}
    for p in parents:
        out.update(_children(p))
    return out


def extend_classes(parents: Iterable[SignedGraph], workers: int = 1) -> list[SignedGraph]:
    """Canonical one-vertex extensions of ``parents``, deduplicated and sorted by key.

    The representative of each class is its canonical form, so the result
    does not depend on which parent produced a class or on the schedule.
    """
    parents = list(parents)
    merged: dict[CanonicalKey, SignedGraph] = {}
    if workers > 1 and len(parents) > 1:
        chunks = [parents[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_children_batch, chunks):
                merged.update(part)
    else:
        merged = _children_batch(parents)
    return [merged[k] for k in sorted(merged)]


def enumerate_signed_graphs(
    order: int,
    prune: Callable[[SignedGraph], bool] | None = None,
    *,
    workers: int = 1,
    cap: int = DEFAULT_ORDER_CAP,
) -> Iterator[SignedGraph]:
    """One canonical representative per switching-isomorphism class of the given order.

    ``prune(G) -> True`` rejects ``G``: its one-vertex extensions are not
    generated.  For a complete pruned search the rejected set must be closed
    under one-vertex extension.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if order > cap:
        raise CapExceeded(f"order {order} exceeds the canonicalisation cap {cap}")
    level = [SignedGraph(1)]
    for _ in range(order - 1):
        if prune is not None:
            level = [g for g in level if not prune(g)]
        level = extend_classes(level, workers)
    yield from level
