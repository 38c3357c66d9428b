"""GF(2) edge-space machinery on prime residue graphs.

A PrimeGraph splits the complete graph on a set of eligible primes into
residue edges (Legendre symbol +1) and non-residue edges (-1).  Edge sets are
vectors over GF(2) under symmetric difference; this module computes boundary
and cycle space bases, checks their annihilator duality, decomposes
non-residue cycles into triangles through an auxiliary prime, and tests the
membership condition used by the invariant evaluator.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from itertools import combinations

from .arith import DomainError, primes_in_v, require_v_prime, v_symbol

Edge = tuple[int, int]
EdgeVector = frozenset  # of Edge


class AuxiliaryPrimeNotFound(RuntimeError):
    """The ascending search for an auxiliary prime hit its bound."""


def edge(p: int, q: int) -> Edge:
    if p == q:
        raise DomainError(f"loop edge at {p}")
    return (p, q) if p < q else (q, p)


@dataclass(frozen=True)
class PrimeGraph:
    """Complete graph on eligible primes, edges partitioned by symbol."""

    vertices: tuple[int, ...]
    edges_R: frozenset
    edges_N: frozenset

    def __post_init__(self):
        if list(self.vertices) != sorted(set(self.vertices)):
            raise DomainError("vertices must be sorted and distinct")
        for p in self.vertices:
            require_v_prime(p)
        all_pairs = {edge(p, q) for p, q in combinations(self.vertices, 2)}
        if self.edges_R | self.edges_N != all_pairs or self.edges_R & self.edges_N:
            raise DomainError("edge sets must partition all vertex pairs")
        for p, q in self.edges_R:
            if v_symbol(p, q) != 1:
                raise DomainError(f"({p}/{q}) = -1, not a residue edge")
        for p, q in self.edges_N:
            if v_symbol(p, q) != -1:
                raise DomainError(f"({p}/{q}) = +1, not a non-residue edge")

    def label(self, e: Edge) -> str:
        if e in self.edges_R:
            return "R"
        if e in self.edges_N:
            return "N"
        raise DomainError(f"edge {e} is not in the graph")


def build_graph(primes) -> PrimeGraph:
    """Partition all pairs of the given eligible primes by Legendre symbol."""
    vs = sorted(primes)
    if len(set(vs)) != len(vs):
        raise DomainError("vertices must be distinct")
    res, non = set(), set()
    for p, q in combinations(vs, 2):
        (res if v_symbol(p, q) == 1 else non).add(edge(p, q))
    return PrimeGraph(tuple(vs), frozenset(res), frozenset(non))


# ---------------------------------------------------------------------------
# GF(2) linear algebra over a fixed edge order, vectors as int bitmasks

def _edge_index(edges) -> dict:
    return {e: i for i, e in enumerate(sorted(edges))}


def _to_mask(vec, index) -> int:
    m = 0
    for e in vec:
        m |= 1 << index[e]
    return m


def _from_mask(mask: int, edges_sorted) -> EdgeVector:
    return frozenset(e for i, e in enumerate(edges_sorted) if mask >> i & 1)


def _reduce_masks(masks) -> list[int]:
    basis: list[int] = []
    for m in masks:
        for b in basis:
            if m ^ b < m:
                m ^= b
        if m:
            basis.append(m)
    return basis


def _spanning_forest(vertices, edges):
    """(tree edges, non-tree edges, component count), edges taken ascending."""
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree, extra = [], []
    for e in sorted(edges):
        ru, rv = find(e[0]), find(e[1])
        if ru == rv:
            extra.append(e)
        else:
            parent[ru] = rv
            tree.append(e)
    components = sum(1 for v in parent if find(v) == v)
    return tree, extra, components


def _check_support(vs, es) -> None:
    vset = set(vs)
    for u, v in es:
        if u not in vset or v not in vset:
            raise DomainError(f"edge ({u},{v}) leaves the vertex set")


def boundary_space(vertices, edges) -> list[EdgeVector]:
    """A GF(2) basis of the span of the vertex stars (edges at one vertex)."""
    vs = sorted(vertices)
    es = sorted(set(edges))
    _check_support(vs, es)
    index = _edge_index(es)
    stars = []
    for v in vs:
        stars.append(_to_mask([e for e in es if v in e], index))
    basis = _reduce_masks(stars)
    _, extra, components = _spanning_forest(vs, es)
    assert len(basis) == len(vs) - components
    assert len(basis) + len(extra) == len(es)
    return [_from_mask(m, es) for m in basis]


def cycle_space(vertices, edges) -> list[EdgeVector]:
    """Basis of the even-degree edge sets: one fundamental cycle per edge
    outside an ascending-order spanning forest."""
    vs = sorted(vertices)
    es = sorted(set(edges))
    _check_support(vs, es)
    tree, extra, _ = _spanning_forest(vs, es)
    adj = {v: [] for v in vs}
    for u, v in tree:
        adj[u].append(v)
        adj[v].append(u)
    parent_edge: dict = {}
    depth: dict = {}
    for root in vs:
        if root in depth:
            continue
        depth[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in depth:
                    depth[w] = depth[u] + 1
                    parent_edge[w] = edge(u, w)
                    queue.append(w)
    basis = []
    for u, v in extra:
        path = set()
        a, b = u, v
        while depth[a] > depth[b]:
            e = parent_edge[a]
            path.add(e)
            a = e[0] if e[1] == a else e[1]
        while depth[b] > depth[a]:
            e = parent_edge[b]
            path.add(e)
            b = e[0] if e[1] == b else e[1]
        while a != b:
            ea, eb = parent_edge[a], parent_edge[b]
            path.add(ea)
            path.add(eb)
            a = ea[0] if ea[1] == a else ea[1]
            b = eb[0] if eb[1] == b else eb[1]
        cycle = frozenset(path | {edge(u, v)})
        for vertex, deg in Counter(x for e in cycle for x in e).items():
            assert deg % 2 == 0, f"fundamental cycle has odd degree at {vertex}"
        basis.append(cycle)
    return basis


def verify_duality(vertices, edges) -> bool:
    """True when the boundary and cycle spaces annihilate each other: every
    pairing is orthogonal and the ranks add up to the edge count."""
    bnd = boundary_space(vertices, edges)
    cyc = cycle_space(vertices, edges)
    if len(bnd) + len(cyc) != len(set(edges)):
        return False
    for b in bnd:
        for c in cyc:
            if len(b & c) % 2:
                return False
    return True


def _cycle_order(cycle) -> list[int]:
    """Vertices of a simple cycle in traversal order (error if not one)."""
    edges = set(cycle)
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(len(nbrs) != 2 for nbrs in adj.values()) or len(edges) != len(adj):
        raise DomainError("edge set is not a single simple cycle")
    start = min(adj)
    order = [start]
    prev, cur = None, start
    while True:
        a, b = sorted(adj[cur])
        nxt = b if a == prev else a
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    if len(order) != len(adj):
        raise DomainError("edge set is not a single simple cycle")
    return order


def triangle_decompose(cycle, prime_search_bound: int,
                       exclude=()) -> list[EdgeVector]:
    """Write a simple non-residue cycle as a symmetric difference of
    non-residue triangles through one auxiliary prime.

    The auxiliary prime is the least eligible prime below the bound that is
    a non-residue against every cycle vertex (skipping `exclude`); running
    again with the first choice excluded produces a second valid
    decomposition.  Existence below any particular bound is not guaranteed,
    hence the explicit search error.
    """
    cyc = frozenset(edge(u, v) for u, v in cycle)
    order = _cycle_order(cyc)
    if len(order) < 3:
        raise DomainError("a cycle needs at least three vertices")
    for p in order:
        require_v_prime(p)
    for u, v in cyc:
        if v_symbol(u, v) != -1:
            raise DomainError(f"({u}/{v}) = +1; cycle must be non-residue")
    if len(order) == 3:
        return [cyc]
    banned = set(order) | set(exclude)
    aux = None
    for l in primes_in_v(prime_search_bound):
        if l in banned:
            continue
        if all(v_symbol(p, l) == -1 for p in order):
            aux = l
            break
    if aux is None:
        raise AuxiliaryPrimeNotFound(
            f"no auxiliary prime below {prime_search_bound} is a non-residue "
            f"against all of {order}; raise the search bound")
    triangles = []
    k = len(order)
    for i in range(k):
        p, q = order[i], order[(i + 1) % k]
        triangles.append(frozenset({edge(p, q), edge(q, aux), edge(aux, p)}))
    acc: frozenset = frozenset()
    for t in triangles:
        acc = acc ^ t
    assert acc == cyc, "triangle symmetric difference must reproduce the cycle"
    return triangles


def invariant_membership(query, graph: PrimeGraph) -> bool:
    """Whether the edge set lies in the group the invariant is defined on:
    its non-residue part must have even degree everywhere (the residue part
    is unconstrained)."""
    vec = frozenset(edge(u, v) for u, v in query)
    vset = set(graph.vertices)
    for u, v in vec:
        if u not in vset or v not in vset:
            raise DomainError(f"edge ({u},{v}) is not supported on the graph")
    degrees = Counter()
    for e in vec & graph.edges_N:
        degrees[e[0]] += 1
        degrees[e[1]] += 1
    return all(d % 2 == 0 for d in degrees.values())


# ---------------------------------------------------------------------------
# line-based serialization: one edge per line, "p q R" or "p q N"

def graph_to_lines(graph: PrimeGraph) -> list[str]:
    lines = []
    for e in sorted(graph.edges_R | graph.edges_N):
        lines.append(f"{e[0]} {e[1]} {graph.label(e)}")
    return lines


def graph_from_lines(lines) -> PrimeGraph:
    """Parse the `p q R|N` format back into a graph, checking every label
    against the symbol it claims."""
    res, non = set(), set()
    vertices = set()
    for ln, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) != 3 or parts[2] not in ("R", "N"):
            raise DomainError(f"line {ln}: expected 'p q R|N', got {text!r}")
        try:
            p, q = int(parts[0]), int(parts[1])
        except ValueError:
            raise DomainError(f"line {ln}: vertices must be integers") from None
        e = edge(p, q)
        if e in res or e in non:
            raise DomainError(f"line {ln}: duplicate edge {e}")
        (res if parts[2] == "R" else non).add(e)
        vertices.update(e)
    return PrimeGraph(tuple(sorted(vertices)), frozenset(res), frozenset(non))
