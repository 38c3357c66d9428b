"""Quartic-symbol invariants of prime edge sets, and the unit-symbol
predictions they imply.

The invariant of an edge set is only defined when the non-residue part of
the set has even degree everywhere; the three evaluation clauses (single
residue edge, non-residue triangle, general formula) agree wherever they
overlap and that agreement is asserted rather than trusted.  The prediction
functions translate the two reciprocity identities into expected values for
the independently computed unit symbol.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import prod

from .arith import DomainError, Sign, quartic, require_v_prime, v_symbol
from .f2graph import build_graph, edge, invariant_membership


@dataclass(frozen=True)
class InvariantReport:
    """Evaluated invariant of one edge set."""

    query: frozenset
    member: bool
    value: int | None
    clause: str
    P: tuple[int, ...]
    k: int

    def __post_init__(self):
        assert (self.value is not None) == self.member
        assert self.P == tuple(sorted({v for e in self.query for v in e}))
        assert self.k == sum(1 for u, v in self.query if v_symbol(u, v) == -1)

    def __str__(self):
        if not self.member:
            return "non-member"
        pairs = " ".join(f"{u}-{v}" for u, v in sorted(self.query))
        return (f"value {self.value} ({self.clause} clause) "
                f"query [{pairs}] P {list(self.P)} k {self.k}")


def odd_nonresidue_vertices(query) -> list[int]:
    """Vertices with odd degree in the non-residue part of the edge set;
    empty exactly when the invariant is defined."""
    degrees = Counter()
    for u, v in query:
        if v_symbol(u, v) == -1:
            degrees[u] += 1
            degrees[v] += 1
    return sorted(x for x, d in degrees.items() if d % 2)


def edge_invariant(p: int, q: int) -> int:
    """Invariant bit of a single residue pair: 0 iff the two quartic
    symbols multiply to +1."""
    require_v_prime(p)
    require_v_prime(q)
    if v_symbol(p, q) != 1:
        raise DomainError(f"({p}/{q}) = -1; single non-residue edges have "
                          "no invariant (odd degrees)")
    return 0 if quartic(p, q) * quartic(q, p) == 1 else 1


def triangle_invariant(p: int, q: int, r: int) -> int:
    """Invariant bit of a pairwise non-residue triangle: 0 iff the three
    paired quartic symbols multiply to -1."""
    for x in (p, q, r):
        require_v_prime(x)
    if len({p, q, r}) != 3:
        raise DomainError("triangle vertices must be distinct")
    for a, b in ((p, q), (q, r), (r, p)):
        if v_symbol(a, b) != -1:
            raise DomainError(f"({a}/{b}) = +1; triangle clause needs a "
                              "pairwise non-residue triple")
    product = quartic(p * q, r) * quartic(q * r, p) * quartic(r * p, q)
    return 0 if product == -1 else 1


def general_invariant(query) -> InvariantReport:
    """Evaluate the invariant of any member edge set.

    The value is 0 exactly when prod over p in P of quartic(M_p, p) equals
    (-1)^k, where M_p multiplies the partners of p in the set, P is the
    support, and k counts non-residue edges.  Membership (even non-residue
    degrees) is recomputed, not trusted; it is what makes every quartic
    symbol in the product defined.
    """
    vec = frozenset(edge(u, v) for u, v in query)
    support = sorted({x for e in vec for x in e})
    for x in support:
        require_v_prime(x)
    if support and not invariant_membership(vec, build_graph(support)):
        odd = odd_nonresidue_vertices(vec)
        raise DomainError(f"edge set is outside the invariant group: odd "
                          f"non-residue degree at {odd}")
    k = sum(1 for u, v in vec if v_symbol(u, v) == -1)
    sign = 1
    for p in support:
        partners = prod(q for e in vec if p in e for q in e if q != p)
        if partners > 1:
            sign *= quartic(partners, p)
    value = 0 if sign == (-1) ** k else 1

    if len(vec) == 1 and k == 0:
        clause = "edge"
        (u, v), = vec
        assert value == edge_invariant(u, v)
    elif len(vec) == 3 and len(support) == 3 and k == 3:
        clause = "triangle"
        assert value == triangle_invariant(*support)
    else:
        clause = "general"
    return InvariantReport(query=vec, member=True, value=value,
                           clause=clause, P=tuple(support), k=k)


def scholz_predict(p: int, q: int) -> Sign:
    """Predicted residue character of the fundamental unit of the first
    prime at the second: the product of the two quartic symbols."""
    require_v_prime(p)
    require_v_prime(q)
    if p == q:
        raise DomainError("need two distinct primes")
    if v_symbol(p, q) != 1:
        raise DomainError(f"({p}/{q}) = -1; the prediction needs a residue pair")
    return quartic(p, q) * quartic(q, p)


def scholz2_predict(p: int, q: int, r: int) -> Sign:
    """Predicted residue character of the fundamental unit of p*q at r,
    for a pairwise non-residue triple: minus the triple quartic product."""
    for x in (p, q, r):
        require_v_prime(x)
    if len({p, q, r}) != 3:
        raise DomainError("need three distinct primes")
    for a, b in ((p, q), (q, r), (r, p)):
        if v_symbol(a, b) != -1:
            raise DomainError(f"({a}/{b}) = +1; the prediction needs a "
                              "pairwise non-residue triple")
    return -quartic(p * q, r) * quartic(q * r, p) * quartic(r * p, q)
