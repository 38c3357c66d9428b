"""Unit-product squareness checks, candidate narrowing, norm-sign
prediction, the biquadratic unit index, and the triquadratic parity
criterion.

Every function here cross-validates a closed-form prediction against
independent exact computation (continued-fraction units on one side,
certified square detection or quartic symbols on the other).  Hypotheses
are always recomputed; a result object with ok/consistent False is a loud
verification failure, not a soft warning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .arith import (
    DomainError,
    Sign,
    is_perfect_square,
    is_squarefree,
    legendre,
    prime_divisors,
    quartic,
    require_v_prime,
    squarefree_kernel,
    v_symbol,
)
from .f2graph import edge
from .invariants import InvariantReport, general_invariant, triangle_invariant
from .mquad import MQElement, MQField, field_containing, find_d, is_square
from .pell import QuadUnit, fundamental_unit


def unit_element(unit: QuadUnit, field: MQField) -> MQElement:
    """The unit (x + y*sqrt(m))/den as an exact element of the given field."""
    root = field.sqrt_radicand(unit.m)
    return (field.rational(unit.x) + root * unit.y) / unit.den


@dataclass(frozen=True)
class UnitFamily:
    """Several fundamental units considered together."""

    moduli: tuple[int, ...]
    norms: tuple[Sign, ...]
    product_square: bool

    def __post_init__(self):
        if len(self.moduli) != len(self.norms):
            raise DomainError("one norm per modulus")
        for m in self.moduli:
            if m < 2 or not is_squarefree(m):
                raise DomainError(f"modulus {m} is not squarefree > 1")
        if len(set(self.moduli)) != len(self.moduli):
            raise DomainError("moduli must be distinct")
        if self.product_square != is_perfect_square(prod(self.moduli)):
            raise DomainError("product_square flag contradicts the moduli")


def unit_family(moduli, cache=None) -> UnitFamily:
    ms = tuple(moduli)
    norms = tuple(fundamental_unit(m, cache=cache).norm for m in ms)
    return UnitFamily(ms, norms, is_perfect_square(prod(ms)))


@dataclass(frozen=True)
class SquareCheck:
    """Outcome of one certified squareness verification."""

    description: str
    field: MQField
    element: MQElement
    root: MQElement | None

    @property
    def ok(self) -> bool:
        return self.root is not None

    def __str__(self):
        verdict = "square" if self.ok else "NOT SQUARE"
        return f"{self.description}: {verdict} in {self.field}"


def theorem_sq_check(family: UnitFamily, cache=None, **square_opts) -> SquareCheck:
    """If every norm is -1 and the product of the moduli is a perfect
    square, the product of the units must be a square in the field
    generated by the square roots of the individual primes."""
    if any(n != -1 for n in family.norms):
        raise DomainError("every unit in the family must have norm -1")
    if not family.product_square:
        raise DomainError("the product of the moduli must be a perfect square")
    primes = sorted({p for m in family.moduli for p in prime_divisors(m)})
    assert all(p % 4 != 3 for p in primes), \
        "norm -1 already excludes primes = 3 mod 4"
    field = field_containing(primes)
    element = field.rational(1)
    for m in family.moduli:
        element = element * unit_element(fundamental_unit(m, cache=cache), field)
    root = is_square(element, **square_opts)
    label = "*".join(f"eps_{m}" for m in family.moduli)
    return SquareCheck(label, field, element, root)


def positive_norm_square_check(m: int, cache=None, **square_opts) -> SquareCheck:
    """A unit of norm +1 must be a square in the field generated by the
    square roots of its primes, widened by sqrt(2) when m = 3 mod 4."""
    unit = fundamental_unit(m, cache=cache)
    if unit.norm != 1:
        raise DomainError(f"norm of eps_{m} is -1; this check needs norm +1")
    gens = set(prime_divisors(m))
    if m % 4 == 3:
        gens.add(2)
    field = field_containing(sorted(gens))
    element = unit_element(unit, field)
    root = is_square(element, **square_opts)
    return SquareCheck(f"eps_{m}", field, element, root)


@dataclass(frozen=True)
class CandmResult:
    """Candidate-narrowing verdict for a family of unit products."""

    pairs: tuple[tuple[int, int], ...]
    P: tuple[int, ...]
    invariant: InvariantReport
    d: int
    intersection: tuple[int, ...]

    @property
    def parity_even(self) -> bool:
        return len(self.intersection) % 2 == 0

    @property
    def consistent(self) -> bool:
        return self.parity_even == (self.invariant.value == 0)


def candm_check(pairs, P, cache=None, **square_opts) -> CandmResult:
    """Theorem: the prime set of d meets P evenly exactly when the
    bipartite invariant sum vanishes.

    d is pinned down by an exhaustive square search: the product of the
    units of m_i*n_i times d must be a square in the field of the
    sqrt(m_i*n_i).  The membership parity |D cap P| is invariant under the
    square-class ambiguity in d, so the verdict is well defined.
    """
    pairs = tuple((int(m), int(n)) for m, n in pairs)
    P = frozenset(P)
    if not pairs:
        raise DomainError("need at least one (m, n) pair")
    for m, n in pairs:
        if m < 1 or n < 1 or not is_squarefree(m) or not is_squarefree(n):
            raise DomainError(f"({m},{n}): both entries must be squarefree positive")
        if gcd(m, n) != 1:
            raise DomainError(f"({m},{n}): entries must be coprime")
        if m * n < 2:
            raise DomainError(f"({m},{n}): trivial product")
        if fundamental_unit(m * n, cache=cache).norm != -1:
            raise DomainError(f"norm of eps_{m * n} is +1; hypothesis needs -1")
    total = prod(m * n for m, n in pairs)
    if not is_perfect_square(total):
        raise DomainError("the product of all m_i*n_i must be a perfect square")
    for m, n in pairs:
        for p in prime_divisors(m):
            if (p in P) != (legendre(n, p) == -1):
                raise DomainError(f"P violates its defining condition at "
                                  f"{p} | {m} against {n}")
        for q in prime_divisors(n):
            if (q in P) != (legendre(m, q) == -1):
                raise DomainError(f"P violates its defining condition at "
                                  f"{q} | {n} against {m}")

    query: frozenset = frozenset()
    for m, n in pairs:
        block = {edge(p, q) for p in prime_divisors(m) for q in prime_divisors(n)}
        query = query ^ block
    report = general_invariant(query)

    field = field_containing([m * n for m, n in pairs])
    element = field.rational(1)
    for m, n in pairs:
        element = element * unit_element(fundamental_unit(m * n, cache=cache), field)
    allowed = prime_divisors(total)
    d = find_d(element, allowed, **square_opts)
    inter = tuple(sorted(set(prime_divisors(d)) & P))
    return CandmResult(pairs, tuple(sorted(P)), report, d, inter)


@dataclass(frozen=True)
class CandpResult:
    """Candidate-narrowing verdict for a single positive-norm unit."""

    m: int
    n: int
    P: tuple[int, ...]
    d: int
    intersection: tuple[int, ...]

    @property
    def parity_even(self) -> bool:
        return len(self.intersection) % 2 == 0


def candp_check(m: int, n: int, cache=None, **square_opts) -> CandpResult:
    """Positive-norm analogue: P is built from the non-residue divisors
    (plus 2 in the one stated congruence case) and the theorem asserts
    |D cap P| is always even."""
    if m < 1 or n < 1 or not is_squarefree(m) or not is_squarefree(n):
        raise DomainError("m and n must be squarefree positive")
    if gcd(m, n) != 1:
        raise DomainError("m and n must be coprime")
    if m * n < 2:
        raise DomainError("m*n must exceed 1")
    for p in prime_divisors(m):
        if p % 4 != 1:
            raise DomainError(f"prime {p} | m is not 1 mod 4")
    if fundamental_unit(m * n, cache=cache).norm != 1:
        raise DomainError(f"norm of eps_{m * n} is -1; hypothesis needs +1")
    P = {p for p in prime_divisors(m) if legendre(n, p) == -1}
    P |= {q for q in prime_divisors(n) if legendre(m, q) == -1}
    if m % 8 == 5 and n % 4 == 3:
        P.add(2)
    allowed = prime_divisors(2 * m * n) if n % 4 == 3 else prime_divisors(m * n)
    field = MQField((m * n,))
    element = unit_element(fundamental_unit(m * n, cache=cache), field)
    d = find_d(element, allowed, **square_opts)
    inter = tuple(sorted(set(prime_divisors(d)) & P))
    return CandpResult(m, n, tuple(sorted(P)), d, inter)


def norm_sign_predict(m: int, n: int) -> Sign | None:
    """Predict norm +1 for the unit of m*n when all cross Legendre symbols
    are +1 and the paired quartic product is -1; no prediction otherwise."""
    if m < 1 or n < 1 or not is_squarefree(m) or not is_squarefree(n):
        raise DomainError("m and n must be squarefree positive")
    if gcd(m, n) != 1:
        raise DomainError("m and n must be coprime")
    if m * n < 2:
        raise DomainError("m*n must exceed 1")
    for p in prime_divisors(m * n):
        if p % 4 == 3:
            raise DomainError(f"prime divisor {p} is 3 mod 4")
    if any(legendre(n, p) != 1 for p in prime_divisors(m)):
        return None
    if any(legendre(m, q) != 1 for q in prime_divisors(n)):
        return None
    sign = prod(quartic(n, p) for p in prime_divisors(m)) \
        * prod(quartic(m, q) for q in prime_divisors(n))
    return 1 if sign == -1 else None


@dataclass(frozen=True)
class QIndex:
    """Unit index of a real biquadratic field, with its witness subgroup."""

    value: int
    witness_exponents: frozenset

    def __post_init__(self):
        group = set(self.witness_exponents) | {(0, 0, 0)}
        assert len(group) == self.value
        for a in group:
            for b in group:
                assert tuple(x ^ y for x, y in zip(a, b)) in group, \
                    "witness set must be closed under exponent addition"
        assert self.value in (1, 2, 4), f"unit index {self.value} out of range"


def kuroda_q(d1: int, d2: int, d3: int, cache=None, **square_opts) -> QIndex:
    """Unit index of Q(sqrt(d1), sqrt(d2)) over the units of its three
    quadratic subfields, computed by exhaustive certified square tests of
    the seven nontrivial unit products (both signs, the totally positive
    one first)."""
    ds = (d1, d2, d3)
    for d in ds:
        if d < 2 or not is_squarefree(d):
            raise DomainError(f"{d} is not squarefree > 1")
    if len(set(ds)) != 3:
        raise DomainError("the three quadratic subfields must be distinct")
    if squarefree_kernel(d1 * d2) != d3:
        raise DomainError("third radicand must be the squarefree kernel of "
                          "the product of the first two")
    field = field_containing(ds)
    units = [unit_element(fundamental_unit(d, cache=cache), field) for d in ds]
    witnesses = set()
    for e in range(1, 8):
        exps = (e & 1, e >> 1 & 1, e >> 2 & 1)
        element = field.rational(1)
        for u, k in zip(units, exps):
            if k:
                element = element * u
        if is_square(element, **square_opts) is not None \
                or is_square(-element, **square_opts) is not None:
            witnesses.add(exps)
    return QIndex(len(witnesses) + 1, frozenset(witnesses))


@dataclass(frozen=True)
class KurodaExampleResult:
    """Agreement between the closed-form unit index and the exhaustive one."""

    p: int
    q: int
    r: int
    formula_value: int
    computed: QIndex

    @property
    def consistent(self) -> bool:
        return self.formula_value == self.computed.value


def kuroda_example_check(p: int, q: int, r: int, cache=None,
                         **square_opts) -> KurodaExampleResult:
    """For Q(sqrt(p), sqrt(qr)) with (p/q) = +1 and (q/r) = -1: the index
    is 1 exactly when the unit of pqr has norm -1 and the paired quartic
    product is -1, else 2.  Both sides computed independently."""
    for x in (p, q, r):
        require_v_prime(x)
    if len({p, q, r}) != 3:
        raise DomainError("need three distinct primes")
    if v_symbol(p, q) != 1:
        raise DomainError(f"({p}/{q}) = -1; the example needs a residue pair")
    if v_symbol(q, r) != -1:
        raise DomainError(f"({q}/{r}) = +1; the example needs a non-residue pair")
    norm = fundamental_unit(p * q * r, cache=cache).norm
    quartic_product = quartic(p, q) * quartic(q, p)
    formula = 1 if (norm == -1 and quartic_product == -1) else 2
    computed = kuroda_q(p, q * r, p * q * r, cache=cache, **square_opts)
    return KurodaExampleResult(p, q, r, formula, computed)


def triquad_parity_criterion(p: int, q: int, r: int) -> str:
    """Predicted parity of the class number of the field generated by the
    three square roots, for a pairwise non-residue triple: even exactly
    when the triangle invariant vanishes."""
    return "even" if triangle_invariant(p, q, r) == 0 else "odd"
