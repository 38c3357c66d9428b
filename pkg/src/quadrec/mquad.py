"""Exact arithmetic in real multiquadratic fields Q(sqrt(d1), ..., sqrt(dt)).

Elements are rational-coefficient vectors over the sqrt-radicand basis
{sqrt(r_S)}, S a subset of the generators, where r_S is the squarefree
kernel of the product of the chosen generators.  Everything observable is
exact: multiplication works on Fractions, embeddings are certified rational
intervals (directed-rounding fixed point underneath), and is_square answers
only after an exact verification (squares) or a completed certification
(non-squares); precision exhaustion raises UndecidedError instead of
guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt, lcm

from .arith import (
    DomainError,
    is_prime,
    is_squarefree,
    legendre,
    prime_divisors,
    sqrt_mod,
    squarefree_kernel,
)

MAX_SEARCH_GENERATORS = 4  # 2^(2^4 - 1) = 32768 sign patterns
DEFAULT_MAX_BITS = 4096


class UndecidedError(RuntimeError):
    """Raised when the precision ceiling is hit before certification."""


@dataclass(frozen=True)
class Interval:
    """A certified enclosure [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        assert self.lo <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def _reduce_rows(rows: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """GF(2) echelon form of (vector, tag) rows; tags track combinations."""
    basis: list[tuple[int, int]] = []
    for vec, tag in rows:
        for bvec, btag in basis:
            if vec ^ bvec < vec:
                vec ^= bvec
                tag ^= btag
        if vec:
            basis.append((vec, tag))
    return basis


@dataclass(frozen=True)
class MQField:
    """A real multiquadratic field given by multiplicatively independent
    squarefree generators > 1."""

    gens: tuple[int, ...]

    def __init__(self, gens):
        object.__setattr__(self, "gens", tuple(gens))
        for d in self.gens:
            if d < 2 or not is_squarefree(d):
                raise DomainError(f"generator {d} is not squarefree > 1")
        if len(set(self.gens)) != len(self.gens):
            raise DomainError("generators must be distinct")
        if len(self._gen_rows()) != len(self.gens):
            raise DomainError("generators are multiplicatively dependent "
                              "(some subproduct is a perfect square)")

    @cached_property
    def primes(self) -> tuple[int, ...]:
        ps: set[int] = set()
        for d in self.gens:
            ps.update(prime_divisors(d))
        return tuple(sorted(ps))

    def _prime_vector(self, n: int) -> int:
        index = {p: i for i, p in enumerate(self.primes)}
        vec = 0
        for p in prime_divisors(n):
            if p not in index:
                raise DomainError(f"{n} involves a prime outside the field: {p}")
            vec |= 1 << index[p]
        return vec

    def _gen_rows(self) -> list[tuple[int, int]]:
        return _reduce_rows([(self._prime_vector(d), 1 << i)
                             for i, d in enumerate(self.gens)])

    @property
    def degree(self) -> int:
        return 1 << len(self.gens)

    @cached_property
    def radicands(self) -> tuple[int, ...]:
        """radicands[mask] = squarefree kernel of prod(gens[i] for i in mask)."""
        t = len(self.gens)
        rad = [1] * (1 << t)
        for mask in range(1, 1 << t):
            low = mask & -mask
            prev = rad[mask ^ low]
            g = self.gens[low.bit_length() - 1]
            c = gcd(prev, g)
            rad[mask] = (prev // c) * (g // c)
        return tuple(rad)

    @cached_property
    def _mul_table(self) -> tuple[tuple[int, ...], ...]:
        """_mul_table[a][b] = integer g with sqrt(r_a)*sqrt(r_b) = g*sqrt(r_(a^b))."""
        rad = self.radicands
        n = len(rad)
        table = []
        for a in range(n):
            row = []
            for b in range(n):
                prod = rad[a] * rad[b]
                g = isqrt(prod // rad[a ^ b])
                assert g * g * rad[a ^ b] == prod
                row.append(g)
            table.append(tuple(row))
        return tuple(table)

    def subset_with_kernel(self, m: int) -> int:
        """The generator-subset mask whose radicand is m (error if none)."""
        target = self._prime_vector(squarefree_kernel(m))
        combo = 0
        for bvec, btag in self._gen_rows():
            if target ^ bvec < target:
                target ^= bvec
                combo ^= btag
        if target != 0:
            raise DomainError(f"sqrt({m}) does not lie in {self}")
        return combo

    def square_class_signature(self, n: int) -> tuple[int, int]:
        """Canonical form of n > 0 modulo squares of the field: two values
        get equal signatures exactly when their ratio is a field square.
        Primes outside the field must match on the nose (first component);
        the rest reduces over the generators' GF(2) span (second component).
        """
        if n <= 0:
            raise DomainError("square classes are defined for positive values")
        index = {p: i for i, p in enumerate(self.primes)}
        inside = 0
        outside = 1
        for p in prime_divisors(squarefree_kernel(n)):
            if p in index:
                inside |= 1 << index[p]
            else:
                outside *= p
        for bvec, _ in self._gen_rows():
            if inside ^ bvec < inside:
                inside ^= bvec
        return outside, inside

    def element(self, coeffs) -> "MQElement":
        return MQElement(self, coeffs)

    def rational(self, value) -> "MQElement":
        return MQElement(self, {0: Fraction(value)})

    def sqrt_radicand(self, m: int) -> "MQElement":
        """The element sqrt(m), for m representable in this field."""
        mask = self.subset_with_kernel(m)
        r = self.radicands[mask]
        g = isqrt(m // r)
        assert g * g * r == m
        return MQElement(self, {mask: Fraction(g)})

    def __str__(self):
        inner = ", ".join(f"sqrt({d})" for d in self.gens) or "plain rationals"
        return f"Q({inner})"


def field_containing(radicands) -> MQField:
    """The multiquadratic field generated by the square roots of the given
    positive values, with a deterministic (ascending, greedy-independent)
    generator choice.  Values reduce to their squarefree kernels; perfect
    squares contribute nothing."""
    vals = []
    for v in radicands:
        if v < 1:
            raise DomainError(f"radicand {v} is not positive")
        k = squarefree_kernel(v)
        if k > 1:
            vals.append(k)
    vals = sorted(set(vals))
    gens: list[int] = []
    rows: list[tuple[int, int]] = []
    primes = sorted({p for v in vals for p in prime_divisors(v)})
    index = {p: i for i, p in enumerate(primes)}
    for v in vals:
        red = 0
        for p in prime_divisors(v):
            red |= 1 << index[p]
        for bvec, _ in rows:
            if red ^ bvec < red:
                red ^= bvec
        if red:
            rows.append((red, 0))
            gens.append(v)
    return MQField(gens)


class MQElement:
    """An element of an MQField: {subset mask: Fraction} over the radicand basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: MQField, coeffs):
        self.field = field
        clean: dict[int, Fraction] = {}
        for mask, c in dict(coeffs).items():
            if not 0 <= mask < field.degree:
                raise DomainError(f"basis mask {mask} out of range for {field}")
            c = Fraction(c)
            if c != 0:
                clean[mask] = c
        self.coeffs = clean

    def __eq__(self, other):
        if not isinstance(other, MQElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.coeffs.items()))))

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return set(self.coeffs) <= {0}

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("element is irrational")
        return self.coeffs.get(0, Fraction(0))

    def _require_same_field(self, other: "MQElement") -> None:
        if self.field != other.field:
            raise DomainError("elements live in different fields")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, MQElement):
            return NotImplemented
        self._require_same_field(other)
        out = dict(self.coeffs)
        for mask, c in other.coeffs.items():
            out[mask] = out.get(mask, Fraction(0)) + c
        return MQElement(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return MQElement(self.field, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, MQElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MQElement(self.field,
                             {m: c * other for m, c in self.coeffs.items()})
        if not isinstance(other, MQElement):
            return NotImplemented
        self._require_same_field(other)
        table = self.field._mul_table
        out: dict[int, Fraction] = {}
        for ma, ca in self.coeffs.items():
            row = table[ma]
            for mb, cb in other.coeffs.items():
                mask = ma ^ mb
                out[mask] = out.get(mask, Fraction(0)) + ca * cb * row[mb]
        return MQElement(self.field, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return MQElement(self.field, {m: c / Fraction(other)
                                          for m, c in self.coeffs.items()})
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers are not supported")
        result = self.field.rational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self, flip_mask: int) -> "MQElement":
        """Apply the field automorphism sending sqrt(gens[i]) to
        -sqrt(gens[i]) for each i in flip_mask."""
        out = {}
        for mask, c in self.coeffs.items():
            out[mask] = -c if (mask & flip_mask).bit_count() % 2 else c
        return MQElement(self.field, out)

    def denominator_lcm(self) -> int:
        return lcm(*(c.denominator for c in self.coeffs.values())) if self.coeffs else 1

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for mask in sorted(self.coeffs):
            c = self.coeffs[mask]
            r = self.field.radicands[mask]
            if mask == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({r})")
            elif c == -1:
                parts.append(f"-sqrt({r})")
            else:
                parts.append(f"{c}*sqrt({r})")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"<{self} in {self.field}>"


# ---------------------------------------------------------------------------
# fixed-point interval kernel (integers scaled by 2^bits, directed rounding)

def _fxp_of_fraction(fr: Fraction, bits: int) -> tuple[int, int]:
    n = fr.numerator << bits
    d = fr.denominator
    lo = n // d
    hi = -((-n) // d)
    return lo, hi


def _fxp_add(a, b):
    return a[0] + b[0], a[1] + b[1]


def _fxp_neg(a):
    return -a[1], -a[0]


def _fxp_mul(a, b, bits):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    lo = min(ps) >> bits
    hi = -((-max(ps)) >> bits)
    return lo, hi


def _fxp_sqrt(a, bits):
    assert a[0] >= 0
    lo = isqrt(a[0] << bits)
    h = isqrt(a[1] << bits)
    if h * h != a[1] << bits:
        h += 1
    return lo, h


def _fxp_sqrt_int(r: int, bits: int) -> tuple[int, int]:
    n = isqrt(r << (2 * bits))
    return (n, n) if n * n == r << (2 * bits) else (n, n + 1)


def _fxp_inv_sqrt_int(r: int, bits: int) -> tuple[int, int]:
    n = isqrt(r << (2 * bits))  # n <= sqrt(r)*2^bits < n+1
    lo = (1 << (2 * bits)) // (n + 1)
    hi = (1 << (2 * bits)) // n + 1
    return lo, hi


def _sigma_intervals(x: MQElement, bits: int) -> list[tuple[int, int]]:
    """Fixed-point enclosures of all 2^t real embeddings of x.

    Embedding masks flip the sign of sqrt(gens[i]) for each set bit i; the
    basis element sqrt(r_S) picks up the product of the flipped signs over S.
    """
    field = x.field
    degree = field.degree
    terms = []
    for mask, c in x.coeffs.items():
        ci = _fxp_of_fraction(c, bits)
        if mask == 0:
            terms.append((mask, ci))
        else:
            terms.append((mask, _fxp_mul(ci, _fxp_sqrt_int(field.radicands[mask], bits), bits)))
    out = []
    for emb in range(degree):
        acc = (0, 0)
        for mask, iv in terms:
            if (mask & emb).bit_count() % 2:
                acc = _fxp_add(acc, _fxp_neg(iv))
            else:
                acc = _fxp_add(acc, iv)
        out.append(acc)
    return out


def embed(x: MQElement, signs, precision: int = 64) -> Interval:
    """Certified rational interval around the embedding of x that sends
    sqrt(gens[i]) to signs[i]*sqrt(gens[i]).  Doubling `precision` at least
    halves the width."""
    if precision < 64:
        raise DomainError("embedding precision must be at least 64 bits")
    signs = tuple(signs)
    if len(signs) != len(x.field.gens) or any(s not in (1, -1) for s in signs):
        raise DomainError("signs must be a +-1 vector, one entry per generator")
    emb = 0
    for i, s in enumerate(signs):
        if s == -1:
            emb |= 1 << i
    lo, hi = _sigma_intervals(x, precision)[emb]
    scale = Fraction(1, 1 << precision)
    return Interval(lo * scale, hi * scale)


# ---------------------------------------------------------------------------
# certified square detection

def _residue_prefilter(x: MQElement, primes_needed: int = 8) -> bool:
    """Reject x (return False) if its residue at some completely split prime
    is a quadratic non-residue.  Only inspects primes where x is an l-unit,
    so False is a certificate of non-squareness; True just means 'passed'.
    """
    field = x.field
    gens = field.gens
    den = x.denominator_lcm()
    found = 0
    l = 3
    while found < primes_needed:
        while not is_prime(l):
            l += 2
        if den % l and all(g % l for g in gens) \
                and all(legendre(g, l) == 1 for g in gens):
            roots = [sqrt_mod(g, l) for g in gens]
            res = 0
            for mask, c in x.coeffs.items():
                prod = 1
                acc = 1
                for i, r in enumerate(roots):
                    if mask >> i & 1:
                        prod *= gens[i]
                        acc = acc * r % l
                g = isqrt(prod // field.radicands[mask])
                acc = acc * pow(g, -1, l) % l
                res = (res + c.numerator * pow(c.denominator, -1, l) * acc) % l
            if res != 0:
                if pow(res, (l - 1) // 2, l) == l - 1:
                    return False
                found += 1
        l += 2
    return True


_FOUND, _DEAD, _FUZZY = 0, 1, 2


def _pattern_search(xi: MQElement, denom_bound: int, bits: int):
    """One pass of the sign-pattern search at a fixed precision.

    Enumerates candidate square roots by their embedding sign pattern (the
    first embedding is pinned positive, killing the global sign), inverts the
    subset-character transform over certified intervals, and reconstructs
    rational coordinates with denominators dividing denom_bound.  Returns
    (_FOUND, root), (_DEAD, None) for a completed certification, or
    (_FUZZY, None) when some window was too wide to decide at this precision.
    """
    field = xi.field
    t = len(field.gens)
    degree = field.degree
    sigmas = _sigma_intervals(xi, bits)
    if any(hi < 0 for _, hi in sigmas):
        return _DEAD, None
    if any(lo <= 0 for lo, _ in sigmas):
        return _FUZZY, None
    roots = [_fxp_sqrt(iv, bits) for iv in sigmas]
    inv_sqrt = [_fxp_inv_sqrt_int(field.radicands[m], bits) for m in range(degree)]
    chi = [[(-1) ** ((s & e).bit_count() % 2) for e in range(degree)]
           for s in range(degree)]

    sums = []
    for s_mask in range(degree):
        acc = (0, 0)
        for e in range(degree):
            acc = _fxp_add(acc, roots[e] if chi[s_mask][e] == 1 else _fxp_neg(roots[e]))
        sums.append(acc)

    signs = [1] * degree
    fuzzy = False

    def try_pattern():
        nonlocal fuzzy
        coeffs = {}
        for s_mask in range(degree):
            window = _fxp_mul(sums[s_mask], inv_sqrt[s_mask], bits)
            # coefficient = window / 2^t; candidate numerators n/denom_bound
            lo, hi = window
            n_lo = -((-lo * denom_bound) >> (bits + t))
            n_hi = (hi * denom_bound) >> (bits + t)
            if n_lo > n_hi:
                return None
            if n_hi > n_lo:
                fuzzy = True
                return None
            if n_lo:
                coeffs[s_mask] = Fraction(n_lo, denom_bound)
        candidate = MQElement(field, coeffs)
        if (candidate * candidate) == xi:
            return candidate
        return None

    got = try_pattern()
    if got is not None:
        return _FOUND, got
    total = 1 << (degree - 1)
    flip_deltas = [(2 * lo, 2 * hi) for lo, hi in roots]
    for step in range(1, total):
        e = (step & -step).bit_length()  # embedding index to flip (1..degree-1)
        signs[e] = -signs[e]
        dlo, dhi = flip_deltas[e]
        shrink = signs[e] == -1
        for s_mask in range(degree):
            lo, hi = sums[s_mask]
            if (chi[s_mask][e] == 1) == shrink:
                sums[s_mask] = (lo - dhi, hi - dlo)
            else:
                sums[s_mask] = (lo + dlo, hi + dhi)
        got = try_pattern()
        if got is not None:
            return _FOUND, got
    if fuzzy:
        return _FUZZY, None
    return _DEAD, None


def is_square(x: MQElement, *, start_bits: int | None = None,
              max_bits: int = DEFAULT_MAX_BITS,
              denominator_factor: int = 1) -> MQElement | None:
    """An exact square root of x in its field, or None if x is certifiably
    not a square there.

    The root returned is the one whose all-positive embedding is positive.
    Positives are sound (verified by exact multiplication); negatives are
    certified (a negative embedding, a non-square residue at a split prime,
    or an exhausted sign-pattern search at the integral denominator bound).
    Raises UndecidedError when max_bits is reached before certification.
    """
    field = x.field
    t = len(field.gens)
    if t > MAX_SEARCH_GENERATORS:
        raise DomainError(f"square search is capped at {MAX_SEARCH_GENERATORS} "
                          f"generators; {field} has {t}")
    if x.is_zero():
        raise DomainError("square detection needs a nonzero element")
    if denominator_factor < 1:
        raise DomainError("denominator_factor must be >= 1")

    q = x.denominator_lcm()
    xi = x * (q * q)
    assert xi.denominator_lcm() == 1
    denom_bound = (1 << t) * denominator_factor

    coeff_bits = max(abs(c.numerator).bit_length() for c in xi.coeffs.values())
    bits = max(start_bits or 0, 64, 2 * coeff_bits + 64)
    # the ceiling is an escalation budget: elements whose conjugates are
    # inherently tiny (unit inverses) start high, and still get headroom
    ceiling = max(max_bits, 4 * bits)
    prefiltered = False
    while bits <= ceiling:
        sigmas = _sigma_intervals(xi, bits)
        if any(hi < 0 for _, hi in sigmas):
            return None
        if all(lo > 0 for lo, _ in sigmas):
            if not prefiltered:
                if not _residue_prefilter(xi):
                    return None
                prefiltered = True
            state, root = _pattern_search(xi, denom_bound, bits)
            if state == _FOUND:
                result = root * Fraction(1, q)
                assert result * result == x
                return result
            if state == _DEAD:
                return None
        bits *= 2
    raise UndecidedError(f"square detection undecided at {ceiling} bits")


def find_d(x: MQElement, allowed_primes, *, start_bits: int | None = None,
           max_bits: int = DEFAULT_MAX_BITS) -> int:
    """The squarefree product d of allowed_primes making x*d a square in x's
    field (d = 1 means x itself is square).

    Candidates are tested once per square class of the field (two candidates
    whose ratio is a field square succeed or fail together); exactly one
    class may pass, and its smallest member is returned.
    """
    primes = sorted(set(allowed_primes))
    for p in primes:
        if not is_prime(p):
            raise DomainError(f"allowed factor {p} is not prime")
    candidates = [1]
    for p in primes:
        candidates += [c * p for c in candidates]
    candidates.sort()
    field = x.field
    tested: set[tuple[int, int]] = set()
    hit: int | None = None
    for d in candidates:
        sig = field.square_class_signature(d)
        if sig in tested:
            continue
        tested.add(sig)
        if is_square(x * d, start_bits=start_bits, max_bits=max_bits) is not None:
            if hit is not None:
                raise AssertionError(f"two inequivalent d values pass: {hit} and {d}")
            hit = d
    if hit is None:
        raise DomainError("no squarefree product of the allowed primes makes x a square")
    return hit
