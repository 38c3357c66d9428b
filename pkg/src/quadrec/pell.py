"""Fundamental units of real quadratic fields and their residue symbols.

Units live in the maximal order of Q(sqrt(m)) for squarefree m > 1 and are
written (x + y*sqrt(m))/den with den in {1, 2}.  They are computed exactly
from the continued fraction of the standard quadratic irrationality at the
field discriminant; one minimal period of the reduced cycle yields the
fundamental unit, and the parity of the period gives the norm sign.
"""

from __future__ import annotations

import os
import sys
import tempfile
from dataclasses import dataclass
from math import gcd, isqrt

from .arith import (
    DomainError,
    Sign,
    is_prime,
    is_squarefree,
    legendre,
    prime_divisors,
    sqrt_2adic,
    sqrt_mod,
)


@dataclass(frozen=True)
class QuadUnit:
    """The fundamental unit (x + y*sqrt(m))/den > 1 of the maximal order."""

    m: int
    x: int
    y: int
    den: int
    norm: int

    def __post_init__(self):
        if self.m < 2 or not is_squarefree(self.m):
            raise DomainError(f"{self.m} is not squarefree > 1")
        if self.den not in (1, 2):
            raise DomainError(f"unit denominator must be 1 or 2, got {self.den}")
        if self.den == 2 and (self.m % 4 != 1 or self.x % 2 == 0 or self.y % 2 == 0):
            raise DomainError("half-integer coordinates need m = 1 (mod 4) and odd x, y")
        if self.x < 0 or self.y < 1:
            raise DomainError("fundamental unit coordinates must be nonnegative, y >= 1")
        if self.x * self.x - self.m * self.y * self.y != self.norm * self.den * self.den:
            raise DomainError("norm relation x^2 - m*y^2 = norm*den^2 violated")
        if self.norm not in (1, -1):
            raise DomainError(f"unit norm must be +-1, got {self.norm}")
        # value > 1: x + y*sqrt(m) > den
        if self.x < self.den and (self.den - self.x) ** 2 >= self.m * self.y * self.y:
            raise DomainError("not a unit greater than 1")

    def cubed_coordinates(self) -> tuple[int, int]:
        """Integer (x3, y3) with eps^3 = x3 + y3*sqrt(m).

        The cube of any unit of the maximal order lies in Z[sqrt(m)], so the
        denominator always clears.
        """
        x, y, m = self.x, self.y, self.m
        x3 = x * x * x + 3 * x * y * y * m
        y3 = 3 * x * x * y + y * y * y * m
        d3 = self.den ** 3
        assert x3 % d3 == 0 and y3 % d3 == 0
        return x3 // d3, y3 // d3

    def __str__(self):
        core = f"{self.x} + {self.y}*sqrt({self.m})"
        return f"({core})/2" if self.den == 2 else core


def _cf_fundamental_triple(m: int) -> tuple[int, int, int]:
    """(x, y, den) for the fundamental unit, from one continued-fraction period.

    Expands alpha = (P0 + sqrt(D))/Q0 at the field discriminant D; all
    complete quotients keep discriminant D, so the first repeated (P, Q)
    state closes one minimal period of the reduced cycle and the convergent
    matrix over that period fixes alpha_j, i.e. is the fundamental automorph.
    """
    if m % 4 == 1:
        delta = m
        p_state, q_state = 1, 2
    else:
        delta = 4 * m
        p_state, q_state = 0, 2
    s = isqrt(delta)
    seen: dict[tuple[int, int], int] = {}
    history: list[tuple[int, int, int]] = []
    while (p_state, q_state) not in seen:
        seen[(p_state, q_state)] = len(history)
        a = (p_state + s) // q_state
        history.append((p_state, q_state, a))
        p_next = a * q_state - p_state
        q_next = (delta - p_next * p_next) // q_state
        p_state, q_state = p_next, q_next
    j = seen[(p_state, q_state)]
    mat_a, mat_b, mat_c, mat_d = 1, 0, 0, 1
    for _, _, a in history[j:]:
        mat_a, mat_b, mat_c, mat_d = mat_a * a + mat_b, mat_a, mat_c * a + mat_d, mat_c
    pj, qj = history[j][0], history[j][1]
    # unit = C*alpha_j + D with alpha_j = (pj + sqrt(delta))/qj
    x2 = mat_c * pj + mat_d * qj
    y2 = mat_c if delta == m else 2 * mat_c
    den2 = qj
    g = gcd(gcd(x2, y2), den2)
    return x2 // g, y2 // g, den2 // g


def compute_fundamental_unit(m: int) -> QuadUnit:
    """Continued-fraction computation, bypassing every cache."""
    if m < 2 or not is_squarefree(m):
        raise DomainError(f"fundamental units need squarefree m > 1, got {m}")
    x, y, den = _cf_fundamental_triple(m)
    norm = (x * x - m * y * y) // (den * den)
    return QuadUnit(m=m, x=x, y=y, den=den, norm=norm)


class UnitCache:
    """Optionally file-backed memo of fundamental units.

    The text format is one unit per line, `m x y den norm`, decimal integers.
    New units are appended during a run; compact() rewrites the file sorted
    and deduplicated.  Loaded records are revalidated through QuadUnit, so a
    corrupt cache fails loudly instead of poisoning results.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = os.fspath(path) if path is not None else None
        self._units: dict[int, QuadUnit] = {}
        self._append = None
        self._warned = False
        if self.path is not None and os.path.exists(self.path):
            with open(self.path, encoding="ascii") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    parts = line.split()
                    if len(parts) != 5:
                        raise DomainError(f"malformed unit cache line: {line!r}")
                    m, x, y, den, norm = (int(t) for t in parts)
                    self._units[m] = QuadUnit(m=m, x=x, y=y, den=den, norm=norm)

    def __len__(self):
        return len(self._units)

    def __contains__(self, m: int) -> bool:
        return m in self._units

    def get(self, m: int) -> QuadUnit | None:
        return self._units.get(m)

    def add(self, unit: QuadUnit) -> None:
        if unit.m in self._units:
            return
        self._units[unit.m] = unit
        if self.path is None:
            return
        if self._append is None:
            try:
                self._append = open(self.path, "a", encoding="ascii")
            except OSError as exc:
                if not self._warned:
                    print(f"warning: unit cache {self.path} not writable ({exc}); "
                          f"continuing in memory", file=sys.stderr)
                    self._warned = True
                self.path = None
                return
        print(f"{unit.m} {unit.x} {unit.y} {unit.den} {unit.norm}", file=self._append)
        self._append.flush()

    def compact(self) -> None:
        """Rewrite the backing file sorted by m, one record per unit."""
        if self.path is None:
            return
        if self._append is not None:
            self._append.close()
            self._append = None
        directory = os.path.dirname(os.path.abspath(self.path))
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".unitcache-")
        try:
            with os.fdopen(fd, "w", encoding="ascii") as fh:
                for m in sorted(self._units):
                    u = self._units[m]
                    print(f"{u.m} {u.x} {u.y} {u.den} {u.norm}", file=fh)
            os.replace(tmp, self.path)
        except OSError:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def close(self) -> None:
        if self._append is not None:
            self._append.close()
            self._append = None


_memory_cache = UnitCache()


def fundamental_unit(m: int, cache: UnitCache | None = None) -> QuadUnit:
    """The fundamental unit of the maximal order of Q(sqrt(m)), memoized.

    Results never depend on cache hits; the cache only skips recomputation.
    """
    store = cache if cache is not None else _memory_cache
    unit = store.get(m)
    if unit is None:
        unit = compute_fundamental_unit(m)
        store.add(unit)
    return unit


def unit_symbol(m: int, p: int, root: int | None = None,
                cache: UnitCache | None = None) -> Sign:
    """The residue symbol (eps_m / p) of the fundamental unit at a split
    prime p of V.

    For odd p: reduce eps_m at a square root r of m mod p and return the
    Legendre symbol of u = (x + y*r)/den mod p.  For p = 2 (needs
    m = 1 mod 8): reduce at the canonical 2-adic root mod 16 and read the
    mod-8 table.  Either square root gives the same value; `root` overrides
    the canonical choice (used by the well-definedness sweeps).
    """
    unit = fundamental_unit(m, cache)
    if p == 2:
        if m % 8 != 1:
            raise DomainError(f"(eps_m/2) needs m = 1 (mod 8), got m = {m % 8} (mod 8)")
        if root is None:
            root = sqrt_2adic(m, 4)
        elif root % 2 == 0 or (root * root - m) % 16 != 0:
            raise DomainError(f"{root} is not a square root of {m} mod 16")
        # m = 1 (mod 8) forces den = 1: x^2 - m*y^2 = +-4 is impossible mod 8
        assert unit.den == 1
        u = (unit.x + unit.y * root) % 8
        assert u % 2 == 1, "exactly one of x, y is odd when x^2 - m*y^2 = +-1"
        return legendre(u, 2)
    if not is_prime(p) or p % 4 != 1:
        raise DomainError(f"unit symbols need p = 2 or p prime with p = 1 (mod 4), got {p}")
    if legendre(m, p) != 1:
        raise DomainError(f"{p} does not split in Q(sqrt({m}))")
    if root is None:
        root = sqrt_mod(m, p)
    elif (root * root - m) % p != 0:
        raise DomainError(f"{root} is not a square root of {m} mod {p}")
    u = (unit.x + unit.y * root) * pow(unit.den, -1, p) % p
    assert u != 0, "a unit cannot reduce to zero at an unramified prime"
    return legendre(u, p)


@dataclass(frozen=True)
class CubeCongruenceReport:
    """Pass/fail record for the congruence facts about eps_m^3 = x + y*sqrt(m)
    when the norm is -1: x even; 4 | x exactly when m = 1 (mod 8); y = 1
    (mod 4); and every prime dividing m*y is 1 (mod 4)."""

    m: int
    x: int
    y: int
    x_even: bool
    x_mod4_tracks_m_mod8: bool
    y_is_1_mod4: bool
    my_divisors_1_mod4: bool

    @property
    def all_ok(self) -> bool:
        return (self.x_even and self.x_mod4_tracks_m_mod8
                and self.y_is_1_mod4 and self.my_divisors_1_mod4)

    def failed_claims(self) -> tuple[str, ...]:
        out = []
        if not self.x_even:
            out.append("x-even")
        if not self.x_mod4_tracks_m_mod8:
            out.append("x-mod4")
        if not self.y_is_1_mod4:
            out.append("y-mod4")
        if not self.my_divisors_1_mod4:
            out.append("my-divisors")
        return tuple(out)


def check_unit_congruences(m: int, cache: UnitCache | None = None) -> CubeCongruenceReport:
    """Evaluate the cube congruences for odd squarefree m > 2 with norm -1."""
    if m <= 2 or m % 2 == 0 or not is_squarefree(m):
        raise DomainError(f"cube congruences need odd squarefree m > 2, got {m}")
    unit = fundamental_unit(m, cache)
    if unit.norm != -1:
        raise DomainError(f"cube congruences need norm -1, eps_{m} has norm +1")
    x3, y3 = unit.cubed_coordinates()
    return CubeCongruenceReport(
        m=m,
        x=x3,
        y=y3,
        x_even=(x3 % 2 == 0),
        x_mod4_tracks_m_mod8=((x3 % 4 == 0) == (m % 8 == 1)),
        y_is_1_mod4=(y3 % 4 == 1),
        my_divisors_1_mod4=all(p % 4 == 1 for p in prime_divisors(m * y3)),
    )
