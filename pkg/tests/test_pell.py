"""Fundamental unit computation, unit symbols, cube congruences, cache."""

import os

import pytest
from math import isqrt

from quadrec.arith import DomainError, is_squarefree, sqrt_2adic, sqrt_mod
from quadrec.pell import (
    QuadUnit,
    UnitCache,
    check_unit_congruences,
    compute_fundamental_unit,
    fundamental_unit,
    unit_symbol,
)


def smallest_unit_by_scan(m):
    """Reference oracle: scan y upward for the least unit > 1.

    The integral scan always terminates.  A half-integer unit, when one
    exists, is smaller than the integral one, so that scan can stop at
    roughly twice the integral y.
    """
    def scan(den, y_limit):
        y = 0
        while y_limit is None or y <= y_limit:
            y += 1
            for norm in (-1, 1):  # smaller x first
                x2 = m * y * y + norm * den * den
                if x2 <= 0:
                    continue
                x = isqrt(x2)
                if x * x != x2:
                    continue
                if den == 2 and (x % 2 == 0 or y % 2 == 0):
                    continue  # reducible to the integral shape
                return (x, y, den, norm)
        return None

    best = scan(1, None)
    if m % 4 == 1:
        half = scan(2, 2 * best[1] + 2)
        if half is not None:
            # floats are plenty to separate distinct units
            if (half[0] + half[1] * m ** 0.5) / 2 < best[0] + best[1] * m ** 0.5:
                best = half
    return best


@pytest.mark.parametrize("m", [m for m in range(2, 120) if is_squarefree(m) and m > 1])
def test_fundamental_unit_matches_scan(m):
    u = fundamental_unit(m)
    assert (u.x, u.y, u.den, u.norm) == smallest_unit_by_scan(m)


def test_frozen_textbook_units():
    assert fundamental_unit(2) == QuadUnit(2, 1, 1, 1, -1)
    assert fundamental_unit(3) == QuadUnit(3, 2, 1, 1, 1)
    assert fundamental_unit(5) == QuadUnit(5, 1, 1, 2, -1)
    assert fundamental_unit(13) == QuadUnit(13, 3, 1, 2, -1)
    assert fundamental_unit(15) == QuadUnit(15, 4, 1, 1, 1)
    assert fundamental_unit(65) == QuadUnit(65, 8, 1, 1, -1)
    assert fundamental_unit(221) == QuadUnit(221, 15, 1, 2, 1)
    # the classic large ones
    assert fundamental_unit(94) == QuadUnit(94, 2143295, 221064, 1, 1)
    assert fundamental_unit(106) == QuadUnit(106, 4005, 389, 1, -1)


def test_quad_unit_validates():
    with pytest.raises(DomainError):
        QuadUnit(5, 3, 1, 1, -1)  # 9 - 5 != -1
    with pytest.raises(DomainError):
        QuadUnit(8, 3, 1, 1, 1)  # not squarefree
    with pytest.raises(DomainError):
        QuadUnit(7, 8, 3, 2, 1)  # den 2 needs m = 1 (mod 4)
    with pytest.raises(DomainError):
        compute_fundamental_unit(12)
    with pytest.raises(DomainError):
        compute_fundamental_unit(1)


def test_cubed_coordinates():
    # eps_5^3 = 2 + sqrt(5), eps_13^3 = 18 + 5 sqrt(13)
    assert fundamental_unit(5).cubed_coordinates() == (2, 1)
    assert fundamental_unit(13).cubed_coordinates() == (18, 5)
    # (4 + sqrt17)^3 = 64 + 48 sqrt17 + 204 + 17 sqrt17
    assert fundamental_unit(17).cubed_coordinates() == (268, 65)


def test_unit_symbol_spot_values():
    assert unit_symbol(5, 29) == 1
    assert unit_symbol(13, 17) == -1
    assert unit_symbol(10, 13) == 1
    assert unit_symbol(17, 2) == -1
    assert unit_symbol(2, 17) == -1  # eps_2 = 1 + sqrt2, sqrt2 = 6 mod 17, (7/17) = -1


def test_unit_symbol_root_independence():
    cases = [(5, 29), (13, 17), (10, 13), (2, 17), (26, 5), (65, 29)]
    for m, p in cases:
        r = sqrt_mod(m, p)
        s1 = unit_symbol(m, p, root=r)
        s2 = unit_symbol(m, p, root=p - r)
        assert s1 == s2 == unit_symbol(m, p)


def test_unit_symbol_at_two_both_roots():
    for m in (17, 41, 33, 73, 89, 97):
        r = sqrt_2adic(m, 4)
        assert unit_symbol(m, 2, root=r) == unit_symbol(m, 2, root=(16 - r) % 16)


def test_unit_symbol_domain():
    with pytest.raises(DomainError):
        unit_symbol(5, 7)  # 7 = 3 (mod 4)
    with pytest.raises(DomainError):
        unit_symbol(2, 5)  # (2/5) = -1, unit coordinates not p-integral
    with pytest.raises(DomainError):
        unit_symbol(5, 2)  # 5 != 1 (mod 8)
    with pytest.raises(DomainError):
        unit_symbol(5, 29, root=3)  # 3^2 != 5 mod 29


def test_unit_symbol_divides_modulus():
    with pytest.raises(DomainError):
        unit_symbol(29, 29)


def test_check_unit_congruences_known_good():
    for m in (5, 13, 17, 29, 37, 41, 53, 61, 65, 85):
        report = check_unit_congruences(m)
        assert report.all_ok, (m, report.failed_claims())
    assert check_unit_congruences(5).failed_claims() == ()


def test_check_unit_congruences_domain():
    with pytest.raises(DomainError):
        check_unit_congruences(3)  # norm +1
    with pytest.raises(DomainError):
        check_unit_congruences(10)  # even
    with pytest.raises(DomainError):
        check_unit_congruences(2)


def test_cache_round_trip(tmp_path):
    path = tmp_path / "units.txt"
    cache = UnitCache(str(path))
    u = fundamental_unit(65, cache=cache)
    v = fundamental_unit(65, cache=cache)
    assert u == v
    cache.compact()
    text = path.read_text()
    assert "65 8 1 1 -1" in text
    # a fresh cache object reads the same unit back without recomputing
    reloaded = UnitCache(str(path))
    assert reloaded.get(65) == u


def test_cache_rejects_garbage(tmp_path):
    path = tmp_path / "units.txt"
    path.write_text("65 8 1 1 -1\nnot a record\n")
    with pytest.raises(DomainError):
        UnitCache(str(path))
    path.write_text("65 9 1 1 -1\n")  # fails the norm identity
    with pytest.raises(DomainError):
        UnitCache(str(path))


def test_cache_survives_unwritable_location(tmp_path, recwarn):
    blocked = tmp_path / "nope"
    blocked.mkdir(mode=0o500)
    if os.access(str(blocked / "x"), os.W_OK):
        pytest.skip("running with privileges that ignore modes")
    cache = UnitCache(str(blocked / "units.txt"))
    u = fundamental_unit(10, cache=cache)
    assert u.norm == -1  # still computed, memory-only
