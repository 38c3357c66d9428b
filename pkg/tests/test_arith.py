"""Symbol and modular arithmetic tests against brute-force oracles."""

import random

import pytest

from quadrec.arith import (
    DomainError,
    factorize,
    is_prime,
    is_perfect_square,
    is_squarefree,
    jacobi,
    legendre,
    prime_divisors,
    primes_in_v,
    primes_up_to,
    quartic,
    sqrt_2adic,
    sqrt_mod,
    squarefree_kernel,
    v_symbol,
)


def brute_legendre(m, p):
    # squares mod an odd prime, the definition itself
    m %= p
    if m == 0:
        raise ValueError
    return 1 if any(x * x % p == m for x in range(1, p)) else -1


def brute_quartic(m, p):
    m %= p
    return 1 if any(pow(x, 4, p) == m for x in range(1, p)) else -1


def test_legendre_matches_brute_force():
    for p in primes_up_to(80):
        if p == 2:
            continue
        for m in range(-2 * p, 2 * p):
            if m % p == 0:
                continue
            assert legendre(m, p) == brute_legendre(m, p), (m, p)


def test_legendre_at_two_mod8_table():
    for m in range(-40, 40):
        if m % 2 == 0:
            continue
        expected = 1 if m % 8 in (1, 7) else -1
        assert legendre(m, 2) == expected


def test_legendre_rejects_bad_inputs():
    with pytest.raises(DomainError):
        legendre(4, 2)  # even m has no mod-8 class in the table
    with pytest.raises(DomainError):
        legendre(5, 15)
    with pytest.raises(DomainError):
        legendre(29, 5 * 29)
    assert legendre(10, 5) == 0  # usual convention when p divides m


def test_jacobi_is_multiplicative_in_the_denominator():
    rng = random.Random(7)
    odd_primes = [p for p in primes_up_to(60) if p > 2]
    for _ in range(300):
        ps = rng.sample(odd_primes, rng.randint(1, 3))
        n = 1
        for p in ps:
            n *= p
        m = rng.randrange(1, 2 * n)
        if any(m % p == 0 for p in ps):
            continue
        want = 1
        for p in ps:
            want *= brute_legendre(m, p)
        assert jacobi(m, n) == want, (m, n)


def test_jacobi_domain():
    assert jacobi(1, 1) == 1
    assert jacobi(5, 15) == 0  # shared factor
    with pytest.raises(DomainError):
        jacobi(3, 6)
    with pytest.raises(DomainError):
        jacobi(3, -5)


def test_quartic_matches_fourth_power_search():
    for p in primes_up_to(120):
        if p % 4 != 1:
            continue
        for m in range(1, p):
            if brute_legendre(m, p) != 1:
                continue
            assert quartic(m, p) == brute_quartic(m, p), (m, p)


def test_quartic_at_two_mod16_table():
    # defined on m = +-1 (mod 8); +1 at +-1 (mod 16), -1 at +-9 (mod 16)
    for m in range(1, 70, 2):
        if m % 8 not in (1, 7):
            with pytest.raises(DomainError):
                quartic(m, 2)
            continue
        expected = 1 if m % 16 in (1, 15) else -1
        assert quartic(m, 2) == expected


def test_quartic_needs_a_residue():
    with pytest.raises(DomainError):
        quartic(2, 5)  # (2/5) = -1
    with pytest.raises(DomainError):
        quartic(5, 7)  # 7 = 3 mod 4
    with pytest.raises(DomainError):
        quartic(10, 5)


def test_v_symbol_is_symmetric():
    ps = primes_in_v(150)
    for i, p in enumerate(ps):
        for q in ps[i + 1:]:
            assert v_symbol(p, q) == v_symbol(q, p)
            assert v_symbol(p, q) in (-1, 1)


def test_v_symbol_spot_values():
    assert v_symbol(5, 29) == 1
    assert v_symbol(2, 17) == 1
    assert v_symbol(2, 5) == -1
    assert v_symbol(5, 13) == -1
    assert v_symbol(13, 17) == 1
    with pytest.raises(DomainError):
        v_symbol(3, 5)
    with pytest.raises(DomainError):
        v_symbol(5, 5)


def test_primes_in_v_prefix():
    assert primes_in_v(75) == [2, 5, 13, 17, 29, 37, 41, 53, 61, 73]


def test_is_prime_against_sieve():
    sieve = set(primes_up_to(10000))
    for n in range(-3, 10000):
        assert is_prime(n) == (n in sieve)
    assert is_prime(2 ** 61 - 1)  # Mersenne
    assert not is_prime(2 ** 67 - 1)  # composite Mersenne (Cole)


def test_sqrt_mod_brute():
    for p in primes_up_to(200):
        if p == 2:
            continue
        for m in range(1, p):
            if brute_legendre(m, p) == -1:
                with pytest.raises(DomainError):
                    sqrt_mod(m, p)
                continue
            r = sqrt_mod(m, p)
            assert r * r % p == m
            assert 0 < r <= p - r  # canonical smaller root


def test_sqrt_mod_accepts_multiples_of_p_not():
    with pytest.raises(DomainError):
        sqrt_mod(29, 29)


def test_sqrt_2adic_spot_and_properties():
    assert sqrt_2adic(17, 5) == 9
    rng = random.Random(11)
    for _ in range(200):
        k = rng.randint(3, 40)
        m = 8 * rng.randrange(0, 1 << (k - 3)) + 1
        r = sqrt_2adic(m, k)
        assert (r * r - m) % (1 << k) == 0
        assert r % 4 == 1
    with pytest.raises(DomainError):
        sqrt_2adic(3, 4)
    with pytest.raises(DomainError):
        sqrt_2adic(5, 4)


def test_factorize_round_trip():
    rng = random.Random(3)
    for _ in range(400):
        n = rng.randint(1, 10 ** 7)
        f = factorize(n)
        back = 1
        for p, e in f.items():
            assert is_prime(p)
            back *= p ** e
        assert back == n


def test_factorize_large_prime_factors():
    # the rho stage; these would stall plain trial division
    p, q = 1000000007, 999999937
    assert factorize(p * q) == {p: 1, q: 1}
    assert factorize(p * p) == {p: 2}
    assert prime_divisors(2 ** 5 * p) == (2, p)


def test_squarefree_helpers():
    assert is_squarefree(1) and is_squarefree(30) and not is_squarefree(12)
    assert not is_squarefree(0)
    assert squarefree_kernel(12) == 3
    assert squarefree_kernel(360) == 10
    assert squarefree_kernel(49) == 1
    assert is_perfect_square(0) and is_perfect_square(144)
    assert not is_perfect_square(-4) and not is_perfect_square(99)
