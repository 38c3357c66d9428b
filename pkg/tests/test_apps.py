"""Theorem-level checks: unit products, square certificates, d-search,
norm sign prediction, and the biquadratic unit index."""

from fractions import Fraction

import pytest

from quadrec.arith import DomainError
from quadrec.apps import (
    candm_check,
    candp_check,
    kuroda_example_check,
    kuroda_q,
    norm_sign_predict,
    positive_norm_square_check,
    theorem_sq_check,
    triquad_parity_criterion,
    unit_element,
    unit_family,
)
from quadrec.mquad import MQField, field_containing
from quadrec.pell import fundamental_unit


def test_unit_element_embeds_the_unit():
    field = MQField((5,))
    eps = unit_element(fundamental_unit(5), field)
    assert eps * 2 == field.rational(1) + field.sqrt_radicand(5)
    # its norm relation transfers: eps * conj(eps) = -1
    assert eps * eps.conjugate(0b1) == field.rational(-1)


def test_unit_family():
    fam = unit_family((5, 13, 65))
    assert fam.norms == (-1, -1, -1)
    assert fam.product_square
    assert not unit_family((2, 5, 13)).product_square
    with pytest.raises(DomainError):
        unit_family((5, 13, 12))
    with pytest.raises(DomainError):
        unit_family((5, 5, 13))


def test_theorem_sq_family_5_13_65():
    res = theorem_sq_check(unit_family((5, 13, 65)))
    assert res.ok
    f = res.field
    expected = (f.rational(7) + 5 * f.sqrt_radicand(5)
                + 3 * f.sqrt_radicand(13) + f.sqrt_radicand(65)) / 4
    assert res.root == expected
    assert res.root * res.root == res.element


def test_theorem_sq_family_2_5_10():
    res = theorem_sq_check(unit_family((2, 5, 10)))
    assert res.ok
    f = res.field
    product = (f.rational(13) + 8 * f.sqrt_radicand(2) + 5 * f.sqrt_radicand(5)
               + 4 * f.sqrt_radicand(10)) / 2
    assert res.element == product
    assert res.root * res.root == product


def test_theorem_sq_rejects_wrong_hypotheses():
    with pytest.raises(DomainError):
        theorem_sq_check(unit_family((2, 5, 13)))  # product not square
    with pytest.raises(DomainError):
        theorem_sq_check(unit_family((3, 5, 15)))  # eps_3 has norm +1


def test_positive_norm_roots():
    r15 = positive_norm_square_check(15)
    assert r15.ok
    f = r15.field
    assert r15.root == (f.sqrt_radicand(6) + f.sqrt_radicand(10)) / 2
    r3 = positive_norm_square_check(3)
    assert r3.root == (r3.field.sqrt_radicand(2) + r3.field.sqrt_radicand(6)) / 2
    r7 = positive_norm_square_check(7)
    assert r7.root == (3 * r7.field.sqrt_radicand(2) + r7.field.sqrt_radicand(14)) / 2
    # m = 1 (mod 4) stays inside the odd-generator field
    r21 = positive_norm_square_check(21)
    assert r21.ok and 2 not in r21.field.primes


def test_positive_norm_domain():
    with pytest.raises(DomainError):
        positive_norm_square_check(5)  # norm -1
    with pytest.raises(DomainError):
        positive_norm_square_check(12)


def test_candm_triple_2_5_13():
    res = candm_check(((2, 5), (5, 13), (13, 2)), {2, 5, 13})
    assert res.invariant.value == 0
    assert res.d == 1
    assert res.intersection == ()
    assert res.consistent


def test_candm_triple_2_5_37():
    res = candm_check(((2, 5), (5, 37), (37, 2)), {2, 5, 37})
    assert res.invariant.value == 1
    assert res.d == 2
    assert res.intersection == (2,)
    assert res.consistent


def test_candm_validates_inputs():
    with pytest.raises(DomainError):
        candm_check(((2, 5), (5, 13)), {2, 5, 13})  # product 2*5*5*13 not square
    with pytest.raises(DomainError):
        candm_check(((5, 29), (29, 5)), {5, 29})  # norm +1 pairs... residue pair
    with pytest.raises(DomainError):
        # P misses a forced prime: (13/2)... (2 mod 5 is a non-residue)
        candm_check(((2, 5), (5, 13), (13, 2)), {2, 5})


def test_candp_worked_instance():
    res = candp_check(5, 3)
    assert res.P == (2, 3, 5)
    assert res.d == 6
    assert res.intersection == (2, 3)
    assert res.parity_even


def test_candp_second_instance():
    res = candp_check(13, 3)
    assert res.P == (2,)
    assert res.d == 3
    assert res.intersection == ()
    assert res.parity_even


def test_candp_validates():
    with pytest.raises(DomainError):
        candp_check(3, 5)  # 3 = 3 (mod 4) divides m
    with pytest.raises(DomainError):
        candp_check(5, 5)
    with pytest.raises(DomainError):
        candp_check(5, 29)  # eps_145 has norm -1


def test_norm_sign_predictions():
    assert norm_sign_predict(13, 17) == 1
    assert fundamental_unit(13 * 17).norm == 1
    assert norm_sign_predict(5, 29) is None  # quartic product +1, no claim
    assert norm_sign_predict(2, 5) is None  # cross symbol (5/2) = -1
    with pytest.raises(DomainError):
        norm_sign_predict(5, 3)  # 3 = 3 (mod 4)
    with pytest.raises(DomainError):
        norm_sign_predict(5, 10)


def test_kuroda_q_values():
    assert kuroda_q(13, 85, 13 * 85).value == 1
    res = kuroda_q(5, 58, 5 * 58)
    assert res.value == 2
    assert res.witness_exponents == frozenset({(1, 1, 1)})
    with pytest.raises(DomainError):
        kuroda_q(5, 13, 70)  # third field wrong
    with pytest.raises(DomainError):
        kuroda_q(5, 5, 25)


def test_kuroda_example_instances():
    res = kuroda_example_check(13, 17, 5)
    assert res.formula_value == 1 and res.computed.value == 1 and res.consistent
    res2 = kuroda_example_check(5, 29, 2)
    assert res2.formula_value == 2 and res2.computed.value == 2 and res2.consistent
    with pytest.raises(DomainError):
        kuroda_example_check(2, 5, 13)  # (2/5) = -1 breaks the first hypothesis


def test_triquad_parity():
    assert triquad_parity_criterion(2, 5, 13) == "even"
    assert triquad_parity_criterion(2, 5, 37) == "odd"
    with pytest.raises(DomainError):
        triquad_parity_criterion(5, 29, 2)


def test_field_containing_collapses_pairs():
    f = field_containing([10, 65, 26])  # pairwise products of 2, 5, 13
    assert f.degree == 4  # 26 = 10 * 65 mod squares
