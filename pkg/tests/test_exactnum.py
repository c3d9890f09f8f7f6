from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from statesum3d.exactnum import FieldElement, arith, make_field, root_of_unity


Q = make_field("rational")
Z4 = make_field("cyclotomic", 4)
Z6 = make_field("cyclotomic", 6)
GOLD = make_field("algebraic", minpoly=[-1, -1, 1])

BUILTIN_FIELDS = [
    Q,
    make_field("cyclotomic", 2),
    make_field("cyclotomic", 3),
    Z4,
    make_field("cyclotomic", 5),
    Z6,
    GOLD,
    make_field("algebraic", minpoly=[-2, 0, 1]),
]


def test_make_field_degenerate_cyclotomic():
    f1 = make_field("cyclotomic", 1)
    assert f1.degree == 1
    # the generator of Q(zeta_1) is 1 itself
    assert f1.gen() == f1.one()


def test_make_field_z4():
    assert Z4.degree == 2
    z = Z4.gen()
    assert z * z == -Z4.one()


def test_make_field_golden():
    assert GOLD.degree == 2
    phi = GOLD.gen()
    assert phi * (phi - GOLD.one()) == GOLD.one()


def test_make_field_rejects_bad_polynomials():
    with pytest.raises(ValueError):
        make_field("algebraic", minpoly=[2, 3])  # not monic
    with pytest.raises(ValueError):
        make_field("algebraic", minpoly=[1])  # degree 0
    with pytest.raises(ValueError):
        make_field("algebraic", minpoly=[-1, 0, 1])  # x^2 - 1 reducible


def test_arith_examples():
    z = Z4.gen()
    one = Z4.one()
    assert arith(one + z, one - z, "mul") == Z4.rational(2)
    # in Q(zeta_6), zeta^2 = zeta - 1 since Phi_6 = x^2 - x + 1
    z6 = Z6.gen()
    assert z6 * z6 == z6 - Z6.one()
    # 1/zeta = zeta^(N-1)
    for spec in (Z4, Z6):
        zz = spec.gen()
        assert zz.inv() == root_of_unity(spec, spec.n - 1)


def test_arith_mismatched_specs():
    with pytest.raises(ValueError):
        arith(Z4.one(), Z6.one(), "add")
    with pytest.raises(ZeroDivisionError):
        arith(Z4.one(), Z4.zero(), "div")


def test_root_of_unity():
    m1 = root_of_unity(make_field("cyclotomic", 2), 1)
    assert m1 == -make_field("cyclotomic", 2).one()
    assert root_of_unity(Z4, 2) == -Z4.one()
    Z3 = make_field("cyclotomic", 3)
    assert root_of_unity(Z3, 4) == root_of_unity(Z3, 1)
    assert root_of_unity(Z4, 0) == Z4.one()
    with pytest.raises(ValueError):
        root_of_unity(Q, 1)


def test_serialization_roundtrip():
    x = GOLD.element([Fraction(1, 2), -3])
    assert x.to_text() == "[1/2, -3]"
    assert FieldElement.from_text(GOLD, x.to_text()) == x
    for spec in BUILTIN_FIELDS:
        spec2 = spec.from_text(spec.to_text())
        assert spec2 == spec


def _random_element(spec, rnd):
    return spec.element([Fraction(rnd.randrange(-6, 7), rnd.randrange(1, 5))
                         for _ in range(spec.degree)])


@pytest.mark.parametrize("spec", BUILTIN_FIELDS)
def test_ring_axioms_random(spec):
    import random
    rnd = random.Random(7)
    for _ in range(50):
        a, b, c = (_random_element(spec, rnd) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a


@pytest.mark.parametrize("spec", BUILTIN_FIELDS)
def test_inverses_random(spec):
    import random
    rnd = random.Random(13)
    count = 0
    while count < 200:
        a = _random_element(spec, rnd)
        if a.is_zero():
            continue
        count += 1
        assert arith(a, arith(spec.one(), a, "div"), "mul") == spec.one()


@given(st.lists(st.fractions(max_denominator=12), min_size=2, max_size=2))
@settings(max_examples=60, deadline=None)
def test_canonicalization_idempotent(coeffs):
    x = GOLD.element(coeffs)
    y = GOLD.element(x.coeffs)
    assert x.coeffs == y.coeffs


def test_power_and_approx():
    phi = GOLD.gen()
    assert phi ** 2 == phi + GOLD.one()
    assert abs(phi.approx().real - 1.618) < 1e-2
