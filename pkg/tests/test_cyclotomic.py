import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from parcelforge.cyclotomic import (
    CycElem,
    coprime_residues,
    cyc_sum,
    cyclotomic_poly,
    galois_conjugates,
    phi,
)


@pytest.mark.parametrize("sigma, coeffs", [(1, [-1, 1]), (2, [1, 1]), (4, [1, 0, 1]), (12, [1, 0, -1, 0, 1]),
                                           (6, [1, -1, 1])])
def test_cyclotomic_polynomials(sigma, coeffs):
    assert cyclotomic_poly(sigma).coeff_list() == coeffs
    assert phi(sigma) == len(coeffs) - 1


def test_basic_relations():
    w4 = CycElem.omega(4)
    assert w4 * w4 ** 3 == 1
    w3 = CycElem.omega(3)
    assert (1 + w3 + w3 ** 2).is_zero()
    omega = 1 + 2 * w3
    assert omega * omega.conj() == 3
    assert omega.conj() == 1 + 2 * w3 ** 2


def test_conjugation():
    assert CycElem.omega(4).conj() == CycElem.omega(4, 3)
    assert CycElem.from_int(5, 7).conj() == 7


def test_complex_embedding():
    assert abs(CycElem.omega(4).embed_complex() - 1j) < 1e-12
    assert abs((1 + 2 * CycElem.omega(3)).embed_complex() - 3 ** 0.5 * 1j) < 1e-12
    assert CycElem.zero(7).embed_complex() == 0


def test_galois_conjugates():
    w = CycElem.omega(4)
    assert galois_conjugates(w) == [w, CycElem.omega(4, 3)]
    w3 = CycElem.omega(3)
    assert galois_conjugates(1 + 2 * w3) == [1 + 2 * w3, 1 + 2 * w3 ** 2]
    assert set(galois_conjugates(CycElem.from_int(9, 4))) == {CycElem.from_int(9, 4)}
    with pytest.raises(ValueError):
        w.galois(2)


def test_inverse_and_division():
    w = CycElem.omega(5)
    x = 2 + w
    assert x * x.inverse() == 1
    assert (x / 3) * 3 == x
    with pytest.raises(ZeroDivisionError):
        CycElem.zero(5).inverse()
    assert (w ** -1) == w ** 4


def test_rationality():
    w = CycElem.omega(8)
    c = w + w ** 7  # sqrt 2, not rational
    assert not c.is_rational()
    assert (c * c).to_rational() == 2
    with pytest.raises(ValueError):
        c.to_rational()


def test_json():
    x = CycElem.omega(6) * 3 - 1
    assert CycElem.from_json(x.to_json()) == x
    half = x / 2
    assert CycElem.from_json(half.to_json()) == half


def test_sums():
    assert cyc_sum(7, [CycElem.omega(7, k) for k in range(7)]).is_zero()
    assert coprime_residues(12) == [1, 5, 7, 11]
    assert coprime_residues(1) == [1]


elements = st.integers(1, 13).flatmap(
    lambda s: st.lists(st.integers(-6, 6), min_size=phi(s), max_size=phi(s)).map(lambda c: CycElem(s, c)))


def _approx(x: CycElem, rho=1):
    return x.embed_complex(rho)


@given(elements, st.data())
def test_arithmetic_matches_complex_numbers(a, data):
    s = a.sigma
    b = CycElem(s, data.draw(st.lists(st.integers(-6, 6), min_size=phi(s), max_size=phi(s))))
    for rho in coprime_residues(s):
        assert cmath.isclose(_approx(a * b, rho), _approx(a, rho) * _approx(b, rho), abs_tol=1e-6)
        assert cmath.isclose(_approx(a - b, rho), _approx(a, rho) - _approx(b, rho), abs_tol=1e-6)
        assert cmath.isclose(a.galois(rho).embed_complex(), a.embed_complex(rho), abs_tol=1e-6)


@given(elements)
def test_galois_is_a_ring_automorphism(a):
    s = a.sigma
    b = a + CycElem.omega(s)
    for rho in coprime_residues(s):
        assert (a * b).galois(rho) == a.galois(rho) * b.galois(rho)
    assert a.conj().conj() == a


@given(elements)
def test_norm_is_rational(a):
    prod = CycElem.one(a.sigma)
    for x in galois_conjugates(a):
        prod = prod * x
    assert prod.is_rational()
    if not a.is_zero():
        assert a * a.inverse() == 1
        assert isinstance(a.inverse().coeffs[0], (int, Fraction))
