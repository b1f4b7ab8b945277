"""Invariant suite for the exact polynomial arithmetic layer."""

import random
from fractions import Fraction
from math import factorial

import pytest

from contactps.algebra import (
    CPolynomial,
    GaussianRational,
    I_UNIT,
    ONE,
    TruncationError,
    ZERO,
    key_conjugate,
    key_is_pure,
    product_rule_check,
)

from conftest import gr, random_poly, random_scalar


class TestGaussianRational:
    def test_field_ops(self):
        a = gr(Fraction(1, 2), 3)
        b = gr(-2, Fraction(1, 3))
        assert (a + b) - b == a
        assert (a * b) / b == a
        assert a * (ONE / a) == ONE
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()

    def test_norm_and_pow(self):
        a = gr(3, 4)
        assert a.norm2() == 25
        assert a ** 0 == ONE
        assert a ** 3 == a * a * a
        assert I_UNIT ** 2 == gr(-1)

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            ONE / ZERO


class TestRingAxioms:
    def test_random_instances(self, rng):
        for _ in range(100):
            p = random_poly(rng)
            q = random_poly(rng)
            s = random_poly(rng)
            assert (p + q) + s == p + (q + s)
            assert p + q == q + p
            assert p * q == q * p
            assert (p * q) * s == p * (q * s)
            assert p * (q + s) == p * q + p * s
            assert p + (-p) == CPolynomial.zero(2)
            assert p * CPolynomial.one(2) == p

    def test_pow_matches_repeated_mul(self, rng):
        for _ in range(20):
            p = random_poly(rng, nterms=3)
            acc = CPolynomial.one(2)
            for k in range(5):
                assert p ** k == acc
                acc = acc * p


class TestConjugation:
    def test_involution_and_homomorphism(self, rng):
        for _ in range(100):
            p = random_poly(rng)
            q = random_poly(rng)
            assert p.conjugate().conjugate() == p
            assert (p + q).conjugate() == p.conjugate() + q.conjugate()
            assert (p * q).conjugate() == p.conjugate() * q.conjugate()

    def test_real_valued_detection(self):
        z1 = CPolynomial.variable(2, 0)
        g = z1 * z1.conjugate()
        assert g.is_real_valued()
        assert not (z1 * z1).is_real_valued()


class TestWirtinger:
    def test_product_rule(self, rng):
        for _ in range(100):
            p = random_poly(rng, nterms=3)
            q = random_poly(rng, nterms=3)
            idx = rng.randrange(2)
            anti = rng.random() < 0.5
            assert product_rule_check(p, q, idx, anti)

    def test_derivative_of_monomial(self):
        p = CPolynomial.monomial(1, (3,), (2,), gr(5))
        dp = p.wirtinger(0)
        assert dp.coeff(((2,), (2,))) == gr(15)
        dpb = p.wirtinger(0, anti=True)
        assert dpb.coeff(((3,), (1,))) == gr(10)

    def test_holomorphic_kills_anti(self):
        p = CPolynomial.variable(2, 0)
        assert p.wirtinger(0, anti=True).is_zero()


class TestOrderOfVanishing:
    def test_additive_under_multiplication(self, rng):
        for _ in range(100):
            p = random_poly(rng, nterms=3)
            q = random_poly(rng, nterms=3)
            if p.is_zero() or q.is_zero():
                continue
            op = p.order_of_vanishing().value
            oq = q.order_of_vanishing().value
            assert (p * q).order_of_vanishing().value == op + oq

    def test_zero_and_jet_orders(self):
        assert CPolynomial.zero(1).order_of_vanishing().kind == "zero"
        jet = CPolynomial.zero(1, truncation=5)
        o = jet.order_of_vanishing()
        assert o.kind == "at_least" and o.value == 6


class TestTruncation:
    def test_propagates_min(self, rng):
        p = random_poly(rng, truncation=4)
        q = random_poly(rng, truncation=6)
        assert (p + q).truncation == 4
        assert (p * q).truncation == 4
        exact = random_poly(rng)
        assert (p * exact).truncation == 4

    def test_truncate_drops_high_terms(self):
        p = CPolynomial.monomial(1, (3,), (2,)) + CPolynomial.monomial(1, (1,), (0,))
        t = p.truncate(2)
        assert t.truncation == 2
        assert t.coeff(((1,), (0,))) == ONE
        assert t.coeff(((3,), (2,))) == ZERO

    def test_substitute_rejects_constant_images_into_jets(self):
        p = CPolynomial.variable(1, 0).truncate(3)
        image = CPolynomial.one(1)
        with pytest.raises(TruncationError):
            p.substitute([image], 1)

    def test_jet_arithmetic_consistent_with_exact(self, rng):
        """Truncating before or after an operation agrees below the bound."""
        for _ in range(50):
            p = random_poly(rng)
            q = random_poly(rng)
            k = rng.randint(1, 5)
            assert (p.truncate(k) * q.truncate(k)).truncate(k) == (p * q).truncate(k)
            assert (p.truncate(k) + q.truncate(k)) == (p + q).truncate(k)


class TestSubstitution:
    def test_composition_on_monomials(self):
        # p(z1, z2) = z1 * conj(z2); z1 -> w^2, z2 -> 3w
        p = CPolynomial.monomial(2, (1, 0), (0, 1))
        w2 = CPolynomial.monomial(1, (2,), (0,))
        w3 = CPolynomial.monomial(1, (1,), (0,), gr(3))
        out = p.substitute([w2, w3], 1)
        assert out == CPolynomial.monomial(1, (2,), (1,), gr(3))

    def test_real_valued_is_preserved(self, rng):
        z1 = CPolynomial.variable(2, 0)
        z2 = CPolynomial.variable(2, 1)
        g = (z1 + z2 * z2) * (z1 + z2 * z2).conjugate()
        img = [CPolynomial.monomial(1, (1,), (0,), gr(2)),
               CPolynomial.monomial(1, (3,), (0,), gr(0, 1))]
        assert g.substitute(img, 1).is_real_valued()

    def test_purity_preserved_for_mixed_only(self, rng):
        """Pullback of a mixed-only polynomial has no pure terms."""
        for _ in range(100):
            f = random_poly(rng, nvars=2, max_deg=2, nterms=3).holomorphic_part()
            if f.is_zero():
                continue
            g = f * f.conjugate()
            _pure, mixed = g.pure_mixed_split()
            assert g == mixed
            img = [CPolynomial.monomial(1, (rng.randint(1, 3),), (0,), random_scalar(rng))
                   for _ in range(2)]
            out = g.substitute(img, 1)
            assert all(any(k[0]) and any(k[1]) for k in out.terms)


def test_pure_mixed_split_partition(rng):
    for _ in range(50):
        p = random_poly(rng)
        pure, mixed = p.pure_mixed_split()
        assert pure + mixed == p
        assert all(key_is_pure(k) for k in pure.terms)
        assert not any(key_is_pure(k) for k in mixed.terms)


def test_key_conjugate_involution():
    key = ((2, 0), (1, 3))
    assert key_conjugate(key_conjugate(key)) == key
