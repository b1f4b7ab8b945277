import random
from fractions import Fraction

import pytest

from contactps.algebra import CPolynomial, GaussianRational


def gr(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def random_scalar(rng):
    return GaussianRational(
        Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
        Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
    )


def random_poly(rng, nvars=2, max_deg=3, nterms=4, truncation=None):
    terms = {}
    for _ in range(nterms):
        holo = tuple(rng.randint(0, max_deg) for _ in range(nvars))
        anti = tuple(rng.randint(0, max_deg) for _ in range(nvars))
        terms[(holo, anti)] = random_scalar(rng)
    return CPolynomial(nvars, terms, truncation)


@pytest.fixture
def rng():
    return random.Random(20260824)
