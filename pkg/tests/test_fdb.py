"""Set-partition expansion of Laplacian powers: combinatorics and oracles."""

import random

import pytest

from contactps.curve import laplacian_power, pullback
from contactps.expr import parse_curve, parse_expression
from contactps.fdb import (
    MultiplicityMismatchError,
    derive_forms,
    expansion_table,
    filtered_expansion,
    integer_partitions,
    laplacian_power_forms,
    laplacian_power_forms_enumerated,
    partition_count,
    random_real_polynomial,
    set_partitions,
)
from contactps.search import SearchBudget, random_curves

from conftest import gr


class TestPartitionCombinatorics:
    def test_integer_partitions(self):
        assert integer_partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]

    def test_partition_count_against_enumeration(self):
        for k in range(1, 7):
            enum = set_partitions(tuple(range(k)))
            for sizes in integer_partitions(k):
                hits = sum(
                    1 for p in enum
                    if tuple(sorted((len(b) for b in p), reverse=True)) == sizes
                )
                assert partition_count(k, sizes) == hits

    def test_known_values(self):
        assert partition_count(3, (2, 1)) == 3
        assert partition_count(4, (2, 2)) == 3
        assert partition_count(6, (3, 3)) == 10

    def test_bad_sizes(self):
        with pytest.raises(ValueError):
            partition_count(4, (3, 2))


def test_k3_form_type_multiplicities():
    table = {}
    for term in expansion_table(3):
        table[term.form_type] = table.get(term.form_type, 0) + term.count
    assert table[(1, 1)] == 1
    assert table[(1, 2)] == 3
    assert table[(2, 1)] == 3
    assert table[(2, 2)] == 9


def test_derive_forms_values():
    g = parse_expression("abs2(z1)^2", 1)  # z1^2 conj(z1)^2
    forms = derive_forms(g, 4)
    assert forms[(2, 2)].value((0, 0), (0, 0)) == gr(4)  # 2! * 2! * 1
    assert (1, 1) not in forms


class TestOracleEquivalence:
    def test_single_modulus(self):
        g = parse_expression("abs2(z1)", 1)
        assert laplacian_power_forms(g, parse_curve("(t)"), 1) == gr(1)

    def test_fourth_power(self):
        g = parse_expression("abs2(z1)^2", 1)
        assert laplacian_power_forms(g, parse_curve("(t)"), 2) == gr(4)

    def test_random_against_operator(self, rng):
        for _ in range(40):
            nvars = rng.randint(1, 2)
            g = random_real_polynomial(rng, nvars, 6)
            budget = SearchBudget(max_degree=4, random_trials=1,
                                  seed=rng.randrange(1 << 30))
            z = next(iter(random_curves(nvars, budget)))
            for k in range(1, 4):
                assert laplacian_power_forms(g, z, k) == laplacian_power(
                    pullback(g, z), k
                )

    def test_grouped_against_enumerated(self, rng):
        for _ in range(10):
            g = random_real_polynomial(rng, 2, 5)
            budget = SearchBudget(max_degree=3, random_trials=1,
                                  seed=rng.randrange(1 << 30))
            z = next(iter(random_curves(2, budget)))
            for k in range(1, 4):
                assert laplacian_power_forms(g, z, k) == \
                    laplacian_power_forms_enumerated(g, z, k)


class TestFilteredExpansion:
    def test_coefficient_law(self):
        expected = {1: (1, 1, 1, 1), 2: (1, 3, 3, 9), 3: (1, 10, 10, 100)}
        g = parse_expression("abs2(z1 + z2^2)^2", 2)
        for m, coeffs in expected.items():
            z = parse_curve(f"(t^{m}, t^{m} + t^{2 * m})")
            fe = filtered_expansion(g, z)
            assert fe.coefficients == coeffs
            assert fe.lam == coeffs[1]
            assert fe.total == fe.oracle

    def test_conjugate_pairing_keeps_total_real(self, rng):
        for _ in range(10):
            g = random_real_polynomial(rng, 2, 6)
            z = parse_curve("(t^2 + i*t^4, t^2 - t^3)")
            fe = filtered_expansion(g, z)
            assert fe.total.is_real()
            # the (1,2) and (2,1) contributions are conjugates
            by_type = {t.form_type: v for t, v in fe.terms}
            assert by_type[(1, 2)] == by_type[(2, 1)].conjugate()

    def test_multiplicity_mismatch(self):
        g = parse_expression("abs2(z1)^2", 2)
        with pytest.raises(MultiplicityMismatchError):
            filtered_expansion(g, parse_curve("(t^2, 0)"), m=3)
