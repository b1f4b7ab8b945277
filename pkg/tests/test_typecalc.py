"""Regular/singular type computation, desingularization, and inference rules."""

from fractions import Fraction

import pytest

from contactps.curve import CurveJet, pullback
from contactps.expr import format_curve, parse_curve, parse_expression
from contactps.germ import germ_ps_check, gram_certificate, normalize_to_graph, validate
from contactps.search import SearchBudget
from contactps.typecalc import (
    ContactNotFourMError,
    ContradictoryEvidenceError,
    CurveFrameError,
    Evidence,
    PSViolationError,
    TypeClaim,
    desingularize,
    gaussian_common_roots,
    infer_type,
    reg_type,
    sing_type_search,
)

from conftest import gr


def _graph(text, K=8, n=3):
    return normalize_to_graph(validate(parse_expression(text, n)), K)


class TestGaussianRoots:
    def test_linear_and_quadratic(self):
        # x^2 + 1 factors over the Gaussian rationals
        roots, complete = gaussian_common_roots([{2: gr(1), 0: gr(1)}])
        assert complete and {(c.re, c.im) for c in roots} == {(-0, -1), (0, 1)} or \
            sorted((c.re, c.im) for c in roots) == [(0, -1), (0, 1)]

    def test_irrational_roots_flagged_incomplete(self):
        roots, complete = gaussian_common_roots([{2: gr(1), 0: gr(-2)}])
        assert roots == [] and not complete

    def test_common_roots_of_two_polys(self):
        # (x-1)(x-2) and (x-1)(x+3) share x=1 only
        p1 = {2: gr(1), 1: gr(-3), 0: gr(2)}
        p2 = {2: gr(1), 1: gr(2), 0: gr(-3)}
        roots, complete = gaussian_common_roots([p1, p2])
        assert complete and [(c.re, c.im) for c in roots] == [(1, 0)]


class TestRegType:
    def test_definite_quadratic_gives_two(self):
        claim = reg_type(_graph("2*Re(z2) + abs2(z1)", 8, 2), 8)
        assert claim.kind == "exact" and claim.value == 2

    def test_cubic_square_difference_gives_six(self):
        claim = reg_type(_graph("2*Re(z3) + abs2(z1^2 - z2^3)"), 8)
        assert claim.kind == "exact" and claim.value == 6
        assert claim.witness is not None
        g = _graph("2*Re(z3) + abs2(z1^2 - z2^3)").g
        order = pullback(g, claim.witness).order_of_vanishing()
        assert order.kind == "exact" and order.value == 6

    def test_cancelling_square_gives_four(self):
        claim = reg_type(_graph("2*Re(z3) + abs2(z1 + z2^2) + abs2(z2)^2"), 8)
        assert claim.kind == "exact" and claim.value == 4

    def test_fourth_powers_give_four(self):
        claim = reg_type(_graph("2*Re(z3) + abs2(z1)^2 + abs2(z2)^2"), 8)
        assert claim.kind == "exact" and claim.value == 4

    def test_witness_always_reverifies(self):
        for text in (
            "2*Re(z3) + abs2(z1 + z2^2) + abs2(z2)^2",
            "2*Re(z3) + abs2(z1^2 + z2^2) + abs2(z1*z2)",
        ):
            gf = _graph(text)
            claim = reg_type(gf, 8)
            order = pullback(gf.g, claim.witness).order_of_vanishing()
            assert order.kind == "exact" and order.value == claim.value

    def test_cap_enforced_by_normalization_bound(self):
        gf = _graph("2*Re(z3) + abs2(z1)^2 + abs2(z2)^2", K=4)
        with pytest.raises(ValueError):
            reg_type(gf, 8)


class TestSingTypeSearch:
    def test_infinite_certificate(self):
        gf = _graph("2*Re(z3) + abs2(z1^2 - z2^3)")
        res = sing_type_search(gf, SearchBudget(max_degree=4, random_trials=20))
        assert res.kind == "infinite"
        assert format_curve(res.witness) == "(t^3, t^2)"
        assert pullback(gf.g, res.witness).is_zero()

    def test_ratio_lower_bound(self):
        gf = _graph("2*Re(z3) + abs2(z1 + z2^2) + abs2(z2)^2")
        res = sing_type_search(gf, SearchBudget(max_degree=4, random_trials=50))
        assert res.kind == "lower_bound"
        assert res.ratio == 4
        assert res.candidates_tested > 0

    def test_simple_fourth_power(self):
        gf = _graph("2*Re(z2) + abs2(z1)^2", 8, 2)
        res = sing_type_search(gf, SearchBudget(max_degree=4, random_trials=20))
        assert res.ratio == 4  # achieved by (t) and (t^2) alike

    def test_budget_monotonicity(self):
        gf = _graph("2*Re(z3) + abs2(z1 + z2^2) + abs2(z2)^2")
        small = sing_type_search(gf, SearchBudget(max_degree=3, random_trials=10))
        big = sing_type_search(gf, SearchBudget(max_degree=6, random_trials=100))
        assert big.ratio >= small.ratio


class TestDesingularize:
    def test_cancelling_square(self):
        gf = _graph("2*Re(z3) + abs2(z1 + z2^2) + abs2(z2)^2")
        res = desingularize(gf, parse_curve("(-t^4, t^2)"))
        assert format_curve(res.eta) == "(-t^2, t)"
        order = pullback(gf.g, res.eta).order_of_vanishing()
        assert order.kind == "exact" and order.value == 4

    def test_pure_fourth_power_m2_m3(self):
        gf = _graph("2*Re(z2) + abs2(z1)^2", 8, 2)
        for m in (2, 3):
            res = desingularize(gf, parse_curve(f"(t^{m})"))
            assert format_curve(res.eta) == "(t)"
            assert res.transcript["contact"] == 4 * m

    def test_coefficient_transfer_identity(self):
        gf = _graph("2*Re(z3) + abs2(z1 + z2^2) + abs2(z2)^2")
        z = parse_curve("(-t^4, t^2)")
        res = desingularize(gf, z)
        u = pullback(gf.g, z)
        v = pullback(gf.g, res.eta)
        assert v.coeff(((2,), (2,))) == u.coeff(((4,), (4,)))
        # every coefficient of total degree < 4 vanishes
        assert v.order_of_vanishing().value == 4

    def test_rejects_wrong_contact(self):
        gf = _graph("2*Re(z3) + abs2(z1^2 - z2^3)")
        with pytest.raises(ContactNotFourMError):
            desingularize(gf, parse_curve("(t^3, t^2)"))  # infinite contact
        with pytest.raises(ContactNotFourMError):
            desingularize(gf, parse_curve("(t, 0)"))  # regular input

    def test_rejects_ps_violation_along_curve(self):
        # negative balanced coefficient at exact order 4m
        g = parse_expression("0 - abs2(z1)^2 + abs2(z1^3)", 1)
        from contactps.germ import GraphForm
        from contactps.algebra import CPolynomial
        gf2 = GraphForm(g, 8, (CPolynomial.variable(2, 0), CPolynomial.variable(2, 1)), False)
        with pytest.raises(PSViolationError):
            desingularize(gf2, parse_curve("(t^2)"))

    def test_rejects_nonzero_last_coordinate(self):
        gf = _graph("2*Re(z3) + abs2(z1)^2 + abs2(z2)^2")
        with pytest.raises(CurveFrameError):
            desingularize(gf, parse_curve("(t^2, 0, t^2)"))
        # a zero last coordinate is accepted and stripped
        res = desingularize(gf, parse_curve("(t^2, 0, 0)"))
        assert format_curve(res.eta) == "(t, 0)"


class TestInferType:
    def _evidence_for(self, text, n=3, kmax=6):
        r = validate(parse_expression(text, n))
        gf = normalize_to_graph(r, 8)
        budget = SearchBudget(max_degree=4, random_trials=50)
        reg = reg_type(gf, 8)
        sing = sing_type_search(gf, budget)
        ps = germ_ps_check(r, 2, kmax, budget)
        return r, Evidence(reg=reg, sing=sing, ps=ps)

    def test_rule_i_infinite_dominates(self):
        r, ev = self._evidence_for("2*Re(z3) + abs2(z1^2 - z2^3)")
        rep = infer_type(r, ev)
        assert rep.sing_type.kind == "infinite"
        assert any("rule (i)" in step for step in rep.trail)

    def test_rule_ii_type_two(self):
        r, ev = self._evidence_for("2*Re(z2) + abs2(z1)", 2)
        rep = infer_type(r, ev)
        assert rep.sing_type.kind == "exact" and rep.sing_type.value == 2
        assert any("rule (ii)" in step for step in rep.trail)

    def test_rule_iii_multiplicity_reduction(self):
        r, ev = self._evidence_for("2*Re(z3) + abs2(z1)^2 + abs2(z2)^2")
        rep = infer_type(r, ev)
        assert rep.sing_type.kind == "exact" and rep.sing_type.value == 4
        assert any("rule (iii)" in step for step in rep.trail)

    def test_rule_iii_refuses_search_evidence_without_flag(self):
        reg = TypeClaim("exact", 4)
        from contactps.germ import PSCertificate
        ps = PSCertificate("no_violation_up_to_bounds", "search")
        rep = infer_type(None, Evidence(reg=reg, ps=ps))
        assert rep.sing_type.kind == "at_least"
        rep2 = infer_type(None, Evidence(reg=reg, ps=ps, assume_ps_from_search=True))
        assert rep2.sing_type.kind == "exact" and rep2.sing_type.value == 4
        assert any("ASSUMED" in note for note in rep2.notes)

    def test_contradiction_surfaced(self):
        from contactps.germ import PSCertificate
        reg = TypeClaim("exact", 4)
        ps = PSCertificate("certified", "gram")
        bad_sing = sing_type_search(
            _graph("2*Re(z3) + abs2(z1^2 - z2^3)"),
            SearchBudget(max_degree=4, random_trials=10),
        )
        with pytest.raises(ContradictoryEvidenceError):
            infer_type(None, Evidence(reg=reg, sing=bad_sing, ps=ps))
