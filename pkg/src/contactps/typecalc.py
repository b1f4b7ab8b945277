"""Regular and singular contact-type computation with certificates, the
constructive desingularization of multiplicity-m curves with contact 4m, and
the inference rules combining positivity evidence with type facts.

All exact claims are backed by re-verifiable certificates: an exhibited
curve checked by exact pullback, or a jet-extension obstruction transcript.
Bounded searches only ever produce lower bounds, never wrong exact values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import ONE, ZERO, CPolynomial, GaussianRational, Order
from .curve import CurveJet, pullback, ps_test_single
from .germ import (
    DefiningFunction,
    GraphForm,
    PSCertificate,
    StabilizationReport,
    gram_certificate,
)
from .search import (
    SearchBudget,
    cancellation_scan_curves,
    monomial_curves,
    random_curves,
)


class ContactNotFourMError(ValueError):
    """The input curve does not have exact contact 4m for its multiplicity m."""


class PSViolationError(ValueError):
    """The positivity test fails along the input curve."""


class VerificationFailedError(RuntimeError):
    """A mandatory post-verification failed; no unverified output is returned."""


class CurveFrameError(ValueError):
    """The curve is not in the graph frame (last coordinate must be zero)."""


class ContradictoryEvidenceError(RuntimeError):
    """Inference rules produced incompatible claims; surfaced, never suppressed."""


@dataclass(frozen=True)
class TypeClaim:
    """A contact-type claim: exact value, sound lower bound, or infinite.

    value is an int for regular type and a Fraction for singular type.
    Exact claims carry both a witness curve and an obstruction transcript.
    """

    kind: str  # "exact" | "at_least" | "infinite"
    value: Fraction | int | None = None
    witness: CurveJet | None = None
    exact_backed: bool = True
    transcript: tuple[str, ...] = ()

    def lower_bound(self) -> Fraction:
        if self.kind == "infinite":
            return Fraction(10**9)
        return Fraction(self.value)

    def __str__(self) -> str:
        if self.kind == "infinite":
            return "infinity"
        prefix = "" if self.kind == "exact" else ">="
        return f"{prefix}{self.value}"


# ---------------------------------------------------------------------------
# Gaussian-rational root extraction (exact, via factorization over Q(i))


def _to_sympy_scalar(c: GaussianRational):
    import sympy

    return (
        sympy.Rational(c.re.numerator, c.re.denominator)
        + sympy.Rational(c.im.numerator, c.im.denominator) * sympy.I
    )


def _from_sympy_scalar(v) -> GaussianRational:
    import sympy

    re = sympy.nsimplify(sympy.re(v), rational=True)
    im = sympy.nsimplify(sympy.im(v), rational=True)
    if not (re.is_Rational and im.is_Rational):
        raise ValueError(f"not a Gaussian rational: {v}")
    return GaussianRational(Fraction(re.p, re.q), Fraction(im.p, im.q))


def _univariate_to_sympy(coeffs: dict[int, GaussianRational]):
    import sympy

    x = sympy.Symbol("x")
    expr = sympy.Integer(0)
    for e, c in coeffs.items():
        expr += _to_sympy_scalar(c) * x**e
    return sympy.Poly(expr, x, domain="QQ_I"), x


def gaussian_common_roots(
    polys: list[dict[int, GaussianRational]],
) -> tuple[list[GaussianRational], bool]:
    """Common Gaussian-rational roots of nonzero univariate polynomials.

    Returns (roots, complete); complete is False when the common-root
    polynomial has irreducible factors of degree > 1 over Q(i), i.e. common
    roots exist outside the Gaussian rationals and the enumeration is only a
    partial list.
    """
    import sympy

    sym = [_univariate_to_sympy(p) for p in polys if p]
    if not sym:
        return [], True
    g, x = sym[0]
    for p, _x in sym[1:]:
        g = g.gcd(p)
    if g.degree() == 0:
        return [], True
    complete = True
    roots: list[GaussianRational] = []
    for factor, _mult in g.factor_list()[1]:
        if factor.degree() == 1:
            a1, a0 = factor.all_coeffs()
            root = -sympy.sympify(a0) / sympy.sympify(a1)
            roots.append(_from_sympy_scalar(sympy.expand(root)))
        elif factor.degree() > 1:
            complete = False
    roots.sort(key=lambda c: (c.re, c.im))
    return roots, complete


# ---------------------------------------------------------------------------
# Regular contact of a holomorphic ideal in two variables (jet extension DFS)


@dataclass
class _IdealContact:
    value: int  # min over generators of the t-order, maximized over curves
    exact: bool
    witness: tuple[int, dict[int, GaussianRational]] | None  # (pivot, tail coeffs)
    infinite: bool = False
    transcript: list[str] = field(default_factory=list)


def _bivariate(f: CPolynomial, pivot: int) -> dict[tuple[int, int], GaussianRational]:
    """Holomorphic 2-variable polynomial as {(t_exp, w_exp): coeff} with the
    pivot variable playing t."""
    other = 1 - pivot
    out = {}
    for (holo, _anti), c in f.terms.items():
        out[(holo[pivot], holo[other])] = c
    return out


def _poly1_mul(p, q):
    out: dict[int, GaussianRational] = {}
    for a, ca in p.items():
        for b, cb in q.items():
            k = a + b
            v = ca * cb
            out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _shift_series(f, prefix: dict[int, GaussianRational]):
    """f(t, prefix(t) + s) as {(t_exp, s_exp): coeff}."""
    from math import comb

    max_b = max((b for (_a, b) in f), default=0)
    powers = {0: {0: ONE}}
    for e in range(1, max_b + 1):
        powers[e] = _poly1_mul(powers[e - 1], prefix) if prefix else {}
        if not prefix:
            powers[e] = {}
    out: dict[tuple[int, int], GaussianRational] = {}
    for (a, b), c in f.items():
        for k in range(b + 1):  # choose k factors of s
            binom = GaussianRational.of(comb(b, k))
            if b - k == 0:
                base = {0: ONE}
            else:
                base = powers[b - k]
            for pd, pc in base.items():
                key = (a + pd, k)
                v = c * binom * pc
                out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _ideal_contact_pivot(
    fs: list[dict[tuple[int, int], GaussianRational]], cap: int
) -> _IdealContact:
    """Max over curves (t, w(t)) of the min t-order of the generators.

    Depth-first jet extension: at each tail degree the coefficients that kill
    the next t-coefficient solve a univariate system, whose Gaussian-rational
    roots are extracted exactly; missed irrational roots degrade the claim to
    a lower bound, never to a wrong exact value.
    """

    def rec(prefix: dict[int, GaussianRational], depth: int) -> _IdealContact:
        shifted = [_shift_series(f, prefix) for f in fs]
        if all(all(a > 0 or b > 0 for (a, b) in g) or not g for g in shifted):
            pass  # no constant terms expected; generators vanish at 0
        if all(not any(b == 0 for (_a, b) in g) for g in shifted):
            # Every generator vanishes identically along the zero-tail curve.
            return _IdealContact(cap, True, (0, dict(prefix)), infinite=True,
                                 transcript=[f"curve with tail {sorted(prefix.items())} "
                                             "annihilates every generator"])
        weights = [
            min((a + b * depth for (a, b) in g), default=None) for g in shifted
        ]
        mstar = min(w for w in weights if w is not None)
        if mstar >= cap:
            return _IdealContact(cap, False, (0, dict(prefix)),
                                 transcript=[f"order bound {mstar} reached the cap {cap}"])
        conditions: list[dict[int, GaussianRational]] = []
        for g, w in zip(shifted, weights):
            if w != mstar:
                continue
            phi: dict[int, GaussianRational] = {}
            for (a, b), c in g.items():
                if a + b * depth == mstar:
                    phi[b] = phi[b] + c if b in phi else c
            phi = {b: c for b, c in phi.items() if not c.is_zero()}
            if phi:
                conditions.append(phi)
        forced = any(set(phi) == {0} for phi in conditions)
        if forced:
            return _IdealContact(
                mstar, True, (0, dict(prefix)),
                transcript=[f"tail degree {depth}: the t^{mstar} coefficient is "
                            "independent of the remaining tail and nonzero"])
        roots, complete = gaussian_common_roots(conditions)
        roots = [
            x for x in roots
            if all(_eval_univariate(phi, x).is_zero() for phi in conditions)
        ]
        best = _IdealContact(
            mstar, True, (0, dict(prefix)),
            transcript=[f"tail degree {depth}: cancellation at t^{mstar} forces the "
                        f"coefficient into {len(roots)} exact root(s)"])
        for x in roots:
            nxt = dict(prefix)
            if not x.is_zero():
                nxt[depth] = x
            sub = rec(nxt, depth + 1)
            sub.transcript = best.transcript + sub.transcript
            if sub.infinite or sub.value > best.value:
                best = sub
            elif sub.value == best.value and not sub.exact:
                best.exact = False
            if best.infinite:
                return best
        if not complete:
            best.exact = False
            best.transcript.append(
                "cancellation system has non-Gaussian-rational roots; "
                "claim degraded to a lower bound")
        if best.value == mstar:
            # Exhibit a tail coefficient that leaves the t^mstar term alive.
            for cand in _WITNESS_TRIALS:
                if any(not _eval_univariate(phi, cand).is_zero() for phi in conditions):
                    nxt = dict(prefix)
                    if not cand.is_zero():
                        nxt[depth] = cand
                    best.witness = (0, nxt)
                    break
        return best

    return rec({}, 1)


_WITNESS_TRIALS = tuple(
    GaussianRational(Fraction(a), Fraction(b))
    for a, b in ((0, 0), (1, 0), (-1, 0), (2, 0), (-2, 0), (0, 1), (0, -1), (3, 0))
)


def _eval_univariate(phi: dict[int, GaussianRational], x: GaussianRational) -> GaussianRational:
    total = ZERO
    for e, c in phi.items():
        total = total + c * x**e
    return total


def _regular_contact_ideal(
    fs: list[CPolynomial], cap: int
) -> tuple[_IdealContact, CurveJet | None]:
    """Max over regular curves of the min order of vanishing of the pullbacks
    of the holomorphic generators; two variables, complete up to the cap."""
    nonzero = [f for f in fs if not f.is_zero()]
    if not nonzero:
        witness = CurveJet.monomial(fs[0].nvars if fs else 1, [1], [ONE])
        return _IdealContact(cap, True, None, infinite=True,
                             transcript=["ideal is zero"]), witness
    d = nonzero[0].nvars
    if d == 1:
        orders = [f.order_of_vanishing().value for f in nonzero]
        t = min(orders)
        witness = CurveJet.monomial(1, [1], [ONE])
        return _IdealContact(t, True, None,
                             transcript=["single variable: order is parametrization-"
                                         "invariant"]), witness
    if d != 2:
        raise ValueError("exact jet-extension contact is implemented for <= 2 variables")
    best: _IdealContact | None = None
    best_pivot = 0
    for pivot in (0, 1):
        biv = [_bivariate(f, pivot) for f in nonzero]
        res = _ideal_contact_pivot(biv, cap)
        res.transcript = [f"pivot variable z{pivot + 1} = t"] + res.transcript
        if best is None or res.infinite or res.value > best.value or (
            res.value == best.value and res.exact and not best.exact
        ):
            if best is not None and not best.exact and res.value <= best.value:
                res.exact = res.exact and best.exact is not False or res.exact
            best, best_pivot = res, pivot
        if best.infinite:
            break
        if not res.exact and res.value >= best.value:
            best.exact = False
    witness = None
    if best.witness is not None:
        _p, tail = best.witness
        comps: list[dict[int, GaussianRational]] = [dict() for _ in range(2)]
        comps[best_pivot][1] = ONE
        for deg, c in tail.items():
            comps[1 - best_pivot][deg] = c
        witness = CurveJet.from_coeffs(comps)
    return best, witness


# ---------------------------------------------------------------------------
# Regular type


def _hermitian_quadratic_definite(g: CPolynomial) -> bool:
    """Exact test: the degree-2 Hermitian part has no null direction."""
    from .germ import _psd_decompose

    n = g.nvars
    def unit(i):
        return tuple(1 if j == i else 0 for j in range(n))

    H = [[g.coeff((unit(i), unit(j))) for j in range(n)] for i in range(n)]
    mon = [unit(i) for i in range(n)]
    for M in (H, [[-e for e in row] for row in H]):
        status, data = _psd_decompose(mon, M)
        if status == "psd" and len(data) == n:
            return True
    return False


def reg_type(gf: GraphForm, N: int, budget: SearchBudget | None = None) -> TypeClaim:
    """Max order of contact of regular curves in the z_n = 0 frame, capped at N.

    Exact values pair an exhibited curve (re-verified by pullback) with a
    jet-extension obstruction transcript; otherwise the best exhibited lower
    bound is returned.
    """
    if gf.pure_order_bound < N:
        raise ValueError("graph form was not normalized far enough for this cap")
    g = gf.g
    if g.is_zero():
        witness = CurveJet.monomial(g.nvars, [1] + [0] * (g.nvars - 1), [ONE] * g.nvars)
        return TypeClaim("infinite", witness=witness,
                         transcript=("g vanishes identically; every curve has "
                                     "infinite contact",))
    if _hermitian_quadratic_definite(g):
        witness = _first_order2_witness(g)
        return TypeClaim("exact", 2, witness,
                         transcript=("degree-2 Hermitian form is definite: every "
                                     "regular direction meets order exactly 2",))
    gram = gram_certificate(g)
    if gram.verdict == "certified" and g.nvars <= 2:
        fs = [f for _w, f in gram.squares]
        cap_t = max(2, N)
        res, witness = _regular_contact_ideal(fs, cap_t)
        if res.infinite:
            _verify_zero_pullback(g, witness)
            return TypeClaim("infinite", witness=witness,
                             transcript=tuple(res.transcript))
        value = 2 * res.value
        if witness is not None:
            _verify_contact(g, witness, value if res.exact else None, at_least=value)
        kind = "exact" if res.exact and res.value < cap_t else "at_least"
        return TypeClaim(kind, value, witness, exact_backed=res.exact,
                         transcript=tuple(
                             ["sum-of-squares route: contact of the holomorphic "
                              "generator ideal, doubled"] + res.transcript))
    # Indefinite or high-dimensional: bounded lower-bound search only.
    budget = budget or SearchBudget(max_degree=max(4, N), random_trials=200)
    best_val, best_witness = 2, None
    for z in _regular_candidates(g.nvars, budget):
        u = pullback(g, z)
        order = u.order_of_vanishing()
        if order.kind == "zero":
            return TypeClaim("infinite", witness=z,
                             transcript=("search found a regular curve with "
                                         "identically zero pullback",))
        if order.kind == "exact" and order.value > best_val:
            best_val, best_witness = order.value, z
    return TypeClaim("at_least", best_val, best_witness, exact_backed=best_witness is not None,
                     transcript=("bounded regular-curve search; no obstruction "
                                 "transcript, so only a lower bound is claimed",))


def _regular_candidates(nvars: int, budget: SearchBudget):
    for z in monomial_curves(nvars, budget.max_degree):
        if z.multiplicity() == 1:
            yield z
    for z in cancellation_scan_curves(nvars, budget.max_degree, budget.coeff_height):
        if z.multiplicity() == 1:
            yield z
    for z in random_curves(nvars, budget):
        if z.multiplicity() == 1:
            yield z


def _first_order2_witness(g: CPolynomial) -> CurveJet:
    n = g.nvars
    for i in range(n):
        exps = [0] * n
        exps[i] = 1
        coeffs = [ZERO] * n
        coeffs[i] = ONE
        z = CurveJet.monomial(n, exps, coeffs)
        order = pullback(g, z).order_of_vanishing()
        if order.kind == "exact" and order.value == 2:
            return z
    raise VerificationFailedError("definite quadratic part but no order-2 direction")


def _verify_contact(g, z, exact_value, at_least):
    order = pullback(g, z).order_of_vanishing()
    if order.kind != "exact" or order.value < at_least or (
        exact_value is not None and order.value != exact_value
    ):
        raise VerificationFailedError(
            f"witness pullback order {order} does not support the claim"
        )


def _verify_zero_pullback(g, z):
    if not pullback(g, z).is_zero():
        raise VerificationFailedError("infinite-contact witness has nonzero pullback")


# ---------------------------------------------------------------------------
# Singular type search


@dataclass(frozen=True)
class SingSearchResult:
    """Best contact ratio found by a bounded singular-curve search."""

    kind: str  # "infinite" | "lower_bound"
    ratio: Fraction | None
    witness: CurveJet | None
    pullback_order: Order | None
    candidates_tested: int
    budget: SearchBudget

    @property
    def claim(self) -> TypeClaim:
        if self.kind == "infinite":
            return TypeClaim("infinite", witness=self.witness,
                             transcript=("pullback vanishes identically",))
        return TypeClaim("at_least", self.ratio, self.witness,
                         transcript=("bounded singular search",))


def sing_type_search(gf: GraphForm, budget: SearchBudget) -> SingSearchResult:
    """Enumerate singular candidates in the z_n = 0 frame and keep the best
    exact ratio; an identically zero exact pullback certifies infinite type."""
    g = gf.g
    best_ratio: Fraction | None = None
    best_witness: CurveJet | None = None
    best_order: Order | None = None
    tested = 0

    def consider(z: CurveJet):
        nonlocal best_ratio, best_witness, best_order, tested
        tested += 1
        u = pullback(g, z)
        order = u.order_of_vanishing()
        if order.kind == "zero":
            return SingSearchResult("infinite", None, z, order, tested, budget)
        if order.kind == "exact":
            ratio = Fraction(order.value, z.multiplicity())
            if best_ratio is None or ratio > best_ratio:
                best_ratio, best_witness, best_order = ratio, z, order
        return None

    for gen in (
        monomial_curves(g.nvars, budget.max_degree),
        cancellation_scan_curves(g.nvars, budget.max_degree, budget.coeff_height),
        random_curves(g.nvars, budget),
    ):
        for z in gen:
            if z.multiplicity() > budget.max_multiplicity:
                continue
            hit = consider(z)
            if hit is not None:
                return hit
    return SingSearchResult("lower_bound", best_ratio, best_witness, best_order,
                            tested, budget)


# ---------------------------------------------------------------------------
# Desingularization


@dataclass(frozen=True)
class DesingularizationResult:
    eta: CurveJet
    transcript: dict


def desingularize(gf: GraphForm, z: CurveJet) -> DesingularizationResult:
    """From a multiplicity-m curve with exact contact 4m along which the
    positivity test passes, construct a regular curve with contact exactly 4.

    eta(t) = A t + B t^2 where A and B are the t^m and t^(2m) Taylor
    coefficient vectors of z.  The construction is verified by exact
    pullback before anything is returned; the transcript records the
    coefficient-transfer identity between the (2,2) coefficient of the new
    pullback and the (2m,2m) coefficient of the old one.
    """
    g = gf.g
    n = g.nvars
    if z.nvars == n + 1:
        if not z.components[n].is_zero():
            raise CurveFrameError(
                "desingularization operates in the graph frame: the last "
                "coordinate of the curve must be identically zero"
            )
        z = CurveJet(z.components[:n])
    if z.nvars != n:
        raise CurveFrameError(f"curve has {z.nvars} components, expected {n}")
    m = z.multiplicity()
    if m < 2:
        raise ContactNotFourMError("input curve must be singular (multiplicity >= 2)")
    u = pullback(g, z)
    order = u.order_of_vanishing()
    if order.kind != "exact" or order.value != 4 * m:
        raise ContactNotFourMError(
            f"curve has multiplicity {m} but pullback order {order}, need exactly {4 * m}"
        )
    ps = ps_test_single(g, z)
    if ps.status != "pass":
        raise PSViolationError(
            f"positivity test along the curve returned {ps.status}"
        )
    A = z.coefficient_vector(m)
    B = z.coefficient_vector(2 * m)
    eta = CurveJet.from_coeffs([
        {1: A[i], 2: B[i]} for i in range(n)
    ])
    if eta.multiplicity() != 1:
        raise VerificationFailedError("constructed curve is not regular")
    v = pullback(g, eta)
    vorder = v.order_of_vanishing()
    if vorder.kind != "exact" or vorder.value != 4:
        raise VerificationFailedError(
            f"constructed curve has pullback order {vorder}, expected exactly 4"
        )
    transferred = v.coeff(((2,), (2,)))
    source = u.coeff(((2 * m,), (2 * m,)))
    if transferred != source:
        raise VerificationFailedError(
            "coefficient-transfer identity failed: "
            f"{transferred} != {source}"
        )
    transcript = {
        "multiplicity": m,
        "contact": 4 * m,
        "leading_coefficients": A,
        "second_coefficients": B,
        "transferred_coefficient": transferred,
        "new_pullback_order": 4,
    }
    return DesingularizationResult(eta, transcript)


# ---------------------------------------------------------------------------
# Inference


@dataclass(frozen=True)
class Evidence:
    reg: TypeClaim | None = None
    sing: SingSearchResult | None = None
    ps: PSCertificate | StabilizationReport | None = None
    assume_ps_from_search: bool = False


@dataclass(frozen=True)
class TypeReport:
    reg_type: TypeClaim | None
    sing_type: TypeClaim
    trail: tuple[str, ...]
    notes: tuple[str, ...] = ()


def _ps_is_certified(r: DefiningFunction | None, ev: Evidence) -> tuple[bool, str | None]:
    ps = ev.ps
    if ps is None:
        return False, None
    if isinstance(ps, PSCertificate):
        if ps.verdict == "certified":
            return True, "structural sum-of-squares certificate"
        if ps.verdict == "no_violation_up_to_bounds" and ev.assume_ps_from_search:
            return True, ("ASSUMED from a bounded search at the user's explicit "
                          "request; not a proof")
        return False, None
    if isinstance(ps, StabilizationReport):
        if ps.k0 is None:
            return False, None
        tail = [e for e in ps.entries if e.k >= ps.k0]
        tail_certified = all(e.certificate.verdict == "certified" for e in tail)
        if not tail_certified:
            if ev.assume_ps_from_search:
                return True, ("ASSUMED from bounded per-order searches at the "
                              "user's explicit request; not a proof")
            return False, None
        # For a polynomial r the truncations repeat once k reaches deg r, so
        # structural certificates from k0 through k_max >= deg r cover every
        # higher order too.
        if r is not None and ps.k_max >= r.r.total_degree():
            return True, ("structural certificates from the stabilization "
                          "order through the degree of r; higher truncations "
                          "repeat the last")
        if ev.assume_ps_from_search:
            return True, ("certified through k_max only; extension beyond "
                          "ASSUMED at the user's explicit request")
        return False, None
    return False, None


def infer_type(r: DefiningFunction | None, evidence: Evidence) -> TypeReport:
    """Combine search results, certificates, and the multiplicity-reduction
    theorem into a singular-type claim with a named inference trail."""
    trail: list[str] = []
    notes: list[str] = []
    sing: TypeClaim | None = None
    reg = evidence.reg

    sing_infinite: TypeClaim | None = None
    sing_lower: TypeClaim | None = None
    if evidence.sing is not None:
        sc = evidence.sing.claim
        if sc.kind == "infinite":
            sing_infinite = sc
        elif sc.value is not None:
            sing_lower = sc

    # Rules (ii)/(iii) force a finite exact value when applicable; decide
    # that first so contradictions with exhibited curves are surfaced.
    forced: TypeClaim | None = None
    forced_rule = None
    if reg is not None and reg.kind == "exact" and reg.value in (2, 3):
        forced = TypeClaim("exact", Fraction(reg.value), reg.witness,
                           transcript=(f"regular type {reg.value} forces equal "
                                       "singular type",))
        forced_rule = (f"rule (ii): regular type {reg.value} implies singular "
                       f"type {reg.value} (no positivity hypothesis needed)")
        if reg.value == 3:
            notes.append("the regular-type-3 implication is asserted in the "
                         "literature without a written proof; flagged here")
    elif reg is not None and reg.kind == "exact" and reg.value == 4:
        certified, how = _ps_is_certified(r, evidence)
        if certified:
            forced = TypeClaim("exact", Fraction(4), reg.witness,
                               transcript=("multiplicity-reduction theorem",))
            forced_rule = ("rule (iii): regular type 4 plus certified "
                           "positivity implies singular type 4")
            if how:
                notes.append(f"positivity evidence: {how}")
        else:
            trail.append("rule (iii) not applied: positivity is not certified "
                         "(bounded-search evidence requires an explicit "
                         "assumption flag)")

    if forced is not None:
        if sing_infinite is not None:
            raise ContradictoryEvidenceError(
                f"exact singular type {forced.value} contradicts an exhibited "
                "curve with identically zero pullback"
            )
        if sing_lower is not None and sing_lower.value > forced.value:
            raise ContradictoryEvidenceError(
                f"exact singular type {forced.value} contradicts an exhibited "
                f"curve with ratio {sing_lower.value}"
            )

    if sing_infinite is not None:
        trail.append("rule (i): exhibited singular curve with identically "
                     "zero pullback dominates everything")
        sing = sing_infinite
    elif forced is not None:
        if sing_lower is not None:
            trail.append(f"rule (i): exhibited singular curve gives a lower "
                         f"bound of {sing_lower.value}")
        trail.append(forced_rule)
        sing = forced
    elif sing_lower is not None:
        trail.append(f"rule (i): exhibited singular curve gives a lower "
                     f"bound of {sing_lower.value}")

    if sing is None:
        candidates = [c for c in (sing_lower,) if c is not None]
        if reg is not None and reg.value is not None:
            candidates.append(TypeClaim("at_least", Fraction(reg.value), reg.witness))
        if candidates:
            sing = max(candidates, key=lambda c: c.lower_bound())
            trail.append("rule (iv): singular type left as the best exhibited "
                         "lower bound")
        else:
            sing = TypeClaim("at_least", Fraction(2))
            trail.append("rule (iv): no evidence; trivial lower bound")

    if reg is not None and sing.kind == "exact" and reg.kind == "exact":
        if Fraction(sing.value) < Fraction(reg.value):
            raise ContradictoryEvidenceError(
                "singular type claim is below the regular type claim"
            )
    return TypeReport(reg, sing, tuple(trail), tuple(notes))
