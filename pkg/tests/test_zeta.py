"""Tests for the rational-function engine: zeta-factor products, the
bookkeeping-ring shift operators, the finite summation family against the
frozen closed form, the local-integral cases, weight coefficients, and the
truncated series checks."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from e8g2 import zeta as z
from e8g2.symra import LaurentPoly, RatFunc
from e8g2.weyl import WORD_INTERTWINER
from e8g2.zeta import XQ, SingularShift, XPoly

OM = z._om
MONO = z._mono


def rf(num, den=None):
    return RatFunc(num, den or {})


# -- zeta-factor products ---------------------------------------------------


class TestZetaProducts:
    def test_parabolic_product_multisets(self):
        prod = z.gk_product(z.parabolic_context(), "parabolic")
        assert prod.num_keys() == sorted(z.Z1_NUM_KEYS + z.Z2_NUM_KEYS)
        assert prod.den_keys() == list(z.N_KEYS)

    def test_parabolic_root_count(self):
        ctx = z.parabolic_context()
        assert sum(1 for a in ctx.rs.positive if a[1] > 0) == 92

    def test_intertwiner_word_product(self):
        prod = z.gk_product(z.intertwiner_context(), "weyl_word", WORD_INTERTWINER)
        assert prod.num_keys() == sorted(z.INTERTWINER_NUM_KEYS)
        assert prod.den_keys() == sorted(z.INTERTWINER_DEN_KEYS)

    def test_identity_word_gives_unit(self):
        prod = z.gk_product(z.intertwiner_context(), "weyl_word", "")
        assert not prod.num and not prod.den
        assert prod.value().equals(RatFunc.one(XQ))

    def test_character_labels(self):
        prod = z.gk_product(z.parabolic_context(chi_order=3), "parabolic")
        labels = prod.labeled("num")
        assert all(lab == k % 3 for k, _, lab in labels)
        assert (3, 29, 0) in labels

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            z.gk_product(z.parabolic_context(), "sideways")

    def test_malformed_forms_rejected(self):
        rs = z.parabolic_context().rs
        with pytest.raises(ValueError):
            z.GKContext(rs, 2, ((1, 0),) * 7)
        with pytest.raises(ValueError):
            z.GKContext(rs, 2, (((1,),) + ((0, 0),) * 7))

    def test_normalizing_factor_is_parabolic_denominator(self):
        prod = z.gk_product(z.parabolic_context(), "parabolic")
        assert z.named("N").value.equals(
            RatFunc(LaurentPoly.const(XQ, 1),
                    {k: 1 for k in prod.den_keys()}, reduce=False))


# -- named family ---------------------------------------------------


class TestNamedFamily:
    @pytest.mark.parametrize("ident,kw", [
        ("Z", {}), ("z0", {}), ("N", {}), ("Z1", {}), ("Z2", {}),
        ("I0", dict(n=2, m=1)), ("I0", dict(n=0, m=0)),
        ("J0c", {}), ("J1c", {}), ("J2c", {}),
        ("cJ21", {}), ("cJ22", {}), ("cJ0", {}),
    ])
    def test_self_checks(self, ident, kw):
        assert z.named(ident, **kw).self_check()

    def test_correction_polynomial_factors(self):
        expected = LaurentPoly.const(XQ, 1)
        for k, j in ((1, 0), (1, 2), (1, 3), (1, 4), (2, 10), (2, 12)):
            expected = expected * OM(x=k, q=j)
        assert z.named("Z").value == expected

    def test_boundary_product_factors(self):
        expected = LaurentPoly.const(XQ, 1)
        for k, j in ((1, 5), (1, 6), (1, 7), (1, 8), (2, 14), (3, 21)):
            expected = expected * OM(x=k, q=j)
        assert z.named("z0").value == expected

    def test_kernel_polynomial_expanded_display(self):
        for n, m in ((0, 0), (1, 0), (0, 1), (2, 1), (3, 2)):
            assert z.named("I0", n=n, m=m).value == z._i0_expanded(n, m)

    def test_kernel_tau_decomposition(self):
        for n, m in ((0, 0), (2, 1), (1, 3)):
            rebuilt = (z.named("J0c").value
                       - z.named("J1c").value * MONO(1, x=m, q=8 * m)
                       - z.named("J2c").value * MONO(1, x=n + m, q=7 * n + 8 * m))
            assert z.named("I0", n=n, m=m).value == rebuilt

    def test_normalizing_factor_identity(self):
        lhs = (z.named("N").value
               * rf(z.named("Z").value * z.named("z0").value * OM(x=2, q=16)))
        assert lhs.equals(rf(OM(x=1, q=7) * OM(x=1, q=8)))

    def test_correction_times_normalizer(self):
        lhs = z.named("N").value * rf(z.named("Z").value)
        den = LaurentPoly.const(XQ, 1)
        for k, j in ((1, 5), (1, 6), (2, 14), (2, 16), (3, 21)):
            den = den * OM(x=k, q=j)
        assert (lhs * rf(den)).equals(RatFunc.one(XQ))

    def test_unknown_identifier_rejected(self):
        with pytest.raises(ValueError):
            z.named("W")

    def test_negative_valuation_rejected(self):
        with pytest.raises(ValueError):
            z.named("I0", n=-1, m=0)

    def test_partial_substitution_rejected(self):
        with pytest.raises(ValueError):
            z.named("cJ21", B=1)

    def test_substituted_bookkeeping_elements(self):
        ratio = RatFunc(OM(x=1, q=7) ** 2 * OM(x=2, q=13), {(1, 6): 1})
        for B, C in ((0, 0), (1, 2), (2, 3)):
            got = z.named("cJ21", B=B, C=C).value
            assert got.equals(z.j_case2(B, C) * ratio), (B, C)
        for B, C, E in ((0, 2, 1), (1, 3, 0), (2, 4, 2)):
            got = z.named("cJ22", B=B, C=C, E=E).value
            assert got.equals(z.j_case2(B, C, E) * ratio), (B, C, E)


# -- torus points ---------------------------------------------------


class TestTauPoints:
    def test_remark_check_passes(self):
        rep = z.verify_tau_remark()
        assert rep.status == "pass"
        assert rep.computed["roots_with_value_q"]["tau0"] == ["2,-1"]

    def test_twists_by_kernel_term_monomials(self):
        t0, t1, t2 = z.TAU_POINTS
        assert t1.omega1 == t0.omega1
        assert t1.omega2 == (t0.omega2[0] + 1, t0.omega2[1] + 8)
        assert t2.omega1 == (t0.omega1[0] + 1, t0.omega1[1] + 7)
        assert t2.omega2 == (t0.omega2[0] + 1, t0.omega2[1] + 8)

    def test_weight_monomial_exponents(self):
        t0 = z.TAU_POINTS[0]
        assert t0.weight_exponents((1, 0)) == (1, 8)
        assert t0.weight_exponents((0, 1)) == (2, 15)
        assert t0.weight_exponents((2, 1)) == (4, 31)

    def test_double_rho_pairing(self):
        for n in range(5):
            for m in range(5):
                assert z._pairing_with_double_rho((n, m)) == 6 * n + 10 * m


# -- finite summation family vs frozen closed form --------------------------


class TestSummationFamily:
    def test_base_value_frozen(self):
        assert z.j_oracle(0, 0).equals(rf(OM(x=1, q=6) * OM(x=1, q=6)))

    def test_oracle_matches_closed_form_grid(self):
        frozen = z.named("cJ0").value
        for B in range(6):
            for C in range(B, 6):
                assert z.j_oracle(B, C).equals(frozen.substitute(B, C)), (B, C)

    def test_negative_parameters_give_zero(self):
        assert z.j_oracle(-1, 3).is_zero()
        assert z.j_oracle(-2, -1).is_zero()
        assert z.j_case2(-1, 0).is_zero()
        assert z.j_case4(-1).is_zero()
        assert z.j_case4(2, -1).is_zero()

    def test_reversed_parameters_rejected(self):
        with pytest.raises(ValueError):
            z.j_oracle(3, 1)

    def test_third_parameter_branches(self):
        assert z.j_case4(2, 5).equals(z.j_case4(2))
        assert z.j_case4(2, 2).equals(z.j_case4(2))
        assert not z.j_case4(2, 1).equals(z.j_case4(2))


# -- shift operators ---------------------------------------------------

# exponent keys on which every operator is nonsingular
SAFE_KEYS = (
    (0, 0, 0, 0, 0, 0), (1, 7, 0, 0, 0, 0), (0, 0, 1, 7, 0, 0),
    (1, 7, 1, 7, 0, 0), (0, 0, 2, 13, 0, 0),
)


class TestShiftOperators:
    def test_first_operator_on_unit(self):
        got = z.t_operators("T1", XPoly({(0,) * 6: 1}))
        want = XPoly({
            (0, 0, 0, 0, 0, 0): RatFunc(MONO(1, x=1, q=8), {(1, 8): 1}),
            (1, 8, 0, 0, 0, 0): RatFunc(LaurentPoly.const(XQ, -1), {(1, 8): 1}),
        })
        assert got == want

    def test_second_operator_on_binomial(self):
        got = z.t_operators("T2", XPoly({(0,) * 6: 1, (1, 7, 0, 0, 0, 0): -1}))
        want = XPoly({
            (0, 0, 0, 0, 0, 0): RatFunc(MONO(1, x=2, q=13), {(2, 13): 1}),
            (1, 7, 0, 0, 0, 0): RatFunc(MONO(-1, x=1, q=6), {(1, 6): 1}),
            (2, 13, 0, 0, 0, 0): RatFunc(MONO(1, x=1, q=6) * OM(x=1, q=7),
                                         {(1, 6): 1, (2, 13): 1}),
        })
        assert got == want

    @pytest.mark.parametrize("which", ["T0", "T1", "T2", "T3", "T4"])
    @settings(max_examples=20, deadline=None)
    @given(data=st.data())
    def test_linearity(self, which, data):
        coeffs = st.integers(min_value=-3, max_value=3)
        pick = st.lists(st.sampled_from(SAFE_KEYS), min_size=1, max_size=3,
                        unique=True)
        f = XPoly({k: data.draw(coeffs) for k in data.draw(pick)})
        g = XPoly({k: data.draw(coeffs) for k in data.draw(pick)})
        assert z.t_operators(which, f + g) == (
            z.t_operators(which, f) + z.t_operators(which, g))

    def test_singular_monomial_named_in_error(self):
        with pytest.raises(SingularShift, match=r"T1.*\(0, 1, 1, 7, 0, 0\)"):
            z.t_operators("T1", XPoly({(0, 1, 1, 7, 0, 0): 1}))
        with pytest.raises(SingularShift, match="T2"):
            z.t_operators("T2", XPoly({(2, 13, 0, 0, 0, 0): 1}))

    def test_unknown_operator_rejected(self):
        with pytest.raises(ValueError):
            z.t_operators("T9", XPoly({(0,) * 6: 1}))


# -- operator assembly of the closed form -----------------------------------


class TestAssembly:
    def test_assembly_matches_frozen_closed_form(self):
        assert z.assemble_cj0() == z._frozen_cj0()

    def test_six_term_operand_variant_differs(self):
        variant = z.assemble_cj0(z._cj21())
        assert not variant.substitute(1, 2).equals(z._frozen_cj0().substitute(1, 2))

    def test_boundary_weight_application_matches_frozen(self):
        assert z.t_operators("T0", z._frozen_cj0()) == z._frozen_t0_cj0()

    def test_rejected_middle_term_variant_differs(self):
        pref = RatFunc(OM(x=1, q=6) * OM(x=2, q=12), {(1, 7): 1, (1, 8): 1})
        variant = XPoly({
            (0, 0, 0, 0, 0, 0): pref * (OM(x=1, q=6) * OM(x=3, q=21)),
            (0, 0, 1, 7, 0, 0): pref * (-1 * OM(x=1, q=6) * OM(x=1, q=8)),
            (0, 1, 1, 7, 0, 0): pref * (-1 * MONO(1, q=-1) * OM(x=1, q=5) * OM(x=1, q=8)),
        })
        assert z.t_operators("T0", z._frozen_cj0()) != variant


# -- closed form of the local integral --------------------------------------


def direct_integral(n, m):
    return RatFunc(z.named("Z").value * z.named("I0", n=n, m=m).value,
                   {(1, 7): 1, (1, 8): 1})


class TestClosedIntegral:
    def test_both_unit_case(self):
        assert z.closed_I(0, 0, "both-unit").equals(direct_integral(0, 0))

    @pytest.mark.parametrize("n", range(7))
    def test_t2_unit_case(self, n):
        assert z.closed_I(n, 0, "t2-unit").equals(direct_integral(n, 0))

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_t2_nonunit_case(self, m):
        for n in range(4):
            assert z.closed_I(n, m, "t2-nonunit").equals(direct_integral(n, m)), n

    def test_case_domains_meet_at_origin(self):
        assert z.closed_I(0, 0, "t2-unit").equals(z.closed_I(0, 0, "both-unit"))

    def test_three_term_shift_route(self):
        # dual route for the nonunit case: guarded substitutions of the
        # closed form combined with the boundary-weight shift coefficients
        frozen = z.named("cJ0").value

        def guarded(B, C):
            if B < 0 or C < 0:
                return rf(LaurentPoly.zero(XQ))
            return frozen.substitute(B, C)

        p0 = RatFunc(z.named("Z").value, {(1, 6): 1, (1, 7): 1, (2, 12): 1})
        for m in (1, 2, 3):
            for n in (0, 1, 2):
                combo = (guarded(m, n + m) * rf(OM(x=1, q=7))
                         - guarded(m - 1, n + m - 1)
                         * rf(MONO(1, x=2, q=14) * OM(x=2, q=14))
                         + guarded(m - 2, n + m - 2)
                         * rf(MONO(1, x=5, q=35) * OM(x=1, q=7)))
                assert (p0 * combo).equals(direct_integral(n, m)), (n, m)

    def test_reduced_form_simplification_display(self):
        pref = RatFunc(OM(x=1, q=6), {(1, 7): 1, (2, 13): 1})
        for n in range(6):
            x34 = MONO(1, x=n + 1, q=7 * n + 7)
            bracket = (OM(x=1, q=6) * OM(x=2, q=12) * OM(x=4, q=26)
                       - OM(x=1, q=5) * OM(x=2, q=13) * OM(x=2, q=12) * x34)
            combo = z._reduced_j0(n) - z._reduced_j0(n - 2) * MONO(1, x=4, q=26)
            assert combo.equals(pref * bracket), n

    def test_reduced_form_vanishes_where_guard_would(self):
        assert z._reduced_j0(-1).is_zero()

    def test_one_row_kernel_factorization(self):
        one = LaurentPoly.const(XQ, 1)
        for n in range(11):
            want = OM(x=1, q=8) * (OM(x=1, q=6) * (one + MONO(1, x=2, q=13))
                                   - OM(x=1, q=5) * MONO(1, x=n + 1, q=7 * n + 7))
            assert z.named("I0", n=n, m=0).value == want

    def test_invalid_case_tag_rejected(self):
        with pytest.raises(ValueError, match="case tag"):
            z.closed_I(0, 0, "mixed")

    def test_case_domain_mismatches_rejected(self):
        with pytest.raises(ValueError):
            z.closed_I(1, 0, "both-unit")
        with pytest.raises(ValueError):
            z.closed_I(0, 1, "t2-unit")
        with pytest.raises(ValueError):
            z.closed_I(2, 0, "t2-nonunit")
        with pytest.raises(ValueError):
            z.closed_I(-1, 1, "t2-nonunit")


# -- weight coefficients ---------------------------------------------------


class TestWeightCoefficients:
    def test_identity_pair_is_full_mass(self):
        assert z.p_coefficient((0, 0), (0, 0)) == z._QHAT

    def test_regular_pair_leading_term(self):
        p = z.p_coefficient((1, 0), (1, 0))
        assert p.coefficient_of("q", 0) == LaurentPoly.const((), 1)

    def test_support_inside_shifted_subset_sums(self):
        sums, _ = z._subset_table()
        offsets = {(s.n, s.m) for s in sums}
        lam = (1, 1)
        for dn in range(-2, 7):
            for dm in range(-2, 7):
                w = (lam[0] + dn, lam[1] + dm)
                if w[0] < 0 or w[1] < 0:
                    continue
                if not z.p_coefficient(w, lam).is_zero():
                    assert (dn, dm) in offsets, w

    def test_far_weight_gives_zero(self):
        assert z.p_coefficient((5, 5), (0, 0)).is_zero()

    def test_non_dominant_rejected(self):
        with pytest.raises(ValueError):
            z.p_coefficient((-1, 0), (0, 0))

    def test_mass_clearing_is_exact(self):
        one_q = LaurentPoly.const(("q",), 1)
        assert z._q_clear((1, 1)) == z._QHAT
        assert z._q_clear((0, 0)) == one_q
        edge = z._q_clear((1, 0))
        assert edge * LaurentPoly(("q",), {(0,): 1, (-1,): 1}) == z._QHAT
        assert z._q_clear((0, 3)) == edge


# -- truncated series checks ---------------------------------------------------


class TestSeriesChecks:
    def test_main_identity_series_small(self):
        rep = z.verify_check3(4)
        assert rep.status == "pass"
        assert rep.truncation == 4

    def test_main_identity_finite_cases_small(self):
        rep = z.verify_sum_cases(3, 2)
        assert rep.status == "pass"
        assert rep.computed["failures"] == []

    def test_end_to_end_small(self):
        rep = z.end_to_end(3)
        assert rep.status == "pass"
        assert rep.computed == {"identity": True, "negative_control_differs": True}
        assert rep.truncation == 3

    def test_degree_must_be_positive(self):
        with pytest.raises(ValueError):
            z.verify_check3(0)
        with pytest.raises(ValueError):
            z.end_to_end(-1)

    def test_report_field_order(self):
        rep = z.verify_tau_remark()
        assert list(rep.to_json_dict()) == list(z.REPORT_FIELDS)

    def test_pole_factor_report(self):
        rep = z.pole_factor_report(3)
        assert rep.status == "report-only"
        assert rep.computed["factors"] == [
            [1, 10, 1], [1, 11, 1], [1, 12, 1], [1, 13, 1], [1, 14, 1],
            [1, 16, 1], [2, 17, 2], [2, 19, 2], [2, 21, 2], [2, 23, 2],
            [3, 29, 0]]
