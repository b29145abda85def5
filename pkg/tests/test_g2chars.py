import json

import pytest
from hypothesis import given, settings, strategies as st

from e8g2.g2chars import (
    ALT_RHO,
    POSITIVE_ROOTS,
    Q_CONSTANTS,
    RHO,
    SHORT_POSITIVE_ROOTS,
    V7_WEIGHTS,
    WEYL_GROUP,
    Weight,
    alt_sum,
    char_to_json,
    decompose,
    dimension,
    s0_and_p,
    spherical,
    sym_series,
    twist,
    weyl_character,
    weyl_dimension,
    weyl_images,
)
from e8g2.rootsys import G2_CARTAN, RootSystem
from e8g2.symra import LaurentPoly, RatFunc
from e8g2.weyl import enumerate_group

# independently derived signed orbit of rho (12 terms, the denominator)
ALT_RHO_TERMS = {
    (1, 1): 1, (-1, 2): -1, (4, -1): -1, (-4, 3): 1, (5, -2): 1,
    (-5, 3): -1, (5, -3): -1, (-5, 2): 1, (4, -3): 1, (-4, 1): -1,
    (1, -2): -1, (-1, -1): 1,
}

wt = st.tuples(st.integers(-6, 6), st.integers(-6, 6))


def test_group_size_and_signs():
    assert len(WEYL_GROUP) == 12
    for M, s in WEYL_GROUP:
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        assert s == det


def test_group_matches_root_coordinate_action():
    # the same 12 elements as the generic Weyl machinery, transported to
    # weight coordinates by the basis change w1 = 2a1 + a2, w2 = 3a1 + 2a2
    rs = RootSystem(G2_CARTAN)
    C = ((2, 3), (1, 2))       # weight coords -> root coords
    Ci = ((2, -3), (-1, 2))    # inverse (det C = 1)

    def conj(R):
        # Ci . R . C
        RC = tuple(
            tuple(sum(R[i][k] * C[k][j] for k in range(2)) for j in range(2))
            for i in range(2))
        return tuple(
            tuple(sum(Ci[i][k] * RC[k][j] for k in range(2)) for j in range(2))
            for i in range(2))

    got = set()
    for w in enumerate_group(rs):
        cols = [w.act(rs.simple[j]) for j in range(2)]
        R = ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))
        got.add(conj(R))
    assert got == {M for M, _ in WEYL_GROUP}


def test_positive_roots_consistent():
    # simple roots on weight coordinates are the Cartan columns
    assert POSITIVE_ROOTS[0] == (G2_CARTAN[0][0], G2_CARTAN[1][0])
    assert POSITIVE_ROOTS[1] == (G2_CARTAN[0][1], G2_CARTAN[1][1])
    # the rest are the sums alpha1+alpha2, 2a1+a2, 3a1+a2, 3a1+2a2
    a1, a2 = POSITIVE_ROOTS[0], POSITIVE_ROOTS[1]
    combos = [(1, 1), (2, 1), (3, 1), (3, 2)]
    rest = [Weight(x * a1.n + y * a2.n, x * a1.m + y * a2.m) for x, y in combos]
    assert list(POSITIVE_ROOTS[2:]) == rest
    assert sum(r.n for r in POSITIVE_ROOTS) == 2 * RHO.n
    assert sum(r.m for r in POSITIVE_ROOTS) == 2 * RHO.m


def test_alt_rho_frozen():
    assert ALT_RHO.coeffs == ALT_RHO_TERMS
    assert alt_sum(RHO).coeffs == ALT_RHO_TERMS


def test_alt_sum_on_wall_vanishes():
    # fixed by s1 (n = 0) or s2 (m = 0): antisymmetry kills the sum
    assert alt_sum((0, 3)).is_zero()
    assert alt_sum((2, 0)).is_zero()
    assert alt_sum((0, 0)).is_zero()


@settings(max_examples=40, deadline=None)
@given(wt)
def test_alt_sum_antisymmetry(w):
    base = alt_sum(w)
    for M, s in WEYL_GROUP:
        img = (M[0][0] * w[0] + M[0][1] * w[1], M[1][0] * w[0] + M[1][1] * w[1])
        assert alt_sum(img) == base * s


def test_weyl_character_basics():
    assert weyl_character((0, 0)).to_text() == "1"
    std = weyl_character((1, 0))
    assert dimension(std) == 7
    assert dimension(weyl_character((0, 1))) == 14
    # weights of the standard representation are V7
    assert set(std.coeffs) == {(w.n, w.m) for w in V7_WEIGHTS}
    assert all(c == 1 for c in std.coeffs.values())


def test_weyl_character_rejects_non_dominant():
    with pytest.raises(ValueError):
        weyl_character((-1, 0))
    with pytest.raises(ValueError):
        weyl_character((0, -2))


def test_dimensions_match_product_formula():
    for n in range(5):
        for m in range(5):
            assert dimension(weyl_character((n, m))) == weyl_dimension((n, m))


def test_characters_weyl_invariant():
    for lam in [(1, 0), (0, 1), (2, 1)]:
        ch = weyl_character(lam)
        for M, _ in WEYL_GROUP:
            assert twist(ch, M) == ch


def test_product_decomposition_nonnegative():
    small = [(n, m) for n in range(3) for m in range(3)]
    for lam in small:
        for mu in small:
            prod = weyl_character(lam) * weyl_character(mu)
            parts = decompose(prod)
            assert all(c > 0 for c in parts.values())
            total = sum(c * weyl_dimension(w) for w, c in parts.items())
            assert total == weyl_dimension(lam) * weyl_dimension(mu)
    # a classical one: V7 (x) V7 = 27 + 14 + 7 + 1
    parts = decompose(weyl_character((1, 0)) * weyl_character((1, 0)))
    assert parts == {Weight(2, 0): 1, Weight(0, 1): 1, Weight(1, 0): 1,
                     Weight(0, 0): 1}


def test_s0_and_p_frozen():
    sums, table = s0_and_p()
    assert len(sums) == 31
    assert set(table) == set(sums)
    # empty subset only
    assert table[Weight(0, 0)].to_text() == "1"
    # the full subset is the unique expression of 2 rho
    assert table[Weight(2, 2)].to_text() == "q^-6"
    # two expressions: the root (1,0) itself and (2,-1) + (-1,1)
    assert table[Weight(1, 0)].coeffs == {(-1,): -1, (-2,): 1}
    assert table[Weight(0, 1)].coeffs == {(-1,): -1, (-2,): 2, (-3,): -1}
    assert table[Weight(1, 1)].coeffs == {(-2,): 1, (-3,): -2, (-4,): 1}


def test_s0_reconstructs_product():
    # sum_nu P_nu tau^-nu == prod_alpha (1 - 1/q tau^-alpha), bit-identical
    vars = ("q", "a", "b")
    direct = LaurentPoly.const(vars, 1)
    for r in POSITIVE_ROOTS:
        factor = LaurentPoly.const(vars, 1) - LaurentPoly.monomial(
            vars, 1, q=-1, a=-r.n, b=-r.m)
        direct = direct * factor
    sums, table = s0_and_p()
    recon = LaurentPoly.zero(vars)
    for nu in sums:
        mono = LaurentPoly.monomial(vars, 1, a=-nu.n, b=-nu.m)
        recon = recon + table[nu].rename(vars) * mono
    assert recon == direct


def test_q_constants():
    assert Q_CONSTANTS.Q.coeffs == {
        (0,): 1, (-1,): 2, (-2,): 2, (-3,): 2, (-4,): 2, (-5,): 2, (-6,): 1}
    # (1 - 1/q^2)(1 - 1/q^6) == Q (1 - 1/q)^2
    q = ("q",)
    u = lambda k: LaurentPoly(q, {(0,): 1, (-k,): -1})
    assert u(2) * u(6) == Q_CONSTANTS.Q * u(1) * u(1)
    assert Q_CONSTANTS.select((0, 0)) == Q_CONSTANTS.Q
    edge = LaurentPoly(q, {(0,): 1, (-1,): 1})
    assert Q_CONSTANTS.select((3, 0)) == edge
    assert Q_CONSTANTS.select((0, 1)) == edge
    assert Q_CONSTANTS.select((2, 5)).to_text() == "1"


def test_spherical_normalization():
    assert spherical((0, 0)).equals(1)


def test_spherical_rejects_non_dominant():
    with pytest.raises(ValueError):
        spherical((-1, 2))


def test_spherical_leading_term():
    # Q * omega(n, m) has the full character chi_(n,m) as its coefficient
    # at q^{-3n-5m}: this pins which valuation pairs with which weight
    for n, m in [(1, 0), (0, 1), (1, 1)]:
        val = spherical((n, m))
        qomega = val * RatFunc.from_poly(Q_CONSTANTS.Q.rename(("q", "a", "b")))
        assert qomega.den == {}, "Q * omega should clear the denominator"
        lead = qomega.num.coefficient_of("q", -(3 * n + 5 * m))
        assert lead == weyl_character((n, m))


def test_spherical_weyl_invariant():
    val = spherical((1, 0))
    for M, _ in WEYL_GROUP:
        assert twist(val.num, M) == val.num


def test_sym_series_brion():
    chis, syms = sym_series(8)
    assert syms[0].to_text() == "1" and chis[0].to_text() == "1"
    assert dimension(syms[1]) == 7
    # Sym^2 V7 = chi_(2,0) + chi_(0,0)
    assert syms[2] == chis[2] + weyl_character((0, 0))
    for r in range(9):
        lhs = syms[r] - (syms[r - 2] if r >= 2 else LaurentPoly.zero(syms[r].vars))
        assert lhs == chis[r]


def test_sym_dimensions():
    # dim Sym^r V7 = C(r + 6, 6)
    from math import comb
    _, syms = sym_series(6)
    for r, s in enumerate(syms):
        assert dimension(s) == comb(r + 6, 6)


def test_char_json_roundtrip():
    ch = weyl_character((1, 0))
    data = json.loads(char_to_json(ch))
    assert data["0,0"] == 1 and data["1,0"] == 1 and data["2,-1"] == 1
    assert len(data) == 7


def test_weight_dominance():
    assert Weight(0, 0).dominant and Weight(3, 1).dominant
    assert not Weight(-1, 0).dominant and not Weight(0, -1).dominant
