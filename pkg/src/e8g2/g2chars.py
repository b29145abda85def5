"""Character theory for G2(C) on fundamental-weight coordinates.

Weights are integer pairs (n, m) meaning n*w1 + m*w2 over the fundamental
weights.  The torus variables are a = tau^{w1}, b = tau^{w2}, so every
weight is the Laurent monomial a^n b^m and characters are Laurent
polynomials in (a, b).  On these coordinates the simple reflections act by

    s1 (n, m) = (-n, n + m)          s2 (n, m) = (n + 3m, -m)

and rho = (1, 1) (the unique weight pairing to 1 with both simple
coroots).  Provides alternating sums, Weyl characters by exact division,
the subset-sum expansion of prod (1 - 1/q tau^-alpha), the measure
constants attached to torus cosets, the spherical-function formula, and
the symmetric-power series of the 7-dimensional representation.
"""

from __future__ import annotations

import json
from typing import NamedTuple

from .symra import LaurentPoly, RatFunc

CHAR_VARS = ("a", "b")
Q_VARS = ("q",)
FULL_VARS = ("q", "a", "b")

# FormalChar is a LaurentPoly over CHAR_VARS; no subclass needed, the
# alias just names the contract.
FormalChar = LaurentPoly


class Weight(NamedTuple):
    n: int
    m: int

    @property
    def dominant(self) -> bool:
        return self.n >= 0 and self.m >= 0


def _wt(w) -> Weight:
    n, m = w
    return Weight(int(n), int(m))


RHO = Weight(1, 1)

# positive roots on weight coordinates, short ones first within height
POSITIVE_ROOTS = (
    Weight(2, -1),   # alpha_1 (short)
    Weight(-3, 2),   # alpha_2 (long)
    Weight(-1, 1),   # alpha_1 + alpha_2 (short)
    Weight(1, 0),    # 2 alpha_1 + alpha_2 (short)
    Weight(3, -1),   # 3 alpha_1 + alpha_2 (long)
    Weight(0, 1),    # 3 alpha_1 + 2 alpha_2 (long)
)
SHORT_POSITIVE_ROOTS = (Weight(2, -1), Weight(-1, 1), Weight(1, 0))

# weights of the 7-dimensional representation: 0 and the short roots
V7_WEIGHTS = (Weight(0, 0),) + SHORT_POSITIVE_ROOTS + tuple(
    Weight(-a, -b) for a, b in SHORT_POSITIVE_ROOTS)

_S1 = ((-1, 0), (1, 1))
_S2 = ((1, 3), (0, -1))


def _mat_apply(M, w: Weight) -> Weight:
    return Weight(M[0][0] * w.n + M[0][1] * w.m, M[1][0] * w.n + M[1][1] * w.m)


def _mat_mul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2))
        for i in range(2))


def _build_group():
    ident = ((1, 0), (0, 1))
    group = {ident: 1}
    frontier = [ident]
    while frontier:
        nxt = []
        for M in frontier:
            for S in (_S1, _S2):
                P = _mat_mul(S, M)
                if P not in group:
                    group[P] = -group[M]
                    nxt.append(P)
        frontier = nxt
    return tuple(sorted(group.items()))


# the 12 elements as (matrix, sign) with sign = (-1)^length = det
WEYL_GROUP = _build_group()


def weyl_images(w) -> list[tuple[Weight, int]]:
    """The 12 (image, sign) pairs of a weight (with repetitions when the
    stabilizer is nontrivial)."""
    w = _wt(w)
    return [(_mat_apply(M, w), s) for M, s in WEYL_GROUP]


def twist(char: LaurentPoly, M) -> LaurentPoly:
    """Transport a character through a Weyl matrix: each monomial's
    (a, b)-exponent vector is replaced by its image.  Extra leading
    variables (e.g. q) are untouched."""
    ia = char.vars.index("a")
    ib = char.vars.index("b")
    out = {}
    for exp, c in char.coeffs.items():
        img = _mat_apply(M, Weight(exp[ia], exp[ib]))
        e = list(exp)
        e[ia], e[ib] = img.n, img.m
        e = tuple(e)
        out[e] = out.get(e, 0) + c
    return LaurentPoly(char.vars, out)


# -- alternating sums and characters ---------------------------------------------------


def alt_sum(w) -> LaurentPoly:
    """Signed orbit sum: sum over the Weyl group of sign(u) tau^{u w}."""
    w = _wt(w)
    out: dict[tuple[int, int], int] = {}
    for img, s in weyl_images(w):
        key = (img.n, img.m)
        out[key] = out.get(key, 0) + s
    return LaurentPoly(CHAR_VARS, out)


ALT_RHO = alt_sum(RHO)


def weyl_character(w) -> LaurentPoly:
    """Character of the irreducible representation with highest weight w,
    as the exact ratio of alternating sums."""
    w = _wt(w)
    if not w.dominant:
        raise ValueError(f"highest weight must be dominant, got {tuple(w)}")
    return alt_sum(Weight(w.n + RHO.n, w.m + RHO.m)).divexact(ALT_RHO)


def dimension(char: LaurentPoly) -> int:
    """Dimension = sum of weight multiplicities."""
    return sum(char.coeffs.values())


def weyl_dimension(w) -> int:
    """Product formula for the dimension: independent of the character
    expansion, used to cross-check it.  The six factors are the pairings
    of w + rho with the positive coroots."""
    w = _wt(w)
    n, m = w.n + 1, w.m + 1
    num = n * m * (n + 3 * m) * (2 * n + 3 * m) * (n + m) * (n + 2 * m)
    den = 1 * 1 * 4 * 5 * 2 * 3
    if num % den:
        raise ArithmeticError("dimension formula did not divide")
    return num // den


def decompose(char: LaurentPoly) -> dict[Weight, int]:
    """Write a Weyl-invariant character as a sum of irreducibles by
    repeatedly stripping the highest surviving weight.  Raises if the
    input is not a nonnegative integer combination."""
    rest = char
    out: dict[Weight, int] = {}
    # 3n + 5m is positive on every positive root, so its maximum over the
    # support is attained at a highest weight
    while not rest.is_zero():
        exp, mult = max(
            rest.coeffs.items(), key=lambda kv: (3 * kv[0][0] + 5 * kv[0][1], kv[0]))
        top = Weight(*exp)
        if not top.dominant or mult < 0:
            raise ValueError(
                f"not a nonnegative sum of irreducible characters at {tuple(top)}")
        out[top] = out.get(top, 0) + mult
        rest = rest - weyl_character(top) * mult
    return out


def char_to_json(char: LaurentPoly) -> str:
    """Weight -> multiplicity map with 'n,m' keys, sorted."""
    items = sorted(char.coeffs.items())
    return json.dumps({f"{e[0]},{e[1]}": c for e, c in items}, indent=2)


# -- subset-sum expansion ---------------------------------------------------


def s0_and_p() -> tuple[tuple[Weight, ...], dict[Weight, LaurentPoly]]:
    """Expand prod_{alpha > 0} (1 - 1/q tau^-alpha) over the 64 subsets of
    the positive roots: returns the distinct subset sums (sorted) and, for
    each sum nu, the polynomial collecting (-1/q)^{|subset|}."""
    table: dict[Weight, dict[tuple[int], int]] = {}
    for mask in range(1 << len(POSITIVE_ROOTS)):
        n = m = 0
        size = 0
        for i, r in enumerate(POSITIVE_ROOTS):
            if mask >> i & 1:
                n += r.n
                m += r.m
                size += 1
        poly = table.setdefault(Weight(n, m), {})
        key = (-size,)
        poly[key] = poly.get(key, 0) + (-1) ** size
    out = {
        nu: LaurentPoly(Q_VARS, poly)
        for nu, poly in table.items()
        if any(poly.values())
    }
    return tuple(sorted(out)), out


# -- measure constants ---------------------------------------------------


class QConstants:
    """The mass Q of the identity double coset and its selector over
    valuation classes: Q when both coordinates are 0, 1 + 1/q when exactly
    one is 0 and the other positive, 1 otherwise."""

    def __init__(self):
        self.Q = LaurentPoly(Q_VARS, {
            (0,): 1, (-1,): 2, (-2,): 2, (-3,): 2, (-4,): 2, (-5,): 2, (-6,): 1})
        self._edge = LaurentPoly(Q_VARS, {(0,): 1, (-1,): 1})
        self._bulk = LaurentPoly.const(Q_VARS, 1)

    def select(self, w) -> LaurentPoly:
        w = _wt(w)
        if w.n == 0 and w.m == 0:
            return self.Q
        if (w.n == 0) != (w.m == 0) and max(w.n, w.m) > 0:
            return self._edge
        return self._bulk


Q_CONSTANTS = QConstants()


# -- spherical function ---------------------------------------------------


def spherical(w) -> RatFunc:
    """Value of the normalized spherical function at the torus coset of
    valuation pair w = (n, m): q^{-3n-5m}/Q times the subset-sum expansion
    of the alternating-sum ratios.  Exact in (q, a, b); the 1/Q denominator
    is carried as (1 - 1/q)^2 / ((1 - 1/q^2)(1 - 1/q^6))."""
    w = _wt(w)
    if not w.dominant:
        raise ValueError(f"valuation pair must be dominant, got {tuple(w)}")
    sums, table = s0_and_p()
    acc = LaurentPoly.zero(FULL_VARS)
    for nu in sums:
        shifted = Weight(w.n + RHO.n - nu.n, w.m + RHO.m - nu.m)
        term = table[nu].rename(FULL_VARS) * alt_sum(shifted).rename(FULL_VARS)
        acc = acc + term
    # each orbit sum is 0 or +-(dominant orbit sum), so the ratio is exact
    ratio = acc.divexact(ALT_RHO.rename(FULL_VARS))
    pref = LaurentPoly.monomial(FULL_VARS, 1, q=-(3 * w.n + 5 * w.m))
    unit = LaurentPoly(FULL_VARS, {(0, 0, 0): 1, (-1, 0, 0): -1})
    num = pref * ratio * unit * unit
    return RatFunc(num, {(-2, 0, 0): 1, (-6, 0, 0): 1})


# -- symmetric powers of the 7-dimensional representation ---------------------------------------------------


def sym_series(r_max: int) -> tuple[list[LaurentPoly], list[LaurentPoly]]:
    """(chi_{(r,0)} for r <= r_max, char Sym^r V7 for r <= r_max)."""
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    chis = [weyl_character(Weight(r, 0)) for r in range(r_max + 1)]
    # stable recursion: weights of Sym^r over a 7-element alphabet, built
    # by last-letter index so each multiset is counted once
    states: dict[tuple[int, Weight], int] = {(0, Weight(0, 0)): 1}
    syms = [LaurentPoly.const(CHAR_VARS, 1)]
    for _ in range(r_max):
        nxt: dict[tuple[int, Weight], int] = {}
        for (start, w), c in states.items():
            for i in range(start, len(V7_WEIGHTS)):
                v = V7_WEIGHTS[i]
                key = (i, Weight(w.n + v.n, w.m + v.m))
                nxt[key] = nxt.get(key, 0) + c
        states = nxt
        agg: dict[tuple[int, int], int] = {}
        for (_, w), c in states.items():
            agg[(w.n, w.m)] = agg.get((w.n, w.m), 0) + c
        syms.append(LaurentPoly(CHAR_VARS, agg))
    return chis, syms
