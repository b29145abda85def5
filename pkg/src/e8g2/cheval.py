"""Chevalley structure constants and exact unipotent-word calculus.

Three layers, all exact over the integers:

* ``StructureConstants`` -- the signs N[a,b] with [x_a(u), x_b(v)] =
  x_{a+b}(N[a,b] u v) for a simply-laced root system, built from the
  extraspecial-pair convention and queried for arbitrary sign patterns.

* ``UnipotentWord`` -- an ordered product of one-parameter factors
  x_root(coeff) with polynomial coefficients.  ``canonical`` sorts the
  factors into the deterministic root order by iterated commutator
  insertion, which is the workhorse behind ``conjugate``.

* Report operations: ``d0_structure_check`` (a distinguished abelian
  subgroup normalized by two SL2's) and ``character_conditions`` (the
  polynomial equations forced on a conjugating unipotent element by
  requiring a conjugated character to die on a prescribed subgroup).

The extraspecial sign convention here is deterministic but is one of many
in the literature; callers that compare against externally printed signs
should treat individual monomial signs as convention-dependent, while
vanishing patterns and monomial supports are convention-independent.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

from .rootsys import RootSystem, build_root_system, E8_CARTAN, root_key
from .symra import LaurentPoly
from .weyl import WeylElt, radical_intersection, evaluate_word, WORD_SWAP47_A

Root = tuple[int, ...]

# The five roots spanning the distinguished abelian subgroup checked by
# d0_structure_check, in the order its one-parameter factors are listed.
D0_ROOTS = ("00001100", "00011100", "00001110", "00000111", "00011110")

# Coefficients (root, 1) of the generic-position character on the radical
# of the first maximal parabolic.
CHARACTER_SUPPORT_ROOTS = ("11221111", "11122111", "12232210", "11233210")


def _add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def _neg(a: Root) -> Root:
    return tuple(-x for x in a)


def _is_positive(a: Root) -> bool:
    return sum(a) > 0


def _constants_key(a: Root):
    # Height first, then earliest-support-first: among equal heights the
    # root containing the lowest-numbered simple roots comes first, so the
    # rank-2 base case assigns +1 to the pair (alpha_1, alpha_2).
    return (sum(a), tuple(-c for c in a))


class StructureConstants:
    """Commutator signs for a simply-laced root system.

    Each non-simple positive root g has an extraspecial pair: the special
    pair (a, b), a + b = g, with a minimal in the height-then-support
    order.  Extraspecial pairs get +1; every other value follows from
    antisymmetry, negation, the root-triangle rotation identity, and the
    Jacobi identity, applied recursively.
    """

    __slots__ = ("rs", "_root_set", "_extraspecial", "_memo", "table")

    def __init__(self, rs: RootSystem):
        n = rs.rank
        for i in range(n):
            for j in range(n):
                if i != j and rs.cartan[i][j] not in (0, -1):
                    raise ValueError(
                        "structure constants require a simply-laced root system")
        self.rs = rs
        self._root_set = set(rs.roots)
        simple = set(rs.simple)
        scan = sorted(rs.positive, key=_constants_key)
        self._extraspecial: dict[Root, tuple[Root, Root]] = {}
        for g in scan:
            if g in simple:
                continue
            for a in scan:
                b = _sub(g, a)
                if b in self._root_set and _is_positive(b):
                    self._extraspecial[g] = (a, b)
                    break
        self._memo: dict[tuple[Root, Root], int] = {}
        self.table: dict[tuple[Root, Root], int] = {}
        for a in rs.roots:
            for b in rs.roots:
                if _add(a, b) in self._root_set:
                    self.table[(a, b)] = self._value(a, b)

    # -- queries ---------------------------------------------------

    def n(self, a, b) -> int:
        """N[a,b] for roots with a+b a root; ValueError otherwise."""
        a = self._coerce_root(a)
        b = self._coerce_root(b)
        try:
            return self.table[(a, b)]
        except KeyError:
            raise ValueError(
                f"no table entry: {self.rs.root_str(a)} + {self.rs.root_str(b)}"
                " is not a root") from None

    def has_pair(self, a, b) -> bool:
        return (self._coerce_root(a), self._coerce_root(b)) in self.table

    def _coerce_root(self, a) -> Root:
        if isinstance(a, str):
            return self.rs.parse_root(a)
        a = tuple(a)
        if a not in self._root_set:
            raise ValueError(f"{a} is not a root")
        return a

    # -- construction recursion ---------------------------------------------------

    def _value(self, a: Root, b: Root) -> int:
        key = (a, b)
        got = self._memo.get(key)
        if got is not None:
            return got
        pa, pb = _is_positive(a), _is_positive(b)
        if pa and pb:
            v = self._positive_value(a, b)
        elif not pa and not pb:
            v = -self._value(_neg(a), _neg(b))
        else:
            # rotate around the triangle a + b + c = 0, on which
            # N[a,b] = N[b,c] = N[c,a]; one rotation has equal signs
            c = _neg(_add(a, b))
            v = self._value(b, c) if _is_positive(_add(a, b)) else self._value(c, a)
        self._memo[key] = v
        return v

    def _positive_value(self, a: Root, b: Root) -> int:
        if _constants_key(a) > _constants_key(b):
            return -self._value(b, a)
        g = _add(a, b)
        a1, b1 = self._extraspecial[g]
        if a == a1:
            return 1
        # a1 pairs with exactly one of a, b inside the quadrilateral
        # a + b = a1 + b1; recurse through the Jacobi identity on the
        # triple that keeps every intermediate sum a root.
        eta = _sub(a, a1)
        if eta in self._root_set:
            return self._value(eta, b) * self._value(a1, b1) * self._value(a1, eta)
        xi = _sub(b, a1)
        return -self._value(xi, a) * self._value(a1, b1) * self._value(a1, xi)

    # -- validation sweeps ---------------------------------------------------

    def check_antisymmetry(self) -> int:
        """Number of pairs violating N[a,b] = -N[b,a] (0 when consistent)."""
        return sum(1 for (a, b), v in self.table.items() if self.table[(b, a)] != -v)

    def check_negation(self) -> int:
        """Number of pairs violating N[-a,-b] = -N[a,b]."""
        return sum(
            1 for (a, b), v in self.table.items()
            if self.table[(_neg(a), _neg(b))] != -v)

    def jacobi_triangle_report(self) -> dict:
        """Exhaustive scan of root triangles a + b + c = 0.

        On every triangle the three rotations N[a,b], N[b,c], N[c,a] must
        be equal.  Returns the number of (ordered) triangles scanned and
        the violations found.
        """
        checked = 0
        bad = []
        for (a, b), v in self.table.items():
            c = _neg(_add(a, b))
            checked += 1
            if self.table[(b, c)] != v or self.table[(c, a)] != v:
                bad.append((a, b, c))
        return {
            "triangles_checked": checked,
            "violations": len(bad),
            "antisymmetry_violations": self.check_antisymmetry(),
            "negation_violations": self.check_negation(),
            "table_size": len(self.table),
        }


def build_constants(rs: RootSystem) -> StructureConstants:
    return StructureConstants(rs)


# -- unipotent words ---------------------------------------------------


def _union_vars(*vars_tuples: tuple[str, ...]) -> tuple[str, ...]:
    seen: list[str] = []
    for vs in vars_tuples:
        for v in vs:
            if v not in seen:
                seen.append(v)
    return tuple(seen)


class UnipotentWord:
    """Ordered product of factors x_root(coeff); coefficients are integer
    polynomials in named formal variables.

    The word itself is a free-form list; ``canonical`` returns the
    normal form (factors sorted by the deterministic root order, equal
    roots merged, zero coefficients dropped), provided the roots involved
    generate a nilpotent closed subset.
    """

    __slots__ = ("sc", "vars", "factors")

    def __init__(self, sc: StructureConstants, factors: Iterable[tuple], vars: tuple[str, ...] = ()):
        self.sc = sc
        norm: list[tuple[Root, LaurentPoly]] = []
        staged = []
        var_names = list(vars)
        for root, coeff in factors:
            root = sc._coerce_root(root)
            if isinstance(coeff, str):
                if coeff not in var_names:
                    var_names.append(coeff)
            elif isinstance(coeff, LaurentPoly):
                for v in coeff.vars:
                    if v not in var_names:
                        var_names.append(v)
            staged.append((root, coeff))
        self.vars = tuple(var_names)
        for root, coeff in staged:
            if isinstance(coeff, int):
                poly = LaurentPoly.const(self.vars, coeff)
            elif isinstance(coeff, str):
                poly = LaurentPoly.monomial(self.vars, 1, **{coeff: 1})
            else:
                poly = coeff.rename(self.vars)
            norm.append((root, poly))
        self.factors = tuple(norm)

    @classmethod
    def identity(cls, sc: StructureConstants) -> "UnipotentWord":
        return cls(sc, ())

    @classmethod
    def generator(cls, sc: StructureConstants, root, coeff) -> "UnipotentWord":
        return cls(sc, [(root, coeff)])

    # -- basic structure ---------------------------------------------------

    def with_vars(self, vars: tuple[str, ...]) -> "UnipotentWord":
        return UnipotentWord(self.sc, self.factors, vars)

    def times(self, other: "UnipotentWord") -> "UnipotentWord":
        """Concatenation (no canonicalization)."""
        if other.sc is not self.sc:
            raise ValueError("words built over different constant tables")
        vars = _union_vars(self.vars, other.vars)
        return UnipotentWord(self.sc, self.factors + other.factors, vars)

    def __mul__(self, other: "UnipotentWord") -> "UnipotentWord":
        return self.times(other)

    def inverse(self) -> "UnipotentWord":
        return UnipotentWord(
            self.sc, [(r, -c) for r, c in reversed(self.factors)], self.vars)

    def support(self) -> list[Root]:
        return [r for r, _ in self.factors]

    def coefficient(self, root) -> LaurentPoly:
        """Coefficient at ``root`` in this word (sum over equal-root factors;
        meaningful on canonical forms, where each root appears once)."""
        root = self.sc._coerce_root(root)
        out = LaurentPoly.zero(self.vars)
        for r, c in self.factors:
            if r == root:
                out = out + c
        return out

    def is_identity(self) -> bool:
        return all(c.is_zero() for _, c in self.canonical().factors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnipotentWord):
            return NotImplemented
        a = self.canonical()
        b = other.canonical()
        vars = _union_vars(a.vars, b.vars)
        return [(r, c.rename(vars)) for r, c in a.factors] == \
            [(r, c.rename(vars)) for r, c in b.factors]

    def __hash__(self):
        raise TypeError("UnipotentWord is unhashable; compare canonical forms")

    def __repr__(self) -> str:
        inner = " ".join(
            f"x[{self.sc.rs.root_str(r)}]({c.to_text()})" for r, c in self.factors)
        return f"UnipotentWord({inner or '1'})"

    # -- normal form ---------------------------------------------------

    def _check_nilpotent(self, extra: Iterable[Root] = ()) -> None:
        closure = set(self.support()) | set(extra)
        frontier = True
        while frontier:
            frontier = False
            for a in list(closure):
                for b in list(closure):
                    s = _add(a, b)
                    if s in self.sc._root_set and s not in closure:
                        closure.add(s)
                        frontier = True
        for a in closure:
            if _neg(a) in closure:
                raise ValueError(
                    "roots do not span a nilpotent closed subset; "
                    "expansion would not terminate")

    def canonical(self) -> "UnipotentWord":
        """Normal form: factors sorted by the root order, merged, nonzero.

        Adjacent out-of-order factors are swapped through
        x_a(u) x_b(v) = x_b(v) x_a(u) x_{a+b}(N[a,b] u v), iterated to
        closure; termination is guaranteed on nilpotent closed subsets
        (each inserted factor has strictly greater height).
        """
        self._check_nilpotent()
        work: list[tuple[Root, LaurentPoly]] = [
            (r, c) for r, c in self.factors if not c.is_zero()]
        vars = self.vars
        # generous guard: the nilpotency class bounds the real pass count
        max_passes = 40 * (1 + max((abs(sum(r)) for r, _ in work), default=1))
        passes = 0
        changed = True
        while changed:
            changed = False
            i = 0
            while i + 1 < len(work):
                (a, u), (b, v) = work[i], work[i + 1]
                if a == b:
                    s = u + v
                    if s.is_zero():
                        del work[i:i + 2]
                        i = max(i - 1, 0)
                    else:
                        work[i:i + 2] = [(a, s)]
                    changed = True
                    continue
                if root_key(a) > root_key(b):
                    repl = [(b, v), (a, u)]
                    s = _add(a, b)
                    if s in self.sc._root_set:
                        coeff = u * v * self.sc.table[(a, b)]
                        if not coeff.is_zero():
                            repl.append((s, coeff))
                    work[i:i + 2] = repl
                    changed = True
                i += 1
            passes += 1
            if passes > max_passes:
                raise ValueError("canonicalization did not stabilize")
        return UnipotentWord(self.sc, work, vars)


def conjugate(word: UnipotentWord, by: UnipotentWord) -> UnipotentWord:
    """by . word . by^-1 in canonical form."""
    return by.times(word).times(by.inverse()).canonical()


# -- characters ---------------------------------------------------


class CharacterSupport:
    """A character of the radical attached to ``radical_index``, given by
    u -> psi(sum_i c_i u_{beta_i}) over distinct radical roots beta_i."""

    __slots__ = ("rs", "pairs", "radical_index")

    def __init__(self, rs: RootSystem, pairs: Iterable[tuple], radical_index: int = 1):
        self.rs = rs
        self.radical_index = radical_index
        radical = set(rs.radical_roots(radical_index))
        out: list[tuple[Root, object]] = []
        seen: set[Root] = set()
        for root, coeff in pairs:
            root = rs.parse_root(root) if isinstance(root, str) else tuple(root)
            if root in seen:
                raise ValueError(f"duplicate support root {rs.root_str(root)}")
            if root not in radical:
                raise ValueError(
                    f"{rs.root_str(root)} is not a root of the radical")
            seen.add(root)
            out.append((root, coeff))
        self.pairs = tuple(out)

    def value(self, word: UnipotentWord) -> LaurentPoly:
        """The linear functional the character applies psi to, evaluated on
        a canonical word."""
        w = word.canonical()
        out = LaurentPoly.zero(w.vars)
        for root, coeff in self.pairs:
            c = w.coefficient(root)
            if isinstance(coeff, LaurentPoly):
                c = c * coeff.rename(w.vars)
            elif coeff != 1:
                c = c * coeff
            out = out + c
        return out


def default_character(rs: RootSystem) -> CharacterSupport:
    """The generic-position character used throughout: coefficient 1 on
    each of the four distinguished radical roots."""
    return CharacterSupport(rs, [(r, 1) for r in CHARACTER_SUPPORT_ROOTS])


def swap_conjugator_roots(rs: RootSystem) -> list[Root]:
    """The 15 positive roots inverted by the node-4/node-7 swap element:
    the root set of the unipotent group its conjugating elements range over."""
    return evaluate_word(rs, WORD_SWAP47_A).inversion_set()


def symbolic_conjugator(
    sc: StructureConstants,
    zeroed: Sequence[str] = (),
    prefix: str = "delta_",
) -> UnipotentWord:
    """The generic element prod x_alpha(delta_alpha) over the 15 swap
    roots, in their listed order, with the ``zeroed`` coordinates omitted."""
    rs = sc.rs
    drop = {rs.parse_root(z) if isinstance(z, str) else tuple(z) for z in zeroed}
    factors = []
    for root in swap_conjugator_roots(rs):
        if root in drop:
            continue
        factors.append((root, f"{prefix}{rs.root_str(root)}"))
    return UnipotentWord(sc, factors)


def character_conditions(
    sigma: WeylElt,
    psi: CharacterSupport,
    delta: UnipotentWord,
    parabolic_index: int = 2,
) -> dict[str, LaurentPoly]:
    """Polynomial conditions for the delta-conjugated character to be
    trivial on the part of the radical that sigma carries into the
    standard parabolic.

    For each root g of that intersection, the conjugated character on
    x_g(v) equals psi(c_g(delta) * v); the returned map sends the root's
    digit string to the polynomial c_g.  Triviality holds iff every
    polynomial vanishes.
    """
    sc = delta.sc
    rs = sc.rs
    allowed = set(swap_conjugator_roots(rs))
    for root in delta.support():
        if root not in allowed:
            raise ValueError(
                f"conjugator factor {rs.root_str(root)} lies outside the "
                "swap-element root set")
    radical = radical_intersection(
        rs, sigma, radical_index=psi.radical_index, parabolic_index=parabolic_index)
    var_v = "v"
    inv = delta.inverse()
    out: dict[str, LaurentPoly] = {}
    for g in radical:
        gen = UnipotentWord.generator(sc, g, var_v)
        conj = inv.times(gen).times(delta).canonical()
        for root, _ in conj.factors:
            if root in allowed:
                raise AssertionError(
                    "conjugation left a factor outside the radical")
        val = psi.value(conj)
        linear = val.coefficient_of(var_v, 1)
        # the character value must be exactly linear in the probe variable
        check = LaurentPoly.monomial(val.vars, 1, **{var_v: 1}) * linear.rename(val.vars)
        if check != val:
            raise AssertionError(
                f"character value on {rs.root_str(g)} is not linear in {var_v}")
        out[rs.root_str(g)] = linear
    return out


def conditions_to_json(conditions: Mapping[str, LaurentPoly]) -> str:
    """JSON export: one entry per radical root, nonzero conditions only."""
    rows = [
        {"root": root, "condition": poly.to_text()}
        for root, poly in sorted(conditions.items())
        if not poly.is_zero()
    ]
    return json.dumps(rows, indent=2)


# -- structure reports ---------------------------------------------------


def d0_structure_check(rs: RootSystem | None = None) -> dict:
    """Verify the distinguished five-root configuration: (a) no two of the
    roots sum to a root (the group they span is abelian); (b) subtracting
    either node-4 or node-7 simple root from each either leaves the root
    system or lands back in the list (the two SL2's normalize the group)."""
    if rs is None:
        rs = build_root_system(E8_CARTAN)
    roots = [rs.parse_root(s) for s in D0_ROOTS]
    rset = set(rs.roots)
    listed = set(roots)
    pair_sums = []
    for i, a in enumerate(roots):
        for b in roots[i:]:
            s = _add(a, b)
            pair_sums.append({
                "pair": [rs.root_str(a), rs.root_str(b)],
                "sum_is_root": s in rset,
            })
    abelian = all(not row["sum_is_root"] for row in pair_sums)
    moves = []
    stable = True
    for a in roots:
        for node in (4, 7):
            for direction in (-1, 1):
                step = rs.simple[node - 1]
                image = _add(a, tuple(direction * x for x in step))
                if image in rset:
                    status = "listed" if image in listed else "outside"
                else:
                    status = "not-a-root"
                if status == "outside":
                    stable = False
                moves.append({
                    "root": rs.root_str(a),
                    "node": node,
                    "direction": direction,
                    "result": status,
                })
    return {
        "roots": list(D0_ROOTS),
        "abelian": abelian,
        "pair_sums": pair_sums,
        "sl2_stable": stable,
        "moves": moves,
        "passed": abelian and stable,
    }
