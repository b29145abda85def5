"""Weyl-group element arithmetic and parabolic double-coset combinatorics.

Elements are stored as the images of the simple roots under w and w^{-1}
(rank-many root vectors each); the action on arbitrary roots is linear.
The full group is never materialized: enumeration builds minimal-length
left-coset representatives breadth-first through descent tests, then cuts
down to distinguished double-coset representatives.

Words are written over the simple-reflection indices 1..8 and printed as
digit strings, matching the w[...] notation used in all reports.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .rootsys import RootSystem, Root, root_key

# Distinguished words used across the package (all over E8 simple indices).
# The two target words for the parabolic double-coset classification:
WORD_COSET_SHORT = "2431542345654234576542314354287654231435426543765428765431"
WORD_COSET_LONG = "24315423456542314354276542314354265437654287654231435426543765428765431"
# Candidate spellings for the element that swaps simple nodes 4 and 7
# (two different spellings circulate; resolve_swap47 picks the usable one):
WORD_SWAP47_A = "345678243546576"
WORD_SWAP47_B = "345678245673456"
# The element realizing the outer reversal on the rank-2 subgroup:
WORD_REVERSAL = "657486576"
# Intertwining word whose Gindikin-Karpelevich product is computed in zeta:
WORD_INTERTWINER = "243154234654237654"
# Its completion to the full reduction word (intertwiner * residual part):
WORD_REDUCTION_FULL = "243154234565423145765423187"
WORD_REDUCTION_RESIDUAL = "131257687"

M2_INDICES = (1, 3, 4, 5, 6, 7, 8)  # Levi omitting node 2
M1_INDICES = (2, 3, 4, 5, 6, 7, 8)  # Levi omitting node 1


def parse_word(word: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(word, str):
        if not word.isdigit() and word != "":
            raise ValueError(f"bad word {word!r}")
        return tuple(int(ch) for ch in word)
    return tuple(word)


class WeylElt:
    __slots__ = ("rs", "cols", "inv_cols", "_len")

    def __init__(self, rs: RootSystem, cols: tuple[Root, ...], inv_cols: tuple[Root, ...]):
        self.rs = rs
        self.cols = cols
        self.inv_cols = inv_cols
        self._len = None

    @classmethod
    def identity(cls, rs: RootSystem) -> "WeylElt":
        return cls(rs, rs.simple, rs.simple)

    @classmethod
    def generator(cls, rs: RootSystem, i: int) -> "WeylElt":
        if not 1 <= i <= rs.rank:
            raise ValueError(f"simple-reflection index {i} out of range")
        cols = tuple(rs.reflect(i, a) for a in rs.simple)
        return cls(rs, cols, cols)

    # -- actions ----------------------------------------------------------

    def act(self, alpha: Iterable[int]) -> Root:
        out = [0] * self.rs.rank
        for n, col in zip(alpha, self.cols):
            if n:
                for k in range(self.rs.rank):
                    out[k] += n * col[k]
        return tuple(out)

    def act_fractional(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.rs.rank
        for n, col in zip(v, self.cols):
            if n:
                for k in range(self.rs.rank):
                    out[k] += n * col[k]
        return tuple(out)

    def inv_act(self, alpha: Iterable[int]) -> Root:
        out = [0] * self.rs.rank
        for n, col in zip(alpha, self.inv_cols):
            if n:
                for k in range(self.rs.rank):
                    out[k] += n * col[k]
        return tuple(out)

    # -- group structure ----------------------------------------------------

    def compose(self, other: "WeylElt") -> "WeylElt":
        """self o other: apply other first."""
        cols = tuple(self.act(c) for c in other.cols)
        inv_cols = tuple(other.inv_act(c) for c in self.inv_cols)
        return WeylElt(self.rs, cols, inv_cols)

    def __matmul__(self, other: "WeylElt") -> "WeylElt":
        return self.compose(other)

    def inverse(self) -> "WeylElt":
        return WeylElt(self.rs, self.inv_cols, self.cols)

    def right_mul(self, i: int) -> "WeylElt":
        """self * s_i (one reflection applied before self)."""
        rs = self.rs
        row = rs.cartan[i - 1]
        ci = self.cols[i - 1]
        cols = tuple(
            c if row[j] == 0 else tuple(a - row[j] * b for a, b in zip(c, ci))
            for j, c in enumerate(self.cols)
        )
        inv_cols = tuple(rs.reflect(i, c) for c in self.inv_cols)
        return WeylElt(rs, cols, inv_cols)

    def left_mul(self, i: int) -> "WeylElt":
        """s_i * self."""
        rs = self.rs
        row = rs.cartan[i - 1]
        ii = self.inv_cols[i - 1]
        cols = tuple(rs.reflect(i, c) for c in self.cols)
        inv_cols = tuple(
            c if row[j] == 0 else tuple(a - row[j] * b for a, b in zip(c, ii))
            for j, c in enumerate(self.inv_cols)
        )
        return WeylElt(rs, cols, inv_cols)

    def is_identity(self) -> bool:
        return self.cols == self.rs.simple

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElt) and self.cols == other.cols

    def __hash__(self) -> int:
        return hash(self.cols)

    # -- length / inversions -------------------------------------------------

    def length(self) -> int:
        if self._len is None:
            self._len = sum(1 for a in self.rs.positive if sum(self.act(a)) < 0)
        return self._len

    def inversion_set(self) -> list[Root]:
        """{alpha > 0 : w(alpha) < 0}, sorted in the standard root order."""
        return [a for a in self.rs.positive if sum(self.act(a)) < 0]

    def descents_right(self) -> list[int]:
        return [j + 1 for j, c in enumerate(self.cols) if sum(c) < 0]

    def descents_left(self) -> list[int]:
        return [j + 1 for j, c in enumerate(self.inv_cols) if sum(c) < 0]

    def word(self) -> str:
        """A canonical reduced word (greedy smallest right descent)."""
        w = self
        letters = []
        while not w.is_identity():
            i = next(j + 1 for j, c in enumerate(w.cols) if sum(c) < 0)
            w = w.right_mul(i)
            letters.append(i)
        return "".join(str(i) for i in reversed(letters))

    def __repr__(self) -> str:
        return f"WeylElt(w[{self.word()}])"


def evaluate_word(rs: RootSystem, word: str | Sequence[int]) -> WeylElt:
    w = WeylElt.identity(rs)
    for i in parse_word(word):
        if not 1 <= i <= rs.rank:
            raise ValueError(f"letter {i} out of range 1..{rs.rank}")
        w = w.right_mul(i)
    return w


def act(w: WeylElt, alpha: Root) -> Root:
    if not w.rs.is_root(alpha):
        raise ValueError(f"{alpha} is not a root")
    return w.act(alpha)


def inversion_set(w: WeylElt) -> list[Root]:
    return w.inversion_set()


# -- coset machinery ------------------------------------------------------


def min_coset_rep(
    J: Iterable[int],
    w: WeylElt,
    side: str = "left",
    K: Iterable[int] | None = None,
) -> WeylElt:
    """Unique minimal-length element of W_J*w (left), w*W_K (right), or
    W_J*w*W_K (double, with K).  Idempotent."""
    Jt = tuple(J)
    if side == "left":
        changed = True
        while changed:
            changed = False
            for j in Jt:
                if sum(w.inv_cols[j - 1]) < 0:
                    w = w.left_mul(j)
                    changed = True
        return w
    if side == "right":
        Kt = tuple(K) if K is not None else Jt
        changed = True
        while changed:
            changed = False
            for k in Kt:
                if sum(w.cols[k - 1]) < 0:
                    w = w.right_mul(k)
                    changed = True
        return w
    if side == "double":
        if K is None:
            raise ValueError("double-sided reduction needs K")
        while True:
            before = w
            w = min_coset_rep(Jt, w, "left")
            w = min_coset_rep(K, w, "right")
            if w == before:
                return w
    raise ValueError(f"unknown side {side!r}")


def enumerate_min_left_reps(rs: RootSystem, J: Iterable[int]) -> list[WeylElt]:
    """All minimal-length representatives of W_J \\ W, breadth-first.

    The set {w : w^{-1} alpha_j > 0 for all j in J} is closed under passing
    to shorter elements in right weak order, so BFS by length-increasing
    right multiplication visits each exactly once.  w*s_i stays inside iff
    alpha_i is not among the w^{-1} alpha_j.
    """
    Jt = tuple(J)
    simple = rs.simple
    ident = WeylElt.identity(rs)
    seen = {ident.cols}
    out = [ident]
    frontier = [ident]
    while frontier:
        new = []
        for w in frontier:
            blocked = {w.inv_cols[j - 1] for j in Jt}
            for i in range(1, rs.rank + 1):
                if sum(w.cols[i - 1]) < 0:  # length would drop
                    continue
                if simple[i - 1] in blocked:  # would leave the rep set
                    continue
                cand = w.right_mul(i)
                if cand.cols not in seen:
                    seen.add(cand.cols)
                    new.append(cand)
        out.extend(new)
        frontier = new
    out.sort(key=lambda w: (w.length(), w.cols))
    return out


def enumerate_double_cosets(rs: RootSystem, J: Iterable[int], K: Iterable[int]) -> list[WeylElt]:
    """Minimal-length representatives of W_J \\ W / W_K, deterministic order."""
    Kt = tuple(K)
    reps = enumerate_min_left_reps(rs, J)
    return [w for w in reps if all(sum(w.cols[k - 1]) > 0 for k in Kt)]


def group_order(rs: RootSystem, J: Iterable[int] | None = None) -> int:
    """|W_J| by breadth-first closure (J defaults to all simple indices)."""
    Jt = tuple(J) if J is not None else tuple(range(1, rs.rank + 1))
    ident = WeylElt.identity(rs)
    seen = {ident.cols}
    frontier = [ident]
    while frontier:
        new = []
        for w in frontier:
            for i in Jt:
                if sum(w.cols[i - 1]) < 0:
                    continue
                cand = w.right_mul(i)
                if cand.cols not in seen:
                    seen.add(cand.cols)
                    new.append(cand)
        frontier = new
    return len(seen)


def enumerate_group(rs: RootSystem, J: Iterable[int] | None = None) -> list[WeylElt]:
    """All elements of W_J (small instances only)."""
    Jt = tuple(J) if J is not None else tuple(range(1, rs.rank + 1))
    ident = WeylElt.identity(rs)
    found = {ident.cols: ident}
    frontier = [ident]
    while frontier:
        new = []
        for w in frontier:
            for i in Jt:
                cand = w.right_mul(i)
                if cand.cols not in found:
                    found[cand.cols] = cand
                    new.append(cand)
        frontier = new
    out = list(found.values())
    out.sort(key=lambda w: (w.length(), w.cols))
    return out


def longest_element(rs: RootSystem, J: Iterable[int] | None = None) -> WeylElt:
    Jt = tuple(J) if J is not None else tuple(range(1, rs.rank + 1))
    w = WeylElt.identity(rs)
    progress = True
    while progress:
        progress = False
        for j in Jt:
            if sum(w.cols[j - 1]) > 0:
                w = w.right_mul(j)
                progress = True
    return w


def in_parabolic(w: WeylElt, J: Iterable[int]) -> bool:
    """w lies in the standard parabolic subgroup W_J, i.e. every reduced
    word for w uses only letters from J.  Tested by stabilization of the
    fundamental weights omega_j for j outside J."""
    rs = w.rs
    Jset = set(J)
    weights = rs.fundamental_weights()
    for j in range(1, rs.rank + 1):
        if j in Jset:
            continue
        if w.act_fractional(weights[j - 1]) != weights[j - 1]:
            return False
    return True


def in_parabolic_by_inversions(w: WeylElt, J: Iterable[int]) -> bool:
    """Same predicate through the inversion-set support criterion."""
    Jset = set(J)
    for a in w.inversion_set():
        if any(c != 0 and (k + 1) not in Jset for k, c in enumerate(a)):
            return False
    return True


# -- the survivor pipeline -------------------------------------------------


def support_filter(reps: Iterable[WeylElt], supp: Iterable[Root]) -> list[WeylElt]:
    """Keep exactly those w mapping every support root to a negative root."""
    supp = list(supp)
    for a in supp:
        if sum(a) <= 0:
            raise ValueError("support roots must be positive")
    return [w for w in reps if all(sum(w.act(a)) < 0 for a in supp)]


def resolve_swap47(rs: RootSystem) -> dict:
    """Evaluate the two candidate spellings of the node-4/node-7 swap
    element, report whether they agree, and pick the one that actually
    swaps alpha_4 and alpha_7 with the expected 15-root inversion set."""
    a = evaluate_word(rs, WORD_SWAP47_A)
    b = evaluate_word(rs, WORD_SWAP47_B)
    alpha4 = rs.simple[3]
    alpha7 = rs.simple[6]

    def swaps(w: WeylElt) -> bool:
        return w.act(alpha4) == alpha7 and w.act(alpha7) == alpha4

    report = {
        "words_equal": a == b,
        "A_swaps_4_7": swaps(a),
        "B_swaps_4_7": swaps(b),
        "A_length": a.length(),
        "B_length": b.length(),
    }
    chosen, label = (a, "A") if swaps(a) else (b, "B") if swaps(b) else (None, "none")
    report["choice"] = label
    if chosen is None:
        raise ValueError(f"neither swap word acts as the 4<->7 swap: {report}")
    return {"element": chosen, **report}


def pivot_element(rs: RootSystem) -> tuple[WeylElt, WeylElt, dict]:
    """The composite element (long coset word composed after the 4/7 swap)
    used to anchor the orbit analysis, together with the swap element and
    the resolution report.

    Composition order: the swap acts first.  This is the order under which
    the composite sends alpha_2..alpha_5 to positive roots AND exactly 7
    radical roots of P_1 to positive roots, with the swap carrying that
    7-element set onto the matching set for the conjugated subgroup; the
    opposite order leaves only a 4-element positive part and is rejected."""
    res = resolve_swap47(rs)
    swap = res["element"]
    lng = evaluate_word(rs, WORD_COSET_LONG)
    pivot = lng.compose(swap)  # swap acts first
    report = {k: v for k, v in res.items() if k != "element"}
    report["composition"] = "long_then_swap"
    report["positivity_2345"] = all(
        sum(pivot.act(rs.simple[i - 1])) > 0 for i in (2, 3, 4, 5)
    )
    return pivot, swap, report


def radical_intersection(
    rs: RootSystem, w: WeylElt, radical_index: int = 1, parabolic_index: int = 2
) -> list[Root]:
    """Roots of the radical U(P_radical_index) whose w-image lies in the
    root set of the standard parabolic P_parabolic_index."""
    par = rs.parabolic_roots(parabolic_index)
    return [a for a in rs.radical_roots(radical_index) if w.act(a) in par]


def classify_survivors(rs: RootSystem, survivors: Iterable[WeylElt]) -> dict:
    """Split the support-filter survivors according to which of the two
    distinguished double cosets (for W(M2) x W(M1)) they land in, and mark
    the long-class elements whose long-part quotient needs both letter 4
    and letter 7."""
    sht = evaluate_word(rs, WORD_COSET_SHORT)
    lng = evaluate_word(rs, WORD_COSET_LONG)
    red_sht = min_coset_rep(M2_INDICES, sht, "double", K=M1_INDICES)
    red_lng = min_coset_rep(M2_INDICES, lng, "double", K=M1_INDICES)
    if red_sht == red_lng:
        raise ValueError("the two target double cosets coincide; classification is vacuous")
    S_sht, S_lng, unmatched = [], [], []
    for w in survivors:
        r = min_coset_rep(M2_INDICES, w, "double", K=M1_INDICES)
        if r == red_sht:
            S_sht.append(w)
        elif r == red_lng:
            S_lng.append(w)
        else:
            unmatched.append(w)
    lng_inv = lng.inverse()
    without4 = tuple(i for i in range(1, 9) if i != 4)
    without7 = tuple(i for i in range(1, 9) if i != 7)
    S_lng_prime = [
        w
        for w in S_lng
        if not in_parabolic(lng_inv.compose(w), without4)
        and not in_parabolic(lng_inv.compose(w), without7)
    ]
    return {
        "S_sht": S_sht,
        "S_lng": S_lng,
        "S_lng_prime": S_lng_prime,
        "unmatched": unmatched,
        "reduced_short": red_sht,
        "reduced_long": red_lng,
    }


def words_json(reps: Iterable[WeylElt]) -> list[str]:
    return [w.word() for w in reps]
