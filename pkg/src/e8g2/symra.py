"""Exact multivariate Laurent-polynomial and rational-function arithmetic.

Everything downstream (character sums, zeta-product identities, operator
calculus) runs on the two classes defined here:

* ``LaurentPoly`` -- a map {exponent vector: nonzero int} over a fixed,
  ordered tuple of variable names.  Exponents may be negative.  All
  coefficients are arbitrary-precision integers; there is no floating
  point anywhere in this package.

* ``RatFunc`` -- a Laurent polynomial divided by a *factored* denominator
  prod (1 - X^v)^m.  Keeping the denominator factored makes cancellation,
  substitution and geometric-series truncation cheap and exact.

The canonical monomial order is graded lexicographic over the declared
variable list; canonical text serialization sorts by it, so equal values
always print identically.

>>> x_q = ("x", "q")
>>> f = LaurentPoly.monomial(x_q, 1) - LaurentPoly.monomial(x_q, 1, x=1, q=7)
>>> g = LaurentPoly.monomial(x_q, 1) + LaurentPoly.monomial(x_q, 1, x=1, q=7)
>>> (f * g).to_text()
'1 - x^2*q^14'
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping


class InexactDivision(ValueError):
    """Raised when divexact is called on a non-divisible pair."""


class TruncationError(ValueError):
    """Raised when a denominator factor cannot be expanded as a series."""


def _grlex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), exps)


class LaurentPoly:
    """Immutable multivariate Laurent polynomial with integer coefficients."""

    __slots__ = ("vars", "coeffs")

    def __init__(self, vars: tuple[str, ...], coeffs: Mapping[tuple[int, ...], int]):
        self.vars = tuple(vars)
        self.coeffs = {e: c for e, c in coeffs.items() if c}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, vars: tuple[str, ...]) -> "LaurentPoly":
        return cls(vars, {})

    @classmethod
    def const(cls, vars: tuple[str, ...], c: int) -> "LaurentPoly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def monomial(cls, vars: tuple[str, ...], coeff: int = 1, **powers: int) -> "LaurentPoly":
        """Build coeff * prod(var^power).  Unknown variable names are errors.

        >>> LaurentPoly.monomial(("x", "q"), -2, x=1, q=-3).to_text()
        '-2*x*q^-3'
        """
        e = [0] * len(vars)
        for name, p in powers.items():
            e[vars.index(name)] += p
        return cls(vars, {tuple(e): coeff})

    @classmethod
    def from_terms(cls, vars: tuple[str, ...], terms: Iterable[tuple[int, dict[str, int]]]) -> "LaurentPoly":
        out: dict[tuple[int, ...], int] = {}
        for coeff, powers in terms:
            e = [0] * len(vars)
            for name, p in powers.items():
                e[vars.index(name)] += p
            k = tuple(e)
            out[k] = out.get(k, 0) + coeff
        return cls(vars, out)

    # -- basic queries ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        e = max(self.coeffs, key=_grlex_key)
        return e, self.coeffs[e]

    def degree(self, var: str) -> int:
        """Largest exponent of ``var`` (0 for the zero polynomial)."""
        i = self.vars.index(var)
        return max((e[i] for e in self.coeffs), default=0)

    def low_degree(self, var: str) -> int:
        i = self.vars.index(var)
        return min((e[i] for e in self.coeffs), default=0)

    def coefficient_of(self, var: str, power: int) -> "LaurentPoly":
        """The coefficient of var^power, as a polynomial with var removed."""
        i = self.vars.index(var)
        sub = tuple(v for v in self.vars if v != var)
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.coeffs.items():
            if e[i] == power:
                k = e[:i] + e[i + 1:]
                out[k] = out.get(k, 0) + c
        return LaurentPoly(sub, out)

    def is_unit_monomial(self) -> bool:
        if len(self.coeffs) != 1:
            return False
        return abs(next(iter(self.coeffs.values()))) == 1

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "LaurentPoly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable contexts differ: {self.vars} vs {other.vars}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented  # let RatFunc.__radd__ handle poly + ratfunc
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly(self.vars, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.vars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly(self.vars, {e: c * other for e, c in self.coeffs.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented  # let RatFunc.__rmul__ handle poly * ratfunc
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple[int, ...], int] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                k = tuple(i + j for i, j in zip(ea, eb))
                v = out.get(k, 0) + ca * cb
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return LaurentPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit_monomial():
                raise ValueError("negative power of a non-unit polynomial")
            (e, c), = self.coeffs.items()
            sign = -1 if (c < 0 and n % 2) else 1
            return LaurentPoly(self.vars, {tuple(x * n for x in e): sign})
        out = LaurentPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.vars == other.vars and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.coeffs.items())))

    def divexact(self, d: "LaurentPoly", max_steps: int = 200_000) -> "LaurentPoly":
        """Exact division; raises InexactDivision if self is not a multiple of d.

        Standard leading-term elimination in graded-lex order.  For an exact
        division the loop runs once per quotient term; the step cap only
        guards the non-terminating inexact case.
        """
        self._check(d)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        if len(d.coeffs) == 1:
            (ed, cd), = d.coeffs.items()
            out = {}
            for e, c in self.coeffs.items():
                if c % cd:
                    raise InexactDivision(f"coefficient {c} not divisible by {cd}")
                out[tuple(i - j for i, j in zip(e, ed))] = c // cd
            return LaurentPoly(self.vars, out)
        ed, cd = d.leading_term()
        rem = dict(self.coeffs)
        out: dict[tuple[int, ...], int] = {}
        steps = 0
        # For an exact quotient every term has total degree >= the floor
        # below (the bottom graded component of a product is the product of
        # the bottom components), so falling under it proves inexactness --
        # without this, dividing by a binomial with unit leading coefficient
        # would only fail at the step cap.
        floor = min(sum(e) for e in self.coeffs) - min(sum(e) for e in d.coeffs)
        while rem:
            er = max(rem, key=_grlex_key)
            cr = rem[er]
            if cr % cd:
                raise InexactDivision("leading coefficient does not divide")
            e = tuple(i - j for i, j in zip(er, ed))
            if sum(e) < floor:
                raise InexactDivision("quotient degree fell below the exact floor")
            c = cr // cd
            out[e] = out.get(e, 0) + c
            for em, cm in d.coeffs.items():
                k = tuple(i + j for i, j in zip(e, em))
                v = rem.get(k, 0) - c * cm
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
            steps += 1
            if steps > max_steps:
                raise InexactDivision("division did not terminate; not an exact multiple")
        return LaurentPoly(self.vars, out)

    # -- structure maps ---------------------------------------------------

    def substitute(self, assignments: Mapping[str, "LaurentPoly"], out_vars: tuple[str, ...] | None = None) -> "LaurentPoly":
        """Ring homomorphism: each assigned variable maps to its image,
        unassigned variables carry over to the output context by name.

        Negative powers of an assigned variable require its image to be a
        unit monomial (+-1 times a monomial).
        """
        if out_vars is None:
            out_vars = self.vars if not assignments else next(iter(assignments.values())).vars
        images: list[LaurentPoly] = []
        for name in self.vars:
            if name in assignments:
                img = assignments[name]
                if img.vars != out_vars:
                    raise ValueError(f"image of {name} not in output context {out_vars}")
                images.append(img)
            else:
                images.append(LaurentPoly.monomial(out_vars, 1, **{name: 1}))
        out = LaurentPoly.zero(out_vars)
        pow_cache: dict[tuple[int, int], LaurentPoly] = {}
        for e, c in self.coeffs.items():
            term = LaurentPoly.const(out_vars, c)
            for i, p in enumerate(e):
                if p == 0:
                    continue
                key = (i, p)
                if key not in pow_cache:
                    img = images[i]
                    if p < 0 and not img.is_unit_monomial():
                        raise ValueError(f"negative power of {self.vars[i]} needs a unit-monomial image")
                    pow_cache[key] = img ** p
                term = term * pow_cache[key]
            out = out + term
        return out

    def rename(self, out_vars: tuple[str, ...]) -> "LaurentPoly":
        """Embed into a (super)context containing all current variables."""
        idx = [out_vars.index(v) for v in self.vars]
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.coeffs.items():
            k = [0] * len(out_vars)
            for i, p in zip(idx, e):
                k[i] = p
            out[tuple(k)] = c
        return LaurentPoly(out_vars, out)

    def evaluate(self, values: Mapping[str, Fraction | int]) -> Fraction:
        total = Fraction(0)
        vals = [Fraction(values[v]) for v in self.vars]
        for e, c in self.coeffs.items():
            t = Fraction(c)
            for v, p in zip(vals, e):
                t *= v ** p
            total += t
        return total

    # -- truncation helpers ---------------------------------------------------

    def truncate_var(self, var: str, degree: int) -> "LaurentPoly":
        """Drop all monomials with exponent of ``var`` above ``degree``."""
        i = self.vars.index(var)
        return LaurentPoly(self.vars, {e: c for e, c in self.coeffs.items() if e[i] <= degree})

    def mul_trunc(self, other: "LaurentPoly", var: str, degree: int) -> "LaurentPoly":
        """Product, discarding monomials above ``degree`` in ``var``."""
        self._check(other)
        i = self.vars.index(var)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple[int, ...], int] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                if ea[i] + eb[i] > degree:
                    continue
                k = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(k, 0) + ca * cb
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return LaurentPoly(self.vars, out)

    # -- serialization ---------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form: graded-lex descending, explicit exponents.

        >>> LaurentPoly.from_terms(("x",), [(1, {}), (-1, {"x": 2})]).to_text()
        '-x^2 + 1'
        """
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, key=_grlex_key, reverse=True):
            c = self.coeffs[e]
            factors = []
            for name, p in zip(self.vars, e):
                if p == 1:
                    factors.append(name)
                elif p != 0:
                    factors.append(f"{name}^{p}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [[list(e), self.coeffs[e]] for e in sorted(self.coeffs, key=_grlex_key, reverse=True)],
        }


def _normalize_factor(vars: tuple[str, ...], v: tuple[int, ...]) -> tuple[tuple[int, ...], "LaurentPoly | None"]:
    """Normalize a denominator factor 1 - X^v so the exponent vector has a
    positive first nonzero entry.  Returns (vector, numerator adjustment).

    1 - X^v = -X^v (1 - X^-v), so flipping multiplies the numerator by
    -X^-v per unit of multiplicity.
    """
    nz = next((x for x in v if x), 0)
    if nz == 0:
        raise ValueError("denominator factor 1 - X^0 is zero")
    if nz > 0:
        return v, None
    flipped = tuple(-x for x in v)
    adj = LaurentPoly(vars, {flipped: -1})
    return flipped, adj


class RatFunc:
    """num / prod (1 - X^v)^m with the factored denominator kept explicit."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: Mapping[tuple[int, ...], int] | None = None, reduce: bool = True):
        den = dict(den or {})
        for v, m in list(den.items()):
            if m < 0:
                raise ValueError("negative multiplicity in denominator")
            if m == 0:
                del den[v]
        for v in list(den):
            w, adj = _normalize_factor(num.vars, v)
            if adj is not None:
                m = den.pop(v)
                num = num * (adj ** m)
                den[w] = den.get(w, 0) + m
        self.num = num
        self.den = den
        if reduce and den and not num.is_zero():
            self._cancel()
        if num.is_zero():
            self.den = {}

    def _cancel(self) -> None:
        num = self.num
        for v in sorted(self.den, key=_grlex_key):
            m = self.den[v]
            factor = LaurentPoly(num.vars, {(0,) * len(num.vars): 1, v: -1})
            while m > 0:
                try:
                    num = num.divexact(factor)
                    m -= 1
                except InexactDivision:
                    break
            if m:
                self.den[v] = m
            else:
                del self.den[v]
        self.num = num

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RatFunc":
        return cls(p, {})

    @classmethod
    def one(cls, vars: tuple[str, ...]) -> "RatFunc":
        return cls(LaurentPoly.const(vars, 1), {})

    @property
    def vars(self) -> tuple[str, ...]:
        return self.num.vars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def den_poly(self) -> LaurentPoly:
        out = LaurentPoly.const(self.vars, 1)
        for v, m in self.den.items():
            f = LaurentPoly(self.vars, {(0,) * len(self.vars): 1, v: -1})
            for _ in range(m):
                out = out * f
        return out

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, LaurentPoly):
            return RatFunc.from_poly(other)
        if isinstance(other, int):
            return RatFunc.from_poly(LaurentPoly.const(self.vars, other))
        raise TypeError(f"cannot combine RatFunc with {type(other)!r}")

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if self.num.vars != other.num.vars:
            raise ValueError("variable contexts differ")
        den: dict[tuple[int, ...], int] = dict(self.den)
        for v, m in other.den.items():
            den[v] = max(den.get(v, 0), m)
        a = self.num
        for v, m in den.items():
            extra = m - self.den.get(v, 0)
            if extra:
                f = LaurentPoly(self.vars, {(0,) * len(self.vars): 1, v: -1})
                for _ in range(extra):
                    a = a * f
        b = other.num
        for v, m in den.items():
            extra = m - other.den.get(v, 0)
            if extra:
                f = LaurentPoly(self.vars, {(0,) * len(self.vars): 1, v: -1})
                for _ in range(extra):
                    b = b * f
        return RatFunc(a + b, den)

    def __radd__(self, other) -> "RatFunc":
        return self.__add__(other)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        den = dict(self.den)
        for v, m in other.den.items():
            den[v] = den.get(v, 0) + m
        return RatFunc(self.num * other.num, den)

    __rmul__ = __mul__

    def divided_by_factors(self, factors: Mapping[tuple[int, ...], int]) -> "RatFunc":
        """Divide by prod (1 - X^v)^m given as a factor multiset."""
        den = dict(self.den)
        for v, m in factors.items():
            den[v] = den.get(v, 0) + m
        return RatFunc(self.num, den)

    def equals(self, other) -> bool:
        other = self._coerce(other)
        if self.num.vars != other.num.vars:
            return False
        # cross-multiply over the non-shared factors only
        a = self.num
        b = other.num
        for v, m in other.den.items():
            extra = m - min(m, self.den.get(v, 0))
            f = LaurentPoly(self.vars, {(0,) * len(self.vars): 1, v: -1})
            for _ in range(extra):
                a = a * f
        for v, m in self.den.items():
            extra = m - min(m, other.den.get(v, 0))
            f = LaurentPoly(self.vars, {(0,) * len(self.vars): 1, v: -1})
            for _ in range(extra):
                b = b * f
        return a == b

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RatFunc, LaurentPoly, int)):
            return NotImplemented
        return self.equals(other)

    def __hash__(self) -> int:
        raise TypeError("RatFunc is unhashable; compare with equals()")

    # -- structure maps ---------------------------------------------------

    def substitute(self, assignments: Mapping[str, LaurentPoly], out_vars: tuple[str, ...] | None = None) -> "RatFunc":
        """Substitute; denominator factor images must stay of the form
        1 - monomial (coefficient +1), which holds for monomial assignments.
        """
        num = self.num.substitute(assignments, out_vars)
        den: dict[tuple[int, ...], int] = {}
        for v, m in self.den.items():
            mono = LaurentPoly(self.vars, {v: 1}).substitute(assignments, out_vars)
            if len(mono.coeffs) != 1:
                raise ValueError("denominator factor image is not a monomial")
            (e, c), = mono.coeffs.items()
            if c != 1:
                raise ValueError("denominator factor image has coefficient != 1")
            if not any(e):
                raise ZeroDivisionError("substitution sends a denominator factor to zero")
            den[e] = den.get(e, 0) + m
        return RatFunc(num, den)

    def evaluate(self, values: Mapping[str, Fraction | int]) -> Fraction:
        d = self.den_poly().evaluate(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(values) / d

    def truncate(self, var: str, degree: int) -> LaurentPoly:
        """Exact series expansion through ``var``-degree ``degree``.

        Every denominator factor must have positive degree in ``var``; each
        (1 - X^v)^-m is expanded geometrically and multiplied in truncated.
        """
        i = self.vars.index(var)
        out = self.num.truncate_var(var, degree)
        for v, m in sorted(self.den.items(), key=lambda kv: _grlex_key(kv[0])):
            if v[i] <= 0:
                raise TruncationError(
                    f"denominator factor 1 - X^{v} has no positive {var}-degree; cannot expand")
            terms: dict[tuple[int, ...], int] = {}
            k = 0
            while k * v[i] <= degree + max(0, -out.low_degree(var)):
                terms[tuple(k * x for x in v)] = comb(k + m - 1, m - 1)
                k += 1
            out = out.mul_trunc(LaurentPoly(self.vars, terms), var, degree)
        return out

    # -- serialization ---------------------------------------------------

    def to_text(self) -> str:
        if not self.den:
            return self.num.to_text()
        factors = []
        for v in sorted(self.den, key=_grlex_key):
            f = LaurentPoly(self.vars, {(0,) * len(self.vars): 1, v: -1}).to_text()
            m = self.den[v]
            factors.append(f"({f})" + (f"^{m}" if m > 1 else ""))
        return f"({self.num.to_text()}) / ({'*'.join(factors)})"

    def __repr__(self) -> str:
        return f"RatFunc({self.to_text()!r})"


# -- module-level operation names -------------------------------------------

def add(f, g):
    return f + g


def mul(f, g):
    return f * g


def divexact(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f.divexact(g)


def equals(f, g) -> bool:
    if isinstance(f, LaurentPoly) and isinstance(g, LaurentPoly):
        return f == g
    if isinstance(f, LaurentPoly):
        f = RatFunc.from_poly(f)
    return f.equals(g)


def substitute(f, assignments, out_vars=None):
    return f.substitute(assignments, out_vars)


def truncate(f: RatFunc, var: str = "x", degree: int = 10) -> LaurentPoly:
    if isinstance(f, LaurentPoly):
        return f.truncate_var(var, degree)
    return f.truncate(var, degree)


def one_minus(vars: tuple[str, ...], **powers: int) -> LaurentPoly:
    """The binomial 1 - X^powers, the building block of every denominator.

    >>> one_minus(("x", "q"), x=1, q=7).to_text()
    '-x*q^7 + 1'
    """
    e = [0] * len(vars)
    for name, p in powers.items():
        e[vars.index(name)] += p
    if not any(e):
        return LaurentPoly.zero(vars)  # 1 - X^0 collapses to 0
    return LaurentPoly(vars, {(0,) * len(vars): 1, tuple(e): -1})


if __name__ == "__main__":
    import doctest

    doctest.testmod()
