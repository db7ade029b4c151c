"""Rational functions over F_q(t), stored fully reduced.

Invariant: denominator monic and coprime to the numerator; zero is 0/1.
These carry the exponential coefficients, so the arithmetic must stay
exact at denominator degrees in the thousands; everything reduces to
Poly operations on the kernel backend.
"""

from __future__ import annotations

from .errors import DivisionByZero, ParseError
from .field import FieldElement, FieldSpec
from .poly import Poly, format_poly, parse_poly


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None, reduce: bool = True):
        if den is None:
            den = Poly.one(num.field, num.var)
        assert num.field == den.field, "field mismatch"
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if reduce:
            if num.is_zero():
                den = Poly.one(num.field, num.var)
            else:
                g = num.gcd(den)
                if g.deg > 0:
                    num = num // g
                    den = den // g
                if not den.is_monic():
                    s = den.lc().inverse()
                    num = num * s
                    den = den * s
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec, var: str = "t"):
        return cls(Poly.zero(field, var), Poly.one(field, var), reduce=False)

    @classmethod
    def one(cls, field: FieldSpec, var: str = "t"):
        return cls(Poly.one(field, var), Poly.one(field, var), reduce=False)

    @classmethod
    def of(cls, value, field: FieldSpec = None, var: str = "t"):
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, Poly):
            return cls(value)
        if isinstance(value, FieldElement):
            return cls(Poly.constant(value.field, value, var))
        if isinstance(value, int) and field is not None:
            return cls(Poly.constant(field, field.element(value % field.p), var))
        raise ParseError(f"cannot coerce {value!r} to a rational function")

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.deg == 0

    @property
    def deg(self) -> int:
        """deg(num) - deg(den); the zero function reports a large negative."""
        if self.is_zero():
            return -(10**9)
        return self.num.deg - self.den.deg

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, FieldElement)):
            return RatFunc.of(other)
        if isinstance(other, int):
            return RatFunc.of(other, self.field, self.num.var)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        # reduce through the denominator gcd to keep intermediates small
        g = self.den.gcd(o.den)
        if g.deg == 0:
            num = self.num * o.den + o.num * self.den
            return RatFunc(num, self.den * o.den)
        da = self.den // g
        db = o.den // g
        num = self.num * db + o.num * da
        return RatFunc(num, da * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return RatFunc.zero(self.field, self.num.var)
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n1 = self.num // g1 if g1.deg > 0 else self.num
        d2 = o.den // g1 if g1.deg > 0 else o.den
        n2 = o.num // g2 if g2.deg > 0 else o.num
        d1 = self.den // g2 if g2.deg > 0 else self.den
        return RatFunc(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        r = RatFunc.one(self.field, self.num.var)
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def p_power(self) -> "RatFunc":
        return RatFunc(self.num.p_power(), self.den.p_power(), reduce=False)

    def q_power(self) -> "RatFunc":
        out = self
        for _ in range(self.field.e):
            out = out.p_power()
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return format_ratfunc(self)


def format_ratfunc(r: RatFunc) -> str:
    ntext = format_poly(r.num)
    if r.den.deg == 0 and r.den.is_monic():
        return ntext
    if "+" in ntext and not (ntext.startswith("(") and ntext.endswith(")")):
        ntext = f"({ntext})"
    return f"{ntext}/({format_poly(r.den)})"


def parse_ratfunc(field: FieldSpec, text: str, var: str = "t") -> RatFunc:
    s = text.replace(" ", "")
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            num = parse_poly(field, _strip_parens(s[:i]), var)
            den = parse_poly(field, _strip_parens(s[i + 1 :]), var)
            return RatFunc(num, den)
    return RatFunc(parse_poly(field, s, var))


def _strip_parens(s: str) -> str:
    while s.startswith("(") and s.endswith(")"):
        depth = 0
        ok = True
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0 and i != len(s) - 1:
                    ok = False
                    break
        if not ok:
            break
        s = s[1:-1]
    return s
