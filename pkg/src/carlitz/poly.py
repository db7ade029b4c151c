"""Univariate polynomials over F_q: the ring A = F_q[t].

Coefficients are stored low-to-high as int16 code arrays with no
trailing zeros; the zero polynomial is the empty array. Multiplication
and division go through the selected kernel backend.
"""

from __future__ import annotations

import hashlib

import numpy as np

from . import kernels
from .errors import DivisionByZero, ParseError
from .field import FieldElement, FieldSpec, _split_terms


def _trim(c: np.ndarray) -> np.ndarray:
    n = len(c)
    while n > 0 and c[n - 1] == 0:
        n -= 1
    return c[:n]


class Poly:
    """Polynomial over a FieldSpec in the variable `var` (display only)."""

    __slots__ = ("field", "c", "var")

    def __init__(self, field: FieldSpec, coeffs=(), var: str = "t"):
        self.field = field
        arr = np.asarray(coeffs, dtype=np.int16)
        if arr.ndim != 1:
            raise ValueError("coefficient vector expected")
        self.c = _trim(arr.copy())
        self.var = var

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field, var="t"):
        return cls(field, (), var)

    @classmethod
    def one(cls, field, var="t"):
        return cls(field, (1,), var)

    @classmethod
    def x(cls, field, var="t"):
        return cls(field, (0, 1), var)

    @classmethod
    def monomial(cls, field, k: int, coeff=1, var="t"):
        code = coeff.code if isinstance(coeff, FieldElement) else int(coeff)
        c = np.zeros(k + 1, dtype=np.int16)
        c[k] = code
        return cls(field, c, var)

    @classmethod
    def constant(cls, field, coeff, var="t"):
        code = coeff.code if isinstance(coeff, FieldElement) else int(coeff)
        return cls(field, (code,) if code else (), var)

    # -- basic structure ---------------------------------------------------

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def lc(self) -> FieldElement:
        if self.is_zero():
            return self.field.zero()
        return FieldElement(self.field, int(self.c[-1]))

    def is_monic(self) -> bool:
        return not self.is_zero() and self.c[-1] == 1

    def coeff(self, k: int) -> FieldElement:
        code = int(self.c[k]) if 0 <= k < len(self.c) else 0
        return FieldElement(self.field, code)

    def monic(self) -> "Poly":
        if self.is_zero() or self.c[-1] == 1:
            return self
        s = self.field.inv(int(self.c[-1]))
        return Poly(self.field, self.field.mul_table[s, self.c], self.var)

    def _wrap(self, c) -> "Poly":
        return Poly(self.field, c, self.var)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            assert self.field == other.field, "field mismatch"
            return other
        if isinstance(other, FieldElement):
            return Poly.constant(self.field, other, self.var)
        if isinstance(other, int):
            return Poly.constant(
                self.field, self.field.element(other % self.field.p), self.var
            )
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        la, lb = len(self.c), len(o.c)
        n = max(la, lb)
        a = np.zeros(n, dtype=np.int16)
        b = np.zeros(n, dtype=np.int16)
        a[:la] = self.c
        b[:lb] = o.c
        return self._wrap(self.field.add_table[a, b])

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(self.field.neg_table[self.c])

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
            return Poly.zero(self.field, self.var)
        f = self.field
        return self._wrap(kernels.conv(self.c, o.c, f.add_table, f.mul_table))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        r = Poly.one(self.field, self.var)
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def shift(self, k: int) -> "Poly":
        """Multiply by var^k, k >= 0."""
        if self.is_zero() or k == 0:
            return self if k >= 0 else self
        c = np.zeros(len(self.c) + k, dtype=np.int16)
        c[k:] = self.c
        return self._wrap(c)

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise DivisionByZero("polynomial division by zero")
        f = self.field
        q, r = kernels.poly_divmod(
            self.c, o.c, f.add_table, f.mul_table, f.neg_table, f.inv_table
        )
        return self._wrap(q), self._wrap(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = self._coerce(other)
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and len(self.c) == len(other.c)
            and bool(np.all(self.c == other.c))
        )

    def __hash__(self):
        return hash((self.field, self.c.tobytes()))

    def __bool__(self):
        return not self.is_zero()

    # -- evaluation and maps -------------------------------------------------

    def eval(self, a: FieldElement) -> FieldElement:
        f = self.field
        acc = 0
        for k in range(len(self.c) - 1, -1, -1):
            acc = f.add(f.mul(acc, a.code), int(self.c[k]))
        return FieldElement(f, acc)

    def derivative(self) -> "Poly":
        if self.deg <= 0:
            return Poly.zero(self.field, self.var)
        p = self.field.p
        out = np.zeros(len(self.c) - 1, dtype=np.int16)
        for k in range(1, len(self.c)):
            m = k % p
            code = int(self.c[k])
            acc = 0
            for _ in range(m):
                acc = self.field.add(acc, code)
            out[k - 1] = acc
        return self._wrap(out)

    def p_power(self) -> "Poly":
        """self**p, using that the p-th power map is additive in char p."""
        p = self.field.p
        if self.is_zero():
            return self
        out = np.zeros((len(self.c) - 1) * p + 1, dtype=np.int16)
        for k in range(len(self.c)):
            if self.c[k]:
                out[k * p] = self.field.pow(int(self.c[k]), p)
        return self._wrap(out)

    def q_power(self) -> "Poly":
        out = self
        for _ in range(self.field.e):
            out = out.p_power()
        return out

    # -- gcd family ------------------------------------------------------------

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "Poly"):
        """Returns (g, u, v) monic g with u*self + v*other = g."""
        f = self.field
        a, b = self, self._coerce(other)
        u0, v0 = Poly.one(f, self.var), Poly.zero(f, self.var)
        u1, v1 = Poly.zero(f, self.var), Poly.one(f, self.var)
        while not b.is_zero():
            q, r = divmod(a, b)
            a, b = b, r
            u0, u1 = u1, u0 - q * u1
            v0, v1 = v1, v0 - q * v1
        if a.is_zero():
            return a, u0, v0
        s = a.lc().inverse()
        return a.monic(), u0 * s, v0 * s

    def powmod(self, n: int, m: "Poly") -> "Poly":
        if n < 0:
            raise ValueError("negative exponent")
        r = Poly.one(self.field, self.var) % m
        base = self % m
        while n:
            if n & 1:
                r = (r * base) % m
            base = (base * base) % m
            n >>= 1
        return r

    def is_squarefree(self) -> bool:
        if self.is_zero():
            return False
        d = self.derivative()
        if d.is_zero():
            # constant: squarefree; otherwise a p-th power
            return self.deg == 0
        return self.gcd(d).deg == 0

    def is_irreducible(self) -> bool:
        """Rabin's test: t^(q^d) = t mod f and no lower Frobenius fix."""
        d = self.deg
        if d <= 0:
            return False
        if d == 1:
            return True
        q = self.field.q
        x = Poly.x(self.field, self.var)
        for r in _prime_divisors(d):
            h = x.powmod(q ** (d // r), self) - x
            if self.gcd(h).deg != 0:
                return False
        return x.powmod(q**d, self) == x % self

    def factor(self):
        """Full factorization into monic irreducibles.

        Returns a list of (irreducible Poly, multiplicity), sorted by
        (degree, coefficient tuple) so output is reproducible. Random
        splitting choices come from a generator seeded by the input.
        """
        if self.is_zero():
            raise DivisionByZero("cannot factor the zero polynomial")
        out = {}
        rng = np.random.default_rng(_seed_from(self))
        stack = [self.monic()]
        # strip repeated factors first via gcd with the derivative
        work = []
        for f in stack:
            work.extend(_squarefree_decompose(f))
        for mult, f in work:
            for g in _factor_squarefree(f, rng):
                out[g] = out.get(g, 0) + mult
        items = sorted(out.items(), key=lambda kv: (kv[0].deg, tuple(kv[0].c)))
        return items

    # -- text ---------------------------------------------------------------

    def __repr__(self):
        return format_poly(self)

    def text(self) -> str:
        return format_poly(self)


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _seed_from(f: Poly) -> int:
    h = hashlib.sha256()
    h.update(str(f.field.q).encode())
    h.update(f.c.tobytes())
    return int.from_bytes(h.digest()[:8], "little")


def _squarefree_decompose(f: Poly):
    """Returns (multiplicity, squarefree part) pairs covering monic f."""
    field = f.field
    p = field.p
    out = []
    if f.deg <= 0:
        return out
    fp = f.derivative()
    if fp.is_zero():
        # every multiplicity is divisible by p, so f is a p-th power
        for mult, part in _squarefree_decompose(_pth_root_poly(f)):
            out.append((mult * p, part))
        return out
    rest = f.gcd(fp)
    w = f // rest
    i = 1
    while w.deg > 0:
        y = w.gcd(rest)
        z = w // y
        if z.deg > 0:
            out.append((i, z))
        w = y
        rest = rest // y
        i += 1
    # what is left of rest collects the factors with p | multiplicity
    if rest.deg > 0:
        out.extend(_squarefree_decompose(rest))
    return out


def _pth_root_poly(f: Poly) -> Poly:
    """Inverse of p_power; valid when f is a p-th power (f' = 0)."""
    field = f.field
    p = field.p
    n = f.deg // p
    c = np.zeros(n + 1, dtype=np.int16)
    root_exp = p ** (field.e - 1)  # x -> x^(p^(e-1)) inverts x -> x^p
    for k in range(n + 1):
        code = int(f.c[k * p]) if k * p < len(f.c) else 0
        c[k] = field.pow(code, root_exp) if code else 0
    return Poly(field, c, f.var)


def _factor_squarefree(f: Poly, rng):
    """Distinct-degree then equal-degree splitting of a squarefree monic f."""
    field = f.field
    q = field.q
    out = []
    x = Poly.x(field, f.var)
    h = x
    d = 0
    rest = f
    while rest.deg > 2 * (d + 1) - 1 and rest.deg > 0:
        d += 1
        h = h.powmod(q, rest)
        g = rest.gcd(h - x)
        if g.deg > 0:
            out.extend(_equal_degree_split(g, d, rng))
            rest = rest // g
            h = h % rest
    if rest.deg > 0:
        out.append(rest)
    return out


def _equal_degree_split(f: Poly, d: int, rng):
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
    field = f.field
    if f.deg == d:
        return [f]
    q = field.q
    n = f.deg
    while True:
        codes = rng.integers(0, q, size=n)
        r = Poly(field, codes.astype(np.int16), f.var)
        if r.deg < 1:
            continue
        g = f.gcd(r)
        if 0 < g.deg < f.deg:
            pass
        elif q % 2 == 1:
            g = f.gcd(r.powmod((q**d - 1) // 2, f) - 1)
        else:
            # char 2: use the F_2-trace map of F_{q^d}
            e2 = d * field.e
            tr = Poly.zero(field, f.var)
            cur = r % f
            for _ in range(e2):
                tr = tr + cur
                cur = (cur * cur) % f
            g = f.gcd(tr)
        if 0 < g.deg < f.deg:
            return _equal_degree_split(g, d, rng) + _equal_degree_split(
                f // g, d, rng
            )


# -- text io ------------------------------------------------------------------


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    field = f.field
    var = f.var
    parts = []
    for k in range(f.deg, -1, -1):
        code = int(f.c[k])
        if code == 0:
            continue
        ctext = field.format(code)
        if k == 0:
            parts.append(f"({ctext})" if "+" in ctext else ctext)
            continue
        xpart = var if k == 1 else f"{var}^{k}"
        if code == 1:
            parts.append(xpart)
        elif "+" in ctext:
            parts.append(f"({ctext})*{xpart}")
        else:
            parts.append(f"{ctext}*{xpart}")
    return "+".join(parts)


def parse_poly(field: FieldSpec, text: str, var: str = "t") -> Poly:
    """Parse 't^3+2*t+1' or '(w+1)*t^2+w' into a Poly."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    if s == "0":
        return Poly.zero(field, var)
    result = Poly.zero(field, var)
    for sign, term in _split_terms(s):
        coeff, k = _parse_term(field, term, var)
        if sign < 0:
            coeff = -coeff
        result = result + Poly.monomial(field, k, coeff, var)
    return result


def _parse_term(field: FieldSpec, term: str, var: str):
    factors = _split_factors(term)
    coeff = field.one()
    k = 0
    seen_var = False
    for fac in factors:
        if not fac:
            raise ParseError(f"empty factor in {term!r}")
        if fac.startswith("(") and fac.endswith(")"):
            coeff = coeff * field.element(field.parse(fac[1:-1]))
        elif fac[0] == var[0] and (len(fac) == 1 or fac[1] == "^"):
            if seen_var:
                raise ParseError(f"repeated variable in {term!r}")
            seen_var = True
            k = 1 if len(fac) == 1 else int(fac[2:])
        elif fac[0] == "w":
            coeff = coeff * field.element(field.parse(fac))
        elif fac.isdigit():
            coeff = coeff * field.element(int(fac) % field.p)
        else:
            raise ParseError(f"bad factor {fac!r} in term {term!r}")
    return coeff, k


def _split_factors(term: str):
    out = []
    depth = 0
    start = 0
    for i, ch in enumerate(term):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(term[start:i])
            start = i + 1
    out.append(term[start:])
    return out
