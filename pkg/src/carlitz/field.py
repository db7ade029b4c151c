"""Arithmetic in F_q, q = p^e, with table-backed element codes.

Elements are stored as integer codes 0..q-1: the base-p packing of the
coordinate vector in the power basis of a generator w, so code
c0 + c1*p + ... corresponds to c0 + c1*w + c2*w^2 + ...  All arithmetic
on codes goes through dense q-by-q numpy tables, which is what the hot
kernels consume.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import DivisionByZero, ParseError

_MAX_Q = 64
_MAX_P = 13


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


def _fp_polymul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _fp_polymod(a, m, p):
    # m monic; reduce a in place
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - dm
            for j in range(dm + 1):
                a[shift + j] = (a[shift + j] - lead * m[j]) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_trial_irreducible(m, p) -> bool:
    """Trial division by all monic polynomials of degree <= deg(m)/2."""
    deg = len(m) - 1
    if deg <= 0:
        return False
    for d in range(1, deg // 2 + 1):
        for k in range(p**d):
            div = []
            kk = k
            for _ in range(d):
                div.append(kk % p)
                kk //= p
            div.append(1)
            if not _fp_polymod(m, div, p):
                return False
    return True


def _default_modulus(p: int, e: int):
    """Lex-smallest monic irreducible of degree e over F_p."""
    if e == 1:
        return [0, 1]
    for k in range(p**e):
        tail = []
        kk = k
        for _ in range(e):
            tail.append(kk % p)
            kk //= p
        cand = tail + [1]
        if _fp_trial_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")


_SPEC_CACHE: dict = {}


class FieldSpec:
    """The field F_q together with its operation tables.

    p: characteristic (prime, <= 13)
    e: extension degree over the prime field
    modulus: monic degree-e polynomial over F_p defining the generator w,
        as a low-to-high coefficient list
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not _is_prime(p) or p > _MAX_P:
            raise ParseError(f"p={p} must be a prime <= {_MAX_P}")
        if e < 1:
            raise ParseError("extension degree must be >= 1")
        q = p**e
        if q > _MAX_Q:
            raise ParseError(f"q={q} exceeds the supported bound {_MAX_Q}")
        if modulus is None:
            modulus = _default_modulus(p, e)
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise ParseError("modulus must be monic of degree e")
        if e > 1 and not _fp_trial_irreducible(modulus, p):
            raise ParseError("modulus is reducible over F_p")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = tuple(modulus)
        self._build_tables()

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        coords = [[(c // p**k) % p for k in range(e)] for c in range(q)]
        add = np.zeros((q, q), dtype=np.int16)
        mul = np.zeros((q, q), dtype=np.int16)
        for a in range(q):
            for b in range(q):
                s = [(coords[a][k] + coords[b][k]) % p for k in range(e)]
                add[a, b] = sum(s[k] * p**k for k in range(e))
                prod = _fp_polymul(coords[a], coords[b], p)
                prod = _fp_polymod(prod, list(self.modulus), p)
                mul[a, b] = sum(c * p**k for k, c in enumerate(prod))
        neg = np.zeros(q, dtype=np.int16)
        inv = np.zeros(q, dtype=np.int16)
        for a in range(q):
            neg_coords = [(-coords[a][k]) % p for k in range(e)]
            neg[a] = sum(c * p**k for k, c in enumerate(neg_coords))
        for a in range(1, q):
            for b in range(1, q):
                if mul[a, b] == 1:
                    inv[a] = b
                    break
        self.add_table = add
        self.mul_table = mul
        self.neg_table = neg
        self.inv_table = inv

    # -- code-level operations ------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inv(0) in F_q")
        return int(self.inv_table[a])

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        r, base = 1, a
        while n:
            if n & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            n >>= 1
        return r

    def frobenius(self, a: int) -> int:
        # x -> x^q, the identity map on F_q itself
        return self.pow(a, self.q)

    def coords(self, a: int):
        return [(a // self.p**k) % self.p for k in range(self.e)]

    def from_coords(self, cs) -> int:
        return sum((int(c) % self.p) * self.p**k for k, c in enumerate(cs))

    # -- element layer ---------------------------------------------------

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self and value.field != self:
                raise ParseError("element belongs to a different field")
            return value
        if isinstance(value, str):
            return FieldElement(self, self.parse(value))
        code = int(value)
        if self.e == 1:
            code %= self.p
        if not 0 <= code < self.q:
            raise ParseError(f"code {value} out of range for q={self.q}")
        return FieldElement(self, code)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self):
        return [FieldElement(self, c) for c in range(self.q)]

    # -- text ------------------------------------------------------------

    def parse(self, text: str) -> int:
        """Parse 'w+1', '2*w^3+w', or a plain integer into a code."""
        s = text.replace(" ", "")
        if not s:
            raise ParseError("empty field element")
        coords = [0] * self.e
        for sign, term in _split_terms(s):
            m = re.fullmatch(r"(?:(\d+)\*?)?(w)(?:\^(\d+))?|(\d+)", term)
            if not m:
                raise ParseError(f"bad field element term: {term!r}")
            if m.group(4) is not None:
                c, k = int(m.group(4)), 0
            else:
                c = int(m.group(1)) if m.group(1) else 1
                k = int(m.group(3)) if m.group(3) else 1
            if k >= self.e:
                raise ParseError(
                    f"w^{k} out of range for extension degree {self.e}"
                )
            coords[k] = (coords[k] + sign * c) % self.p
        return self.from_coords(coords)

    def format(self, a: int) -> str:
        if self.e == 1:
            return str(a % self.p)
        cs = self.coords(a)
        parts = []
        for k in range(self.e - 1, -1, -1):
            c = cs[k]
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}w" if k == 1 else f"{head}w^{k}")
        return "+".join(parts) if parts else "0"

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.q}(p={self.p},e={self.e})"


def field(p: int, e: int = 1, modulus=None) -> FieldSpec:
    """Shared-instance constructor so tables are built once per field."""
    key = (p, e, None if modulus is None else tuple(int(c) for c in modulus))
    spec = _SPEC_CACHE.get(key)
    if spec is None:
        spec = FieldSpec(p, e, modulus)
        _SPEC_CACHE[key] = spec
    return spec


def _split_terms(s: str):
    """Split an expression on top-level +/- into (sign, term) pairs."""
    out = []
    i, n = 0, len(s)
    sign = 1
    if s[0] == "+":
        i = 1
    elif s[0] == "-":
        sign, i = -1, 1
    start = i
    depth = 0
    while i < n:
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and s[i - 1] != "^":
            out.append((sign, s[start:i]))
            sign = 1 if ch == "+" else -1
            start = i + 1
        i += 1
    out.append((sign, s[start:]))
    if any(not t for _, t in out):
        raise ParseError(f"dangling sign in {s!r}")
    return out


class FieldElement:
    """An element of a FieldSpec; immutable, operator-overloaded."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        self.field = field
        self.code = int(code)

    def _check(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.field.element(other % self.field.p)
        if not isinstance(other, FieldElement):
            return NotImplemented
        assert self.field == other.field, "field mismatch"
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.code, o.code))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.code, o.code))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.code, o.code))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self * FieldElement(self.field, self.field.inv(o.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def frobenius(self) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.code))

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element(other % self.field.p)
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.code == other.code
        )

    def __hash__(self):
        return hash((self.field, self.code))

    def __repr__(self):
        return self.field.format(self.code)
