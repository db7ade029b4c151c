"""Truncated Laurent series over residue extensions F_{q^d}.

These model the completed local fields at the places over infinity. A
series carries an absolute precision: it is known modulo u^prec, and
every operation propagates that honestly (no silent exact zeros).

Coefficients live in a ResidueField: a degree-d extension of the base
F_q presented by an irreducible modulus, elements stored as length-d
int16 coordinate vectors in the power basis of the class z of t.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels, linalg
from .errors import (
    DivisionByZero,
    NoRoot,
    PrecisionExhausted,
    RamifiedRoot,
    ZeroDivision,
)
from .field import FieldSpec
from .poly import Poly

INF = math.inf


class ResidueField:
    """F_{q^d} over a base FieldSpec, with tables for the series kernels."""

    def __init__(self, base: FieldSpec, modulus: Poly = None, d: int = None):
        if modulus is None:
            if d is None:
                raise ValueError("need a modulus or a degree")
            modulus = default_tower_modulus(base, d)
        assert modulus.field == base, "modulus must live over the base field"
        if not modulus.is_monic():
            raise ValueError("modulus must be monic")
        if d is not None and modulus.deg != d:
            raise ValueError("modulus degree disagrees with d")
        if modulus.deg > 1 and not modulus.is_irreducible():
            raise ValueError("modulus is reducible")
        self.base = base
        self.d = modulus.deg
        self.modulus = modulus
        self._build()

    def _build(self):
        base, d = self.base, self.d
        x = Poly.x(base, "z")
        mod = Poly(base, self.modulus.c, "z")
        red = np.zeros((max(2 * d - 1, 1), d), dtype=np.int16)
        for k in range(2 * d - 1):
            r = Poly.monomial(base, k, 1, "z") % mod
            red[k, : len(r.c)] = r.c
        self.red = red
        frob = np.zeros((d, d), dtype=np.int16)
        for k in range(d):
            # column k holds (z^k)^q = z^(kq) reduced mod the modulus
            r = x.powmod(base.q * k, mod)
            frob[: len(r.c), k] = r.c
        self.frob_matrix = frob
        pmat = np.zeros((d, d), dtype=np.int16)
        for k in range(d):
            r = x.powmod(base.p * k, mod)
            pmat[: len(r.c), k] = r.c
        self.pfrob_matrix_t = np.ascontiguousarray(pmat.T)
        self.pfrob_codes = np.array(
            [base.pow(c, base.p) for c in range(base.q)], dtype=np.int16
        )
        self.modulus_z = mod

    # -- element helpers (length-d int16 vectors) -------------------------

    def zero_el(self):
        return np.zeros(self.d, dtype=np.int16)

    def one_el(self):
        v = np.zeros(self.d, dtype=np.int16)
        v[0] = 1
        return v

    def gen_el(self):
        v = np.zeros(self.d, dtype=np.int16)
        if self.d == 1:
            raise ValueError("prime residue field has no tower generator")
        v[1] = 1
        return v

    def from_base(self, code: int):
        v = np.zeros(self.d, dtype=np.int16)
        v[0] = code
        return v

    def el(self, value):
        if isinstance(value, np.ndarray):
            out = np.zeros(self.d, dtype=np.int16)
            out[: len(value)] = value
            return out
        if isinstance(value, (list, tuple)):
            return self.el(np.asarray(value, dtype=np.int16))
        return self.from_base(int(value))

    def add_el(self, a, b):
        return self.base.add_table[a, b]

    def neg_el(self, a):
        return self.base.neg_table[a]

    def p_power_rows(self, rows):
        """x -> x^p on every element row at once; semi-linear over F_p."""
        A = self.pfrob_codes[rows]
        if self.d == 1:
            return A
        return kernels.matmul(
            A, self.pfrob_matrix_t, self.base.add_table, self.base.mul_table
        )

    def mul_el(self, a, b):
        A = a.reshape(1, -1)
        B = b.reshape(1, -1)
        out = kernels.tower_conv(
            A, B, self.base.add_table, self.base.mul_table, self.red
        )
        return out[0]

    def inv_el(self, a):
        if not a.any():
            raise DivisionByZero("inv(0) in the residue field")
        pa = Poly(self.base, a, "z")
        g, u, _ = pa.xgcd(self.modulus_z)
        assert g.deg == 0, "modulus not irreducible?"
        u = u * g.lc().inverse()
        out = np.zeros(self.d, dtype=np.int16)
        out[: len(u.c)] = u.c
        return out

    def pow_el(self, a, n: int):
        if n < 0:
            return self.pow_el(self.inv_el(a), -n)
        r = self.one_el()
        base = a.copy()
        while n:
            if n & 1:
                r = self.mul_el(r, base)
            base = self.mul_el(base, base)
            n >>= 1
        return r

    def frob_el(self, a, times: int = 1):
        if self.d == 1:
            return a.copy()
        out = a
        for _ in range(times % self.d):
            out = linalg.matvec(self.base, self.frob_matrix, out)
        return out.copy() if out is a else out

    @property
    def order(self) -> int:
        return self.base.q**self.d

    def elements(self):
        """All q^d coordinate vectors, lexicographic (small fields only)."""
        out = []
        for code in range(self.order):
            v = np.zeros(self.d, dtype=np.int16)
            c = code
            for k in range(self.d):
                v[k] = c % self.base.q
                c //= self.base.q
            out.append(v)
        return out

    def rth_root_el(self, a, r: int):
        """Some b with b^r = a, or raise NoRoot. Deterministic choice."""
        if not a.any():
            return self.zero_el()
        Q = self.order
        g = math.gcd(r, Q - 1)
        if g == 1:
            return self.pow_el(a, pow(r, -1, Q - 1))
        if Q > 4096:
            raise NoRoot("field too large for discrete-log root extraction")
        gen = self._mult_generator()
        # baby enumeration of the cyclic group
        cur = self.one_el()
        dlog = None
        for k in range(Q - 1):
            if np.array_equal(cur, a):
                dlog = k
                break
            cur = self.mul_el(cur, gen)
        assert dlog is not None
        if dlog % g != 0:
            raise NoRoot(f"element is not a {r}-th power")
        m = (Q - 1) // g
        beta = (dlog // g) * pow(r // g, -1, m) % m
        return self.pow_el(gen, beta)

    def _mult_generator(self):
        Q = self.order
        factors = set()
        n = Q - 1
        d2 = 2
        while d2 * d2 <= n:
            if n % d2 == 0:
                factors.add(d2)
                while n % d2 == 0:
                    n //= d2
            d2 += 1
        if n > 1:
            factors.add(n)
        for cand in self.elements():
            if not cand.any():
                continue
            if all(
                not np.array_equal(
                    self.pow_el(cand, (Q - 1) // f), self.one_el()
                )
                for f in factors
            ):
                return cand
        raise AssertionError("no multiplicative generator found")

    def format_el(self, a) -> str:
        if self.d == 1:
            return self.base.format(int(a[0]))
        parts = []
        for k in range(self.d - 1, -1, -1):
            code = int(a[k])
            if code == 0:
                continue
            ctext = self.base.format(code)
            if k == 0:
                parts.append(f"({ctext})" if "+" in ctext else ctext)
            else:
                zpart = "z" if k == 1 else f"z^{k}"
                if code == 1:
                    parts.append(zpart)
                elif "+" in ctext:
                    parts.append(f"({ctext})*{zpart}")
                else:
                    parts.append(f"{ctext}*{zpart}")
        return "+".join(parts) if parts else "0"

    def __eq__(self, other):
        return (
            isinstance(other, ResidueField)
            and self.base == other.base
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.base, self.modulus))

    def __repr__(self):
        return f"F_{self.order}" + (f"[z]/({self.modulus_z})" if self.d > 1 else "")


def default_tower_modulus(base: FieldSpec, d: int) -> Poly:
    """Lex-smallest monic irreducible of degree d over the base."""
    if d == 1:
        return Poly.x(base)
    q = base.q
    for tail_code in range(q**d):
        coeffs = np.zeros(d + 1, dtype=np.int16)
        c = tail_code
        for k in range(d):
            coeffs[k] = c % q
            c //= q
        coeffs[d] = 1
        cand = Poly(base, coeffs)
        if cand.is_irreducible():
            return cand
    raise AssertionError("no irreducible modulus found")


class LaurentSeries:
    """Known modulo u^prec; coeffs rows are the tower coordinates.

    Invariants: len(coeffs) == prec - val with a nonzero leading row, or
    the series is the zero marker (empty coeffs, val == prec).
    """

    __slots__ = ("rf", "val", "coeffs", "prec")

    def __init__(self, rf: ResidueField, val: int, coeffs, prec: int):
        # use make() for normalized construction
        self.rf = rf
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    # -- constructors -------------------------------------------------------

    @staticmethod
    def make(rf: ResidueField, val: int, coeffs, prec: int) -> "LaurentSeries":
        arr = np.asarray(coeffs, dtype=np.int16)
        if arr.ndim == 1:
            arr = arr.reshape(-1, rf.d)
        n = max(0, prec - val)
        buf = np.zeros((n, rf.d), dtype=np.int16)
        take = min(n, len(arr))
        if take > 0:
            buf[:take] = arr[:take]
        lead = 0
        while lead < n and not buf[lead].any():
            lead += 1
        if lead == n:
            return LaurentSeries(rf, prec, np.zeros((0, rf.d), np.int16), prec)
        return LaurentSeries(rf, val + lead, buf[lead:].copy(), prec)

    @staticmethod
    def zero(rf: ResidueField, prec: int) -> "LaurentSeries":
        return LaurentSeries(rf, prec, np.zeros((0, rf.d), np.int16), prec)

    @staticmethod
    def monomial(rf: ResidueField, coeff, k: int, prec: int) -> "LaurentSeries":
        c = rf.el(coeff)
        return LaurentSeries.make(rf, k, c.reshape(1, -1), prec)

    @staticmethod
    def one(rf: ResidueField, prec: int) -> "LaurentSeries":
        return LaurentSeries.monomial(rf, 1, 0, prec)

    @staticmethod
    def from_rows(rf, val, rows, prec):
        return LaurentSeries.make(rf, val, rows, prec)

    # -- structure ------------------------------------------------------------

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def valuation(self):
        """Order of the first known nonzero term; +inf if zero to precision."""
        return INF if self.is_zero() else self.val

    def leading(self):
        if self.is_zero():
            raise ZeroDivision("zero series has no leading coefficient")
        return self.coeffs[0].copy()

    def coeff_at(self, k: int):
        if k >= self.prec:
            raise PrecisionExhausted(f"coefficient u^{k} beyond precision")
        if self.is_zero() or k < self.val or k - self.val >= len(self.coeffs):
            return self.rf.zero_el()
        return self.coeffs[k - self.val].copy()

    def truncate(self, prec: int) -> "LaurentSeries":
        if prec >= self.prec:
            return self
        if self.is_zero():
            return LaurentSeries.zero(self.rf, min(prec, self.prec))
        if prec <= self.val:
            raise PrecisionExhausted(
                f"truncation to u^{prec} drops every known term"
            )
        return LaurentSeries.make(
            self.rf, self.val, self.coeffs[: prec - self.val], prec
        )

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by u^k (exact)."""
        if self.is_zero():
            return LaurentSeries.zero(self.rf, self.prec + k)
        return LaurentSeries(self.rf, self.val + k, self.coeffs, self.prec + k)

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other) -> "LaurentSeries":
        assert isinstance(other, LaurentSeries), "series expected"
        assert self.rf == other.rf, "residue field mismatch"
        return other

    def __add__(self, other):
        o = self._check(other)
        prec = min(self.prec, o.prec)
        lo = min(self.val, o.val, prec)
        n = prec - lo
        buf = np.zeros((n, self.rf.d), dtype=np.int16)
        for s in (self, o):
            if not s.is_zero() and s.val < prec:
                seg = s.coeffs[: prec - s.val]
                start = s.val - lo
                buf[start : start + len(seg)] = self.rf.add_el(
                    buf[start : start + len(seg)], seg
                )
        return LaurentSeries.make(self.rf, lo, buf, prec)

    def __neg__(self):
        return LaurentSeries(
            self.rf, self.val, self.rf.neg_el(self.coeffs), self.prec
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        o = self._check(other)
        if self.is_zero() or o.is_zero():
            # min-rule precision with a zero factor
            prec = min(self.prec + o.val, o.prec + self.val)
            return LaurentSeries.zero(self.rf, prec)
        prec = min(self.prec + o.val, o.prec + self.val)
        rows = kernels.tower_conv(
            self.coeffs,
            o.coeffs,
            self.rf.base.add_table,
            self.rf.base.mul_table,
            self.rf.red,
        )
        return LaurentSeries.make(self.rf, self.val + o.val, rows, prec)

    def scale(self, coeff) -> "LaurentSeries":
        """Multiply by a constant from the residue field (exact)."""
        c = self.rf.el(coeff)
        if self.is_zero() or not c.any():
            return LaurentSeries.zero(self.rf, self.prec)
        rows = kernels.tower_conv(
            self.coeffs,
            c.reshape(1, -1),
            self.rf.base.add_table,
            self.rf.base.mul_table,
            self.rf.red,
        )
        return LaurentSeries.make(self.rf, self.val, rows, self.prec)

    def inverse(self) -> "LaurentSeries":
        if self.is_zero():
            raise ZeroDivision("inverse of a series that is zero to precision")
        rf = self.rf
        base = rf.base
        n = self.prec - self.val  # relative precision carries over
        a = np.zeros((n, rf.d), dtype=np.int16)
        w = min(n, len(self.coeffs))
        a[:w] = self.coeffs[:w]
        one = rf.from_base(1)
        # Newton: y <- y (2 - a y) doubles the correct length each pass
        y = np.zeros((1, rf.d), dtype=np.int16)
        y[0] = rf.inv_el(a[0])
        known = 1
        while known < n:
            known = min(2 * known, n)
            ay = kernels.tower_conv(
                a[:known], y, base.add_table, base.mul_table, rf.red
            )[:known]
            ay[0] = base.add_table[ay[0], base.neg_table[one]]  # a y - 1
            yeps = kernels.tower_conv(
                y, ay, base.add_table, base.mul_table, rf.red
            )
            out = np.zeros((known, rf.d), dtype=np.int16)
            out[: len(y)] = y
            w = min(known, len(yeps))
            out[:w] = base.add_table[out[:w], base.neg_table[yeps[:w]]]
            y = out
        return LaurentSeries.make(rf, -self.val, y, self.prec - 2 * self.val)

    def __truediv__(self, other):
        return self * other.inverse()

    def p_power(self) -> "LaurentSeries":
        rf = self.rf
        p = rf.base.p
        if self.is_zero():
            return LaurentSeries.zero(rf, p * self.prec)
        n = len(self.coeffs)
        rows = np.zeros(((n - 1) * p + 1, rf.d), dtype=np.int16)
        rows[::p] = rf.p_power_rows(self.coeffs)
        return LaurentSeries.make(rf, p * self.val, rows, p * self.prec)

    def q_power(self) -> "LaurentSeries":
        out = self
        for _ in range(self.rf.base.e):
            out = out.p_power()
        return out

    def q_power_iter(self, times: int) -> "LaurentSeries":
        out = self
        for _ in range(times):
            out = out.q_power()
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.rf == other.rf
            and self.val == other.val
            and self.prec == other.prec
            and self.coeffs.shape == other.coeffs.shape
            and bool(np.all(self.coeffs == other.coeffs))
        )

    def __hash__(self):
        return hash((self.rf, self.val, self.prec, self.coeffs.tobytes()))

    def agrees_with(self, other, upto=None) -> bool:
        """True when self - other vanishes to min(precisions) or upto."""
        diff = self - other
        bound = diff.prec if upto is None else min(upto, diff.prec)
        return diff.is_zero() or diff.val >= bound

    # -- text ----------------------------------------------------------------

    def render(self, name: str = "u") -> str:
        if self.is_zero():
            return f"O({name}^{self.prec})"
        parts = []
        for i, row in enumerate(self.coeffs):
            if not row.any():
                continue
            k = self.val + i
            if row[0] == 1 and not row[1:].any():
                parts.append(f"{name}^{k}")
            else:
                ctext = self.rf.format_el(row)
                if "+" in ctext and not ctext.startswith("("):
                    ctext = f"({ctext})"
                parts.append(f"{ctext}*{name}^{k}")
        parts.append(f"O({name}^{self.prec})")
        return " + ".join(parts)

    def __repr__(self):
        return self.render()


# -- module-level operations ----------------------------------------------------


def valuation(a: LaurentSeries):
    return a.valuation()


def q_power(a: LaurentSeries) -> LaurentSeries:
    return a.q_power()


def rth_root(a: LaurentSeries, r: int) -> LaurentSeries:
    """b with b^r = a to precision, by Newton lifting. Requires p coprime to r."""
    rf = a.rf
    if r < 1:
        raise ValueError("root order must be positive")
    if math.gcd(r, rf.base.p) != 1:
        raise NoRoot(f"{r}-th root collides with the characteristic")
    if a.is_zero():
        raise ZeroDivision("r-th root of a series that is zero to precision")
    if a.val % r != 0:
        raise RamifiedRoot(f"valuation {a.val} not divisible by {r}")
    lead_root = rf.rth_root_el(a.leading(), r)  # NoRoot propagates
    # normalize to 1 + x with val(x) > 0, take the principal root, undo
    v = a.val
    base_mono = LaurentSeries.monomial(rf, lead_root, 0, a.prec - v)
    unit = a.shift(-v).scale(rf.pow_el(lead_root, -r))
    # unit = 1 + x
    rel = unit.prec
    y = LaurentSeries.one(rf, rel)
    # Newton: y <- y - (y^r - unit) / (r y^(r-1))
    r_in_field = rf.from_base(rf.base.element(r % rf.base.p).code)
    while True:
        yr = _int_pow(y, r)
        err = yr - unit
        if err.is_zero() or err.val >= rel:
            break
        deriv = _int_pow(y, r - 1).scale(r_in_field)
        y = y - err / deriv
    out = (y * base_mono).shift(v // r)
    return out.truncate(min(out.prec, a.prec - v + v // r))


def _int_pow(a: LaurentSeries, n: int) -> LaurentSeries:
    base = a
    result = None
    m = n
    while m:
        if m & 1:
            result = base if result is None else result * base
        m >>= 1
        if m:
            base = base * base
    if result is None:
        return LaurentSeries.one(a.rf, a.prec)
    return result
