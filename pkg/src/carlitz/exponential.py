"""Carlitz exponential and logarithm.

Symbolically: exp x = sum e_i x^(q^i) with e_0 = 1, determined by
exp(t x) = t exp(x) + (exp x)^q; log is its formal inverse. Both are
F_q-linear, which the local solver leans on heavily.

At a completed place the coefficients are materialized as Laurent
series through the recursion for e_i, which only ever divides by the
two-term series image of t^(q^i) - t. That keeps the denominators
short even when their symbolic degree is in the tens of thousands.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import Inconsistent, NoSolutionFound, OutOfDomain
from .field import FieldSpec
from .poly import Poly
from .ratfunc import RatFunc
from .series import LaurentSeries, ResidueField


# -- symbolic coefficients over F_q(t) ------------------------------------------


def exp_coeffs(field: FieldSpec, count: int) -> list[RatFunc]:
    """e_0 .. e_count. e_i = 1 / D_i with D_i = D_{i-1}^q (t^{q^i} - t)."""
    t = Poly.x(field)
    out = [RatFunc.one(field)]
    D = Poly.one(field)
    for i in range(1, count + 1):
        D = D.q_power() * (Poly.monomial(field, field.q**i, 1) - t)
        out.append(RatFunc(Poly.one(field), D))
    return out


def log_coeffs(field: FieldSpec, count: int) -> list[RatFunc]:
    """l_0 .. l_count by formal inversion of exp.

    l_m = -sum_{j<m} l_j e_{m-j}^(q^j), forced by log(exp x) = x.
    """
    e = exp_coeffs(field, count)
    out = [RatFunc.one(field)]
    for m in range(1, count + 1):
        acc = RatFunc.zero(field)
        for j in range(m):
            acc = acc + out[j] * _q_power_iter(e[m - j], j)
        out.append(-acc)
    return out


def _q_power_iter(r: RatFunc, times: int) -> RatFunc:
    for _ in range(times):
        r = r.q_power()
    return r


def verify_functional_eq(field: FieldSpec, count: int) -> bool:
    """Check exp and log satisfy their defining identities through e_count.

    Verifies, as exact rational function identities:
      t^(q^i) e_i       = t e_i + e_{i-1}^q          (exp eq, all i <= count)
      l_{m-1}           = (t - t^(q^m)) l_m          (log eq, all m <= count)
      sum e_i l_j^(q^i) = [m == 0]  over i+j = m     (exp o log = id)

    Together these pin every coefficient of both series below x^(q^(count+1)).
    """
    e = exp_coeffs(field, count)
    l = log_coeffs(field, count)
    t = RatFunc.of(Poly.x(field))
    for i in range(1, count + 1):
        tqi = RatFunc.of(Poly.monomial(field, field.q**i, 1))
        if tqi * e[i] != t * e[i] + e[i - 1].q_power():
            return False
    for m in range(1, count + 1):
        tqm = RatFunc.of(Poly.monomial(field, field.q**m, 1))
        if l[m - 1] != (t - tqm) * l[m]:
            return False
    for m in range(count + 1):
        acc = RatFunc.zero(field)
        for i in range(m + 1):
            acc = acc + e[i] * _q_power_iter(l[m - i], i)
        want = RatFunc.one(field) if m == 0 else RatFunc.zero(field)
        if acc != want:
            return False
    return True


# -- generic module action --------------------------------------------------------


def phi_action(a: Poly, x, *, t_mul, q_pow, add, scal):
    """Image of x under the action of a(t), where t acts as t_mul + q_pow.

    The carrier is any F_q-algebra-with-endomorphism presented through
    callbacks: t_mul(x), q_pow(x), add(x, y), scal(code, x).
    """
    if a.deg < 0:
        return scal(0, x)
    acc = scal(int(a.c[0]), x)
    z = x
    for k in range(1, a.deg + 1):
        z = add(t_mul(z), q_pow(z))
        if a.c[k]:
            acc = add(acc, scal(int(a.c[k]), z))
    return acc


def phi_on_ratfunc(field: FieldSpec, a: Poly, x: RatFunc) -> RatFunc:
    t = RatFunc.of(Poly.x(field))
    return phi_action(
        a,
        x,
        t_mul=lambda y: t * y,
        q_pow=lambda y: y.q_power(),
        add=lambda y, z: y + z,
        scal=lambda c, y: y * RatFunc.of(Poly.constant(field, c)),
    )


# -- completed places ---------------------------------------------------------------


class PlaceExpCache:
    """exp and log coefficient series for one place over infinity.

    The place is described by its residue field, ramification index e_z,
    and the leading constant c of the embedding t = c u^(-e_z) (exact, by
    normalization of the uniformizer). Coefficient series are grown
    lazily; relative precision is monotone along the recursion, so deep
    coefficients always arrive with more absolute precision than asked.
    """

    def __init__(self, rf: ResidueField, e_z: int, c_el):
        self.rf = rf
        self.e_z = e_z
        self.c = rf.el(c_el)
        assert self.c.any(), "t must embed with a nonzero leading constant"
        self._e: list[LaurentSeries] = []
        self._l: list[LaurentSeries] = []
        self._e_rel = 0
        self._l_rel = 0

    def t_series(self, prec: int) -> LaurentSeries:
        return LaurentSeries.monomial(self.rf, self.c, -self.e_z, prec)

    def _t_qpow_minus_t(self, i: int, rel: int) -> LaurentSeries:
        """Image of t^(q^i) - t as an exact two-term series."""
        rf, e = self.rf, self.e_z
        qi = rf.base.q**i
        lo = -e * qi
        rows = np.zeros((e * qi - e + 1, rf.d), dtype=np.int16)
        rows[0] = rf.pow_el(self.c, qi)
        rows[e * qi - e] = rf.neg_el(self.c)
        return LaurentSeries.make(rf, lo, rows, lo + max(rel, e * (qi - 1) + 1))

    def ensure_e(self, count: int, rel: int):
        if count < len(self._e) and rel <= self._e_rel:
            return
        rel = max(rel, self._e_rel, 8)
        e = [LaurentSeries.one(self.rf, rel)]
        for i in range(1, max(count, len(self._e) - 1) + 1):
            # q_power inflates relative precision q-fold; cap it back to
            # rel or the division lengths compound geometrically
            num = e[i - 1].q_power()
            num = num.truncate(num.val + rel)
            den = self._t_qpow_minus_t(i, num.prec - num.val)
            cur = num / den
            e.append(cur.truncate(cur.val + rel))
        self._e = e
        self._e_rel = rel

    def ensure_l(self, count: int, rel: int):
        if count < len(self._l) and rel <= self._l_rel:
            return
        rel = max(rel, self._l_rel, 8)
        l = [LaurentSeries.one(self.rf, rel)]
        for m in range(1, max(count, len(self._l) - 1) + 1):
            den = -self._t_qpow_minus_t(m, l[m - 1].prec - l[m - 1].val)
            # t - t^(q^m), valuation -e q^m
            cur = l[m - 1] / den
            l.append(cur.truncate(cur.val + rel))
        self._l = l
        self._l_rel = rel

    def e_series(self, i: int) -> LaurentSeries:
        return self._e[i]

    def l_series(self, i: int) -> LaurentSeries:
        return self._l[i]

    # -- evaluation ------------------------------------------------------

    def exp_eval(self, x: LaurentSeries, prec: int = None) -> LaurentSeries:
        """exp at x. Entire, so any valuation is accepted."""
        rf, e, q = self.rf, self.e_z, self.rf.base.q
        if prec is None:
            prec = x.prec
        if x.is_zero():
            return LaurentSeries.zero(rf, min(prec, x.prec))
        v = x.val
        prec = min(prec, x.prec)  # exp cannot improve knowledge of x
        terms = []
        i = 0
        while True:
            tv = (q**i) * (i * e + v)
            if tv < prec:
                terms.append(i)
            if i * e + v > 0 and tv >= prec:
                break
            i += 1
            assert i < 200, "term index runaway"
        if not terms:
            return LaurentSeries.zero(rf, prec)
        count = max(terms)
        rel = max((prec - (q**i) * v - e * i * (q**i)) for i in terms)
        self.ensure_e(count, rel + 4)
        acc = LaurentSeries.zero(rf, prec)
        for i in terms:
            term = self._e[i] * x.q_power_iter(i)
            acc = acc + term.truncate(min(term.prec, prec))
        return acc.truncate(min(acc.prec, prec))

    def log_eval(self, x: LaurentSeries, prec: int = None) -> LaurentSeries:
        """log at x; requires valuation >= -e_z."""
        rf, e, q = self.rf, self.e_z, self.rf.base.q
        if prec is None:
            prec = x.prec
        if x.is_zero():
            return LaurentSeries.zero(rf, min(prec, x.prec))
        v = x.val
        if v < -e:
            raise OutOfDomain(f"log needs valuation >= {-e}, got {v}")
        prec = min(prec, x.prec)
        terms = []
        i = 0
        while True:
            tv = e * (q ** (i + 1) - q) // (q - 1) + (q**i) * v
            if tv < prec:
                terms.append(i)
            else:
                break
            i += 1
            assert i < 200, "term index runaway"
        if not terms:
            return LaurentSeries.zero(rf, prec)
        count = max(terms)
        rel = max(
            (
                prec - (q**i) * v - e * (q ** (i + 1) - q) // (q - 1)
                for i in terms
            )
        )
        self.ensure_l(count, rel + 4)
        acc = LaurentSeries.zero(rf, prec)
        for i in terms:
            term = self._l[i] * x.q_power_iter(i)
            acc = acc + term.truncate(min(term.prec, prec))
        return acc.truncate(min(acc.prec, prec))

    # -- solving exp(gamma) = target -----------------------------------------

    def _peel_valuation(self, W: int):
        """Valuation of exp(unit * u^-W) and the term indices achieving it."""
        e, q = self.e_z, self.rf.base.q
        best = None
        argmin = []
        i = 0
        while True:
            tv = (q**i) * (i * e - W)
            if best is None or tv < best:
                best = tv
                argmin = [i]
            elif tv == best:
                argmin.append(i)
            if i * e - W > 0 and tv > best:
                break
            i += 1
            assert i < 200, "term index runaway"
        return best, argmin

    def _solve_additive(self, term_indices, rhs_el):
        """Solve sum_i eps_i xi^(q^i) = rhs over the residue field.

        Returns (xi, kernel_dim). eps_i is the leading coefficient of the
        i-th exp coefficient series.
        """
        rf = self.rf
        d = rf.d
        self.ensure_e(max(term_indices), 8)
        eps = {i: self._e[i].leading() for i in term_indices}
        M = np.zeros((d, d), dtype=np.int16)
        for j in range(d):
            b = np.zeros(d, dtype=np.int16)
            b[j] = 1
            img = rf.zero_el()
            for i in term_indices:
                img = rf.add_el(img, rf.mul_el(eps[i], rf.frob_el(b, i)))
            M[:, j] = img
        try:
            xi = linalg.solve(rf.base, M, rhs_el)
        except Inconsistent:
            return None, d - linalg.rank(rf.base, M)
        return np.asarray(xi, dtype=np.int16), d - linalg.rank(rf.base, M)

    def solve_exp(self, target: LaurentSeries, max_depth: int = 32):
        """Find gamma with exp(gamma) = target to the target's precision.

        Peels leading terms with exp of monomials (exactness is possible
        because exp is additive), finishes with log once the residual is
        inside the log domain. Returns (gamma, info) where info records
        depth, whether the answer is unique, and the residual valuation.
        Raises NoSolutionFound when a leading term cannot be matched.
        """
        rf, e = self.rf, self.e_z
        prec = target.prec
        gamma = LaurentSeries.zero(rf, prec)
        r = target
        unique = True
        depth = 0
        while not r.is_zero() and r.val < -e:
            if depth >= max_depth:
                raise NoSolutionFound(
                    depth, f"residual still at valuation {r.val}"
                )
            V = r.val
            W, hit = None, None
            for cand in range(e + 1, -V + 1):
                m, argmin = self._peel_valuation(cand)
                if m <= V:
                    if m == V:
                        W, hit = cand, argmin
                    break
            if W is None:
                raise NoSolutionFound(
                    depth, f"no monomial depth produces valuation {V}"
                )
            xi, ker_dim = self._solve_additive(hit, r.leading())
            if xi is None:
                raise NoSolutionFound(
                    depth,
                    f"leading coefficient at valuation {V} outside the "
                    f"image of the additive map",
                )
            if ker_dim > 0:
                unique = False
            mono = LaurentSeries.monomial(rf, xi, -W, prec)
            gamma = gamma + mono
            r = r - self.exp_eval(mono, prec)
            assert r.is_zero() or r.val > V, "peel did not advance"
            depth += 1
        if not r.is_zero():
            gamma = gamma + self.log_eval(r, prec)
        residual = target - self.exp_eval(gamma, prec)
        info = {
            "depth": depth,
            "unique": unique,
            "residual_val": residual.valuation(),
        }
        return gamma, info
