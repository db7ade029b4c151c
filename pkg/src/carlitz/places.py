"""Places of the function field over t = infinity.

The curve is presented by a monic-in-y plane model g(t, y) = 0. The
points above infinity are read off the Newton polygon of g with
respect to deg_t: each lower-hull edge of slope h/e contributes the
roots y of t-degree h/e, and the simple irreducible factors of the
edge residual split those roots into places.

Only tame, multiplicity-one residuals are supported; anything else
raises WildOrSingular rather than guessing.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import RamifiedRoot, WildOrSingular
from .exponential import PlaceExpCache
from .field import FieldSpec
from .poly import Poly
from .ratfunc import RatFunc
from .series import LaurentSeries, ResidueField


class Place:
    """One place above t = infinity, with exact local embeddings.

    The uniformizer is normalized so that t = c u^(-e_z) on the nose;
    y then starts at y0 u^(-h) and is Newton-lifted from the model.
    """

    def __init__(self, field: FieldSpec, model, rf: ResidueField, e_z: int,
                 h: int, c_el, y0_el):
        self.field = field
        self.model = model  # list of Poly, g = sum model[j] y^j
        self.rf = rf
        self.e_z = e_z
        self.d_z = rf.d
        self.h = h
        self.c = rf.el(c_el)
        self.y0 = rf.el(y0_el)
        self._y_cache: LaurentSeries = None
        self._exp_cache: PlaceExpCache = None

    @property
    def degree(self) -> int:
        return self.d_z

    @property
    def exp_cache(self) -> PlaceExpCache:
        if self._exp_cache is None:
            self._exp_cache = PlaceExpCache(self.rf, self.e_z, self.c)
        return self._exp_cache

    def embed_t(self, prec: int) -> LaurentSeries:
        return LaurentSeries.monomial(self.rf, self.c, -self.e_z, prec)

    def embed_tpoly(self, p: Poly, prec: int) -> LaurentSeries:
        """Exact image of a polynomial in t."""
        rf, e = self.rf, self.e_z
        if p.deg < 0:
            return LaurentSeries.zero(rf, prec)
        lo = -e * p.deg
        rows = np.zeros((e * p.deg + 1, rf.d), dtype=np.int16)
        for k in range(p.deg + 1):
            if p.c[k]:
                ck = rf.pow_el(self.c, k)
                rows[e * (p.deg - k)] = rf.add_el(
                    rows[e * (p.deg - k)],
                    rf.mul_el(ck, rf.from_base(int(p.c[k]))),
                )
        return LaurentSeries.make(rf, lo, rows, max(prec, lo + 1))

    def embed_ratfunc(self, r: RatFunc, prec: int) -> LaurentSeries:
        if r.is_zero():
            return LaurentSeries.zero(self.rf, prec)
        pad = prec + self.e_z * (max(r.num.deg, 0) + 2 * max(r.den.deg, 0)) + 2
        num = self.embed_tpoly(r.num, pad)
        den = self.embed_tpoly(r.den, pad)
        return (num / den).truncate(prec)

    def embed_y(self, prec: int) -> LaurentSeries:
        if self._y_cache is not None and self._y_cache.prec >= prec:
            return self._y_cache.truncate(prec)
        self._y_cache = self._lift_y(prec + 8)
        return self._y_cache.truncate(prec)

    def _lift_y(self, prec: int) -> LaurentSeries:
        rf = self.rf
        n = len(self.model) - 1
        pad = prec + self.e_z * max(p.deg for p in self.model if p.deg >= 0)
        pad += abs(self.h) * n + 8
        aj = [self.embed_tpoly(p, pad) for p in self.model]

        def g_at(Y):
            acc = LaurentSeries.zero(rf, pad)
            pw = LaurentSeries.one(rf, pad)
            for j in range(n + 1):
                acc = acc + aj[j] * pw
                if j < n:
                    pw = pw * Y
            return acc

        def dg_at(Y):
            acc = LaurentSeries.zero(rf, pad)
            pw = LaurentSeries.one(rf, pad)
            for j in range(1, n + 1):
                scaled = aj[j].scale(rf.from_base(j % rf.base.p))
                acc = acc + scaled * pw
                if j < n:
                    pw = pw * Y
            return acc

        Y = LaurentSeries.monomial(rf, self.y0, -self.h, pad)
        gv = g_at(Y)
        dv = dg_at(Y)
        if dv.is_zero():
            raise RamifiedRoot("model derivative vanishes at the initial term")
        while not gv.is_zero() and gv.val - dv.val < prec:
            delta = gv / dv
            if delta.val <= Y.val:
                raise RamifiedRoot("lift does not contract; root not simple")
            prev = gv.val
            Y = Y - delta
            gv = g_at(Y)
            dv = dg_at(Y)
            if not gv.is_zero() and gv.val <= prev:
                raise RamifiedRoot("no valuation progress in the lift")
        return Y.truncate(prec)

    def embed_function(self, coords, prec: int) -> LaurentSeries:
        """Image of sum_j coords[j] y^j, coords rational in t."""
        n = len(self.model) - 1
        slack = max(0, self.h) * max(len(coords) - 1, 1) + 4
        wp = prec + slack
        Y = self.embed_y(wp + abs(self.h))
        acc = LaurentSeries.zero(self.rf, wp)
        pw = LaurentSeries.one(self.rf, wp + slack)
        for j, r in enumerate(coords):
            if not (isinstance(r, RatFunc) and r.is_zero()):
                acc = acc + self.embed_ratfunc(r, wp) * pw
            if j < len(coords) - 1:
                pw = pw * Y
        return acc.truncate(min(acc.prec, prec))

    def __repr__(self):
        return (
            f"Place(e={self.e_z}, d={self.d_z}, t->"
            f"{self.rf.format_el(self.c)}*u^{-self.e_z})"
        )


def _lower_hull(points):
    """Lower convex hull, points pre-sorted by x; returns hull vertices."""
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # pop if hull turns left (keeps the lower boundary)
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_edges(field: FieldSpec, model: list[Poly]):
    """Edges (h, e, j0, residual Poly in Z) of the t-infinity polygon."""
    n = len(model) - 1
    assert model[n].deg == 0 and model[n].c[0] == 1, "model must be monic in y"
    pts = [(j, -model[j].deg) for j in range(n + 1) if model[j].deg >= 0]
    assert pts[0][0] == 0, "y divides the model; not a function field of t"
    hull = _lower_hull(pts)
    degmap = {j: -negd for (j, negd) in pts}
    edges = []
    for k in range(len(hull) - 1):
        (j1, v1), (j2, v2) = hull[k], hull[k + 1]
        dh, dj = v2 - v1, j2 - j1
        g = math.gcd(abs(dh), dj) or dj
        h, e = dh // g, dj // g
        # residual coefficients at the lattice points of the edge
        r = (j2 - j1) // e
        coeffs = np.zeros(r + 1, dtype=np.int16)
        d0 = degmap[j1]
        for i in range(r + 1):
            j = j1 + i * e
            want = d0 - i * h
            if j in degmap and 0 <= want <= model[j].deg:
                coeffs[i] = model[j].c[want]
        residual = Poly(field, coeffs, "Z")
        assert residual.deg == r and residual.c[0] != 0, "degenerate residual"
        edges.append((h, e, j1, residual))
    return edges


def enumerate_places(field: FieldSpec, model: list[Poly]) -> list[Place]:
    """All places above t = infinity, or WildOrSingular if unsupported."""
    n = len(model) - 1
    places = []
    total = 0
    for h, e, _j0, residual in newton_edges(field, model):
        if e % field.p == 0:
            raise WildOrSingular(
                f"wild ramification: e = {e} divisible by p = {field.p}"
            )
        monic_res = residual.monic()
        for psi, mult in monic_res.factor():
            if mult >= 2:
                raise WildOrSingular(
                    f"repeated residual factor {psi} (multiplicity {mult}) "
                    f"on the slope {h}/{e} edge"
                )
            if psi.deg > 1:
                rf = ResidueField(field, Poly(field, psi.c, "z"))
                rho = rf.gen_el()
            else:
                rf = ResidueField(field, d=1)
                rho = _root_of_linear(field, rf, psi)
            hp, ep = _bezout_pair(h, e)
            c = rf.pow_el(rho, ep)
            y0 = rf.pow_el(rho, hp)
            places.append(Place(field, model, rf, e, h, c, y0))
            total += e * rf.d
    if total != n:
        raise WildOrSingular(
            f"place degrees sum to {total}, expected {n}; "
            f"the fiber over infinity is not reduced"
        )
    return places


def _root_of_linear(field: FieldSpec, rf: ResidueField, psi: Poly):
    # psi = Z + a monic linear: root is -a, inside the prime residue field
    assert psi.deg == 1
    return rf.from_base(field.neg(int(psi.c[0])))


def _bezout_pair(h: int, e: int):
    """(h', e') with h' e - e' h = 1."""
    if h == 0:
        assert e == 1
        return 1, 0
    g, x, y = _xgcd_int(e, -h)
    assert g == 1 or g == -1
    if g == -1:
        x, y = -x, -y
    return x, y


def _xgcd_int(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    return old_r, old_s, old_t
