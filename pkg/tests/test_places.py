"""Places over t = infinity: Newton polygon, residue data, local embeddings."""

import numpy as np
import pytest

from carlitz.field import field
from carlitz.poly import Poly, parse_poly
from carlitz.series import LaurentSeries
from carlitz.places import enumerate_places, newton_edges
from carlitz.curve import CurvePackage
from carlitz.errors import WildOrSingular

F2 = field(2)
F3 = field(3)
F5 = field(5)

# every shipped package has a single place over infinity with residue degree 1
BUILTIN_PLACE_DATA = {
    "p1": (1, 1),
    "g1_q3": (2, 1),
    "g2_q3": (2, 1),
    "g1_q5": (2, 1),
    "g3_q5": (3, 1),
    "generic_q2": (3, 1),
}


def model_eval(place, prec):
    """Value of the defining polynomial at the lifted y; should vanish."""
    Y = place.embed_y(prec)
    acc = LaurentSeries.zero(place.rf, prec)
    pw = LaurentSeries.one(place.rf, prec + abs(place.h) * len(place.model))
    for j, aj in enumerate(place.model):
        acc = acc + place.embed_tpoly(aj, prec) * pw
        if j < len(place.model) - 1:
            pw = pw * Y
    return acc


class TestBuiltinPlaces:
    @pytest.mark.parametrize("name", sorted(BUILTIN_PLACE_DATA))
    def test_place_data(self, name):
        curve = CurvePackage.builtin(name)
        places = curve.places
        assert len(places) == 1
        z = places[0]
        e, d = BUILTIN_PLACE_DATA[name]
        assert (z.e_z, z.d_z) == (e, d)
        assert z.degree == d
        assert sum(p.e_z * p.d_z for p in places) == curve.n

    @pytest.mark.parametrize("name", sorted(BUILTIN_PLACE_DATA))
    def test_embed_t_valuation(self, name):
        z = CurvePackage.builtin(name).places[0]
        ts = z.embed_t(10)
        assert ts.val == -z.e_z
        assert not ts.coeffs[1:].any()  # exact monomial, only padding after

    @pytest.mark.parametrize("name", sorted(BUILTIN_PLACE_DATA))
    def test_model_relation_holds(self, name):
        z = CurvePackage.builtin(name).places[0]
        g = model_eval(z, 24)
        assert g.is_zero() or g.val >= 24

    def test_embed_tpoly_exact(self):
        z = CurvePackage.builtin("g1_q3").places[0]
        p = parse_poly(F3, "t^3+2*t+1")
        img = z.embed_tpoly(p, 12)
        assert img.val == -z.e_z * 3
        # matches sum of embedded monomials
        alt = (
            z.embed_t(12) * z.embed_t(12) * z.embed_t(12)
            + z.embed_t(12).scale(z.rf.el(2))
            + LaurentSeries.one(z.rf, 12)
        )
        assert img.agrees_with(alt)

    def test_embed_ratfunc_multiplicative(self):
        from carlitz.ratfunc import parse_ratfunc

        z = CurvePackage.builtin("g1_q3").places[0]
        r1 = parse_ratfunc(F3, "(t+1)/(t^2+2)")
        r2 = parse_ratfunc(F3, "t^2/(t+2)")
        lhs = z.embed_ratfunc(r1 * r2, 16)
        rhs = z.embed_ratfunc(r1, 20) * z.embed_ratfunc(r2, 20)
        assert lhs.agrees_with(rhs, upto=16)
        # valuation law: -e * (deg num - deg den)
        assert z.embed_ratfunc(r1, 10).val == -z.e_z * (1 - 2)

    def test_embed_y_leading(self):
        # y^2 = t^3 + ... forces val(y) = -3 at the doubly ramified place
        z = CurvePackage.builtin("g1_q3").places[0]
        Y = z.embed_y(8)
        assert Y.val == -z.h
        assert z.h == 3


class TestNewtonPolygon:
    def test_pone_edge(self):
        curve = CurvePackage.builtin("p1")
        edges = newton_edges(curve.field, curve.model)
        assert len(edges) == 1
        h, e, j0, residual = edges[0]
        assert e == 1 and residual.deg == 1

    def test_two_edge_model(self):
        # y^2 + t^2*y + t^3 over F_3: lower hull (0,-3) (1,-2) (2,0)
        # breaks into slopes 1 and 2, one unramified place on each
        model = [parse_poly(F3, "t^3"), parse_poly(F3, "t^2"), parse_poly(F3, "1")]
        edges = newton_edges(F3, model)
        assert len(edges) == 2
        slopes = sorted((h, e) for h, e, _, _ in edges)
        assert slopes == [(1, 1), (2, 1)]
        places = enumerate_places(F3, model)
        assert sum(p.e_z * p.d_z for p in places) == 2
        assert sorted(p.h for p in places) == [1, 2]
        for z in places:
            assert model_eval(z, 20).is_zero()

    def test_single_steep_edge(self):
        # y^2 + t*y + t^3 over F_3: (1,-1) sits above the chord, so the
        # polygon is one slope 3/2 edge and the place is ramified
        model = [parse_poly(F3, "t^3"), parse_poly(F3, "t"), parse_poly(F3, "1")]
        edges = newton_edges(F3, model)
        assert len(edges) == 1
        h, e, _, _ = edges[0]
        assert (h, e) == (3, 2)
        places = enumerate_places(F3, model)
        assert len(places) == 1 and places[0].e_z == 2
        assert model_eval(places[0], 20).is_zero()

    def test_residue_degree_two(self):
        # y^2 + 1 over F_3: residual Z^2 + 1 is irreducible, so one place
        # with e = 1, d = 2
        model = [parse_poly(F3, "1"), Poly.zero(F3), parse_poly(F3, "1")]
        places = enumerate_places(F3, model)
        assert len(places) == 1
        z = places[0]
        assert (z.e_z, z.d_z) == (1, 2)
        Y = z.embed_y(10)
        sq = Y * Y + LaurentSeries.one(z.rf, 10)
        assert sq.is_zero() or sq.val >= 10

    def test_wild_ramification_rejected(self):
        # y^2 = t over F_2 wants e = 2 = p
        model = [parse_poly(F2, "t"), Poly.zero(F2), parse_poly(F2, "1")]
        with pytest.raises(WildOrSingular):
            enumerate_places(F2, model)

    def test_repeated_residual_rejected(self):
        # y^2 + 2 t^2 y + t^4 = (y + t^2)^2 over F_3: residual (Z+1)^2
        model = [parse_poly(F3, "t^4"), parse_poly(F3, "2*t^2"), parse_poly(F3, "1")]
        with pytest.raises(WildOrSingular):
            enumerate_places(F3, model)

    def test_exp_cache_attaches(self):
        z = CurvePackage.builtin("g1_q5").places[0]
        cache = z.exp_cache
        assert cache is z.exp_cache  # memoized
        assert cache.e_z == z.e_z
        x = LaurentSeries.make(z.rf, 1, [[1]] * 10, 11)
        back = cache.log_eval(cache.exp_eval(x))
        assert back.agrees_with(x, upto=11 - 2)
