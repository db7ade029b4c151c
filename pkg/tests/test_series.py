"""Residue fields F_{q^d} and Laurent series with precision tracking."""

import numpy as np
import pytest

from carlitz.field import field
from carlitz.poly import Poly, parse_poly
from carlitz.series import (
    ResidueField,
    LaurentSeries,
    default_tower_modulus,
    rth_root,
    INF,
)
from carlitz.errors import (
    ZeroDivision,
    PrecisionExhausted,
    NoRoot,
    RamifiedRoot,
)

F2 = field(2)
F3 = field(3)
F5 = field(5)

TOWERS = [
    ResidueField(F2, d=1),
    ResidueField(F2, d=2),
    ResidueField(F2, d=3),
    ResidueField(F3, d=1),
    ResidueField(F3, d=2),
    ResidueField(F5, d=1),
]


def random_el(rf, rng):
    return np.array([rng.integers(0, rf.base.q) for _ in range(rf.d)], dtype=np.int16)


def random_series(rf, rng, prec=12):
    val = int(rng.integers(-3, 4))
    rows = rng.integers(0, rf.base.q, size=(prec - val, rf.d)).astype(np.int16)
    return LaurentSeries.make(rf, val, rows, prec)


class TestResidueField:
    @pytest.mark.parametrize("rf", TOWERS, ids=lambda r: f"q{r.base.q}d{r.d}")
    def test_field_axioms_sampled(self, rf):
        rng = np.random.default_rng(rf.d + rf.base.q)
        one = rf.one_el()
        for _ in range(30):
            a, b, c = (random_el(rf, rng) for _ in range(3))
            assert np.array_equal(rf.add_el(a, b), rf.add_el(b, a))
            assert np.array_equal(rf.mul_el(a, b), rf.mul_el(b, a))
            assert np.array_equal(
                rf.mul_el(a, rf.add_el(b, c)),
                rf.add_el(rf.mul_el(a, b), rf.mul_el(a, c)),
            )
            assert np.array_equal(rf.mul_el(a, one), a)
            assert not rf.add_el(a, rf.neg_el(a)).any()
            if a.any():
                assert np.array_equal(rf.mul_el(a, rf.inv_el(a)), one)

    @pytest.mark.parametrize("rf", TOWERS, ids=lambda r: f"q{r.base.q}d{r.d}")
    def test_order_and_fermat(self, rf):
        els = list(rf.elements())
        assert len(els) == rf.order == rf.base.q ** rf.d
        for a in els:
            # x^(q^d) == x
            acc = a
            for _ in range(rf.d * rf.base.e):
                acc = rf.p_power_rows(acc.reshape(1, -1))[0]
            assert np.array_equal(acc, a)

    def test_frob_el_matches_pow(self):
        rf = ResidueField(F3, d=2)
        rng = np.random.default_rng(0)
        for _ in range(20):
            a = random_el(rf, rng)
            # relative Frobenius x -> x^q; d applications come back around
            assert np.array_equal(rf.frob_el(a), rf.pow_el(a, rf.base.q))
            assert np.array_equal(rf.frob_el(a, rf.d), a)

    def test_p_power_rows_oracle(self):
        for rf in TOWERS:
            rng = np.random.default_rng(rf.base.q * 7 + rf.d)
            rows = rng.integers(0, rf.base.q, size=(12, rf.d)).astype(np.int16)
            got = rf.p_power_rows(rows)
            for i in range(len(rows)):
                want = rf.pow_el(rows[i], rf.base.p)
                assert np.array_equal(got[i], want)

    def test_inv_zero_raises(self):
        rf = TOWERS[1]
        with pytest.raises(ZeroDivision):
            rf.inv_el(rf.zero_el())

    def test_pow_negative(self):
        rf = ResidueField(F3, d=2)
        rng = np.random.default_rng(4)
        a = random_el(rf, rng)
        while not a.any():
            a = random_el(rf, rng)
        assert np.array_equal(rf.pow_el(a, -1), rf.inv_el(a))
        assert np.array_equal(
            rf.mul_el(rf.pow_el(a, -3), rf.pow_el(a, 3)), rf.one_el()
        )

    def test_modulus_validation(self):
        with pytest.raises(ValueError):
            ResidueField(F2, modulus=parse_poly(F2, "t^2+1"))  # (t+1)^2 reducible
        with pytest.raises(ValueError):
            ResidueField(F3, modulus=parse_poly(F3, "2*t^2+1"))  # not monic
        with pytest.raises(ValueError):
            ResidueField(F2, modulus=parse_poly(F2, "t^2+t+1"), d=3)
        with pytest.raises(ValueError):
            ResidueField(F2)
        mod = default_tower_modulus(F5, 3)
        assert mod.is_monic() and mod.deg == 3 and mod.is_irreducible()

    def test_rth_root_el(self):
        rf = ResidueField(F3, d=1)
        # squares mod 3 are {0, 1}; 2 is not a square
        one = rf.one_el()
        assert np.array_equal(rf.rth_root_el(one, 2), one)
        with pytest.raises(NoRoot):
            rf.rth_root_el(rf.el(2), 2)
        # gcd(3, 8) = 1: cubing is a bijection on F_9
        rf9 = ResidueField(F3, d=2)
        for a in rf9.elements():
            if not a.any():
                continue
            r = rf9.rth_root_el(a, 3)
            assert np.array_equal(rf9.pow_el(r, 3), a)
        # gcd(3, 3) = 3 on F_4: every nonzero cube is 1, nothing else has one
        rf4 = ResidueField(F2, d=2)
        assert np.array_equal(
            rf4.pow_el(rf4.rth_root_el(rf4.one_el(), 3), 3), rf4.one_el()
        )
        with pytest.raises(NoRoot):
            rf4.rth_root_el(rf4.gen_el(), 3)


class TestSeriesStructure:
    def test_make_normalizes_leading_zeros(self):
        rf = TOWERS[0]
        s = LaurentSeries.make(rf, -2, [[0], [0], [1], [1]], 4)
        assert s.val == 0 and s.prec == 4
        assert len(s.coeffs) == 4

    def test_zero_marker(self):
        rf = TOWERS[0]
        z = LaurentSeries.make(rf, -1, [[0], [0]], 1)
        assert z.is_zero()
        assert z.valuation() == INF
        assert z.prec == 1
        assert LaurentSeries.zero(rf, 5).prec == 5

    def test_coeff_at(self):
        rf = ResidueField(F3, d=1)
        s = LaurentSeries.make(rf, -1, [[2], [1], [0], [1]], 3)
        assert s.coeff_at(-1)[0] == 2
        assert s.coeff_at(1)[0] == 0
        assert s.coeff_at(2)[0] == 1
        assert s.coeff_at(-5)[0] == 0  # below val: known zero
        with pytest.raises(PrecisionExhausted):
            s.coeff_at(3)

    def test_truncate(self):
        rf = ResidueField(F3, d=1)
        s = LaurentSeries.make(rf, 0, [[1], [2], [1], [2]], 4)
        t2 = s.truncate(2)
        assert t2.prec == 2 and len(t2.coeffs) == 2
        assert s.truncate(9) is s  # no-op beyond known precision
        with pytest.raises(PrecisionExhausted):
            s.truncate(0)
        z = LaurentSeries.zero(rf, 6)
        assert z.truncate(3).prec == 3

    def test_shift(self):
        rf = TOWERS[0]
        s = LaurentSeries.make(rf, 1, [[1], [1]], 3)
        up = s.shift(4)
        assert up.val == 5 and up.prec == 7
        assert up.shift(-4) == s

    def test_render_pinned(self):
        rf = ResidueField(F2, d=1)
        s = LaurentSeries.make(rf, -1, [[1], [0], [1]], 2)
        assert repr(s) == "u^-1 + u^1 + O(u^2)"
        assert repr(LaurentSeries.zero(rf, 3)) == "O(u^3)"


class TestSeriesArithmetic:
    @pytest.mark.parametrize("rf", TOWERS, ids=lambda r: f"q{r.base.q}d{r.d}")
    def test_ring_identities(self, rf):
        rng = np.random.default_rng(rf.base.q * 3 + rf.d)
        for _ in range(10):
            a = random_series(rf, rng)
            b = random_series(rf, rng)
            c = random_series(rf, rng)
            assert (a + b).agrees_with(b + a)
            assert (a * b).agrees_with(b * a)
            assert ((a + b) * c).agrees_with(a * c + b * c)
            assert (a - a).is_zero()

    def test_add_precision_min_rule(self):
        rf = ResidueField(F3, d=1)
        a = LaurentSeries.make(rf, 0, [[1]] * 8, 8)
        b = LaurentSeries.make(rf, 2, [[2]] * 3, 5)
        assert (a + b).prec == 5

    def test_mul_precision_rule(self):
        rf = ResidueField(F3, d=1)
        a = LaurentSeries.make(rf, 1, [[1]] * 7, 8)   # val 1, prec 8
        b = LaurentSeries.make(rf, -2, [[2]] * 8, 6)  # val -2, prec 6
        # min(8 + (-2), 6 + 1) = 6
        assert (a * b).prec == 6
        assert (a * b).val == -1

    @pytest.mark.parametrize("rf", [TOWERS[0], TOWERS[2], TOWERS[4]],
                             ids=["q2d1", "q2d3", "q3d2"])
    def test_inverse_roundtrip(self, rf):
        rng = np.random.default_rng(17 * rf.d)
        one = LaurentSeries.one(rf, 1)
        for _ in range(12):
            s = random_series(rf, rng, prec=14)
            if s.is_zero():
                continue
            prod = s * s.inverse()
            assert prod.agrees_with(LaurentSeries.one(rf, prod.prec))
            assert (s / s).agrees_with(one, upto=1)

    def test_inverse_of_zero_raises(self):
        rf = TOWERS[0]
        with pytest.raises(ZeroDivision):
            LaurentSeries.zero(rf, 4).inverse()
        with pytest.raises(ZeroDivision):
            LaurentSeries.zero(rf, 4).leading()

    @pytest.mark.parametrize("rf", TOWERS, ids=lambda r: f"q{r.base.q}d{r.d}")
    def test_p_power_is_repeated_mul(self, rf):
        rng = np.random.default_rng(5 + rf.d)
        p = rf.base.p
        for _ in range(6):
            s = random_series(rf, rng, prec=10)
            if s.is_zero():
                continue
            bymul = s
            for _ in range(p - 1):
                bymul = bymul * s
            assert s.p_power().agrees_with(bymul)

    def test_q_power_additive(self):
        rf = ResidueField(F3, d=2)
        rng = np.random.default_rng(23)
        for _ in range(8):
            a = random_series(rf, rng)
            b = random_series(rf, rng)
            assert (a + b).q_power().agrees_with(a.q_power() + b.q_power())

    def test_q_power_iter(self):
        rf = ResidueField(F2, d=2)
        rng = np.random.default_rng(29)
        s = random_series(rf, rng, prec=8)
        assert s.q_power_iter(2).agrees_with(s.q_power().q_power())

    def test_scale(self):
        rf = ResidueField(F3, d=1)
        s = LaurentSeries.make(rf, 0, [[1], [2]], 2)
        doubled = s.scale(rf.el(2))
        assert doubled.coeff_at(0)[0] == 2 and doubled.coeff_at(1)[0] == 1
        assert s.scale(rf.zero_el()).is_zero()

    def test_agrees_with_window(self):
        rf = ResidueField(F2, d=1)
        a = LaurentSeries.make(rf, 0, [[1], [0], [1]], 3)
        b = LaurentSeries.make(rf, 0, [[1], [0], [0]], 3)
        assert a.agrees_with(b, upto=2)
        assert not a.agrees_with(b)


class TestRoots:
    def test_square_root_over_q3(self):
        rf = ResidueField(F3, d=1)
        rng = np.random.default_rng(31)
        for _ in range(10):
            s = random_series(rf, rng, prec=10)
            if s.is_zero():
                continue
            a = s * s  # guaranteed square, even valuation
            r = rth_root(a, 2)
            assert (r * r).agrees_with(a, upto=min(r.prec, a.prec))

    def test_cube_root_over_q2(self):
        rf = ResidueField(F2, d=2)
        rng = np.random.default_rng(37)
        s = random_series(rf, rng, prec=9)
        while s.is_zero():
            s = random_series(rf, rng, prec=9)
        a = s * s * s
        r = rth_root(a, 3)
        assert (r * r * r).agrees_with(a, upto=min(r.prec, a.prec))

    def test_root_errors(self):
        rf = ResidueField(F3, d=1)
        s = LaurentSeries.make(rf, 1, [[1], [1]], 3)  # odd valuation
        with pytest.raises(RamifiedRoot):
            rth_root(s, 2)
        with pytest.raises(NoRoot):
            rth_root(s.shift(-1), 3)  # r collides with p = 3
        with pytest.raises(ZeroDivision):
            rth_root(LaurentSeries.zero(rf, 4), 2)
        nonsquare = LaurentSeries.make(rf, 0, [[2], [1]], 2)
        with pytest.raises(NoRoot):
            rth_root(nonsquare, 2)
