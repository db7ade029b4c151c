"""Smith normal form over F_q[t]."""

import random

import pytest

from carlitz.field import field
from carlitz.poly import Poly, parse_poly
from carlitz.smith import (
    SmithForm,
    smith_normal_form,
    poly_identity,
    poly_mat_mul,
    poly_mat_eq,
)

F2 = field(2)
F3 = field(3)
F4 = field(2, 2)


def pp(fq, text):
    return parse_poly(fq, text)


def random_poly_matrix(fq, rng, rows, cols, maxdeg=2):
    M = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            deg = rng.randrange(maxdeg + 1)
            codes = [rng.randrange(fq.q) for _ in range(deg + 1)]
            row.append(Poly(fq, codes))
        M.append(row)
    return M


def check_snf(fq, M, snf):
    rows = len(M)
    cols = len(M[0]) if rows else 0
    assert snf.shape == (rows, cols)
    # left @ M @ right equals the diagonal matrix of divisors
    D = poly_mat_mul(poly_mat_mul(snf.left, M), snf.right)
    assert poly_mat_eq(D, snf.diagonal(fq))
    # transforms are unimodular: T @ T_inv = I
    assert poly_mat_eq(poly_mat_mul(snf.left, snf.left_inv), poly_identity(fq, rows))
    assert poly_mat_eq(poly_mat_mul(snf.right, snf.right_inv), poly_identity(fq, cols))
    # divisibility chain among nonzero divisors, zeros trail
    seen_zero = False
    prev = None
    for d in snf.divisors:
        if d.is_zero():
            seen_zero = True
            continue
        assert not seen_zero, "zero divisor before a nonzero one"
        assert d.is_monic()
        if prev is not None and prev.deg > 0:
            _, r = divmod(d, prev)
            assert r.is_zero(), f"{prev} does not divide {d}"
        prev = d


class TestSmallExamples:
    def test_identity(self):
        M = poly_identity(F2, 3)
        snf = smith_normal_form(F2, M)
        assert all(d.deg == 0 for d in snf.divisors)
        assert snf.rank() == 3
        assert snf.torsion_divisors() == []
        assert snf.kernel_columns() == []
        assert snf.coker_free_rank() == 0

    def test_single_entry(self):
        M = [[pp(F3, "t^2+1")]]
        snf = smith_normal_form(F3, M)
        check_snf(F3, M, snf)
        assert len(snf.divisors) == 1
        assert snf.divisors[0] == pp(F3, "t^2+1")
        assert snf.torsion_divisors() == [pp(F3, "t^2+1")]

    def test_diag_reorders_by_divisibility(self):
        # diag(t^2, t) must normalize to diag(t, t^2)
        z = Poly.zero(F3)
        M = [[pp(F3, "t^2"), z], [z, pp(F3, "t")]]
        snf = smith_normal_form(F3, M)
        check_snf(F3, M, snf)
        assert [repr(d) for d in snf.divisors] == ["t", "t^2"]

    def test_coupling_gcd(self):
        # [[t, t+1]] reduces to gcd = 1: full row rank, trivial cokernel torsion
        M = [[pp(F2, "t"), pp(F2, "t+1")]]
        snf = smith_normal_form(F2, M)
        check_snf(F2, M, snf)
        assert snf.divisors[0].deg == 0
        assert len(snf.kernel_column_indices()) == 1

    def test_zero_matrix(self):
        z = Poly.zero(F2)
        M = [[z, z], [z, z]]
        snf = smith_normal_form(F2, M)
        check_snf(F2, M, snf)
        assert snf.rank() == 0
        assert snf.coker_free_rank() == 2
        assert len(snf.kernel_columns()) == 2

    def test_empty_matrix(self):
        snf = smith_normal_form(F2, [])
        assert snf.shape == (0, 0)
        assert snf.divisors == []
        assert snf.rank() == 0

    def test_tall_and_wide(self):
        # 3x1 full rank: cokernel has two free rows
        M = [[pp(F2, "t")], [pp(F2, "1")], [pp(F2, "t+1")]]
        snf = smith_normal_form(F2, M)
        check_snf(F2, M, snf)
        assert snf.rank() == 1
        assert snf.coker_free_rank() == 2
        # 1x3: kernel has two columns
        Mw = [[pp(F2, "t"), pp(F2, "1"), pp(F2, "t+1")]]
        snfw = smith_normal_form(F2, Mw)
        check_snf(F2, Mw, snfw)
        assert len(snfw.kernel_columns()) == 2


class TestRandomMatrices:
    @pytest.mark.parametrize("fq", [F2, F3, F4], ids=["q2", "q3", "q4"])
    def test_random_snf_valid(self, fq):
        rng = random.Random(fq.q * 101)
        for _ in range(12):
            rows = rng.randrange(1, 5)
            cols = rng.randrange(1, 5)
            M = random_poly_matrix(fq, rng, rows, cols)
            snf = smith_normal_form(fq, M)
            check_snf(fq, M, snf)

    def test_kernel_columns_annihilate(self):
        rng = random.Random(202)
        for _ in range(10):
            rows = rng.randrange(1, 4)
            cols = rng.randrange(2, 5)
            M = random_poly_matrix(F3, rng, rows, cols, maxdeg=1)
            snf = smith_normal_form(F3, M)
            for col in snf.kernel_columns():
                prod = poly_mat_mul(M, [[c] for c in col])
                assert all(entry[0].is_zero() for entry in prod)

    def test_rank_matches_fraction_field(self):
        # rank over F_q[t] equals rank of M evaluated at a non-root point,
        # checked here against rank detected by divisor count on triangular M
        M = [
            [pp(F3, "t"), pp(F3, "1"), pp(F3, "0")],
            [pp(F3, "0"), pp(F3, "t+1"), pp(F3, "2")],
        ]
        snf = smith_normal_form(F3, M)
        check_snf(F3, M, snf)
        assert snf.rank() == 2


class TestHelpers:
    def test_poly_mat_mul_identity(self):
        M = random_poly_matrix(F3, random.Random(5), 3, 3)
        I3 = poly_identity(F3, 3)
        assert poly_mat_eq(poly_mat_mul(M, I3), M)
        assert poly_mat_eq(poly_mat_mul(I3, M), M)

    def test_poly_mat_eq_detects_difference(self):
        A = poly_identity(F2, 2)
        B = poly_identity(F2, 2)
        B[0][0] = pp(F2, "t")
        assert not poly_mat_eq(A, B)
