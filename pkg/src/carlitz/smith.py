"""Smith normal form over the PID F_q[t].

Classical gcd-driven row/column elimination with a deterministic pivot
rule (lowest degree first, then lexicographic position), tracking both
transforms and their inverses so invertibility is witnessed rather than
assumed. Matrix sizes here are tiny, so clarity beats asymptotics.
"""

from __future__ import annotations

from .field import FieldSpec
from .poly import Poly


def poly_identity(field: FieldSpec, n: int, var="t"):
    one = Poly.one(field, var)
    zero = Poly.zero(field, var)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def poly_mat_mul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    if rows == 0 or cols == 0:
        return [[] for _ in range(rows)]
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                term = A[i][k] * B[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def poly_mat_eq(A, B) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        if any(a != b for a, b in zip(ra, rb)):
            return False
    return True


class SmithForm:
    """divisors d_0 | d_1 | ... with left @ M @ right = diag(divisors)."""

    def __init__(self, divisors, left, right, left_inv, right_inv, shape):
        self.divisors = divisors
        self.left = left
        self.right = right
        self.left_inv = left_inv
        self.right_inv = right_inv
        self.shape = shape

    def diagonal(self, field: FieldSpec, var="t"):
        rows, cols = self.shape
        zero = Poly.zero(field, var)
        D = [[zero for _ in range(cols)] for _ in range(rows)]
        for i, d in enumerate(self.divisors):
            D[i][i] = d
        return D

    def nonunit_divisors(self):
        return [d for d in self.divisors if d.is_zero() or d.deg > 0]

    def torsion_divisors(self):
        return [d for d in self.divisors if (not d.is_zero()) and d.deg > 0]

    def kernel_column_indices(self):
        rows, cols = self.shape
        m = min(rows, cols)
        out = [i for i in range(m) if self.divisors[i].is_zero()]
        out.extend(range(m, cols))
        return out

    def kernel_columns(self):
        """Columns of the right transform spanning ker(M) over F_q[t]."""
        idx = self.kernel_column_indices()
        return [[row[j] for row in self.right] for j in idx]

    def coker_free_rank(self):
        rows, cols = self.shape
        m = min(rows, cols)
        zero_count = sum(1 for d in self.divisors if d.is_zero())
        return zero_count + (rows - m)

    def rank(self):
        return sum(1 for d in self.divisors if not d.is_zero())


def smith_normal_form(field: FieldSpec, M, var: str = "t") -> SmithForm:
    """M: list of Poly rows (possibly empty). Returns the SmithForm."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [[M[i][j] for j in range(cols)] for i in range(rows)]
    U = poly_identity(field, rows, var)
    Ui = poly_identity(field, rows, var)
    V = poly_identity(field, cols, var)
    Vi = poly_identity(field, cols, var)

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_addmul(i, j, q):
        # row_i += q * row_j
        if q.is_zero():
            return
        for c in range(cols):
            A[i][c] = A[i][c] + q * A[j][c]
        for c in range(rows):
            U[i][c] = U[i][c] + q * U[j][c]
        for r in Ui:
            r[j] = r[j] - q * r[i]

    def col_addmul(i, j, q):
        # col_i += q * col_j
        if q.is_zero():
            return
        for r in A:
            r[i] = r[i] + q * r[j]
        for r in V:
            r[i] = r[i] + q * r[j]
        for c in range(cols):
            Vi[j][c] = Vi[j][c] - q * Vi[i][c]

    def row_scale(i, s):
        # s a nonzero field element
        for c in range(cols):
            A[i][c] = A[i][c] * s
        for c in range(rows):
            U[i][c] = U[i][c] * s
        sinv = s.inverse()
        for r in Ui:
            r[i] = r[i] * sinv

    def find_pivot(k):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                if not A[i][j].is_zero():
                    d = A[i][j].deg
                    if best is None or d < best[0]:
                        best = (d, i, j)
        return best

    m = min(rows, cols)
    for k in range(m):
        while True:
            piv = find_pivot(k)
            if piv is None:
                break
            _, pi, pj = piv
            if pi != k:
                row_swap(k, pi)
            if pj != k:
                col_swap(k, pj)
            dirty = False
            for i in range(rows):
                if i != k and not A[i][k].is_zero():
                    q = A[i][k] // A[k][k]
                    row_addmul(i, k, -q)
                    if not A[i][k].is_zero():
                        dirty = True
            for j in range(cols):
                if j != k and not A[k][j].is_zero():
                    q = A[k][j] // A[k][k]
                    col_addmul(j, k, -q)
                    if not A[k][j].is_zero():
                        dirty = True
            if dirty:
                continue
            # row and column k are clear; enforce divisibility downstream
            offender = None
            for i in range(k + 1, rows):
                for j in range(k + 1, cols):
                    if not (A[i][j] % A[k][k]).is_zero():
                        offender = (i, j)
                        break
                if offender:
                    break
            if offender is None:
                break
            # pull the non-divisible entry into column k and re-eliminate
            col_addmul(k, offender[1], Poly.one(field, var))
        if A[k][k].is_zero():
            break

    for k in range(m):
        if not A[k][k].is_zero() and not A[k][k].is_monic():
            row_scale(k, A[k][k].lc().inverse())

    divisors = [A[k][k] for k in range(m)]
    return SmithForm(divisors, U, V, Ui, Vi, (rows, cols))
