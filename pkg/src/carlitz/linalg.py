"""Exact linear algebra over F_q on int16 code matrices.

Conventions: matrices act on column vectors, kernel/image bases are
returned as matrix ROWS in reduced echelon form, so every output is
deterministic. The heavy lifting happens in the kernel backend.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import Inconsistent
from .field import FieldSpec


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=np.int16)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return A


def rref(field: FieldSpec, M):
    """Reduced row echelon form; returns (R, pivot column array)."""
    A = as_matrix(M)
    if A.size == 0:
        return A.copy(), np.zeros(0, dtype=np.int64)
    return kernels.rref(
        A, field.add_table, field.mul_table, field.neg_table, field.inv_table
    )


def rank(field: FieldSpec, M) -> int:
    return len(rref(field, M)[1])


def matmul(field: FieldSpec, A, B):
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[1] == 0 or B.shape[1] == 0 or A.shape[0] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int16)
    return kernels.matmul(A, B, field.add_table, field.mul_table)


def matvec(field: FieldSpec, A, v):
    v = np.asarray(v, dtype=np.int16)
    return matmul(field, A, v.reshape(-1, 1)).reshape(-1)


def add(field: FieldSpec, A, B):
    return field.add_table[
        np.asarray(A, dtype=np.int16), np.asarray(B, dtype=np.int16)
    ]


def neg(field: FieldSpec, A):
    return field.neg_table[np.asarray(A, dtype=np.int16)]


def scale(field: FieldSpec, c: int, A):
    return field.mul_table[np.int16(c), np.asarray(A, dtype=np.int16)]


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int16)


def kernel_basis(field: FieldSpec, M) -> np.ndarray:
    """Rows form an echelon basis of {x : M x = 0}."""
    A = as_matrix(M)
    rows, cols = A.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int16)
    if rows == 0:
        return identity(cols)
    R, piv = rref(field, A)
    piv = list(piv)
    free = [c for c in range(cols) if c not in piv]
    out = np.zeros((len(free), cols), dtype=np.int16)
    for k, c in enumerate(free):
        out[k, c] = 1
        for r, pc in enumerate(piv):
            out[k, pc] = field.neg_table[R[r, c]]
    return out


def row_space(field: FieldSpec, M) -> np.ndarray:
    """Echelon basis (rows) of the row space of M."""
    A = as_matrix(M)
    if A.size == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int16)
    R, piv = rref(field, A)
    return R[: len(piv)].copy()


def image_basis(field: FieldSpec, M) -> np.ndarray:
    """Echelon basis (rows) of the column space of M."""
    return row_space(field, as_matrix(M).T)


def solve(field: FieldSpec, M, b):
    """One solution x of M x = b (free variables set to zero)."""
    A = as_matrix(M)
    b = np.asarray(b, dtype=np.int16).reshape(-1)
    rows, cols = A.shape
    assert len(b) == rows, "shape mismatch"
    aug = np.zeros((rows, cols + 1), dtype=np.int16)
    aug[:, :cols] = A
    aug[:, cols] = b
    R, piv = rref(field, aug)
    piv = list(piv)
    if cols in piv:
        raise Inconsistent("no solution")
    x = np.zeros(cols, dtype=np.int16)
    for r, pc in enumerate(piv):
        x[pc] = R[r, cols]
    return x


def rref_with_transform(field: FieldSpec, M):
    """Returns (R, T, pivots) with R = T M and T invertible over F_q."""
    A = as_matrix(M)
    rows, cols = A.shape
    aug = np.zeros((rows, cols + rows), dtype=np.int16)
    aug[:, :cols] = A
    aug[:, cols:] = identity(rows)
    R, piv = rref(field, aug)
    piv = np.array([p for p in piv if p < cols], dtype=np.int64)
    return R[:, :cols].copy(), R[:, cols:].copy(), piv


def reduce_row(field: FieldSpec, R, piv, v):
    """Reduce v against echelon rows R (pivots piv); returns (residue, coeffs).

    residue = v - coeffs . R, with residue zero in every pivot column.
    """
    v = np.asarray(v, dtype=np.int16).copy()
    coeffs = np.zeros(len(piv), dtype=np.int16)
    for r, pc in enumerate(piv):
        c = v[pc]
        if c:
            coeffs[r] = c
            v = add(field, v, scale(field, field.neg(int(c)), R[r]))
    return v, coeffs


def in_row_space(field: FieldSpec, R, piv, v) -> bool:
    residue, _ = reduce_row(field, R, piv, v)
    return not residue.any()
