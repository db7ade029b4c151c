"""Numba-compiled kernels, drop-in compatible with numpy_backend.

The jitted bodies are scalar loops over int16 code arrays; compilation
results are cached on disk so repeated CLI runs pay the cost once.
"""

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def _rref(R, add, mul, neg, inv, piv_out):
    rows, cols = R.shape
    r = 0
    npiv = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = -1
        for i in range(r, rows):
            if R[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = R[r, j]
                R[r, j] = R[piv, j]
                R[piv, j] = tmp
        s = inv[R[r, c]]
        if s != 1:
            for j in range(cols):
                R[r, j] = mul[s, R[r, j]]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                f = neg[R[i, c]]
                for j in range(cols):
                    R[i, j] = add[R[i, j], mul[f, R[r, j]]]
        piv_out[npiv] = c
        npiv += 1
        r += 1
    return npiv


def rref(M, add, mul, neg, inv):
    R = np.array(M, dtype=np.int16, copy=True)
    rows, cols = R.shape
    piv_out = np.zeros(min(rows, cols) + 1, dtype=np.int64)
    npiv = _rref(R, add, mul, neg, inv, piv_out)
    return R, piv_out[:npiv].copy()


@njit(cache=True)
def _matmul(A, B, C, add, mul):
    n, k = A.shape
    m = B.shape[1]
    for i in range(n):
        for j in range(k):
            a = A[i, j]
            if a:
                for c in range(m):
                    C[i, c] = add[C[i, c], mul[a, B[j, c]]]


def matmul(A, B, add, mul):
    A = np.ascontiguousarray(A, dtype=np.int16)
    B = np.ascontiguousarray(B, dtype=np.int16)
    assert A.shape[1] == B.shape[0], "shape mismatch"
    C = np.zeros((A.shape[0], B.shape[1]), dtype=np.int16)
    _matmul(A, B, C, add, mul)
    return C


@njit(cache=True)
def _conv(a, b, out, add, mul):
    la = len(a)
    lb = len(b)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                bj = b[j]
                if bj:
                    out[i + j] = add[out[i + j], mul[ai, bj]]


def conv(a, b, add, mul):
    a = np.ascontiguousarray(a, dtype=np.int16)
    b = np.ascontiguousarray(b, dtype=np.int16)
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=np.int16)
    out = np.zeros(la + lb - 1, dtype=np.int16)
    _conv(a, b, out, add, mul)
    return out


@njit(cache=True)
def _tower_conv(A, B, out, add, mul, red):
    L1, d = A.shape
    L2 = B.shape[0]
    D = np.zeros((L1 + L2 - 1, 2 * d - 1), dtype=np.int16)
    for i in range(L1):
        for j in range(L2):
            for a in range(d):
                ca = A[i, a]
                if ca:
                    for b in range(d):
                        cb = B[j, b]
                        if cb:
                            D[i + j, a + b] = add[
                                D[i + j, a + b], mul[ca, cb]
                            ]
    for m in range(L1 + L2 - 1):
        for k in range(2 * d - 1):
            c = D[m, k]
            if c:
                for b in range(d):
                    rk = red[k, b]
                    if rk:
                        out[m, b] = add[out[m, b], mul[c, rk]]


def tower_conv(A, B, add, mul, red):
    A = np.ascontiguousarray(A, dtype=np.int16)
    B = np.ascontiguousarray(B, dtype=np.int16)
    L1, d = A.shape
    L2, d2 = B.shape
    assert d == d2, "tower degree mismatch"
    if L1 == 0 or L2 == 0:
        return np.zeros((0, d), dtype=np.int16)
    out = np.zeros((L1 + L2 - 1, d), dtype=np.int16)
    _tower_conv(A, B, out, add, mul, red)
    return out


@njit(cache=True)
def _poly_divmod(a, b, q, r, add, mul, neg, inv):
    la = len(a)
    lb = len(b)
    binv = inv[b[lb - 1]]
    for k in range(la - lb, -1, -1):
        c = mul[r[k + lb - 1], binv]
        if c:
            q[k] = c
            nc = neg[c]
            for j in range(lb):
                r[k + j] = add[r[k + j], mul[nc, b[j]]]


def poly_divmod(a, b, add, mul, neg, inv):
    a = np.ascontiguousarray(a, dtype=np.int16)
    b = np.ascontiguousarray(b, dtype=np.int16)
    la, lb = len(a), len(b)
    assert lb > 0 and b[-1] != 0, "divisor must be nonzero, normalized"
    if la < lb:
        return np.zeros(0, dtype=np.int16), a.copy()
    r = a.copy()
    q = np.zeros(la - lb + 1, dtype=np.int16)
    _poly_divmod(a, b, q, r, add, mul, neg, inv)
    return q, r[: lb - 1].copy()
