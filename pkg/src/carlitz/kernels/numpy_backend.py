"""Pure-numpy kernels over F_q code arrays.

All functions take the field's operation tables explicitly (int16 numpy
arrays): add/mul are q-by-q, neg/inv length q. Element data is int16
codes. This backend vectorizes row operations through table gathers and
is the reference implementation the numba backend must agree with.
"""

import numpy as np

NAME = "numpy"


def rref(M, add, mul, neg, inv):
    """Reduced row echelon form; returns (R, pivot column indices)."""
    R = np.array(M, dtype=np.int16, copy=True)
    if R.ndim != 2:
        raise ValueError("matrix expected")
    rows, cols = R.shape
    pivots = []
    r = 0
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
            R[[r, piv]] = R[[piv, r]]
        s = inv[R[r, c]]
        R[r] = mul[s, R[r]]
        col = R[:, c].copy()
        col[r] = 0
        nz = np.nonzero(col)[0]
        if nz.size:
            f = neg[col[nz]]
            R[nz] = add[R[nz], mul[f[:, None], R[r][None, :]]]
        pivots.append(c)
        r += 1
    return R, np.array(pivots, dtype=np.int64)


def matmul(A, B, add, mul):
    """Matrix product over F_q."""
    A = np.asarray(A, dtype=np.int16)
    B = np.asarray(B, dtype=np.int16)
    n, k = A.shape
    k2, m = B.shape
    assert k == k2, "shape mismatch"
    p = _prime_modulus(add)
    if p:
        prod = A.astype(np.int64) @ B.astype(np.int64)
        return (prod % p).astype(np.int16)
    C = np.zeros((n, m), dtype=np.int16)
    for j in range(k):
        a = A[:, j]
        nz = np.nonzero(a)[0]
        if nz.size:
            C[nz] = add[C[nz], mul[a[nz][:, None], B[j][None, :]]]
    return C


def _prime_modulus(add):
    """q when codes are plain residues mod a prime q, else 0.

    Canonical digit tables add without carry, so 1 + (q-1) wraps to 0
    exactly when the field is prime.
    """
    q = add.shape[0]
    return q if int(add[1, q - 1]) == 0 else 0


def conv(a, b, add, mul):
    """1D polynomial convolution of two code vectors."""
    a = np.asarray(a, dtype=np.int16)
    b = np.asarray(b, dtype=np.int16)
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=np.int16)
    p = _prime_modulus(add)
    if p:
        full = np.convolve(a.astype(np.int64), b.astype(np.int64))
        return (full % p).astype(np.int16)
    out = np.zeros(la + lb - 1, dtype=np.int16)
    if la > lb:
        a, b, la, lb = b, a, lb, la
    for i in range(la):
        ai = a[i]
        if ai:
            seg = out[i : i + lb]
            out[i : i + lb] = add[seg, mul[ai, b]]
    return out


def tower_conv(A, B, add, mul, red):
    """Convolution of coefficient arrays over F_{q^d}.

    A: (L1, d), B: (L2, d) int16 codes in the power basis of the tower
    generator; red: (2d-1, d) gives t^k reduced mod the tower modulus.
    Returns (L1+L2-1, d).
    """
    A = np.asarray(A, dtype=np.int16)
    B = np.asarray(B, dtype=np.int16)
    L1, d = A.shape
    L2, d2 = B.shape
    assert d == d2, "tower degree mismatch"
    if L1 == 0 or L2 == 0:
        return np.zeros((0, d), dtype=np.int16)
    p = _prime_modulus(add)
    if p:
        acc = np.zeros((L1 + L2 - 1, 2 * d - 1), dtype=np.int64)
        for a in range(d):
            ca = A[:, a].astype(np.int64)
            if not ca.any():
                continue
            for b in range(d):
                cb = B[:, b].astype(np.int64)
                if cb.any():
                    acc[:, a + b] += np.convolve(ca, cb)
        D = (acc % p).astype(np.int16)
    else:
        D = np.zeros((L1 + L2 - 1, 2 * d - 1), dtype=np.int16)
        for i in range(L1):
            for a in range(d):
                c = A[i, a]
                if c:
                    blk = D[i : i + L2, a : a + d]
                    D[i : i + L2, a : a + d] = add[blk, mul[c, B]]
    out = np.zeros((L1 + L2 - 1, d), dtype=np.int16)
    for k in range(2 * d - 1):
        if k < d and np.all(red[k, :] == _unit_row(d, k)):
            col = D[:, k]
            nz = np.nonzero(col)[0]
            if nz.size:
                out[nz, k] = add[out[nz, k], col[nz]]
            continue
        col = D[:, k]
        nz = np.nonzero(col)[0]
        if nz.size:
            out[nz] = add[out[nz], mul[col[nz][:, None], red[k][None, :]]]
    return out


def _unit_row(d, k):
    row = np.zeros(d, dtype=np.int16)
    row[k] = 1
    return row


def poly_divmod(a, b, add, mul, neg, inv):
    """Synthetic division; returns (quotient, untrimmed remainder)."""
    a = np.asarray(a, dtype=np.int16)
    b = np.asarray(b, dtype=np.int16)
    la, lb = len(a), len(b)
    assert lb > 0 and b[-1] != 0, "divisor must be nonzero, normalized"
    if la < lb:
        return np.zeros(0, dtype=np.int16), a.copy()
    r = a.copy()
    q = np.zeros(la - lb + 1, dtype=np.int16)
    binv = inv[b[-1]]
    for k in range(la - lb, -1, -1):
        c = mul[r[k + lb - 1], binv]
        if c:
            q[k] = c
            seg = r[k : k + lb]
            r[k : k + lb] = add[seg, mul[neg[c], b]]
    return q, r[: lb - 1].copy()
