"""Shtukas over finite affine bases.

A shtuka here is a pair of free modules over R (x) A together with maps
sigma and j, consumed through the complex d = sigma - j*tau where tau
twists the R-coefficient by the q-power Frobenius.  Everything is
windowed in the A-degree so the exactness statements become exact
dimension counts over F_q.
"""

import numpy as np

from . import linalg
from .errors import ExactnessFailure, IdentityFailure
from .exponential import phi_action
from .field import FieldSpec
from .poly import Poly
from .series import LaurentSeries


class FiniteAlgebra:
    """Commutative F_q-algebra of finite dimension with a chosen image of t.

    mult[i, j, :] holds the coordinates of e_i * e_j; one and t_img are
    coordinate vectors.  The A-module structure on the underlying space
    is t . r = t_img * r.
    """

    def __init__(self, field: FieldSpec, mult, one, t_img, label: str = "R"):
        self.field = field
        self.mult = np.asarray(mult, dtype=np.int16)
        self.one = np.asarray(one, dtype=np.int16)
        self.t_img = np.asarray(t_img, dtype=np.int16)
        self.dim = len(self.one)
        self.label = label
        assert self.mult.shape == (self.dim, self.dim, self.dim)

    @classmethod
    def from_poly_quotient(cls, f: Poly) -> "FiniteAlgebra":
        """The quotient A/(f) with basis 1, t, ..., t^(deg f - 1)."""
        fld = f.field
        d = f.deg
        assert d >= 1
        mult = np.zeros((d, d, d), dtype=np.int16)
        for i in range(d):
            for j in range(d):
                r = Poly.monomial(fld, i + j) % f
                mult[i, j, : r.deg + 1] = r.c[: d]
        one = np.zeros(d, dtype=np.int16)
        one[0] = 1
        t_img = np.zeros(d, dtype=np.int16)
        r = Poly.x(fld) % f
        t_img[: r.deg + 1] = r.c[: d]
        return cls(fld, mult, one, t_img, label=f"k[t]/({f})")

    def mul_vec(self, a, b) -> np.ndarray:
        f = self.field
        out = np.zeros(self.dim, dtype=np.int16)
        for i in range(self.dim):
            ai = int(a[i])
            if not ai:
                continue
            for j in range(self.dim):
                bj = int(b[j])
                if not bj:
                    continue
                c = f.mul(ai, bj)
                row = self.mult[i, j]
                for k in range(self.dim):
                    if row[k]:
                        out[k] = f.add(int(out[k]), f.mul(c, int(row[k])))
        return out

    def frob_vec(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int16)
        if not a.any():
            return np.zeros(self.dim, dtype=np.int16)
        out = a.copy()
        for _ in range(self.field.q - 1):
            out = self.mul_vec(out, a)
        return out

    def phi_t(self, a) -> np.ndarray:
        """Carlitz action of t on the underlying space: t_img * a + a^q."""
        f = self.field
        ta = self.mul_vec(self.t_img, a)
        fa = self.frob_vec(a)
        return np.array(
            [f.add(int(x), int(y)) for x, y in zip(ta, fa)], dtype=np.int16
        )

    def phi_poly(self, pol: Poly, a) -> np.ndarray:
        f = self.field
        out = np.zeros(self.dim, dtype=np.int16)
        cur = np.asarray(a, dtype=np.int16)
        for k in range(pol.deg + 1):
            ck = int(pol.c[k])
            if ck:
                for i in range(self.dim):
                    out[i] = f.add(int(out[i]), f.mul(ck, int(cur[i])))
            if k < pol.deg:
                cur = self.phi_t(cur)
        return out

    def elements(self):
        """All coordinate vectors; only sensible for tiny algebras."""
        f = self.field
        vecs = [np.zeros(self.dim, dtype=np.int16)]
        for i in range(self.dim):
            new = []
            for v in vecs:
                for c in range(1, f.q):
                    w = v.copy()
                    w[i] = c
                    new.append(w)
            vecs.extend(new)
        return vecs


# -- elements of R (x) A, windowed in t-degree --------------------------------

def ra_element(R: FiniteAlgebra, coeffs: dict) -> np.ndarray:
    """Build a (dim, L) array from {t-degree: R-vector}."""
    L = max(coeffs) + 1 if coeffs else 1
    out = np.zeros((R.dim, L), dtype=np.int16)
    for k, vec in coeffs.items():
        out[:, k] = vec
    return out


def ra_mul(R: FiniteAlgebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    f = R.field
    La, Lb = a.shape[1], b.shape[1]
    out = np.zeros((R.dim, La + Lb - 1), dtype=np.int16)
    for ka in range(La):
        if not a[:, ka].any():
            continue
        for kb in range(Lb):
            if not b[:, kb].any():
                continue
            prod = R.mul_vec(a[:, ka], b[:, kb])
            col = out[:, ka + kb]
            for i in range(R.dim):
                if prod[i]:
                    col[i] = f.add(int(col[i]), int(prod[i]))
    return out


def ra_frob(R: FiniteAlgebra, a: np.ndarray) -> np.ndarray:
    """Apply r -> r^q to every t-coefficient (the tau twist)."""
    out = np.zeros_like(a)
    for k in range(a.shape[1]):
        if a[:, k].any():
            out[:, k] = R.frob_vec(a[:, k])
    return out


class AffineShtuka:
    """sigma, jtau: rank_out x rank matrices with entries in R (x) A.

    jtau acts through the Frobenius twist: on an element with
    R-coefficient r the map first replaces r by r^q, so
    (j tau)(r x) = r^q (j tau)(x) while the A-coefficient passes
    through untouched.
    """

    def __init__(self, R: FiniteAlgebra, sigma, jtau, label: str = ""):
        self.R = R
        self.sigma = sigma
        self.jtau = jtau
        self.rank = len(sigma[0]) if sigma else 0
        self.rank_out = len(sigma)
        self.label = label
        assert len(jtau) == self.rank_out

    @classmethod
    def carlitz(cls, R: FiniteAlgebra) -> "AffineShtuka":
        """sigma = 1 (x) t - t_img (x) 1, j = 1."""
        f = R.field
        s = ra_element(R, {1: R.one, 0: np.array(
            [f.neg(int(c)) for c in R.t_img], dtype=np.int16)})
        j = ra_element(R, {0: R.one})
        return cls(R, [[s]], [[j]], label="carlitz")

    @classmethod
    def unit(cls, R: FiniteAlgebra) -> "AffineShtuka":
        one = ra_element(R, {0: R.one})
        return cls(R, [[one.copy()]], [[one.copy()]], label="unit")

    @classmethod
    def zero_maps(cls, R: FiniteAlgebra) -> "AffineShtuka":
        z = ra_element(R, {})
        return cls(R, [[z.copy()]], [[z.copy()]], label="zero")

    @property
    def shift(self) -> int:
        """Degree shift of the boundary in the A-variable."""
        s = 1
        for row in list(self.sigma) + list(self.jtau):
            for ent in row:
                s = max(s, ent.shape[1])
        return s - 1

    def apply_boundary(self, x):
        """d(x) = sigma x - jtau x^tau for x a list of (dim, L) arrays."""
        f = self.R.field
        L = max(v.shape[1] for v in x)
        Lout = L + self.shift
        out = [np.zeros((self.R.dim, Lout), dtype=np.int16)
               for _ in range(self.rank_out)]
        for kp in range(self.rank_out):
            for k in range(self.rank):
                a = ra_mul(self.R, self.sigma[kp][k], x[k])
                b = ra_mul(self.R, self.jtau[kp][k], ra_frob(self.R, x[k]))
                for term, sign in ((a, 1), (b, -1)):
                    w = min(term.shape[1], Lout)
                    if term[:, w:].any():
                        raise ExactnessFailure(
                            "boundary window overflow"
                        )
                    tgt = out[kp]
                    for c in range(w):
                        for i in range(self.R.dim):
                            v = int(term[i, c])
                            if v:
                                v = v if sign == 1 else f.neg(v)
                                tgt[i, c] = f.add(int(tgt[i, c]), v)
        return out

    def boundary_matrix(self, bound: int) -> np.ndarray:
        """Matrix of d from A-degree <= bound to degree <= bound + shift."""
        d = self.R.dim
        ncols = self.rank * d * (bound + 1)
        nrows = self.rank_out * d * (bound + 1 + self.shift)
        M = np.zeros((nrows, ncols), dtype=np.int16)
        col = 0
        for k in range(self.rank):
            for deg in range(bound + 1):
                for i in range(d):
                    x = [np.zeros((d, bound + 1), dtype=np.int16)
                         for _ in range(self.rank)]
                    x[k][i, deg] = 1
                    img = self.apply_boundary(x)
                    M[:, col] = np.concatenate(
                        [v.T.reshape(-1) for v in img]
                    )
                    col += 1
        return M


def boundary(s: AffineShtuka):
    """The complex map d = sigma - j tau as a callable on window vectors."""
    return s.apply_boundary


def hom_from_unit(s: AffineShtuka, bound: int):
    """Basis of homs from the unit shtuka, A-degree <= bound.

    A hom is determined by the image section f and exists exactly when
    d(f) = 0, so this is the kernel of the windowed boundary.
    """
    assert bound >= 1
    M = s.boundary_matrix(bound)
    ker = linalg.kernel_basis(s.R.field, M)
    d = s.R.dim
    out = []
    for v in ker:
        sec = []
        for k in range(s.rank):
            blk = v[k * d * (bound + 1): (k + 1) * d * (bound + 1)]
            sec.append(blk.reshape(bound + 1, d).T.copy())
        out.append(sec)
    return out


def alpha_matrix(R: FiniteAlgebra, bound: int) -> np.ndarray:
    """Matrix of alpha: r (x) a -> phi_a(r) on the degree window."""
    d = R.dim
    M = np.zeros((d, d * (bound + 1)), dtype=np.int16)
    col = 0
    for deg in range(bound + 1):
        pol = Poly.monomial(R.field, deg)
        for i in range(d):
            e = np.zeros(d, dtype=np.int16)
            e[i] = 1
            M[:, col] = R.phi_poly(pol, e)
            col += 1
    return M


def check_prop_away(R: FiniteAlgebra, bound: int) -> dict:
    """Windowed exactness of 0 -> R(x)A -> R(x)A -> C_0(R) -> 0.

    Four dimension-exact checks; raises ExactnessFailure with a witness
    on the first one that fails.
    """
    f = R.field
    s = AffineShtuka.carlitz(R)
    d = R.dim
    if d == 0:
        return {"dims": (0, 0), "parts": ["vacuous"]}
    D = s.boundary_matrix(bound - 1)
    ker = linalg.kernel_basis(f, D)
    if len(ker):
        raise ExactnessFailure(
            f"boundary not injective on window {bound - 1}: {ker[0]}"
        )
    A = alpha_matrix(R, bound)
    comp = linalg.matmul(f, A, D)
    if comp.any():
        j = int(np.nonzero(comp.any(axis=0))[0][0])
        raise ExactnessFailure(
            f"alpha . boundary nonzero on basis column {j}"
        )
    if linalg.rank(f, A) != d:
        raise ExactnessFailure("alpha not surjective onto C_0")
    ker_alpha = len(linalg.kernel_basis(f, A))
    im_d = linalg.rank(f, D)
    if ker_alpha != d * bound or im_d != d * bound:
        raise ExactnessFailure(
            f"window dimensions off: ker alpha = {ker_alpha}, "
            f"im boundary = {im_d}, expected {d * bound}"
        )
    return {
        "algebra": R.label,
        "bound": bound,
        "dims": (ker_alpha, im_d),
        "parts": ["injective", "complex", "surjective", "exact"],
    }


# -- the Lie-side diagram at a place ------------------------------------------

def _random_domain_series(place, rng, prec: int) -> LaurentSeries:
    rf = place.exp_cache.rf
    val = -place.e_z + int(rng.integers(0, 3))
    L = prec - val
    coeffs = rng.integers(0, place.field.q, size=(L, rf.d)).astype(np.int16)
    return LaurentSeries.make(rf, val, coeffs, prec)


def _random_poly(field: FieldSpec, rng, maxdeg: int) -> Poly:
    c = rng.integers(0, field.q, size=maxdeg + 1).astype(np.int16)
    return Poly(field, c)


def check_prop_lie(place, prec: int = 64, samples: int = 20, seed: int = 0):
    """Both commuting squares of the exp/Lie comparison at one place.

    Square 1: (exp (x) id) . (1 (x) t - t (x) 1) = d . (exp (x) id) on
    f (x) a carriers, coefficientwise in t^k.  Square 2: exp(a log f)
    equals the Carlitz action phi_a(f).
    """
    rng = np.random.default_rng(seed)
    cache = place.exp_cache
    tz = cache.t_series(prec + 2 * place.e_z + 4)
    slack = 6
    for trial in range(samples):
        fser = _random_domain_series(place, rng, prec)
        a = _random_poly(place.field, rng, 3)
        ef = cache.exp_eval(fser, prec)
        # square 1, collected per power of t in the A-slot
        lhs: dict = {}
        rhs: dict = {}
        for k in range(a.deg + 1):
            ck = int(a.c[k])
            if not ck:
                continue
            lhs[k + 1] = lhs.get(k + 1, LaurentSeries.zero(cache.rf, prec)) \
                + ef.scale(ck)
            lhs[k] = lhs.get(k, LaurentSeries.zero(cache.rf, prec)) \
                + cache.exp_eval(tz * fser, prec).scale(place.field.neg(ck))
            rhs[k + 1] = rhs.get(k + 1, LaurentSeries.zero(cache.rf, prec)) \
                + ef.scale(ck)
            rhs[k] = rhs.get(k, LaurentSeries.zero(cache.rf, prec)) + (
                tz * ef + ef.q_power()
            ).scale(place.field.neg(ck))
        for k in sorted(set(lhs) | set(rhs)):
            a_k = lhs.get(k)
            b_k = rhs.get(k)
            if a_k is None or b_k is None:
                bad = a_k if a_k is not None else b_k
                if bad is not None and not bad.is_zero():
                    raise IdentityFailure(
                        f"square 1 stray coefficient at t^{k}"
                    )
                continue
            if not a_k.agrees_with(b_k, prec - slack):
                raise IdentityFailure(
                    f"square 1 mismatch at t^{k}, trial {trial}: "
                    f"{(a_k - b_k).render()}"
                )
        # square 2: exp(iota(a) log f) = phi_a(f)
        logf = cache.log_eval(fser, prec)
        az = place.embed_tpoly(a, prec + 4 * place.e_z * (a.deg + 1))
        left = cache.exp_eval(az * logf, prec)
        right = phi_action(
            a,
            fser,
            t_mul=lambda x: tz * x,
            q_pow=lambda x: x.q_power(),
            add=lambda x, y: x + y,
            scal=lambda c, x: x.scale(c),
        )
        if not left.agrees_with(right, prec - slack):
            raise IdentityFailure(
                f"square 2 mismatch, trial {trial}: "
                f"{(left - right).render()}"
            )
    return {"place": place.degree, "samples": samples, "prec": prec,
            "squares": ["PASS", "PASS"]}
