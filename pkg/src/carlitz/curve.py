"""Function field packages and Cech cohomology of t-power twists.

A package is a smooth projective curve over F_q presented by a plane
model g(t, y) = 0 that is monic in y, together with module bases for
the two coordinate rings: O_fin (integral closure of F_q[t]) over
A = F_q[t], and O_inf (integral closure of F_q[s], s = 1/t) over
F_q[s]. The two charts glue along O_fin[1/t], and cohomology of the
twists O(m D), D the pole divisor of t, is computed in finite windows
of t-degrees with explicit stability checks.
"""

from __future__ import annotations

import math
import re
from importlib import resources

import numpy as np

from . import linalg
from .errors import (
    Inconsistent,
    InvariantViolation,
    NonzeroClass,
    ParseError,
    WindowTooSmall,
)
from .field import FieldSpec, field as make_field
from .poly import Poly, parse_poly
from .ratfunc import RatFunc


class KElem:
    """Element of the function field, coordinates over powers of y."""

    __slots__ = ("curve", "co")

    def __init__(self, curve: "CurvePackage", co):
        self.curve = curve
        n = curve.n
        lst = list(co) + [RatFunc.zero(curve.field)] * (n - len(co))
        if len(lst) > n:
            lst = _reduce_ycoords(curve.field, curve.model, lst)
        self.co = lst[:n]

    def is_zero(self) -> bool:
        return all(r.is_zero() for r in self.co)

    def __add__(self, other):
        assert self.curve is other.curve
        return KElem(self.curve, [a + b for a, b in zip(self.co, other.co)])

    def __sub__(self, other):
        assert self.curve is other.curve
        return KElem(self.curve, [a - b for a, b in zip(self.co, other.co)])

    def __neg__(self):
        return KElem(self.curve, [-a for a in self.co])

    def __mul__(self, other):
        if isinstance(other, KElem):
            assert self.curve is other.curve
            raw = _yconv(self.co, other.co)
            return KElem(
                self.curve,
                _reduce_ycoords(self.curve.field, self.curve.model, raw),
            )
        return self.scale(other)

    def scale(self, r) -> "KElem":
        if isinstance(r, Poly):
            r = RatFunc.of(r)
        elif isinstance(r, int):
            r = RatFunc.of(Poly.constant(self.curve.field, r))
        return KElem(self.curve, [a * r for a in self.co])

    def __pow__(self, k: int):
        assert k >= 0
        out = self.curve.one
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def q_power(self) -> "KElem":
        return self ** self.curve.field.q

    def fin_coords(self):
        """Coordinates over basis_fin (rational; integral iff in O_fin)."""
        return _mat_vec_frac(self.curve._binv, self.co)

    def __eq__(self, other):
        return isinstance(other, KElem) and self.curve is other.curve and all(
            a == b for a, b in zip(self.co, other.co)
        )

    def __hash__(self):
        return hash(tuple(self.co))

    def __repr__(self):
        parts = []
        for j, r in enumerate(self.co):
            if r.is_zero():
                continue
            ypart = "1" if j == 0 else ("y" if j == 1 else f"y^{j}")
            parts.append(f"({r})*{ypart}" if j else f"{r}")
        return " + ".join(parts) if parts else "0"


def _yconv(a, b):
    field = a[0].field
    out = [RatFunc.zero(field) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def _reduce_ycoords(field, model, co):
    n = len(model) - 1
    co = list(co)
    while len(co) > n:
        top = co.pop()
        if top.is_zero():
            continue
        for j in range(n):
            aj = RatFunc.of(model[j])
            co[len(co) - n + j] = co[len(co) - n + j] - top * aj
    return co


# -- small exact linear algebra over the fraction field --------------------------


def _invert_frac(field, M):
    """Inverse of a square matrix with RatFunc entries."""
    n = len(M)
    A = [row[:] for row in M]
    I = [
        [RatFunc.one(field) if i == j else RatFunc.zero(field) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(
            (r for r in range(col, n) if not A[r][col].is_zero()), None
        )
        if piv is None:
            raise InvariantViolation("basis", "basis matrix is singular")
        A[col], A[piv] = A[piv], A[col]
        I[col], I[piv] = I[piv], I[col]
        inv = A[col][col].inverse()
        A[col] = [x * inv for x in A[col]]
        I[col] = [x * inv for x in I[col]]
        for r in range(n):
            if r != col and not A[r][col].is_zero():
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                I[r] = [x - f * y for x, y in zip(I[r], I[col])]
    return I


def _mat_vec_frac(M, v):
    out = []
    for row in M:
        acc = RatFunc.zero(v[0].field)
        for x, y in zip(row, v):
            if not (x.is_zero() or y.is_zero()):
                acc = acc + x * y
        out.append(acc)
    return out


# -- expression parser ------------------------------------------------------------


class _ExprParser:
    """t, s = 1/t, y, w over +, -, *, ^ and parentheses.

    Evaluates to coordinates over powers of y with rational entries.
    """

    def __init__(self, field: FieldSpec, text: str):
        self.field = field
        self.toks = self._lex(text)
        self.pos = 0

    @staticmethod
    def _lex(text):
        toks = re.findall(r"\d+|[tsyw]|[()+\-*^]", text.replace(" ", ""))
        if "".join(toks) != text.replace(" ", ""):
            raise ParseError(f"cannot tokenize {text!r}")
        return toks

    def _peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _next(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def parse(self):
        v = self._expr()
        if self._peek() is not None:
            raise ParseError(f"trailing input at {self._peek()!r}")
        return v

    def _expr(self):
        sign = 1
        while self._peek() in ("+", "-"):
            if self._next() == "-":
                sign = -sign
        v = self._term()
        if sign < 0:
            v = [-x for x in v]
        while self._peek() in ("+", "-"):
            op = self._next()
            w = self._term()
            if op == "-":
                w = [-x for x in w]
            v = self._add(v, w)
        return v

    def _term(self):
        v = self._factor()
        while self._peek() == "*":
            self._next()
            v = _yconv_pad(v, self._factor())
        return v

    def _factor(self):
        v = self._atom()
        if self._peek() == "^":
            self._next()
            tok = self._next()
            if tok is None or not tok.isdigit():
                raise ParseError("exponent must be a literal integer")
            k = int(tok)
            out = [RatFunc.one(self.field)]
            for _ in range(k):
                out = _yconv_pad(out, v)
            v = out
        return v

    def _atom(self):
        tok = self._next()
        f = self.field
        if tok is None:
            raise ParseError("unexpected end of expression")
        if tok == "(":
            v = self._expr()
            if self._next() != ")":
                raise ParseError("unbalanced parenthesis")
            return v
        if tok.isdigit():
            return [RatFunc.of(Poly.constant(f, int(tok) % f.p))]
        if tok == "t":
            return [RatFunc.of(Poly.x(f))]
        if tok == "s":
            return [RatFunc(Poly.one(f), Poly.x(f))]
        if tok == "y":
            return [RatFunc.zero(f), RatFunc.one(f)]
        if tok == "w":
            if f.e == 1:
                raise ParseError("w is only defined for extension fields")
            return [RatFunc.of(Poly.constant(f, f.element("w").code))]
        raise ParseError(f"unexpected token {tok!r}")

    def _add(self, a, b):
        n = max(len(a), len(b))
        f = self.field
        a = a + [RatFunc.zero(f)] * (n - len(a))
        b = b + [RatFunc.zero(f)] * (n - len(b))
        return [x + y for x, y in zip(a, b)]


def _yconv_pad(a, b):
    return _yconv(a, b)


def parse_kexpr(field: FieldSpec, text: str):
    return _ExprParser(field, text).parse()


# -- the package ------------------------------------------------------------------


class CurvePackage:
    def __init__(self, field: FieldSpec, model, basis_fin_y, basis_inf_y,
                 kind: str = "generic", series_prec: int = 64,
                 expected_genus: int = None):
        self.field = field
        self.kind = kind
        self.series_prec = series_prec
        self.expected_genus = expected_genus
        self.model = list(model)
        self.n = len(self.model) - 1
        if self.n < 1:
            raise InvariantViolation("model", "model must involve y")
        top = self.model[self.n]
        if top.deg != 0 or top.c[0] != 1:
            raise InvariantViolation("monic", "model is not monic in y")
        if self.model[0].is_zero():
            raise InvariantViolation("model", "y divides the model")
        self._genus = None
        self._places = None
        self._coh_cache = {}

        zero = RatFunc.zero(field)
        one = RatFunc.one(field)
        self.one = None  # filled after bases exist

        def pad(co):
            return list(co) + [zero] * (self.n - len(co))

        if len(basis_fin_y) != self.n or len(basis_inf_y) != self.n:
            raise InvariantViolation(
                "basis", f"need exactly {self.n} basis elements per chart"
            )
        self._bmat = [pad(co) for co in basis_fin_y]  # rows: y-coords of b_i
        self._cmat = [pad(co) for co in basis_inf_y]
        # column convention for solving: transpose so columns are basis vecs
        self._binv = _invert_frac(field, _transpose(self._bmat))
        self._cinv = _invert_frac(field, _transpose(self._cmat))

        self.one = KElem(self, [one])
        self.t = KElem(self, [RatFunc.of(Poly.x(field))])
        self.y = KElem(self, [zero, one]) if self.n > 1 else KElem(
            self, _reduce_ycoords(field, self.model, [zero, one])
        )
        self.basis_fin = [KElem(self, co) for co in self._bmat]
        self.basis_inf = [KElem(self, co) for co in self._cmat]

        self._validate_bases()
        self._inf_coords_cache = [self._inf_laurent(c) for c in self.basis_inf]
        self._frob_consts = self._compute_frob_consts()
        spreads = [
            top - bot for (top, bot) in
            (self._laurent_span(g) for g in self._inf_coords_cache)
        ]
        degs = [p.deg for p in self.model if p.deg > 0]
        degs += [f.deg for row in self._frob_consts for f in row if f.deg > 0]
        degs += spreads
        self._wdeg = max(degs + [1])

    # -- validation --------------------------------------------------------

    def _validate_bases(self):
        f = self.field
        # 1 must be an A-combination of basis_fin
        co = _mat_vec_frac(self._binv, self.one.co)
        if not all(r.is_poly() for r in co):
            raise InvariantViolation("unit", "1 is not integral over basis_fin")
        # y integral over A since the model is monic; must be in the span
        if not all(r.is_poly() for r in self.y.fin_coords()):
            raise InvariantViolation(
                "closure", "y is not an A-combination of basis_fin"
            )
        for i in range(self.n):
            for j in range(i, self.n):
                prod = self.basis_fin[i] * self.basis_fin[j]
                if not all(r.is_poly() for r in prod.fin_coords()):
                    raise InvariantViolation(
                        "closure",
                        f"b_{i} * b_{j} leaves the basis_fin lattice",
                    )
        # infinity side: coefficients must be polynomials in s = 1/t
        co = _mat_vec_frac(self._cinv, self.one.co)
        if not all(_is_s_poly(r) for r in co):
            raise InvariantViolation("unit", "1 is not integral over basis_inf")
        for i in range(self.n):
            for j in range(i, self.n):
                prod = self.basis_inf[i] * self.basis_inf[j]
                co = _mat_vec_frac(self._cinv, prod.co)
                if not all(_is_s_poly(r) for r in co):
                    raise InvariantViolation(
                        "closure",
                        f"c_{i} * c_{j} leaves the basis_inf lattice",
                    )

    def _inf_laurent(self, c: KElem):
        """basis_fin coordinates of c as Laurent polynomials in t.

        Returns a list of n dicts {t-degree: code}.
        """
        co = c.fin_coords()
        out = []
        for r in co:
            d = {}
            if not r.is_zero():
                den = r.den
                if den.deg > 0 and any(den.c[:-1]):
                    # denominator must be a power of t for chart gluing
                    raise InvariantViolation(
                        "basis_inf",
                        "basis_inf coordinates need t-power denominators",
                    )
                k = den.deg
                for dd in range(r.num.deg + 1):
                    if r.num.c[dd]:
                        d[dd - k] = int(r.num.c[dd])
            out.append(d)
        return out

    def _laurent_span(self, coords):
        degs = [k for d in coords for k in d]
        if not degs:
            return (0, 0)
        return (max(degs), min(degs))

    def _compute_frob_consts(self):
        """F with b_i^q = sum_k F[k][i] b_k, entries in A."""
        f = self.field
        cols = []
        for i, b in enumerate(self.basis_fin):
            co = b.q_power().fin_coords()
            if not all(r.is_poly() for r in co):
                raise InvariantViolation(
                    "closure", f"b_{i}^q leaves the basis_fin lattice"
                )
            cols.append([r.num if not r.is_zero() else Poly.zero(f)
                         for r in co])
        return [[cols[i][k] for i in range(self.n)] for k in range(self.n)]

    @property
    def frob_consts(self):
        return self._frob_consts

    # -- places and genus -----------------------------------------------------

    @property
    def places(self):
        if self._places is None:
            from .places import enumerate_places

            self._places = enumerate_places(self.field, self.model)
        return self._places

    @property
    def genus(self) -> int:
        if self._genus is None:
            data = stable_cohomology(self, 0)
            if data.h0_dim != 1:
                raise InvariantViolation(
                    "connected", f"h0(O) = {data.h0_dim}, expected 1"
                )
            self._genus = data.h1_dim
            if (
                self.expected_genus is not None
                and self._genus != self.expected_genus
            ):
                raise InvariantViolation(
                    "genus",
                    f"computed genus {self._genus} != expected "
                    f"{self.expected_genus}",
                )
        return self._genus

    def element(self, text: str) -> KElem:
        return KElem(self, parse_kexpr(self.field, text))

    def from_fin_coords(self, polys) -> KElem:
        acc = KElem(self, [])
        for p, b in zip(polys, self.basis_fin):
            if isinstance(p, Poly) and p.deg >= 0:
                acc = acc + b.scale(p)
        return acc

    # -- constructors ------------------------------------------------------------

    @classmethod
    def superelliptic(cls, field: FieldSpec, m: int, f: Poly,
                      series_prec: int = 64):
        """y^m = f(t) with m coprime to both p and deg f, f squarefree."""
        if m < 1:
            raise InvariantViolation("model", "y-degree must be positive")
        if math.gcd(m, field.p) != 1:
            raise InvariantViolation("tame", f"p = {field.p} divides m = {m}")
        if f.deg < 1:
            raise InvariantViolation("model", "f must be nonconstant")
        if math.gcd(m, f.deg) != 1:
            raise InvariantViolation(
                "coprime", f"gcd(m, deg f) = {math.gcd(m, f.deg)} != 1"
            )
        if not f.is_squarefree():
            raise InvariantViolation("squarefree", "f has a repeated root")
        model = [-f] + [Poly.zero(field)] * (m - 1) + [Poly.one(field)]
        if m == 1:
            model = [-f, Poly.one(field)]
        zero, one = RatFunc.zero(field), RatFunc.one(field)
        basis_fin = []
        basis_inf = []
        t = Poly.x(field)
        for i in range(m):
            co = [zero] * i + [one]
            basis_fin.append(co)
            k = -(-i * f.deg // m)  # ceil(i deg f / m)
            basis_inf.append([zero] * i + [RatFunc(Poly.one(field), t**k)])
        genus = (m - 1) * (f.deg - 1) // 2
        return cls(field, model, basis_fin, basis_inf,
                   kind="superelliptic", series_prec=series_prec,
                   expected_genus=genus)

    @classmethod
    def loads(cls, text: str) -> "CurvePackage":
        sections = _parse_sections(text)
        if "field" not in sections or "model" not in sections:
            raise ParseError("need [field] and [model] sections")
        fsec = sections["field"]
        p = int(fsec.get("p", "0"))
        e = int(fsec.get("e", "1"))
        modulus = None
        base = make_field(p, e)
        if "modulus" in fsec:
            probe = make_field(p, e)
            modulus = _parse_modulus(probe, fsec["modulus"])
            base = make_field(p, e, modulus)
        msec = sections["model"]
        kind = msec.get("kind")
        prec = int(sections.get("precision", {}).get("series", "64"))
        if kind == "pone":
            return cls.superelliptic(base, 1, Poly.x(base),
                                     series_prec=prec)
        if kind == "superelliptic":
            m = int(msec["m"])
            f = parse_poly(base, msec["f"])
            return cls.superelliptic(base, m, f, series_prec=prec)
        if kind == "generic":
            graw = parse_kexpr(base, msec["g"])
            model = []
            for r in graw:
                if not r.is_poly():
                    raise InvariantViolation(
                        "model", "model coefficients must be polynomial in t"
                    )
                model.append(r.num if not r.is_zero() else Poly.zero(base))
            bf = [parse_kexpr(base, s)
                  for s in msec["basis_fin"].split(";") if s]
            bi = [parse_kexpr(base, s)
                  for s in msec["basis_inf"].split(";") if s]
            return cls(base, model, bf, bi, kind="generic", series_prec=prec)
        raise ParseError(f"unknown model kind {kind!r}")

    @classmethod
    def load(cls, path: str) -> "CurvePackage":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.loads(fh.read())

    @classmethod
    def builtin(cls, name: str) -> "CurvePackage":
        ref = resources.files("carlitz.data").joinpath(f"{name}.curve")
        if not ref.is_file():
            raise ParseError(f"no builtin curve named {name!r}")
        return cls.loads(ref.read_text(encoding="utf-8"))

    def __repr__(self):
        return (
            f"CurvePackage(q={self.field.q}, kind={self.kind}, n={self.n})"
        )


def _transpose(M):
    return [list(row) for row in zip(*M)]


def _is_s_poly(r: RatFunc) -> bool:
    """True when r, rewritten in s = 1/t, is a polynomial in s."""
    if r.is_zero():
        return True
    den = r.den
    if den.deg > 0 and any(den.c[:-1]):
        return False
    return r.num.deg <= den.deg


def _parse_sections(text: str):
    out = {}
    current = None
    for rawline in text.splitlines():
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        mobj = re.match(r"^\[(\w+)\]\s*(.*)$", line)
        if mobj:
            current = mobj.group(1)
            out.setdefault(current, {})
            line = mobj.group(2).strip()
            if not line:
                continue
        if current is None:
            raise ParseError(f"data before any section: {rawline!r}")
        for tok in line.split():
            if "=" not in tok:
                raise ParseError(f"expected key=value, got {tok!r}")
            k, v = tok.split("=", 1)
            out[current][k] = v
    return out


def _parse_modulus(probe_field, text: str) -> np.ndarray:
    # modulus text is in w over the prime field, e.g. w^2+w+1
    from .poly import parse_poly as pp

    base = make_field(probe_field.p, 1)
    poly = pp(base, text.replace("w", "t"))
    return poly.c.copy()


# -- Cech windows ---------------------------------------------------------------


class CechData:
    """Cohomology of O(mD) in an explicit window of t-degrees.

    The negative window carries H1 = O_fin[1/t] / (O_fin + t^m O_inf):
    t-degrees -Ndeep..-1, with relation rows from the infinity chart.
    H0 lives in polynomial degrees 0..Dmax.
    """

    def __init__(self, curve: CurvePackage, m: int, N: int = None,
                 Ndeep: int = None, Dmax: int = None):
        self.curve = curve
        self.m = m
        n = curve.n
        wdeg = curve._wdeg
        if N is None:
            N = 2 * wdeg + abs(m) * n + 4
        spans = [curve._laurent_span(g) for g in curve._inf_coords_cache]
        spread = max((top - bot for top, bot in spans), default=0)
        if Ndeep is None:
            Ndeep = N + spread + 2
        if Dmax is None:
            Dmax = max(0, m) + 2 * wdeg + 4
        self.N, self.Ndeep, self.Dmax = N, Ndeep, Dmax
        self._build()

    # flat column index for the negative window; shallow degrees first
    def _ncol(self, i: int, k: int) -> int:
        assert k < 0
        return (-k - 1) * self.curve.n + i

    def _ncol_inv(self, col: int):
        n = self.curve.n
        return (col % n, -(col // n) - 1)

    def _build(self):
        curve, m = self.curve, self.m
        f = curve.field
        n = curve.n
        ncols = self.Ndeep * n
        spans = [curve._laurent_span(g) for g in curve._inf_coords_cache]
        max_top = max((top for top, _ in spans), default=0)
        min_bot = min((bot for _, bot in spans), default=0)
        # relations straddling the floor are skipped, so the bottom
        # guard zone can hold spurious unpivoted columns; ignore it
        self.guard = (max_top - min_bot) + 2
        Lmax = m + max_top + self.Ndeep
        gens = []
        self.gen_index = []
        for l in range(max(0, Lmax) + 1):
            for j, coords in enumerate(curve._inf_coords_cache):
                row = np.zeros(ncols, dtype=np.int16)
                touched = False
                skip = False
                for i, dct in enumerate(coords):
                    for dd, code in dct.items():
                        k = m - l + dd
                        if k < 0:
                            if k < -self.Ndeep:
                                skip = True
                                break
                            row[self._ncol(i, k)] = f.add(
                                row[self._ncol(i, k)], code
                            )
                            touched = True
                    if skip:
                        break
                if skip or not touched:
                    continue
                gens.append(row)
                self.gen_index.append((l, j))
        if gens:
            G = np.vstack(gens)
        else:
            G = np.zeros((0, ncols), dtype=np.int16)
        R, T, piv = linalg.rref_with_transform(f, G)
        keep = [r for r in range(len(R)) if R[r].any()]
        self.rel_R = R[keep] if len(keep) else np.zeros((0, ncols), np.int16)
        self.rel_T = T[keep] if len(keep) else np.zeros((0, len(G)), np.int16)
        self.rel_piv = piv[: len(keep)]
        pivset = set(int(c) for c in self.rel_piv)
        floor = -(self.Ndeep - self.guard)
        self.reps = [
            self._ncol_inv(c)
            for c in range(ncols)
            if c not in pivset and self._ncol_inv(c)[1] >= floor
        ]
        self.h1_dim = len(self.reps)
        self._rep_col = {self._ncol(i, k): idx
                         for idx, (i, k) in enumerate(self.reps)}
        self._build_h0()

    def _build_h0(self):
        curve, m = self.curve, self.m
        f = curve.field
        n = curve.n
        # unknowns: polynomial coords p_{i,d} (d <= Dmax) and chart
        # coefficients alpha_{l,j}; equation p - alpha = 0 over the
        # full window -Ndeep..Dmax
        max_top = max(
            (top for top, _ in
             (curve._laurent_span(g) for g in curve._inf_coords_cache)),
            default=0,
        )
        # chart generators may cancel each other's tails, so allow the
        # full depth of the window, not just the ones reaching degree 0
        Lmax = max(0, m + max_top + self.Ndeep)
        width = self.Ndeep + self.Dmax + 1

        def col(i, k):
            return (k + self.Ndeep) * n + i

        pcols = []
        for d in range(self.Dmax + 1):
            for i in range(n):
                v = np.zeros(width * n, dtype=np.int16)
                v[col(i, d)] = 1
                pcols.append(v)
        acols = []
        self._h0_gen_index = []
        for l in range(Lmax + 1):
            for j, coords in enumerate(curve._inf_coords_cache):
                v = np.zeros(width * n, dtype=np.int16)
                ok = True
                for i, dct in enumerate(coords):
                    for dd, code in dct.items():
                        k = m - l + dd
                        if k > self.Dmax or k < -self.Ndeep:
                            ok = False
                            break
                        v[col(i, k)] = f.add(v[col(i, k)], code)
                    if not ok:
                        break
                if not ok:
                    continue
                acols.append(f.neg_table[v])
                self._h0_gen_index.append((l, j))
        M = np.array(
            [list(c) for c in (pcols + acols)], dtype=np.int16
        ).T if pcols or acols else np.zeros((width * n, 0), np.int16)
        ker = linalg.kernel_basis(f, M)
        np_unknowns = len(pcols)
        basis = []
        for kv in ker:
            pv = kv[:np_unknowns]
            if not pv.any():
                continue
            arr = np.zeros((n, self.Dmax + 1), dtype=np.int16)
            for d in range(self.Dmax + 1):
                for i in range(n):
                    arr[i, d] = pv[d * n + i]
            basis.append(arr)
        # echelonize so coordinates in the basis are solvable
        flat = np.array(
            [b.reshape(-1) for b in basis], dtype=np.int16
        ) if basis else np.zeros((0, n * (self.Dmax + 1)), np.int16)
        R, piv = linalg.rref(f, flat)
        keep = [r for r in range(len(R)) if R[r].any()]
        self.h0_mat = R[keep] if len(keep) else np.zeros(
            (0, n * (self.Dmax + 1)), np.int16
        )
        self.h0_piv = piv[: len(keep)]
        self.h0_dim = len(keep)

    # -- views -------------------------------------------------------------

    def h0_basis_coords(self):
        """Each H0 basis vector as an (n, Dmax+1) coefficient array."""
        n = self.curve.n
        return [row.reshape(n, self.Dmax + 1).copy() for row in self.h0_mat]

    def h0_elements(self):
        out = []
        f = self.curve.field
        for arr in self.h0_basis_coords():
            polys = [Poly(f, arr[i]) for i in range(self.curve.n)]
            out.append(self.curve.from_fin_coords(polys))
        return out

    def h0_coords_of(self, arr) -> np.ndarray:
        """Coordinates of a polynomial-coefficient array in the H0 basis."""
        a = np.asarray(arr, dtype=np.int16)
        n = self.curve.n
        assert a.shape[0] == n
        if a.shape[1] > self.Dmax + 1:
            if a[:, self.Dmax + 1:].any():
                raise Inconsistent("element outside the H0 degree window")
            a = a[:, : self.Dmax + 1]
        elif a.shape[1] < self.Dmax + 1:
            buf = np.zeros((n, self.Dmax + 1), dtype=np.int16)
            buf[:, : a.shape[1]] = a
            a = buf
        flat = a.reshape(-1)
        if self.h0_dim == 0:
            if flat.any():
                raise Inconsistent("element outside H0")
            return np.zeros(0, dtype=np.int16)
        res, coeffs = linalg.reduce_row(
            self.curve.field, self.h0_mat, self.h0_piv, flat
        )
        if res.any():
            raise Inconsistent("element outside H0")
        return coeffs

    def reduce_class(self, sparse: dict):
        """Reduce {(i, k): code, k < 0} to coordinates over the reps.

        Returns (coords, combo) where combo maps generator (l, j) pairs
        to the coefficient used; x - sum combo * t^(m-l) c_j is a
        polynomial part plus the residue.
        """
        f = self.curve.field
        ncols = self.Ndeep * self.curve.n
        v = np.zeros(ncols, dtype=np.int16)
        for (i, k), code in sparse.items():
            if k >= 0 or code == 0:
                continue
            if k < -self.Ndeep:
                raise WindowTooSmall(
                    f"degree {k} below the window floor {-self.Ndeep}"
                )
            v[self._ncol(i, k)] = f.add(v[self._ncol(i, k)], code % f.q)
        if self.rel_R.shape[0]:
            res, coeffs = linalg.reduce_row(
                f, self.rel_R, self.rel_piv, v
            )
        else:
            res, coeffs = v, np.zeros(0, dtype=np.int16)
        coords = np.zeros(self.h1_dim, dtype=np.int16)
        for c in np.nonzero(res)[0]:
            if int(c) not in self._rep_col:
                raise WindowTooSmall(
                    "reduction escaped into the window guard zone"
                )
            coords[self._rep_col[int(c)]] = res[c]
        combo = {}
        if len(coeffs):
            gen_co = linalg.matmul(
                f, coeffs.reshape(1, -1), self.rel_T
            )[0]
            for gi, code in enumerate(gen_co):
                if code:
                    combo[self.gen_index[gi]] = int(code)
        return coords, combo

    def class_of(self, x: KElem):
        """H1 class coordinates of a function field element."""
        sparse, _poly = _window_coords(self.curve, x)
        return self.reduce_class(sparse)[0]


def _window_coords(curve: CurvePackage, x: KElem):
    """Split basis_fin Laurent coordinates of x into negative and
    polynomial parts: ({(i, k): code, k<0}, (n, D+1) array)."""
    co = x.fin_coords()
    f = curve.field
    sparse = {}
    polyn = []
    topdeg = 0
    for r in co:
        if not r.is_zero():
            den = r.den
            if den.deg > 0 and any(den.c[:-1]):
                raise InvariantViolation(
                    "window", "element is not regular away from t poles"
                )
            topdeg = max(topdeg, r.num.deg - r.den.deg)
    arr = np.zeros((curve.n, topdeg + 1), dtype=np.int16)
    for i, r in enumerate(co):
        if r.is_zero():
            continue
        k0 = r.den.deg
        for d in range(r.num.deg + 1):
            code = int(r.num.c[d])
            if not code:
                continue
            k = d - k0
            if k < 0:
                sparse[(i, k)] = f.add(sparse.get((i, k), 0), code)
            else:
                arr[i, k] = f.add(int(arr[i, k]), code)
    return sparse, arr


def stable_cohomology(curve: CurvePackage, m: int) -> CechData:
    """CechData whose dimensions are stable under window doubling."""
    key = ("stable", m)
    if key in curve._coh_cache:
        return curve._coh_cache[key]
    n = curve.n
    N = 2 * curve._wdeg + abs(m) * n + 4
    prev = None
    while N <= 1024:
        data = CechData(curve, m, N=N)
        if prev is not None and (
            prev.h1_dim == data.h1_dim
            and prev.h0_dim == data.h0_dim
            and set(prev.reps) == set(data.reps)
        ):
            if m == 0:
                if data.h0_dim != 1:
                    raise InvariantViolation(
                        "connected", f"h0(O) = {data.h0_dim}"
                    )
            else:
                g = curve.genus
                lhs = data.h0_dim - data.h1_dim
                rhs = m * n + 1 - g
                if lhs != rhs:
                    raise InvariantViolation(
                        "euler",
                        f"chi(O({m}D)) = {lhs}, expected {rhs}",
                    )
            curve._coh_cache[key] = data
            return data
        prev = data
        N *= 2
    raise WindowTooSmall(f"no stable window below 1024 for twist {m}")


def decompose(curve: CurvePackage, x: KElem, m: int, data: CechData = None):
    """Write x = ffin + ginf with ffin in O_fin and ginf in t^m O_inf.

    Raises NonzeroClass with the H1 coordinates when the class of x in
    H1(O(mD)) is not zero (no such splitting exists).
    """
    sparse, _arr = _window_coords(curve, x)
    if data is None:
        deep = min((k for (_i, k) in sparse), default=0)
        base = stable_cohomology(curve, m)
        if -deep > base.Ndeep - curve._wdeg:
            data = CechData(curve, m, N=-deep + base.N,
                            Ndeep=-deep + base.Ndeep)
        else:
            data = base
    coords, combo = data.reduce_class(sparse)
    if coords.any():
        raise NonzeroClass(coords)
    f = curve.field
    t = Poly.x(f)
    ginf = KElem(curve, [])
    for (l, j), code in combo.items():
        k = m - l
        if k >= 0:
            r = RatFunc.of(Poly.constant(f, code) * t**k)
        else:
            r = RatFunc(Poly.constant(f, code), t ** (-k))
        ginf = ginf + curve.basis_inf[j].scale(r)
    ffin = x - ginf
    fco = ffin.fin_coords()
    if not all(r.is_poly() for r in fco):
        raise NonzeroClass(coords)
    return ffin, ginf


# -- maps between twist slices ------------------------------------------------

def _h1_transform(curve: CurvePackage, sparse: dict, kind: str) -> dict:
    """Push a negative window vector through one of the slice maps.

    kind 'incl' is the identity, 'mult' multiplies by t, 'frob' takes
    q-th powers.  Terms landing in nonnegative t-degree are absorbed by
    the finite chart and dropped.
    """
    f = curve.field
    if kind == "incl":
        return dict(sparse)
    out: dict = {}
    if kind == "mult":
        for (i, k), c in sparse.items():
            if k + 1 < 0:
                key = (i, k + 1)
                out[key] = f.add(out.get(key, 0), c)
        return {key: c for key, c in out.items() if c}
    if kind != "frob":
        raise ValueError(f"unknown slice map {kind!r}")
    F = curve.frob_consts
    q = f.q
    for (i, k), c in sparse.items():
        # (c b_i t^k)^q = c b_i^q t^{qk}; c is fixed by x -> x^q
        for r in range(curve.n):
            pol = F[r][i]
            for d, cd in enumerate(pol.c):
                if not cd:
                    continue
                kk = q * k + d
                if kk >= 0:
                    continue
                key = (r, kk)
                out[key] = f.add(out.get(key, 0), f.mul(c, int(cd)))
    return {key: c for key, c in out.items() if c}


def h1_map_matrix(c0: "CechData", c1: "CechData", kind: str) -> np.ndarray:
    """Matrix over F_q of a slice map on H1 classes, c0 reps -> c1 reps."""
    curve = c0.curve
    M = np.zeros((c1.h1_dim, c0.h1_dim), dtype=np.int16)
    for j, (i, k) in enumerate(c0.reps):
        img = _h1_transform(curve, {(i, k): 1}, kind)
        coords, _combo = c1.reduce_class(img)
        M[:, j] = coords
    return M


def h0_map_matrix(c0: "CechData", c1: "CechData", kind: str) -> np.ndarray:
    """Matrix over F_q of a slice map on global sections, in H0 bases."""
    curve = c0.curve
    M = np.zeros((c1.h0_dim, c0.h0_dim), dtype=np.int16)
    t = RatFunc.of(Poly.x(curve.field))
    for j, x in enumerate(c0.h0_elements()):
        if kind == "incl":
            y = x
        elif kind == "mult":
            y = x.scale(t)
        elif kind == "frob":
            y = x.q_power()
        else:
            raise ValueError(f"unknown slice map {kind!r}")
        sparse, arr = _window_coords(curve, y)
        if sparse:
            raise InvariantViolation(
                "window", "slice map image left the finite chart"
            )
        M[:, j] = c1.h0_coords_of(arr)
    return M
