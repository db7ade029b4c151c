"""Command line front end.

Three subcommands:

  coeffs      print exponential / logarithm coefficient tables for one q
  invariants  load a curve package and report unit and class module data
  verify      run named self-check suites, one PASS/FAIL line per check

Exit codes: 0 success, 1 verification or computation failure, 2 usage
error, 3 invalid curve package, 4 inconclusive cross-check under
--strict.
"""

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from .field import field as make_field
from .poly import Poly
from .exponential import exp_coeffs, log_coeffs, verify_functional_eq
from .errors import CarlitzError, InvalidPackage
from .curve import CurvePackage, stable_cohomology, decompose
from .ratfunc import RatFunc
from .shtuka import (
    FiniteAlgebra,
    AffineShtuka,
    hom_from_unit,
    check_prop_away,
    check_prop_lie,
    _random_domain_series,
)
from .invariants import report_lines

BUILTINS = ["p1", "g1_q3", "g2_q3", "g1_q5", "g3_q5", "generic_q2"]

EXPECTED_GENUS = {
    "p1": 0,
    "g1_q3": 1,
    "g2_q3": 2,
    "g1_q5": 1,
    "g3_q5": 3,
    "generic_q2": 0,
}

# one built-in curve per base field, for place-level series checks
PLACE_CURVE = {2: "p1", 3: "g1_q3", 5: "g1_q5"}


def _prime_power(q: int):
    """(p, e) with q = p^e, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        p = q
    m, e = q, 0
    while m % p == 0:
        m //= p
        e += 1
    return (p, e) if m == 1 else None


@dataclass
class RunConfig:
    command: str
    path: str = ""
    precision: int = 64
    depth: int = 6
    twists: tuple = (0,)
    machine: bool = False

    def __post_init__(self):
        if self.precision < 16:
            raise ValueError("precision must be at least 16")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        if any(n < 0 for n in self.twists):
            raise ValueError("twists must be nonnegative")


def _load_curve(name: str) -> CurvePackage:
    if os.path.exists(name):
        return CurvePackage.load(name)
    if name in BUILTINS:
        return CurvePackage.builtin(name)
    raise FileNotFoundError(name)


def cmd_coeffs(args) -> int:
    pp = _prime_power(args.q)
    if pp is None:
        print(f"error: q={args.q} is not a prime power", file=sys.stderr)
        return 2
    if not 0 <= args.count <= 8:
        print("error: count must be between 0 and 8", file=sys.stderr)
        return 2
    try:
        fq = make_field(*pp)
    except CarlitzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"q={args.q}")
    if args.count == 0:
        return 0
    e = exp_coeffs(fq, args.count)
    l = log_coeffs(fq, args.count)
    for i in range(1, args.count + 1):
        print(f"e[{i}]={e[i]!r}")
    for i in range(1, args.count + 1):
        print(f"l[{i}]={l[i]!r}")
    return 0


def cmd_invariants(args) -> int:
    try:
        twists = tuple(int(s) for s in args.twist.split(",") if s != "")
        cfg = RunConfig("invariants", args.curve, args.precision,
                        args.depth, twists, args.machine)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        curve = _load_curve(cfg.path)
    except (FileNotFoundError, OSError) as exc:
        print(f"error: cannot read curve package: {exc}", file=sys.stderr)
        return 2
    except CarlitzError as exc:
        print(f"error: invalid curve package: {exc}", file=sys.stderr)
        return 3
    cross = args.cross_check or args.strict
    try:
        lines, analytic = report_lines(
            curve,
            precision=cfg.precision,
            depth=cfg.depth,
            twists=cfg.twists,
            cross=cross,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidPackage as exc:
        print(f"error: invalid curve package: {exc}", file=sys.stderr)
        return 3
    except CarlitzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if cfg.machine:
        for line in lines:
            print(line)
    else:
        print(f"curve package: {cfg.path}")
        for line in lines:
            print(f"  {line}")
    if args.strict and analytic is not None and analytic["status"] != "PASS":
        return 4
    return 0


# -- verification suites -------------------------------------------------------

class _Runner:
    def __init__(self):
        self.failures = 0
        self.count = 0

    def run(self, label: str, fn):
        self.count += 1
        try:
            fn()
        except Exception as exc:
            self.failures += 1
            print(f"FAIL {label}: {exc}")
            return
        print(f"PASS {label}")


def _series_checks(r: _Runner, qs):
    for q in qs:
        pp = _prime_power(q)
        if pp is None:
            continue
        fq = make_field(*pp)

        def feq(fq=fq):
            assert verify_functional_eq(fq, 4), "identity families failed"

        r.run(f"functional-equation(q={q})", feq)

        def degree_law(fq=fq, q=q):
            e = exp_coeffs(fq, 5)
            for i in range(1, 6):
                gap = e[i].den.deg - e[i].num.deg
                assert gap == i * q**i, f"i={i}: gap {gap} != {i * q**i}"

        r.run(f"degree-law(q={q})", degree_law)

    for q in qs:
        if q not in PLACE_CURVE:
            continue

        def round_trip(q=q):
            curve = CurvePackage.builtin(PLACE_CURVE[q])
            rng = np.random.default_rng(0)
            prec = 48
            for place in curve.places:
                cache = place.exp_cache
                for _ in range(5):
                    x = _random_domain_series(place, rng, prec)
                    back = cache.log_eval(cache.exp_eval(x))
                    rv = (back - x).valuation()
                    assert rv >= prec - 4, f"residual valuation {rv}"

        r.run(f"round-trip(q={q})", round_trip)


def _exactness_checks(r: _Runner, qs, bound: int):
    for q in qs:
        if q not in (2, 3):
            continue
        fq = make_field(q)
        t = Poly.x(fq)
        quad = next(
            t * t + Poly.constant(fq, b) * t + Poly.constant(fq, c)
            for b in range(q) for c in range(q)
            if (t * t + Poly.constant(fq, b) * t
                + Poly.constant(fq, c)).is_irreducible()
        )
        for f in (t, t * t, quad, t * t - t):
            R = FiniteAlgebra.from_poly_quotient(f)

            def away(R=R):
                check_prop_away(R, bound)

            r.run(f"away(q={q}, {R.label})", away)


def _cech_checks(r: _Runner, qs):
    for name in BUILTINS:
        curve = CurvePackage.builtin(name)
        if qs is not None and curve.field.q not in qs:
            continue

        def window(curve=curve):
            g = curve.genus
            for m in (0, 1):
                data = stable_cohomology(curve, m)
                chi = data.h0_dim - data.h1_dim
                want = m * curve.n + 1 - g
                assert chi == want, f"m={m}: chi {chi} != {want}"

        r.run(f"window({name})", window)

        def genus(curve=curve, name=name):
            assert curve.genus == EXPECTED_GENUS[name], (
                f"genus {curve.genus} != {EXPECTED_GENUS[name]}"
            )

        r.run(f"genus({name})", genus)

        def split(curve=curve):
            fq = curve.field
            t = Poly.x(fq)
            x = curve.basis_fin[curve.n - 1].scale(t * t + Poly.one(fq))
            x = x + curve.basis_inf[curve.n - 1].scale(RatFunc(Poly.one(fq), t))
            ffin, ginf = decompose(curve, x, 0)
            assert (ffin + ginf) == x, "parts do not sum back"
            assert all(c.is_poly() for c in ffin.fin_coords())

        r.run(f"decompose({name})", split)


def _shtuka_checks(r: _Runner, qs, bound: int):
    for q in qs:
        if q not in (2, 3):
            continue
        fq = make_field(q)
        R = FiniteAlgebra.from_poly_quotient(Poly.x(fq))

        def hom_window(R=R):
            for b in (bound, bound + 2):
                got = len(hom_from_unit(AffineShtuka.unit(R), b))
                assert got == b + 1, f"bound {b}: dim {got} != {b + 1}"

        r.run(f"hom-window(q={q})", hom_window)

        def hom_carlitz(R=R):
            got = len(hom_from_unit(AffineShtuka.carlitz(R), bound))
            assert got == 0, f"dim {got} != 0"

        r.run(f"hom-carlitz(q={q})", hom_carlitz)

    for q in qs:
        if q not in PLACE_CURVE:
            continue

        def lie(q=q):
            curve = CurvePackage.builtin(PLACE_CURVE[q])
            for place in curve.places:
                check_prop_lie(place, prec=48, samples=6, seed=0)

        r.run(f"lie-diagram(q={q})", lie)


def cmd_verify(args) -> int:
    qs = [args.q] if args.q is not None else [2, 3, 4, 5]
    r = _Runner()
    suite = args.suite
    if suite in ("series", "all"):
        _series_checks(r, qs)
    if suite in ("exactness", "all"):
        _exactness_checks(r, qs, args.bound)
    if suite in ("cech", "all"):
        _cech_checks(r, qs if args.q is not None else None)
    if suite in ("shtuka", "all"):
        _shtuka_checks(r, qs, args.bound)
    if r.count == 0:
        print("error: no checks selected", file=sys.stderr)
        return 2
    return 1 if r.failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="carlitz",
        description="unit and class modules of the Carlitz module "
                    "over global function fields",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", help="exponential coefficient tables")
    c.add_argument("--q", type=int, default=2)
    c.add_argument("--count", type=int, default=4)
    c.set_defaults(fn=cmd_coeffs)

    i = sub.add_parser("invariants", help="unit/class module report")
    i.add_argument("--curve", required=True,
                   help="path to a .curve file or a built-in name")
    i.add_argument("--precision", type=int, default=64)
    i.add_argument("--depth", type=int, default=6)
    i.add_argument("--twist", default="0",
                   help="comma separated twist list, e.g. 0,1,2")
    i.add_argument("--machine", action="store_true",
                   help="bare key=value lines")
    i.add_argument("--cross-check", action="store_true",
                   help="run the analytic cross-check")
    i.add_argument("--strict", action="store_true",
                   help="exit 4 unless the cross-check returns PASS")
    i.set_defaults(fn=cmd_invariants)

    v = sub.add_parser("verify", help="self-check suites")
    v.add_argument("--suite", default="all",
                   choices=["series", "exactness", "cech", "shtuka", "all"])
    v.add_argument("--q", type=int, default=None,
                   help="restrict checks to one base field size")
    v.add_argument("--bound", type=int, default=8,
                   help="degree window for exactness checks")
    v.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
