"""Command-line surface for coordinates, eigenvalues, harmonics and expansions.

JSON payloads serialize every float at 17 significant digits so identical
inputs reproduce byte-identical output.  Exit codes: 0 success, 2 argument
error, 3 domain or precondition error, 4 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import coords, greens, harmonics, limits, wangerin
from .elliptic import Modulus
from .errors import ConvergenceError, DomainError, PreconditionError


def _fmt(x):
    if isinstance(x, float):
        return float(format(x, ".17g"))
    if isinstance(x, complex):
        return {"re": _fmt(x.real), "im": _fmt(x.imag)}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    return x


def _emit_json(payload: dict, out) -> None:
    json.dump(_fmt(payload), out, indent=2)
    out.write("\n")


def _emit_csv(header: list[str], rows, out) -> None:
    writer = csv.writer(out)
    writer.writerow(header)
    for row in rows:
        writer.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])


def _triple(text: str) -> tuple[float, float, float]:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z triple, got {text!r}")
    return tuple(parts)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bicyclide", description=__doc__)
    ap.add_argument("--out", default=None, help="output path (default: stdout)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coords", help="forward/inverse coordinate map")
    p.add_argument("direction", choices=("to", "from"))
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--s", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--z", type=float)

    p = sub.add_parser("eigen", help="one eigenvalue with diagnostics")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-11)

    p = sub.add_parser("eigen-table", help="CSV table of eigenvalues")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--k", type=float, required=True)

    p = sub.add_parser("harmonic", help="harmonic value at a point")
    p.add_argument("--kind", choices=harmonics.KINDS, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--point", type=_triple, required=True, metavar="x,y,z")

    p = sub.add_parser("expand", help="reciprocal-distance expansion")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--r", type=_triple, required=True, metavar="x,y,z")
    p.add_argument("--rstar", type=_triple, required=True, metavar="x,y,z")
    p.add_argument("--kind", choices=("first", "second"), default="first")
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)

    p = sub.add_parser("addition", help="half-integer Legendre Q addition series")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--p", type=_triple, required=True, metavar="s,t,phi")
    p.add_argument("--pstar", type=_triple, required=True, metavar="s,t,phi")
    p.add_argument("--nmax", type=int, required=True)

    p = sub.add_parser("limits", help="expansion term vs its closed-form limit")
    p.add_argument("--which", choices=("bispherical", "prolate"), required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--first", type=float, nargs=2, required=True,
                   metavar=("A", "B"), help="(s, t) or (sigma, t) of the first point")
    p.add_argument("--second", type=float, nargs=2, required=True,
                   metavar=("A", "B"), help="same pair for the starred point")

    p = sub.add_parser("plotdata", help="CSV data for coordinate-line/surface plots")
    psub = p.add_subparsers(dest="plotkind", required=True)
    pl = psub.add_parser("coordlines")
    pl.add_argument("--k", type=float, required=True)
    pl.add_argument("--ns", type=int, default=7)
    pl.add_argument("--nt", type=int, default=7)
    pl.add_argument("--samples", type=int, default=200)
    ps = psub.add_parser("surfaces")
    ps.add_argument("--k", type=float, required=True)
    ps.add_argument("--s0", type=float, required=True)
    ps.add_argument("--t0", type=float, required=True)
    ps.add_argument("--samples", type=int, default=48)
    return ap


def _run_coords(args, out) -> None:
    mod = Modulus.from_k(args.k)
    if args.direction == "to":
        if args.s is None or args.t is None:
            raise DomainError("coords to requires --s and --t")
        p = coords.BiCyclidePoint(args.s, args.t, args.phi, mod)
        q = coords.to_cartesian(p)
        back = coords.from_cartesian(q, mod) if math.hypot(q.x, q.y) > 0 else p
        resid = math.sqrt(
            (back.s - p.s) ** 2 + (back.t - p.t) ** 2 + (back.phi - p.phi) ** 2
        )
        payload = {"s": p.s, "t": p.t, "phi": p.phi, "x": q.x, "y": q.y, "z": q.z,
                   "residual": resid}
    else:
        if args.x is None or args.y is None or args.z is None:
            raise DomainError("coords from requires --x, --y and --z")
        p = coords.from_cartesian((args.x, args.y, args.z), mod)
        q = coords.to_cartesian(p)
        resid = math.dist((args.x, args.y, args.z), q)
        payload = {"s": p.s, "t": p.t, "phi": p.phi, "x": args.x, "y": args.y,
                   "z": args.z, "residual": resid}
    _emit_json(payload, out)


def _run_eigen(args, out) -> None:
    mod = Modulus.from_k(args.k)
    sol = wangerin.solve_eigen(args.nu, args.n, mod, tol=args.tol)
    xg, wg = np.polynomial.legendre.leggauss(400)
    sg = mod.bigK * xg
    vals = sol.interior(sg)
    norm = float(np.dot(mod.bigK * wg, vals * vals))
    payload = {
        "lambda": sol.lam,
        "norm_check": norm,
        "zero_count": sol.count_interior_zeros(),
    }
    _emit_json(payload, out)


def _run_eigen_table(args, out) -> None:
    mod = Modulus.from_k(args.k)
    rows = []
    for n in range(args.nmax + 1):
        sol = wangerin.solve_eigen(args.nu, n, mod)
        rows.append((n, sol.lam, wangerin.eigenvalue_lower_bound(args.nu, n, mod)))
    _emit_csv(["n", "lambda", "lower_bound"], rows, out)


def _run_harmonic(args, out) -> None:
    mod = Modulus.from_k(args.k)
    idx = harmonics.HarmonicIndex(args.m, args.n, args.kind)
    val = harmonics.eval_harmonic(idx, args.point, mod)
    _emit_json({"re": val.real, "im": val.imag, "convention": "d0=1"}, out)


def _run_expand(args, out) -> None:
    mod = Modulus.from_k(args.k)
    res = greens.expand_distance(args.r, args.rstar, args.kind, mod,
                                 args.mmax, args.nmax)
    relerr = abs(res.value - res.direct_value) / abs(res.direct_value)
    payload = {
        "direct": res.direct_value,
        "series": res.value,
        "relerr": relerr,
        "tail_estimate": res.tail_estimate,
        "shells": [float(v) for v in res.shell_sums()],
    }
    _emit_json(payload, out)


def _run_addition(args, out) -> None:
    mod = Modulus.from_k(args.k)
    p = coords.BiCyclidePoint(args.p[0], args.p[1], args.p[2], mod)
    ps = coords.BiCyclidePoint(args.pstar[0], args.pstar[1], args.pstar[2], mod)
    res = greens.addition_series(args.m, p, ps, args.nmax)
    payload = {
        "lhs_toroidal_Q": res.direct_value,
        "rhs_series": res.value,
        "relerr": abs(res.value - res.direct_value) / abs(res.direct_value),
    }
    _emit_json(payload, out)


def _run_limits(args, out) -> None:
    mod = Modulus.from_k(args.k)
    kind = "first" if args.which == "bispherical" else "second"
    A = limits.bicyclide_A(kind, args.m, args.n, tuple(args.first),
                           tuple(args.second), mod)
    if args.which == "bispherical":
        s, t = args.first
        ss, ts = args.second
        spec = limits.LimitTermSpec(args.m, args.n, (t, ts),
                                    (math.pi / 2 - s, math.pi / 2 - ss))
        B = limits.bispherical_B(spec)
    else:
        sig, t = args.first
        sigs, ts = args.second
        spec = limits.LimitTermSpec(args.m, args.n, (sig, sigs),
                                    (math.pi / 2 - t, math.pi / 2 - ts))
        B = limits.prolate_B(spec)
    _emit_json({"A": A, "B": B, "gap": abs(A - B) / abs(B)}, out)


def _run_plotdata(args, out) -> None:
    mod = Modulus.from_k(args.k)
    K, Kp = mod.bigK, mod.bigKprime
    if args.plotkind == "coordlines":
        rows = []
        su = np.linspace(-K, K, args.samples + 2)[1:-1]
        tu = np.linspace(-Kp, Kp, args.samples + 2)[1:-1]
        for i in range(args.ns):
            s0 = -K + (i + 1) * 2 * K / (args.ns + 1)
            R, z = coords._forward_RZ(s0, tu, mod)
            rows += [(f"s={s0:.6f}", s0, float(t), float(r), float(zz))
                     for t, r, zz in zip(tu, R, z)]
        for j in range(args.nt):
            t0 = -Kp + (j + 1) * 2 * Kp / (args.nt + 1)
            R, z = coords._forward_RZ(su, t0, mod)
            rows += [(f"t={t0:.6f}", float(s), t0, float(r), float(zz))
                     for s, r, zz in zip(su, R, z)]
        _emit_csv(["line_id", "s", "t", "R", "z"], rows, out)
    else:
        rows = []
        phis = np.linspace(-math.pi, math.pi, args.samples, endpoint=False)
        su = np.linspace(-K, K, args.samples + 2)[1:-1]
        tu = np.linspace(-Kp, Kp, args.samples + 2)[1:-1]
        R1, z1 = coords._forward_RZ(su, args.t0, mod)
        R2, z2 = coords._forward_RZ(args.s0, tu, mod)
        for phi in phis:
            c, s_ = math.cos(phi), math.sin(phi)
            rows += [("t_surface", float(r * c), float(r * s_), float(zz))
                     for r, zz in zip(R1, z1)]
            rows += [("s_surface", float(r * c), float(r * s_), float(zz))
                     for r, zz in zip(R2, z2)]
        _emit_csv(["surface_id", "x", "y", "z"], rows, out)


_RUNNERS = {
    "coords": _run_coords,
    "eigen": _run_eigen,
    "eigen-table": _run_eigen_table,
    "harmonic": _run_harmonic,
    "expand": _run_expand,
    "addition": _run_addition,
    "limits": _run_limits,
    "plotdata": _run_plotdata,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    buffer = io.StringIO()
    try:
        _RUNNERS[args.command](args, buffer)
    except (DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    text = buffer.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
