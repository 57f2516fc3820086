"""Command line interface: scan | predict | count | figure | verify | specfun.

Exit codes: 0 success, 2 violated invariants (verify found records inside a
forbidden region), 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import experiments, langer, predictors, specfun
from .potential import PotentialSpec
from .secular import window_for


def _add_pot_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=None, help="frequency exponent in [0,1]")
    p.add_argument("--v0", type=float, default=None, help="coupling amplitude V0 > 0")
    p.add_argument("--config", type=str, default=None, help="flat key = value config file")


def _resolve(args, key: str, cast, default):
    # CLI flag > config file > default
    val = getattr(args, key, None)
    if val is not None:
        return val
    if getattr(args, "config", None):
        cfg = experiments.load_config(args.config)
        if key in cfg:
            return cast(cfg[key])
    return default


def _pot_from(args) -> PotentialSpec:
    return PotentialSpec(
        V0=_resolve(args, "v0", float, 1.0),
        alpha=_resolve(args, "alpha", float, 0.0),
    )


def _parse_z(text: str) -> complex:
    re_s, im_s = text.split(",")
    return complex(float(re_s), float(im_s))


def cmd_scan(args) -> int:
    pot = _pot_from(args)
    re_min = _resolve(args, "re_min", float, 5.0)
    re_max = _resolve(args, "re_max", float, 60.0)
    n_max = _resolve(args, "n_max", int, int(1.2 * re_max))
    records = experiments.scan_spectrum(
        pot, (re_min, re_max), (0, n_max), threads=args.threads
    )
    os.makedirs(args.out, exist_ok=True)
    meta = {
        "V0": pot.V0,
        "alpha": pot.alpha,
        "re_range": [re_min, re_max],
        "n_max": n_max,
        "coupling_convention": "v_eff frozen per window at V0*center^alpha",
    }
    spath = os.path.join(args.out, "spectrum.csv")
    experiments.write_spectrum_csv(spath, records, meta)
    grid = [re_min + (re_max - re_min) * i / 127.0 for i in range(128)]
    experiments.write_curves_csv(os.path.join(args.out, "curves.csv"), pot,
                                 [g for g in grid if g >= 5.0])
    print(f"wrote {len(records)} records to {spath}")
    return 0


def cmd_predict(args) -> int:
    pot = _pot_from(args)
    center = _resolve(args, "center", float, 100.0)
    win = window_for(center, pot)
    preds = []
    if args.kind == "normal":
        n = args.n if args.n is not None else 0
        preds = predictors.normal_lattice(pot, win, n)
    elif args.kind == "band":
        n = args.n if args.n is not None else int(round(center))
        for N in ([args.band] if args.band else range(1, 6)):
            preds.append(predictors.glancing_band(pot, win, n, N))
    elif args.kind == "away":
        n = args.n if args.n is not None else int(round(center / 1.1))
        for k in ([args.k] if args.k else range(1, 6)):
            preds.append(predictors.away_glancing(pot, win, n, k))
    for p in preds:
        print(json.dumps({
            "kind": p.kind, "n": p.n, "index": p.k_or_N,
            "re_lambda": p.lambda0.real, "im_lambda": p.lambda0.imag,
            "expected_error": p.expected_error, "valid": p.valid,
        }, sort_keys=True))
    return 0


def cmd_count(args) -> int:
    pot = _pot_from(args)
    inv_h = [float(x) for x in args.inv_h.split(",")]
    report = experiments.counting_report(pot, inv_h, eps=args.eps, M=args.M,
                                         threads=args.threads)
    payload = {
        "h_values": report.h_values,
        "counts": report.counts,
        "fitted_slope": report.fitted_slope,
        "fit_residual": report.fit_residual,
        "box_params": list(report.box_params),
        "completeness_checks": report.completeness_checks,
        "completeness_failures": report.completeness_failures,
    }
    print(json.dumps(payload, sort_keys=True))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "count_report.json"), "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
    return 0


def cmd_figure(args) -> int:
    rng = None
    if args.re_min is not None and args.re_max is not None:
        rng = (args.re_min, args.re_max)
    paths = experiments.figure_pipeline(args.fig, args.out, V0=_resolve(args, "v0", float, 1.0),
                                        threads=args.threads, re_range=rng,
                                        n_max=args.n_max)
    for p in paths:
        print(p)
    return 0


def cmd_verify(args) -> int:
    pot = _pot_from(args)
    records, _meta = experiments.read_spectrum_csv(args.spectrum)
    bad = experiments.verify_free_regions(records, pot)
    for rec in bad:
        print(json.dumps({
            "n": rec.n, "re_lambda": rec.re_lambda, "im_lambda": rec.im_lambda,
            "band_residual": rec.band_residual,
        }, sort_keys=True))
    print(f"{len(bad)} violation(s) among {len(records)} records")
    return 2 if bad else 0


def cmd_specfun(args) -> int:
    z = _parse_z(args.z)
    n = args.n
    if args.kind in ("J", "H1"):
        pair = specfun.bessel_eval(n, z)
        value, deriv = (pair.j, pair.j_prime) if args.kind == "J" else (pair.h1, pair.h1_prime)
        payload = {
            "kind": args.kind, "n": n, "z": [z.real, z.imag],
            "value": [value.real, value.imag],
            "derivative": [deriv.real, deriv.imag],
            "regime": pair.regime,
            "wronskian_residual": pair.wronskian_residual,
        }
    elif args.kind in ("Ai", "Am"):
        pair = specfun.airy_eval(z)
        value, deriv = (pair.ai, pair.ai_prime) if args.kind == "Ai" else (pair.a_minus, pair.a_minus_prime)
        payload = {
            "kind": args.kind, "z": [z.real, z.imag],
            "value": [value.real, value.imag],
            "derivative": [deriv.real, deriv.imag],
            "regime": pair.regime,
            "wronskian_residual": pair.wronskian_residual,
        }
    elif args.kind == "zeta":
        v = langer.zeta_of(z)
        payload = {
            "kind": "zeta", "z": [z.real, z.imag],
            "value": [v.zeta.real, v.zeta.imag],
            "derivative": [v.dzeta_dz.real, v.dzeta_dz.imag],
            "regime": v.branch,
            "wronskian_residual": 0.0,
        }
    else:
        raise ValueError(f"unknown kind {args.kind}")
    print(json.dumps(payload, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leaky-disk",
                                 description="Resonances of the delta-shell disk")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="scan a frequency range for resonances")
    _add_pot_args(p)
    p.add_argument("--re-min", dest="re_min", type=float, default=None)
    p.add_argument("--re-max", dest="re_max", type=float, default=None)
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--out", type=str, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("predict", help="emit asymptotic initializers as JSON lines")
    _add_pot_args(p)
    p.add_argument("--center", type=float, default=None)
    p.add_argument("--kind", choices=["normal", "band", "away"], required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--band", type=int, default=None)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("count", help="counting experiment in the glancing box")
    _add_pot_args(p)
    p.add_argument("--inv-h", dest="inv_h", type=str, default="50,100,200")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--M", type=float, default=2.0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("figure", help="figure-reproduction pipelines")
    _add_pot_args(p)
    p.add_argument("--fig", choices=sorted(experiments.FIGURE_SETTINGS), required=True)
    p.add_argument("--out", type=str, required=True)
    p.add_argument("--re-min", dest="re_min", type=float, default=None)
    p.add_argument("--re-max", dest="re_max", type=float, default=None)
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="check a spectrum CSV against the free regions")
    _add_pot_args(p)
    p.add_argument("--spectrum", type=str, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("specfun", help="debug evaluation of the special functions")
    psub = p.add_subparsers(dest="specfun_command", required=True)
    pe = psub.add_parser("eval")
    pe.add_argument("--kind", choices=["J", "H1", "Ai", "Am", "zeta"], required=True)
    pe.add_argument("--n", type=int, default=0)
    pe.add_argument("--z", type=str, required=True, help="RE,IM")
    pe.set_defaults(func=cmd_specfun)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (specfun.SpecfunDomainError, specfun.SpecfunRangeError,
            langer.LangerDomainError, ValueError, OverflowError,
            ZeroDivisionError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
