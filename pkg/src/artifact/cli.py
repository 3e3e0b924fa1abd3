"""Command line entry point: sweep, audit and point evaluation."""
import argparse
from dataclasses import asdict, fields
import sys

from .atom import SystemParams, atom_steady_state
from .coeffs import coefficients
from .config import (AXES, PARAM_KEYS, load_config, load_fock, load_preset, set_axis)
from .duan import duan_report
from .errors import ConfigError, ParameterError, UnstableError
from .moments import stability, steady_moments
from .oracle import FockConfig
from .sweep import (AUDIT_COLUMNS, AUDIT_SCHEMA, SWEEP_COLUMNS, params_header, run_audit,
                    run_sweeps, sweep_header, write_csv)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

# weak-coupling point used when no audit config is given
AUDIT_POINT = SystemParams(gamma1=1, gamma2=0.02, p=0.98, omega=50, delta_l=0, delta0=50,
                           delta1=50, delta2=50, kappa1=0.63, kappa2=0.63, g1=2, g2=2)


def _open_out(path):
    return open(path, "w", newline="") if path and path != "-" else sys.stdout


def _specs(args):
    if args.preset:
        return load_preset(args.preset), f"preset {args.preset}"
    specs = load_config(args.config)
    if isinstance(specs, SystemParams):
        raise ConfigError(f"{args.config}: no [sweep] section")
    return specs, str(args.config)


def cmd_sweep(args):
    specs, source = _specs(args)
    rows = run_sweeps(specs, workers=args.workers)
    fh = _open_out(args.out)
    try:
        write_csv(fh, SWEEP_COLUMNS, rows, sweep_header(specs, source))
    finally:
        if fh is not sys.stdout:
            fh.close()
    flagged = sum(1 for r in rows if r["flags"])
    print(f"{len(rows)} rows, {flagged} flagged", file=sys.stderr)
    return EXIT_NUMERIC if args.strict and flagged else EXIT_OK


def cmd_audit(args):
    params, fock = AUDIT_POINT, FockConfig()
    if args.config:
        loaded = load_config(args.config)
        if not isinstance(loaded, SystemParams):
            raise ConfigError(f"{args.config}: audit takes a [params] file without [sweep]")
        params = loaded
        fock = load_fock(args.config) or fock
    over = {k: v for k, v in (("n1", args.fock_n1), ("n2", args.fock_n2), ("dt", args.dt),
                              ("t_max", args.tmax), ("tol", args.tol)) if v is not None}
    try:
        fock = FockConfig(**{**asdict(fock), **over})
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = run_audit(params, fock, scan_eta0=args.scan_eta0, method=args.method)
    header = [f"schema {AUDIT_SCHEMA}", f"params {params_header(params)}",
              f"fock n1={fock.n1} n2={fock.n2} dt={fock.dt} t_max={fock.t_max} "
              f"tol={fock.tol} method={args.method}"]
    fh = _open_out(args.out)
    try:
        write_csv(fh, AUDIT_COLUMNS, rows, header)
    finally:
        if fh is not sys.stdout:
            fh.close()
    flagged = any(r["flags"] and r["flags"] != "selected" for r in rows)
    return EXIT_NUMERIC if args.strict and flagged else EXIT_OK


def _parse_sets(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_point(args):
    config = args.config_tag
    if args.preset:
        loaded = load_preset(args.preset)
    elif args.config:
        loaded = load_config(args.config)
    else:
        loaded = AUDIT_POINT
    if isinstance(loaded, SystemParams):
        params = loaded
    else:
        if not 0 <= args.series < len(loaded):
            raise ConfigError(f"series index {args.series} out of range")
        spec = loaded[args.series]
        config = spec.config
        at = args.at if args.at is not None else (spec.start + spec.stop) / 2
        params = set_axis(spec.base, spec.axis, at, config)
    for k, v in _parse_sets(args.set).items():
        try:
            if k in AXES:
                params = set_axis(params, k, float(v), config)
            elif k in PARAM_KEYS:
                params = params.with_(**{k: float(v)})
            elif k == "eta0_convention":
                params = params.with_(eta0_convention=v)
            else:
                raise ConfigError(f"unknown parameter {k!r}")
        except ValueError as exc:
            raise ConfigError(f"--set {k}: {exc}") from None
    co = coefficients(params, atom_steady_state(params), config)
    st = stability(co)
    print(f"params: {params_header(params)}")
    print(f"config: {config}")
    print(f"margin: {st['margin']!r}")
    if not st["stable"]:
        print("unstable: no steady state")
        return EXIT_NUMERIC if args.strict else EXIT_OK
    rep = duan_report(steady_moments(co), True)
    for f in fields(rep):
        print(f"{f.name}: {getattr(rep, f.name)!r}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="sgc-ent", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="evaluate the secular pipeline over a grid")
    src = sw.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=["fig2", "fig3", "fig5", "fig6"])
    src.add_argument("--config")
    sw.add_argument("--out", default="-")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--strict", action="store_true",
                    help="exit with status 2 if any cell carries flags")
    sw.set_defaults(func=cmd_sweep)

    au = sub.add_parser("audit", help="compare the secular pipeline with the brute-force oracle")
    au.add_argument("--config")
    au.add_argument("--fock-n1", type=int)
    au.add_argument("--fock-n2", type=int)
    au.add_argument("--dt", type=float)
    au.add_argument("--tmax", type=float)
    au.add_argument("--tol", type=float)
    au.add_argument("--method", choices=["solve", "rk4"], default="solve")
    au.add_argument("--scan-eta0", action="store_true")
    au.add_argument("--out", default="-")
    au.add_argument("--strict", action="store_true")
    au.set_defaults(func=cmd_audit)

    pt = sub.add_parser("point", help="evaluate one parameter point")
    src = pt.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=["fig2", "fig3", "fig5", "fig6"])
    src.add_argument("--config")
    pt.add_argument("--series", type=int, default=0)
    pt.add_argument("--at", type=float, help="sweep-axis value (default: midpoint)")
    pt.add_argument("--set", action="append", metavar="KEY=VALUE")
    pt.add_argument("--config-tag", choices=["A", "B"], default="A")
    pt.add_argument("--strict", action="store_true")
    pt.set_defaults(func=cmd_point)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, UnstableError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
