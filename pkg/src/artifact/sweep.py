"""Parameter sweeps, oracle audit rows and CSV output."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
import math

from .atom import atom_steady_state, dressed_basis
from .coeffs import (coefficients, combined_coupling_D, simplified_A, simplified_B)
from .config import set_axis
from .duan import duan_report
from .errors import ConfigurationError, DomainError, NonConvergenceError, PoleError
from .moments import idealized_moments, stability, steady_moments
from .oracle import eta0_scan, secular_audit

SCHEMA = "sgc-sweep/1"
AUDIT_SCHEMA = "sgc-audit/1"
SWEEP_COLUMNS = ("series", "value", "Abar", "Dbar", "Dbar_imag", "margin",
                 "n1", "n2", "c", "upsilon", "flags")
AUDIT_COLUMNS = ("eta0_convention", "n1_secular", "n2_secular", "c_secular",
                 "n1_oracle", "n2_oracle", "c_oracle", "rel_err_n1", "rel_err_n2",
                 "rel_err_c", "upsilon_secular", "upsilon_oracle", "trace_err",
                 "herm_err", "min_eig", "truncation_change", "flags")
NUDGE = 1e-6
AUDIT_TOL = 0.15


def _on_pole(params, config):
    om0 = dressed_basis(params).omega0
    d = (params.delta1 + params.delta2) / 2
    near = lambda x, y: abs(x - y) <= 1e-12 * max(1.0, abs(y))
    if config == "B":
        return near(d, 0) or near(d, om0)
    return near(abs(d), om0)


def evaluate_cell(spec, value):
    """One sweep row; errors land in the flags column instead of propagating."""
    flags = []
    row = dict(series=spec.label, value=value, Abar=math.nan, Dbar=math.nan,
               Dbar_imag=math.nan, margin=math.nan, n1=math.nan, n2=math.nan,
               c=math.nan, upsilon=math.nan)
    try:
        params = set_axis(spec.base, spec.axis, value, spec.config)
        if _on_pole(params, spec.config):
            value += NUDGE
            row["value"] = value
            params = set_axis(spec.base, spec.axis, value, spec.config)
            flags.append("nudged")
        if spec.config == "combined":
            _combined(params, row, flags)
        else:
            _secular(params, spec.config, row, flags)
    except (ArithmeticError, ValueError) as exc:
        flags.append(type(exc).__name__)
    row["flags"] = ";".join(flags)
    return row


def _secular(params, config, row, flags):
    at = atom_steady_state(params)
    try:
        simp = (simplified_A if config == "A" else simplified_B)(params, at)
        row["Abar"] = simp["Abar"]
        row["Dbar"] = complex(simp["Dbar"]).real
        row["Dbar_imag"] = complex(simp["Dbar"]).imag
    except (ConfigurationError, PoleError):
        flags.append("no_simplified")
    co = coefficients(params, at, config)
    st = stability(co)
    row["margin"] = st["margin"]
    if not st["stable"]:
        flags.append("unstable")
        return
    mom = steady_moments(co)
    rep = duan_report(mom, True)
    row.update(n1=mom.n1, n2=mom.n2, c=rep.c, upsilon=rep.upsilon)


def _combined(params, row, flags):
    """Every mode on both transitions: only the pair-coupling model is available."""
    if params.kappa1 != params.kappa2:
        raise DomainError("combined configuration needs kappa1 = kappa2")
    D = combined_coupling_D(params)
    row.update(Abar=0.0, Dbar=D, Dbar_imag=0.0, margin=2 * (params.kappa1 - abs(D)))
    flags.append("idealized")
    if abs(D) >= params.kappa1:
        flags.append("unstable")
        return
    mom = idealized_moments(D, params.kappa1)
    rep = duan_report(mom, True)
    row.update(n1=mom.n1, n2=mom.n2, c=rep.c, upsilon=rep.upsilon)


def _cell(args):
    return evaluate_cell(*args)


def run_sweep(spec, workers=1):
    tasks = [(spec, v) for v in spec.grid()]
    if workers <= 1:
        return [_cell(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        # map keeps grid order whatever the scheduling
        return list(ex.map(_cell, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def run_sweeps(specs, workers=1):
    rows = []
    for s in specs:
        rows.extend(run_sweep(s, workers))
    return rows


def run_audit(params, fock, scan_eta0=False, method="solve"):
    if scan_eta0:
        best, reports = eta0_scan(params, fock)
        rows = [_audit_row(r) for r in reports.values()]
        for r in rows:
            if r["eta0_convention"] == best:
                r["flags"] = ";".join(filter(None, [r["flags"], "selected"]))
        return rows
    try:
        return [_audit_row(secular_audit(params, fock, method=method))]
    except NonConvergenceError:
        row = {c: math.nan for c in AUDIT_COLUMNS}
        row.update(eta0_convention=params.eta0_convention, flags="nonconvergence")
        return [row]


def _audit_row(rep):
    flags = []
    if not rep.truncation_ok:
        flags.append("truncation")
    if max(rep.rel_err_n1, rep.rel_err_n2, rep.rel_err_c) > AUDIT_TOL:
        flags.append("secular_mismatch")
    if (rep.upsilon_secular < 0) != (rep.upsilon_oracle < 0):
        flags.append("sign_mismatch")
    return dict(eta0_convention=rep.eta0_convention,
                n1_secular=rep.secular.n1, n2_secular=rep.secular.n2,
                c_secular=abs(rep.secular.m12), n1_oracle=rep.oracle.n1,
                n2_oracle=rep.oracle.n2, c_oracle=abs(rep.oracle.m12),
                rel_err_n1=rep.rel_err_n1, rel_err_n2=rep.rel_err_n2,
                rel_err_c=rep.rel_err_c, upsilon_secular=rep.upsilon_secular,
                upsilon_oracle=rep.upsilon_oracle, trace_err=rep.cptp["trace_err"],
                herm_err=rep.cptp["herm_err"], min_eig=rep.cptp["min_eig"],
                truncation_change=rep.truncation_change, flags=";".join(flags))


def fmt(v):
    if isinstance(v, str):
        return v
    v = float(v)
    return "" if math.isnan(v) else f"{v:.17e}"


def params_header(params):
    d = asdict(params)
    out = [f"{k}={v}" for k, v in d.items() if v is not None]
    out.append(f"eta={params.eta!r}")
    return " ".join(out)


def write_csv(fh, columns, rows, header_lines):
    for line in header_lines:
        fh.write(f"# {line}\n")
    fh.write(",".join(columns) + "\n")
    for r in rows:
        fh.write(",".join(fmt(r[c]) for c in columns) + "\n")


def sweep_header(specs, source):
    lines = [f"schema {SCHEMA}", f"source {source}",
             "units: frequencies and rates in gamma1"]
    s0 = specs[0]
    lines.append(f"axis {s0.axis} start={s0.start!r} stop={s0.stop!r} steps={s0.steps} "
                 f"config={s0.config}")
    for s in specs:
        lines.append(f"series {s.label or '-'}: delta12={s.base.delta12!r} {params_header(s.base)}")
    return lines
