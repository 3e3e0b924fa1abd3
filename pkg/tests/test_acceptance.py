"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a one-line PASS/FAIL verdict with the measured numbers.
The lines are printed as the tests run (visible with -s) and collected again
in the pytest terminal summary. Run this file directly for the lines alone:

    python3 tests/test_acceptance.py
"""
import math
import time

import numpy as np
import pytest

from artifact.atom import (SystemParams, at_level_crossing, atom_steady_state,
                           population_inversion_closed_form, superposition_populations,
                           trapping_states)
from artifact.coeffs import (ModeCoefficients, coefficients, combined_coupling_D,
                             trapped_D_config_A, trapped_D_config_B)
from artifact.config import load_preset
from artifact.duan import duan_report
from artifact.moments import moment_system, stability, steady_moments
from artifact.oracle import FockConfig, cptp_report, evolve, secular_audit
from artifact.sweep import run_sweep

RESULTS = []


def verdict(num, title, ok, detail):
    line = f"[{num:>2}] {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def sweep_arrays(spec):
    rows = run_sweep(spec)
    x = np.array([r["value"] for r in rows])
    u = np.array([r["upsilon"] for r in rows], dtype=float)
    return x, u


def local_minima(x, u):
    i = np.arange(1, len(u) - 1)
    mask = (u[i] < u[i - 1]) & (u[i] < u[i + 1])
    return x[i[mask]], u[i[mask]]


# shared by criteria 11 and 12
AUDIT_POINT = SystemParams(gamma1=1, gamma2=0.02, p=0.98, omega=50, delta_l=0, delta0=50,
                           delta1=50, delta2=50, kappa1=0.63, kappa2=0.63, g1=2, g2=2)
_audit_cache = {}


def audit_run():
    if "rep" not in _audit_cache:
        t0 = time.perf_counter()
        rep = secular_audit(AUDIT_POINT, FockConfig(4, 4))
        _audit_cache["rep"] = rep
        _audit_cache["time"] = time.perf_counter() - t0
    return _audit_cache["rep"], _audit_cache["time"]


def test_criterion_01_vacuum():
    t0 = time.perf_counter()
    worst = 0.0
    points = [SystemParams(p=p, delta_l=dl, gamma2=r)
              for p in (0, 0.98, -1) for dl in (0, 30) for r in (0.02, 2)]
    for P in points:
        for config in ("A", "B"):
            co = coefficients(P, atom_steady_state(P), config)
            rep = duan_report(steady_moments(co), stability(co)["stable"])
            worst = max(worst, abs(rep.upsilon))
    dt = time.perf_counter() - t0
    verdict(1, "zero couplings give Upsilon = 0", worst <= 1e-12 and dt < 1,
            f"max |Upsilon| = {worst:.1e} (tol 1e-12) over {2 * len(points)} cases, {dt:.2f} s (< 1 s)")


def test_criterion_02_population_difference():
    t0 = time.perf_counter()
    worst = 0.0
    for dl in np.linspace(-100, 100, 201):
        P = SystemParams(p=0, delta_l=dl)
        a = atom_steady_state(P)
        worst = max(worst, abs(population_inversion_closed_form(P) - (a.rho22 - a.rho33)))
    dt = time.perf_counter() - t0
    verdict(2, "two-level population difference, closed form vs numeric",
            worst <= 1e-10 and dt < 5,
            f"max error {worst:.1e} (tol 1e-10) over 201 points, {dt:.2f} s (< 5 s)")


def test_criterion_03_trapping_collapse():
    worst = 0.0
    for r in (0.02, 0.5, 1, 2, 3):
        for dl in (0, 10, -20):
            P = at_level_crossing(SystemParams(p=1, gamma2=r, delta_l=dl))
            _, rho_aa = superposition_populations(P, atom_steady_state(P))
            worst = max(worst, abs(rho_aa - 1))
    verdict(3, "antisymmetric trapping at p = 1", worst <= 1e-6,
            f"max |rho_aa - 1| = {worst:.1e} (tol 1e-6) over 15 cases")


def test_criterion_04_antiparallel_populations():
    worst = 0.0
    for r in (0.02, 0.5, 1, 2, 3):
        P = at_level_crossing(SystemParams(p=-1, gamma2=r))
        a = atom_steady_state(P)
        rho_ss, rho_aa = superposition_populations(P, a)
        ref = trapping_states(P)
        worst = max(worst, abs(rho_aa - ref["rho_aa"]), abs(rho_ss - ref["rho_ss"]), abs(a.rho33))
    verdict(4, "anti-parallel populations at p = -1", worst <= 1e-8,
            f"max error {worst:.1e} (tol 1e-8) over 5 ratios")


def _phi_grid_params(phi, ratio, om0=100.0, delta=50.0, **kw):
    # keep Omega0 fixed and move phi through the drive detuning
    return SystemParams(gamma2=ratio, omega=om0 * math.sin(2 * phi) / 2,
                        delta_l=om0 * math.cos(2 * phi), delta1=delta, delta2=delta, **kw)


def test_criterion_05_optimizer():
    phis = np.linspace(0, math.pi / 2, 202)[1:-1]
    ratios = np.linspace(0.025, 5, 200)
    dphi, dr = phis[1] - phis[0], ratios[1] - ratios[0]
    DA = np.array([[abs(trapped_D_config_A(_phi_grid_params(f, r, g1=10, g2=10)))
                    for r in ratios] for f in phis])
    DB = np.array([[abs(trapped_D_config_B(_phi_grid_params(f, r, g1=10, g4=10)))
                    for r in ratios] for f in phis])
    ia, _ = np.unravel_index(DA.argmax(), DA.shape)
    ib, jb = np.unravel_index(DB.argmax(), DB.shape)
    okA = abs(phis[ia] - math.pi / 4) <= dphi
    okB = abs(phis[ib] - math.pi / 4) <= dphi and abs(ratios[jb] - 2) <= dr
    verdict(5, "pair-coupling maximization over (phi, gamma2/gamma1)", okA and okB,
            f"trapped config A argmax phi = {phis[ia]:.4f} (pi/4 = {math.pi / 4:.4f}, cell {dphi:.4f}) "
            f"{'ok' if okA else 'off'}; config B argmax (phi, ratio) = ({phis[ib]:.4f}, {ratios[jb]:.3f}) "
            f"vs (0.7854, 2) within ({dphi:.4f}, {dr:.3f}) {'ok' if okB else 'off'}")


def test_criterion_06_interference():
    base = SystemParams(g1=10, g2=10, g3=10, g4=10, delta_l=0)
    d_equal = abs(combined_coupling_D(base.with_(p=1, gamma2=1.0)))
    ratios = np.linspace(0.01, 5, 500)
    order = all(combined_coupling_D(base.with_(p=-1, gamma2=r))
                > combined_coupling_D(base.with_(p=1, gamma2=r)) for r in ratios)
    xs = np.geomspace(10, 100, 50)
    D = np.array([combined_coupling_D(base.with_(p=-1, gamma2=x)) for x in xs])
    slope = np.polyfit(np.log(xs), np.log(D), 1)[0]
    slope_err = abs(slope + 0.5) / 0.5
    ok = d_equal <= 1e-12 and order and slope_err <= 0.01
    verdict(6, "combined-coupling interference", ok,
            f"D(p=+1, equal rates) = {d_equal:.1e} (tol 1e-12); D(p=-1) > D(p=+1) on (0, 5]: {order}; "
            f"fitted exponent on [10, 100] = {slope:.4f} vs -1/2, rel dev {slope_err:.2%} (tol 1%)")


def test_criterion_07_laser_detuning_sweep():
    t0 = time.perf_counter()
    specs = load_preset("fig2")
    results = []
    for spec in specs:
        x, u = sweep_arrays(spec)
        xm, um = local_minima(x, u)
        u0 = u[np.argmin(abs(x))]
        ok = (u0 >= 0 and len(xm) == 2 and all(abs(abs(v) - 40) <= 5 for v in xm)
              and all(-1 < v < 0 for v in um))
        results.append((spec.base.delta12, ok, u0, xm, um))
    dt = time.perf_counter() - t0
    quoted = results[0]
    ok = quoted[1] and dt < 30
    ref = " | ".join(f"delta12 = {d12}: {'ok' if k else 'off'}, Upsilon(0) = {u0:+.4f}, "
                     f"minima at {np.round(xm, 2).tolist()} with {np.round(um, 3).tolist()}"
                     for d12, k, u0, xm, um in results)
    verdict(7, "laser-detuning sweep (preset fig2, delta12 = -0.61)", ok, f"{ref}; {dt:.2f} s (< 30 s)")


def test_criterion_08_drive_detuning_sweep():
    t0 = time.perf_counter()
    specs = load_preset("fig3")
    mins = {}
    curves = {}
    for spec in specs:
        x, u = sweep_arrays(spec)
        curves[spec.base.p] = (x, u)
        mins[spec.base.p] = (x[np.nanargmin(u)], np.nanmin(u))
    dt = time.perf_counter() - t0
    x98, u98 = mins[0.98]
    c1 = abs(x98 - 50) <= 1 and -1.0 <= u98 <= -0.8
    c2 = np.nanmin(curves[0.0][1]) >= 0
    c3 = mins[0.98][1] < mins[0.7][1] < mins[0.4][1]
    ok = c1 and c2 and c3 and dt < 60
    verdict(8, "drive-detuning sweep (preset fig3)", ok,
            f"p=0.98 min {u98:.4f} at {x98:.2f}; p=0 min {np.nanmin(curves[0.0][1]):+.4f} (>= 0); "
            f"minima p=0.98/0.7/0.4 = {mins[0.98][1]:.3f}/{mins[0.7][1]:.3f}/{mins[0.4][1]:.3f}; "
            f"{dt:.2f} s (< 60 s)")


def test_criterion_09_undriven_mode_sweeps():
    fig5 = {s.base.p: sweep_arrays(s) for s in load_preset("fig5")}
    x, u = fig5[0.98]
    x5, u5 = x[np.nanargmin(u)], np.nanmin(u)
    c1 = abs(x5 - 50) <= 1 and -1.0 <= u5 <= -0.8
    fig6 = {s.base.gamma2: np.nanmin(sweep_arrays(s)[1]) for s in load_preset("fig6")}
    deepest = min(fig6, key=fig6.get)
    c2 = deepest == 2.0
    verdict(9, "undriven-transition coupling sweeps (presets fig5, fig6)", c1 and c2,
            f"fig5 p=0.98 min {u5:.4f} at {x5:.2f}; fig6 minima "
            + ", ".join(f"g2={k}: {v:.3f}" for k, v in fig6.items()) + f"; deepest at {deepest}")


def test_criterion_10_stability_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240610)
    agree = 0
    for _ in range(200):
        z = rng.normal(size=8) + 1j * rng.normal(size=8)
        co = ModeCoefficients(*(0.5 * z), kappa1=rng.uniform(0.1, 2), kappa2=rng.uniform(0.1, 2),
                              delta12=rng.uniform(-2, 2))
        M, _ = moment_system(co)
        abscissa = np.linalg.eigvals(M).real.max()
        agree += stability(co)["stable"] == (abscissa < 0)
    dt = time.perf_counter() - t0
    verdict(10, "stability margin vs moment-system spectrum", agree == 200 and dt < 10,
            f"{agree}/200 sign agreements, {dt:.2f} s (< 10 s)")


def test_criterion_11_cptp():
    rep, _ = audit_run()
    solve = rep.cptp
    rho, _, hist = evolve(AUDIT_POINT.with_(g1=0.5, g2=0.5), FockConfig(2, 2, dt=4e-4, t_max=0.4))
    rk = cptp_report(rho)
    drift = max(max(hist["trace_drift"]), solve["trace_err"], rk["trace_err"])
    herm = max(max(hist["herm_err"]), solve["herm_err"], rk["herm_err"])
    pos = min(solve["min_eig"], rk["min_eig"])
    ok = drift <= 1e-8 and herm <= 1e-9 and pos >= -1e-6
    verdict(11, "oracle trace, Hermiticity, positivity", ok,
            f"trace drift {drift:.1e} (<= 1e-8), Hermiticity {herm:.1e} (<= 1e-9), "
            f"min eigenvalue {pos:.1e} (>= -1e-6); audit solve + {len(hist['t'])} RK4 steps")


def test_criterion_12_secular_audit():
    rep, dt = audit_run()
    errs = (rep.rel_err_n1, rep.rel_err_n2, rep.rel_err_c)
    same_sign = (rep.upsilon_secular < 0) == (rep.upsilon_oracle < 0)
    ok = max(errs) <= 0.15 and same_sign and dt < 600
    verdict(12, "secular pipeline vs oracle at g = 2, N = 4", ok,
            f"rel errors n1/n2/c = {errs[0]:.3f}/{errs[1]:.3f}/{errs[2]:.3f} (tol 0.15); "
            f"Upsilon secular {rep.upsilon_secular:+.4f}, oracle {rep.upsilon_oracle:+.4f} "
            f"(same sign: {same_sign}); truncation change {rep.truncation_change:.1e}; {dt:.1f} s")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
