import csv
import math

import pytest

from artifact.atom import SystemParams
from artifact.cli import main
from artifact.config import (PARAM_KEYS, SweepSpec, load_config_text, load_preset,
                             set_axis)
from artifact.errors import ConfigError
from artifact.oracle import FockConfig
from artifact.sweep import (AUDIT_COLUMNS, SWEEP_COLUMNS, evaluate_cell, run_audit, run_sweep)

PARAMS = """[params]
gamma1 = 1
gamma2 = 0.02
p = 0.98
omega = 50
delta_l = 0
delta0 = 50
delta1 = 50
delta2 = 50
kappa1 = 0.63
kappa2 = 0.63
g1 = 10
g2 = 10
g3 = 0
g4 = 0
"""
SWEEP = PARAMS + """delta12 = -0.61

[sweep]
axis = delta0
start = 45
stop = 55
steps = 11
config = A
"""


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def read_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def test_params_only_file():
    P = load_config_text(PARAMS)
    assert isinstance(P, SystemParams) and P.g1 == 10 and P.p == 0.98


def test_missing_field_named():
    with pytest.raises(ConfigError, match="gamma2"):
        load_config_text(PARAMS.replace("gamma2 = 0.02\n", ""))


def test_range_error():
    with pytest.raises(ConfigError, match="range"):
        load_config_text(PARAMS.replace("p = 0.98", "p = 1.5"))


def test_parse_error_has_line():
    with pytest.raises(ConfigError, match="line 5"):
        load_config_text(PARAMS.replace("omega = 50", "omega = fifty"))


def test_unknown_field_rejected():
    with pytest.raises(ConfigError, match="unknown field"):
        load_config_text(PARAMS + "gamma3 = 1\n")


def test_sweep_spec_guards():
    base = SystemParams()
    with pytest.raises(ConfigError):
        SweepSpec("temperature", 0, 1, 3, base)
    with pytest.raises(ConfigError):
        SweepSpec("delta0", 0, 1, 1, base)
    with pytest.raises(ConfigError):
        SweepSpec("delta0", 1, 1, 3, base)


def test_series_expansion():
    specs = load_config_text(SWEEP + "\n[series]\np = 0.98, 0\n")
    assert [s.base.p for s in specs] == [0.98, 0.0]
    assert [s.label for s in specs] == ["p=0.98", "p=0"]


def test_preset_values():
    specs = load_preset("fig3")
    assert [s.base.p for s in specs] == [0.98, 0.7, 0.4, 0.0]
    b = specs[0].base
    assert (b.gamma2, b.omega, b.delta_l, b.kappa1, b.g1, b.g2, b.delta12) == (
        0.02, 50, 0, 0.63, 10, 10, -0.61)
    assert (specs[0].axis, specs[0].start, specs[0].stop, specs[0].config) == ("delta0", 20, 80, "A")
    fig5 = load_preset("fig5")[0]
    assert (fig5.config, fig5.base.gamma2, fig5.base.g1, fig5.base.g4, fig5.base.kappa1,
            fig5.base.delta12) == ("B", 2, 10, 10, 0.67, -0.38)
    with pytest.raises(ConfigError):
        load_preset("fig4")


def test_undriven_coupling_axis():
    P = SystemParams()
    assert set_axis(P, "g", 3, "B").g4 == 3 and set_axis(P, "g", 3, "B").g2 == 0
    assert set_axis(P, "delta12", -0.2).delta12 == -0.2


def test_pole_is_nudged():
    # Omega0 = 2 omega meets delta = 50 at omega = 25
    spec = SweepSpec("omega", 24, 26, 3, SystemParams(g1=10, g2=10), "A")
    row = evaluate_cell(spec, 25.0)
    assert "nudged" in row["flags"] and row["value"] == 25 + 1e-6
    assert math.isfinite(row["upsilon"])


def test_unstable_cell_is_flagged_not_raised():
    spec = SweepSpec("g", 10, 40, 2, SystemParams(p=0.98, delta12_value=-0.61), "A")
    row = evaluate_cell(spec, 40.0)
    assert "unstable" in row["flags"] and math.isnan(row["upsilon"])


def test_combined_configuration_cell():
    base = SystemParams(p=-1, gamma2=0.5, g1=3, g2=3, g3=3, g4=3)
    row = evaluate_cell(SweepSpec("delta0", 40, 60, 3, base, "combined"), 50.0)
    assert "idealized" in row["flags"] and row["upsilon"] < 0


def test_parallel_sweep_keeps_order():
    spec = load_config_text(SWEEP)[0]
    serial = run_sweep(spec, 1)
    parallel = run_sweep(spec, 3)
    assert [r["value"] for r in parallel] == spec.grid()
    assert serial == parallel


def test_cli_sweep_csv(tmp_path, capsys):
    out = tmp_path / "out.csv"
    assert main(["sweep", "--config", write(tmp_path, SWEEP), "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# schema sgc-sweep/1")
    rows = read_csv(text)
    assert list(rows[0]) == list(SWEEP_COLUMNS) and len(rows) == 11
    ups = [float(r["upsilon"]) for r in rows]
    assert min(ups) == ups[5] and ups[5] < -0.8


def test_cli_sweep_deterministic(tmp_path):
    cfg = write(tmp_path, SWEEP)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["sweep", "--config", cfg, "--out", str(a)])
    main(["sweep", "--config", cfg, "--out", str(b), "--workers", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_cli_config_errors(tmp_path, capsys):
    assert main(["sweep", "--config", write(tmp_path, SWEEP.replace("p = 0.98", "p = 1.5"))]) == 1
    assert "range" in capsys.readouterr().err
    assert main(["sweep", "--config", str(tmp_path / "missing.ini")]) == 1
    assert main(["sweep", "--config", write(tmp_path, PARAMS)]) == 1


def test_cli_strict(tmp_path):
    text = SWEEP.replace("start = 45", "start = 24").replace("stop = 55", "stop = 26")
    text = text.replace("axis = delta0", "axis = omega").replace("steps = 11", "steps = 3")
    cfg = write(tmp_path, text)
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "o.csv")]) == 0
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "o.csv"), "--strict"]) == 2


def test_cli_point(capsys):
    assert main(["point", "--preset", "fig3", "--at", "50"]) == 0
    out = capsys.readouterr().out
    ups = float(next(ln for ln in out.splitlines() if ln.startswith("upsilon")).split(":")[1])
    assert -1 < ups < -0.8


def test_cli_point_set_and_unstable(capsys):
    assert main(["point", "--set", "g=40", "--set", "delta12=-0.61"]) == 0
    assert "unstable" in capsys.readouterr().out
    assert main(["point", "--set", "g=40", "--set", "delta12=-0.61", "--strict"]) == 2
    assert main(["point", "--set", "bogus=1"]) == 1


def test_cli_audit_no_coupling(tmp_path, capsys):
    cfg = write(tmp_path, PARAMS.replace("g1 = 10", "g1 = 0").replace("g2 = 10", "g2 = 0"))
    assert main(["audit", "--config", cfg, "--fock-n1", "2", "--fock-n2", "2"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert list(rows[0]) == list(AUDIT_COLUMNS)
    assert float(rows[0]["rel_err_n1"]) == 0 and rows[0]["flags"] == ""


def test_cli_audit_bad_fock(tmp_path):
    assert main(["audit", "--fock-n1", "1"]) == 1


def test_audit_rows():
    P = SystemParams(p=0.98, gamma2=0.02, g1=2, g2=2)
    row = run_audit(P, FockConfig(4, 4))[0]
    assert all(not (isinstance(row[c], float) and math.isnan(row[c]))
               for c in AUDIT_COLUMNS if c != "flags")
    assert row["rel_err_n1"] > 0
    under = run_audit(P, FockConfig(2, 2))[0]
    assert "truncation" in under["flags"]


def test_audit_nonconvergence_row():
    P = SystemParams(p=0.98, gamma2=0.02, g1=0.5, g2=0.5)
    row = run_audit(P, FockConfig(2, 2, dt=4e-4, t_max=0.01), method="rk4")[0]
    assert row["flags"] == "nonconvergence"


def test_every_param_key_is_a_field():
    fields = set(SystemParams.__dataclass_fields__)
    assert set(PARAM_KEYS) <= fields
