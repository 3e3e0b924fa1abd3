"""Configuration files and the figure presets.

Files are INI-style: a [params] section with every SystemParams field,
an optional [sweep] section (axis, start, stop, steps, config), an
optional [series] section with one key holding comma-separated values,
and an optional [fock] section for oracle runs. All frequencies are in
units of gamma1.
"""
from configparser import ConfigParser, Error as IniError
from dataclasses import dataclass
import re

from .atom import SystemParams, atom_steady_state
from .coeffs import simplified_B, stark_cancel_delta12
from .errors import ConfigError, ParameterError
from .oracle import FockConfig

PARAM_KEYS = ("gamma1", "gamma2", "p", "omega", "delta_l", "delta0", "delta1", "delta2",
              "kappa1", "kappa2", "g1", "g2", "g3", "g4")
OPTIONAL_KEYS = ("eta0_convention", "eta0", "delta12")
AXES = ("delta_l", "delta0", "p", "gamma2", "omega", "delta12", "g")
CONFIGS = ("A", "B", "combined")
FOCK_KEYS = {"n1": int, "n2": int, "dt": float, "t_max": float, "tol": float}


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    steps: int
    base: SystemParams
    config: str = "A"
    label: str = ""

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigError(f"unknown sweep axis {self.axis!r}; choose from {', '.join(AXES)}")
        if self.steps < 2:
            raise ConfigError("steps must be at least 2")
        if self.start == self.stop:
            raise ConfigError("start and stop must differ")
        if self.config not in CONFIGS:
            raise ConfigError(f"unknown configuration {self.config!r}")

    def grid(self):
        h = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * h for i in range(self.steps)]


def set_axis(params, axis, value, config="A"):
    if axis == "delta12":
        return params.with_(delta12_value=value)
    if axis == "g":
        if config == "A":
            return params.with_(g1=value, g2=value)
        if config == "B":
            return params.with_(g1=value, g4=value)
        return params.with_(g1=value, g2=value, g3=value, g4=value)
    return params.with_(**{axis: value})


def _line_of(text, key):
    for i, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*{re.escape(key)}\s*[=:]", line):
            return i
    return None


def _where(text, key):
    ln = _line_of(text, key) if text else None
    return f" (line {ln})" if ln else ""


def _float(section, key, text):
    raw = section[key]
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"field {key!r}{_where(text, key)}: cannot parse {raw!r} as a number") from None


def params_from_section(section, text=""):
    unknown = set(section) - set(PARAM_KEYS) - set(OPTIONAL_KEYS)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown field {key!r}{_where(text, key)} in [params]")
    missing = [k for k in PARAM_KEYS if k not in section]
    if missing:
        raise ConfigError(f"missing field(s) in [params]: {', '.join(missing)}")
    kw = {k: _float(section, k, text) for k in PARAM_KEYS}
    if "eta0_convention" in section:
        kw["eta0_convention"] = section["eta0_convention"].strip()
    if "eta0" in section:
        kw["eta0_value"] = _float(section, "eta0", text)
    if "delta12" in section:
        kw["delta12_value"] = _float(section, "delta12", text)
    try:
        return SystemParams(**kw)
    except ParameterError as exc:
        raise ConfigError(f"range error in [params]: {exc}") from None


def _parse(text, source):
    cp = ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except IniError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if "params" not in cp:
        raise ConfigError(f"{source}: no [params] section")
    return cp


def _sweeps(cp, base, text):
    sw = cp["sweep"]
    for key in ("axis", "start", "stop", "steps"):
        if key not in sw:
            raise ConfigError(f"missing field {key!r} in [sweep]")
    try:
        steps = int(sw["steps"])
    except ValueError:
        raise ConfigError(f"field 'steps'{_where(text, 'steps')}: not an integer") from None
    common = dict(axis=sw["axis"].strip(), start=_float(sw, "start", text),
                  stop=_float(sw, "stop", text), steps=steps,
                  config=sw.get("config", "A").strip())
    if "series" not in cp or not cp["series"]:
        return [SweepSpec(base=base, **common)]
    ser = cp["series"]
    if len(ser) != 1:
        raise ConfigError("[series] must hold exactly one key")
    (key, raw), = ser.items()
    specs = []
    for tok in raw.split(","):
        try:
            v = float(tok)
        except ValueError:
            raise ConfigError(f"[series] {key}{_where(text, key)}: bad value {tok.strip()!r}") from None
        try:
            p = set_axis(base, key, v, common["config"]) if key in AXES else base.with_(**{key: v})
        except (TypeError, ParameterError) as exc:
            raise ConfigError(f"[series] {key}: {exc}") from None
        specs.append(SweepSpec(base=p, label=f"{key}={tok.strip()}", **common))
    return specs


def fock_from(cp, text=""):
    if "fock" not in cp:
        return None
    sec = cp["fock"]
    kw = {}
    for k, typ in FOCK_KEYS.items():
        if k in sec:
            try:
                kw[k] = typ(sec[k])
            except ValueError:
                raise ConfigError(f"field {k!r}{_where(text, k)} in [fock] is not a {typ.__name__}") from None
    try:
        return FockConfig(**kw)
    except ValueError as exc:
        raise ConfigError(f"[fock]: {exc}") from None


def load_config_text(text, source="<config>"):
    """Parse config text into a list of SweepSpec (with [sweep]) or a SystemParams."""
    cp = _parse(text, source)
    base = params_from_section(cp["params"], text)
    if "sweep" in cp:
        return _sweeps(cp, base, text)
    return base


def load_config(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return load_config_text(text, source=str(path))


def load_fock(path):
    with open(path) as fh:
        text = fh.read()
    return fock_from(_parse(text, str(path)), text)


def _preset_text(params, sweep, series):
    lines = ["[params]"] + [f"{k} = {v}" for k, v in params.items()]
    lines += ["", "[sweep]"] + [f"{k} = {v}" for k, v in sweep.items()]
    key, vals = series
    lines += ["", "[series]", f"{key} = {', '.join(str(v) for v in vals)}", ""]
    return "\n".join(lines)


_DRIVEN = dict(gamma1=1, omega=50, delta_l=0, delta0=50, delta1=50, delta2=50, g3=0)

PRESETS = {
    # two-level atom, entanglement against laser detuning
    "fig2": _preset_text(
        dict(_DRIVEN, gamma2=0.02, p=0, kappa1=0.63, kappa2=0.63, g1=10, g2=10, g4=0),
        dict(axis="delta_l", start=-60, stop=60, steps=241, config="A"),
        ("delta12", (-0.61, 0))),
    "fig3": _preset_text(
        dict(_DRIVEN, gamma2=0.02, p=0.98, kappa1=0.63, kappa2=0.63, g1=10, g2=10, g4=0,
             delta12=-0.61),
        dict(axis="delta0", start=20, stop=80, steps=601, config="A"),
        ("p", (0.98, 0.7, 0.4, 0))),
    "fig5": _preset_text(
        dict(_DRIVEN, gamma2=2, p=0.98, kappa1=0.67, kappa2=0.67, g1=10, g2=0, g4=10,
             delta12=-0.38),
        dict(axis="delta0", start=20, stop=80, steps=601, config="B"),
        ("p", (0.98, 0.7, 0.4, 0))),
    "fig6": _preset_text(
        dict(_DRIVEN, gamma2=2, p=-1, kappa1=0.72, kappa2=0.72, g1=10, g2=0, g4=10),
        dict(axis="delta0", start=20, stop=80, steps=601, config="B"),
        ("gamma2", (0.5, 1.0, 2.0, 3.0))),
}


def midpoint_delta12(spec):
    """Stark-cancelling delta12 from the large-detuning shift at the sweep midpoint."""
    mid = set_axis(spec.base, spec.axis, (spec.start + spec.stop) / 2, spec.config)
    return stark_cancel_delta12(simplified_B(mid, atom_steady_state(mid))["Abar"])


def load_preset(name):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    specs = load_config_text(PRESETS[name], source=f"preset {name}")
    if name == "fig6":
        # no delta12 is quoted for this figure; cancel the Stark shift per series
        specs = [SweepSpec(axis=s.axis, start=s.start, stop=s.stop, steps=s.steps,
                           base=s.base.with_(delta12_value=midpoint_delta12(s)),
                           config=s.config, label=s.label) for s in specs]
    return specs
