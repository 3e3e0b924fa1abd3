"""Reduced cavity master-equation coefficients A_j, B_j, C_j, D_j.

Two coupling configurations are covered:
  A: both modes on the driven 2-3 transition (g3 = g4 = 0)
  B: mode 1 on the driven transition, mode 2 on the undriven 1-3 one (g2 = g3 = 0)
The full forms are transcribed term by term, including the denominators
that look inconsistent; the oracle module is what judges them.
"""
from dataclasses import dataclass
import math

import numpy as np

from .atom import dressed_basis, dressed_eta0, inverse_elements
from .errors import ConfigurationError, DomainError, PoleError


@dataclass(frozen=True)
class ModeCoefficients:
    A1: complex
    A2: complex
    B1: complex
    B2: complex
    C1: complex
    C2: complex
    D1: complex
    D2: complex
    kappa1: float
    kappa2: float
    delta12: float

    @property
    def Gamma(self):
        return (self.kappa1 + 1j * self.delta12 - (self.A1 - self.B1),
                self.kappa2 + 1j * self.delta12 - (self.A2 - self.B2))

    @property
    def chi(self):
        return self.C1 - self.D1, self.C2 - self.D2

    def scaled(self, factor):
        """Coefficients with every rate multiplied by factor (cavity terms untouched)."""
        k = {n: getattr(self, n) * factor for n in
             ("A1", "A2", "B1", "B2", "C1", "C2", "D1", "D2")}
        return ModeCoefficients(kappa1=self.kappa1, kappa2=self.kappa2,
                                delta12=self.delta12, **k)


def zero_coefficients(params):
    return ModeCoefficients(0j, 0j, 0j, 0j, 0j, 0j, 0j, 0j,
                            params.kappa1, params.kappa2, params.delta12)


def idealized_coefficients(Abar, Dbar, kappa, delta12=None):
    """Coefficients of the large-detuning model: only the shift and the pair term.

    With delta12 = -2 Abar the Stark shift is cancelled exactly.
    """
    if delta12 is None:
        delta12 = -2 * Abar
    a, d = -1j * Abar, 0.5j * Dbar
    return ModeCoefficients(a, a, -a, -a, d, d, -d, -d, kappa, kappa, delta12)


def _f(params, basis, x):
    f1 = (params.gamma1 + params.gamma2 * basis.c ** 2
          + 1j * (params.delta0 + (params.delta_l + basis.omega0) / 2 + x))
    sin2phi = 2 * basis.s * basis.c
    f2 = params.gamma2 * (1 + sin2phi ** 2 / 2) + 1j * (basis.omega0 + x)
    return f1, f2


def f_functions(params, delta, sign=1):
    """f1, f2 and f12 = f1 f2 at argument sign*delta."""
    f1, f2 = _f(params, dressed_basis(params), sign * delta)
    return {"f1": f1, "f2": f2, "f12": f1 * f2}


class _Kernel:
    """Shared pieces for evaluating the coefficient formulas at one parameter point."""

    def __init__(self, params, atom):
        self.params = params
        self.bs = dressed_basis(params)
        self.e0 = dressed_eta0(params, self.bs)
        self.E = self.e0 ** 2
        self.r11, self.r22, self.r33 = atom.rho11, atom.rho22, atom.rho33
        self.r12, self.r21 = atom.rho12, atom.rho12.conjugate()
        self._M = {}

    def f1(self, x):
        return _f(self.params, self.bs, x)[0]

    def f2(self, x):
        return _f(self.params, self.bs, x)[1]

    def f12(self, x):
        f1, f2 = _f(self.params, self.bs, x)
        return f1 * f2

    def M(self, x):
        if x not in self._M:
            self._M[x] = inverse_elements(self.params, x)
        return self._M[x]

    # F functions; 0-based indices into M, printed labels are 1-based
    def F1(self, x):
        m = self.M(x)
        return ((m[2, 1] - m[1, 1]) * self.r22 - (m[2, 2] - m[1, 2]) * self.r33
                + (m[2, 3] - m[1, 3]) * self.r12)

    def F2(self, x):
        m = self.M(x)
        return ((m[2, 1] - m[1, 1]) * self.r22 - (m[2, 2] - m[1, 2]) * self.r33
                + (m[2, 4] - m[1, 4]) * self.r21)

    def F3(self, x):
        m = self.M(x)
        return (m[2, 1] - m[1, 1]) * self.r12 + (m[2, 4] - m[1, 4]) * self.r11

    def F4(self, x):
        m = self.M(x)
        return (m[2, 0] - m[1, 0]) * self.r12 + (m[2, 4] - m[1, 4]) * self.r22


def _mode_A(k, d1, d2, ga, gb):
    """A, B, C, D for the first mode of configuration A."""
    cj = np.conj
    E, e0 = k.E, k.e0
    c4, s4 = k.bs.c ** 4, k.bs.s ** 4
    sin2phi = 2 * k.bs.s * k.bs.c
    r22, r33, r12, r21 = k.r22, k.r33, k.r12, k.r21

    A = ga ** 2 * (-k.F1(d1) * sin2phi / 4
                   + cj(k.f1(-d1)) * r33 / (cj(k.f12(-d1)) - E) * c4
                   + (k.f1(d1) * r22 - e0 * r12) / (k.f12(d1) - E) * s4)
    B = ga ** 2 * (-k.F2(d1) * sin2phi / 4
                   + k.f1(d1) * r33 / (k.f12(d1) - E) * s4
                   + (cj(k.f1(-d1)) * r22 - e0 * r21) / (cj(k.f12(-d1)) - E) * c4)
    C = ga * gb * sin2phi / 4 * (k.F2(d2)
                                 + k.f1(d2) * r33 / (k.f12(d2) - E)
                                 + (cj(k.f1(-d2)) * r22 - e0 * r21) / (cj(k.f12(-d2)) - E))
    D = ga * gb * sin2phi / 4 * (k.F1(d2)
                                 + cj(k.f1(-d2)) * r33 / (cj(k.f12(-d2)) - E)
                                 + (k.f1(d2) * r22 - e0 * r12) / (k.f12(d2) - E))
    return complex(A), complex(B), complex(C), complex(D)


def exchange_modes(params):
    """Mode-exchange map for configuration A: delta1 -> -delta2, delta2 -> -delta1, g1 <-> g2."""
    return params.with_(delta1=-params.delta2, delta2=-params.delta1,
                        g1=params.g2, g2=params.g1)


def coeffs_config_A(params, atom):
    if params.g3 != 0 or params.g4 != 0:
        raise ConfigurationError("configuration A needs g3 = g4 = 0")
    k = _Kernel(params, atom)
    A1, B1, C1, D1 = _mode_A(k, params.delta1, params.delta2, params.g1, params.g2)
    ex = exchange_modes(params)
    A2, B2, C2, D2 = _mode_A(k, ex.delta1, ex.delta2, ex.g1, ex.g2)
    return ModeCoefficients(A1, A2, B1, B2, C1, C2, D1, D2,
                            params.kappa1, params.kappa2, params.delta12)


def coeffs_config_B(params, atom):
    if params.g2 != 0 or params.g3 != 0:
        raise ConfigurationError("configuration B needs g2 = g3 = 0")
    k = _Kernel(params, atom)
    cj = np.conj
    E, e0 = k.E, k.e0
    c, s = k.bs.c, k.bs.s
    c2, s2, c4, s4 = c * c, s * s, c ** 4, s ** 4
    sin2phi = 2 * s * c
    d1, d2 = params.delta1, params.delta2
    ga, gb = params.g1, params.g4
    r11, r22, r33, r12, r21 = k.r11, k.r22, k.r33, k.r12, k.r21
    kk = ga * gb * s * c2

    A1 = ga ** 2 * (-k.F1(d1) * sin2phi / 4
                    + r33 * c4 / (cj(k.f2(-d1)) - E)
                    + r22 * s4 / (cj(k.f2(d1)) - E)
                    - e0 * r12 * s4 / (k.f12(d1) - E))
    B1 = ga ** 2 * (-k.F2(d1) * sin2phi / 4
                    + r33 * s4 / (k.f2(d1) - E)
                    + (cj(k.f1(-d1)) * r22 - e0 * r21) * c4 / (cj(k.f12(-d1)) - E))
    C1 = kk * (k.F3(d2) + (cj(k.f1(-d2)) * r12 - e0 * r11) / (cj(k.f12(-d2)) - E))
    D1 = kk * (k.F4(d2) - e0 * r33 / (cj(k.f12(-d2)) - E))

    m2, m1 = k.M(-d2), k.M(-d1)
    h1 = (m2[3, 1] * r21 + m2[3, 3] * r11) * c2
    h2 = (m2[3, 0] * r21 + m2[3, 3] * r22) * c2
    h3 = m1[3, 2] * r33 - m1[3, 1] * r22 - m1[3, 4] * r11
    h4 = m1[3, 2] * r33 - m1[3, 1] * r22 - m1[3, 3] * r12

    A2 = gb ** 2 * (h1 + (k.f2(-d2) * r11 - e0 * r21) * s2 / (k.f12(-d2) - E))
    B2 = gb ** 2 * (h2 + k.f2(-d2) * r33 * s2 / (k.f12(-d2) - E))
    C2 = kk * (h3 - e0 * r33 / (k.f12(-d1) - E))
    D2 = kk * (h4 + k.f2(-d1) * r12 / (k.f12(-d1) - E))
    vals = [complex(v) for v in (A1, A2, B1, B2, C1, C2, D1, D2)]
    return ModeCoefficients(*vals, params.kappa1, params.kappa2, params.delta12)


def coefficients(params, atom, config="A"):
    if config == "A":
        return coeffs_config_A(params, atom)
    if config == "B":
        return coeffs_config_B(params, atom)
    raise ConfigurationError(f"no full coefficient set for configuration {config!r}")


def _mean_detuning(params):
    return (params.delta1 + params.delta2) / 2


def _equal_couplings(a, b, what):
    if not math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12):
        raise ConfigurationError(f"{what} must be equal, got {a} and {b}")
    return a


def simplified_A(params, atom):
    """Large-detuning shift and pair coupling for configuration A."""
    g = _equal_couplings(params.g1, params.g2, "g1 and g2")
    bs = dressed_basis(params)
    d = _mean_detuning(params)
    den = bs.omega0 ** 2 - d ** 2
    if abs(den) < 1e-12 * bs.omega0 ** 2:
        raise PoleError("delta = +-Omega0")
    cos2phi = bs.c ** 2 - bs.s ** 2
    sin2phi = 2 * bs.s * bs.c
    inv = atom.rho22 - atom.rho33
    Abar = g * g * bs.omega0 * (1 + cos2phi ** 2) * inv / (4 * den)
    Dbar = g * g * bs.omega0 * sin2phi ** 2 * inv / (2 * den)
    return {"Abar": float(Abar), "Dbar": float(Dbar)}


def simplified_B(params, atom):
    """Large-detuning shift and (complex) pair coupling for configuration B."""
    g = _equal_couplings(params.g1, params.g4, "g1 and g4")
    bs = dressed_basis(params)
    d = _mean_detuning(params)
    om0 = bs.omega0
    if abs(d) < 1e-12 * om0 or abs(om0 - d) < 1e-12 * om0:
        raise PoleError("delta = 0 or delta = Omega0")
    c2, s2 = bs.c ** 2, bs.s ** 2
    r11, r22, r33 = atom.rho11, atom.rho22, atom.rho33
    Abar = g * g / 4 * ((s2 ** 2 / (om0 + d) + c2 ** 2 / (om0 - d)) * (r22 - r33)
                        + s2 / (om0 - d) * (r11 - r33)
                        + c2 / d * (r22 - r11))
    Dbar = om0 * g * g * bs.s * c2 * atom.rho12 / ((om0 - d) * d)
    return {"Abar": float(Abar), "Dbar": complex(Dbar)}


def trapped_D_config_A(params):
    """Pair coupling of configuration A once the atom sits in |a>."""
    g = _equal_couplings(params.g1, params.g2, "g1 and g2")
    bs = dressed_basis(params)
    d = _mean_detuning(params)
    den = bs.omega0 ** 2 - d ** 2
    if abs(den) < 1e-12 * bs.omega0 ** 2:
        raise PoleError("delta = +-Omega0")
    sin2phi = 2 * bs.s * bs.c
    g1, g2 = params.gamma1, params.gamma2
    return g * g * bs.omega0 / (2 * den) * g1 * sin2phi ** 2 / (g1 + g2 * bs.s ** 2)


def trapped_D_config_B(params):
    """Pair coupling of configuration B once the atom sits in |a>."""
    g = _equal_couplings(params.g1, params.g4, "g1 and g4")
    bs = dressed_basis(params)
    d = _mean_detuning(params)
    om0 = bs.omega0
    if abs(d) < 1e-12 * om0 or abs(om0 - d) < 1e-12 * om0:
        raise PoleError("delta = 0 or delta = Omega0")
    sin2phi = 2 * bs.s * bs.c
    g1, g2 = params.gamma1, params.gamma2
    return (-om0 * g * g * sin2phi ** 2 / (4 * (om0 - d) * d)
            * math.sqrt(g1 * g2) / (g1 + g2 * bs.s ** 2))


def combined_coupling_D(params):
    """Pair coupling with every mode on both transitions, for p = +1 or -1."""
    if params.p not in (1, -1):
        raise DomainError("combined-coupling form needs p = +1 or -1")
    g = params.g1
    for other in (params.g2, params.g3, params.g4):
        _equal_couplings(g, other, "all four couplings")
    bs = dressed_basis(params)
    d = _mean_detuning(params)
    den = bs.omega0 ** 2 - d ** 2
    if abs(den) < 1e-12 * bs.omega0 ** 2:
        raise PoleError("delta = +-Omega0")
    sin2phi = 2 * bs.s * bs.c
    g1, g2 = params.gamma1, params.gamma2
    sq1 = math.sqrt(g1)
    interference = sq1 * (sq1 - params.p * math.sqrt(g2))
    return g * g * bs.omega0 * sin2phi ** 2 / (2 * den) * interference / (g1 + g2 * bs.s ** 2)


def stark_cancel_delta12(Abar):
    return -2 * Abar


def effective_stark_shift(coeffs):
    """Shift Abar read off the full coefficients, so that -2*Abar zeroes Im(Gamma1 + Gamma2)."""
    return -((coeffs.A1 - coeffs.B1) + (coeffs.A2 - coeffs.B2)).imag / 4
