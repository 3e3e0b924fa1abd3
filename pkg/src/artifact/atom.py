"""Driven V-type atom in the dressed basis.

Frequencies are in units of gamma1. The Bloch vector is ordered
(rho11, rho22, rho33, rho12, rho21) in the dressed basis, where
|1~> = |1>, |2~> = s|2> - c|3>, |3~> = c|2> + s|3>.
"""
from dataclasses import dataclass, fields, replace
import math

import numpy as np

from .errors import (DegenerateDriveError, DomainError, NonUniqueSteadyStateError,
                     ParameterError, SingularMatrixError)
from .numerics import lu_solve, mat_inverse

ETA0_CONVENTIONS = ("bare", "sin", "cos")
CROSSING_TOL = 1e-6


@dataclass(frozen=True)
class SystemParams:
    gamma1: float = 1.0
    gamma2: float = 0.02
    p: float = 0.0
    omega: float = 50.0
    delta_l: float = 0.0
    delta0: float = 50.0
    delta1: float = 50.0
    delta2: float = 50.0
    kappa1: float = 0.63
    kappa2: float = 0.63
    g1: float = 0.0
    g2: float = 0.0
    g3: float = 0.0
    g4: float = 0.0
    # dressed-frame SGC rate: one of ETA0_CONVENTIONS, or an explicit eta0 value
    eta0_convention: str = "sin"
    eta0_value: float | None = None
    # mode detuning mismatch entering Gamma_j; None means (delta2 - delta1)/2
    delta12_value: float | None = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, float) and not math.isfinite(v):
                raise ParameterError(f"{f.name} must be finite")
        if self.gamma1 <= 0:
            raise ParameterError("gamma1 must be positive")
        if self.gamma2 < 0:
            raise ParameterError("gamma2 must be non-negative")
        if self.kappa1 <= 0 or self.kappa2 <= 0:
            raise ParameterError("cavity decay rates must be positive")
        if abs(self.p) > 1:
            raise ParameterError(f"|p| must not exceed 1, got p = {self.p}")
        if self.delta0 <= 0:
            raise ParameterError("delta0 must be positive")
        if self.eta0_convention not in ETA0_CONVENTIONS:
            raise ParameterError(f"unknown eta0 convention {self.eta0_convention!r}")

    @property
    def eta(self):
        return self.p * math.sqrt(self.gamma1 * self.gamma2)

    @property
    def delta12(self):
        if self.delta12_value is not None:
            return self.delta12_value
        return (self.delta2 - self.delta1) / 2

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class DressedBasis:
    omega0: float
    phi: float
    c: float
    s: float


@dataclass(frozen=True)
class AtomSteadyState:
    rho11: float
    rho22: float
    rho33: float
    rho12: complex

    @property
    def rho21(self):
        return self.rho12.conjugate()

    def vector(self):
        return np.array([self.rho11, self.rho22, self.rho33, self.rho12, self.rho21],
                        dtype=complex)

    def matrix(self):
        """3x3 dressed-basis density matrix."""
        r = np.zeros((3, 3), dtype=complex)
        r[0, 0], r[1, 1], r[2, 2] = self.rho11, self.rho22, self.rho33
        r[0, 1], r[1, 0] = self.rho12, self.rho21
        return r


def dressed_basis(params):
    if params.omega == 0 and params.delta_l == 0:
        raise DegenerateDriveError("no drive and no detuning: dressed states undefined")
    om0 = math.hypot(params.delta_l, 2 * params.omega)
    c2 = min(max(0.5 + params.delta_l / (2 * om0), 0.0), 1.0)
    c = math.sqrt(c2)
    s = math.sqrt(1.0 - c2)
    return DressedBasis(omega0=om0, phi=math.atan2(s, c), c=c, s=s)


def dressed_eta0(params, basis=None):
    if params.eta0_value is not None:
        return params.eta0_value
    basis = basis or dressed_basis(params)
    factor = {"bare": 1.0, "sin": basis.s, "cos": basis.c}[params.eta0_convention]
    return params.eta * factor


def coherence_rate(params, basis=None):
    """Complex decay rate b of the 1~-2~ coherence."""
    basis = basis or dressed_basis(params)
    return (params.gamma1 + params.gamma2 * basis.s ** 2
            + 1j * (params.delta0 - (basis.omega0 - params.delta_l) / 2))


def bloch_generator(params):
    """G with x' = G x for x = (rho11, rho22, rho33, rho12, rho21)."""
    bs = dressed_basis(params)
    g1, g2 = params.gamma1, params.gamma2
    c2, s2 = bs.c ** 2, bs.s ** 2
    cos2phi = c2 - s2
    e0 = dressed_eta0(params, bs)
    b = coherence_rate(params, bs)
    return np.array([
        [-2 * g1, 0, 0, -e0, -e0],
        [2 * g1 * c2, -2 * g2 * s2 ** 2, 2 * g2 * c2 ** 2, e0 * cos2phi, e0 * cos2phi],
        [2 * g1 * s2, 2 * g2 * s2 ** 2, -2 * g2 * c2 ** 2, 2 * e0 * s2, 2 * e0 * s2],
        [-e0, -e0, 0, -b, 0],
        [-e0, -e0, 0, 0, -np.conj(b)],
    ], dtype=complex)


def atom_steady_state(params):
    G = bloch_generator(params)
    A = G.copy()
    A[0] = [1, 1, 1, 0, 0]
    rhs = np.zeros(5, dtype=complex)
    rhs[0] = 1.0
    try:
        x = lu_solve(A, rhs)
    except SingularMatrixError as exc:
        raise NonUniqueSteadyStateError("atomic steady state is not unique") from exc
    # the rho21 component is the conjugate of rho12 up to rounding
    return AtomSteadyState(rho11=x[0].real, rho22=x[1].real, rho33=x[2].real,
                           rho12=complex(x[3]))


def regression_matrix(params, delta):
    """U(delta) = i delta I - G, the matrix whose inverse gives M_mn(delta)."""
    return 1j * delta * np.eye(5) - bloch_generator(params)


def inverse_elements(params, delta):
    return mat_inverse(regression_matrix(params, delta))


def population_inversion_closed_form(params):
    """rho22 - rho33 of the two-level (p = 0) atom."""
    if params.p != 0:
        raise DomainError("closed form holds only for p = 0")
    bs = dressed_basis(params)
    c4, s4 = bs.c ** 4, bs.s ** 4
    return (c4 - s4) / (c4 + s4)


def crossing_detuning(params):
    """delta0 - (Omega0 - Delta_L)/2; zero at the 1~/2~ level crossing."""
    bs = dressed_basis(params)
    return params.delta0 - (bs.omega0 - params.delta_l) / 2


def at_level_crossing(params):
    """Copy of params with delta0 moved onto the level crossing."""
    bs = dressed_basis(params)
    return params.with_(delta0=(bs.omega0 - params.delta_l) / 2)


def superposition_amplitudes(params):
    bs = dressed_basis(params)
    den = params.gamma1 + params.gamma2 * bs.s ** 2
    return math.sqrt(params.gamma2 * bs.s ** 2 / den), math.sqrt(params.gamma1 / den)


def superposition_populations(params, state):
    """Populations of |s> = a|2~> + b|1~> and |a> = b|2~> - a|1~>."""
    al, be = superposition_amplitudes(params)
    cross = 2 * state.rho12.real
    rho_ss = al ** 2 * state.rho22 + be ** 2 * state.rho11 + al * be * cross
    rho_aa = be ** 2 * state.rho22 + al ** 2 * state.rho11 - al * be * cross
    return rho_ss, rho_aa


def trapping_states(params):
    if abs(crossing_detuning(params)) > CROSSING_TOL * params.gamma1:
        raise DomainError("trapping analysis needs delta0 = (Omega0 - Delta_L)/2")
    al, be = superposition_amplitudes(params)
    if params.p == 1:
        rho_ss, rho_aa = 0.0, 1.0
    elif params.p == -1:
        rho_ss, rho_aa = 4 * al ** 2 * be ** 2, (al ** 2 - be ** 2) ** 2
    else:
        rho_ss, rho_aa = superposition_populations(params, atom_steady_state(params))
    return {"alpha": al, "beta": be, "rho_ss": rho_ss, "rho_aa": rho_aa}
