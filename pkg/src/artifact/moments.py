"""Second moments of the two cavity modes on x = (n1, n2, m12, m12*)."""
from dataclasses import dataclass

import numpy as np

from .errors import PhysicalityError, SingularMatrixError, UnstableError
from .numerics import lu_solve, principal_sqrt

CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class MomentState:
    n1: float
    n2: float
    m12: complex

    def covariance(self):
        """Symmetrized covariance of (x1, p1, x2, p2) for a zero-mean Gaussian state."""
        n1, n2, m = self.n1, self.n2, self.m12
        V = np.zeros((4, 4))
        V[0, 0] = V[1, 1] = n1 + 0.5
        V[2, 2] = V[3, 3] = n2 + 0.5
        # <a1 a2> sets the x1x2, p1p2 and x1p2, p1x2 blocks
        V[0, 2] = V[2, 0] = m.real
        V[1, 3] = V[3, 1] = -m.real
        V[0, 3] = V[3, 0] = m.imag
        V[1, 2] = V[2, 1] = m.imag
        return V

    def is_physical(self, tol=1e-10):
        """Uncertainty principle V + i Omega / 2 >= 0."""
        J = np.array([[0, 1], [-1, 0]])
        Om = np.kron(np.eye(2), J)
        ev = np.linalg.eigvalsh(self.covariance() + 0.5j * Om)
        return self.n1 >= -tol and self.n2 >= -tol and ev.min() >= -tol


def moment_system(coeffs):
    G1, G2 = coeffs.Gamma
    x1, x2 = coeffs.chi
    cj = np.conj
    M = np.array([
        [-2 * G1.real, 0, cj(x1), x1],
        [0, -2 * G2.real, cj(x2), x2],
        [x2, x1, -(G1 + G2), 0],
        [cj(x2), cj(x1), 0, -cj(G1 + G2)],
    ], dtype=complex)
    drive = coeffs.C1 + coeffs.C2
    b = np.array([2 * coeffs.A1.real, 2 * coeffs.A2.real, drive, cj(drive)], dtype=complex)
    return M, b


def stability(coeffs):
    G1, G2 = coeffs.Gamma
    x1, x2 = coeffs.chi
    root = principal_sqrt((G1 - np.conj(G2)) ** 2 + 4 * x1 * np.conj(x2))
    margin = (G1 + G2 - root).real
    return {"stable": bool(margin > 0), "margin": float(margin)}


def _clamp(n, name):
    if n < -CLAMP_TOL:
        raise PhysicalityError(f"{name} = {n:.3e} is negative")
    return float(max(n, 0.0))


def steady_moments(coeffs):
    st = stability(coeffs)
    if not st["stable"]:
        raise UnstableError(f"moment system unstable, margin {st['margin']:.3e}")
    M, b = moment_system(coeffs)
    try:
        x = -lu_solve(M, b)
    except SingularMatrixError as exc:
        raise UnstableError("moment system singular at the stability boundary") from exc
    return MomentState(n1=_clamp(x[0].real, "n1"), n2=_clamp(x[1].real, "n2"),
                       m12=complex(x[2]))


def idealized_moments(Dbar, kappa):
    """Closed-form steady state of the pure pair-coupling model below threshold."""
    if abs(Dbar) >= kappa:
        raise UnstableError("pair coupling at or above threshold")
    den = 2 * (kappa ** 2 - Dbar ** 2)
    n = Dbar ** 2 / den
    return MomentState(n1=n, n2=n, m12=1j * kappa * Dbar / den)
