"""Small dense complex linear algebra helpers."""
import warnings

import numpy as np
import scipy.linalg as sla

from .errors import DivergenceError, SingularMatrixError

SINGULAR_RTOL = 1e-14
DIVERGENCE_LIMIT = 1e12


def _as_square(A):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def lu_factor(A):
    """Partial-pivot LU of A, refusing pivots below 1e-14 * ||A||_inf."""
    A = _as_square(A)
    norm = np.abs(A).sum(axis=1).max()
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if norm == 0.0 or pivots.min() < SINGULAR_RTOL * norm:
        raise SingularMatrixError(
            f"pivot {pivots.min():.3e} below threshold {SINGULAR_RTOL * norm:.3e}")
    return lu, piv


def lu_solve(A, b):
    lu, piv = lu_factor(A)
    b = np.asarray(b, dtype=complex)
    return sla.lu_solve((lu, piv), b, check_finite=False)


def mat_inverse(A):
    A = _as_square(A)
    return lu_solve(A, np.eye(A.shape[0], dtype=complex))


def rk4_step_matrix(M, b, h):
    """Affine map x -> P x + q equal to one classical RK4 step of x' = Mx + b.

    For a constant linear system the four RK4 stages collapse to the
    degree-4 Taylor polynomial of the augmented generator.
    """
    n = M.shape[0]
    aug = np.zeros((n + 1, n + 1), dtype=complex)
    aug[:n, :n] = M
    aug[:n, n] = b
    hk = h * aug
    step = np.eye(n + 1, dtype=complex)
    term = np.eye(n + 1, dtype=complex)
    for k in range(1, 5):
        term = term @ hk / k
        step = step + term
    return step


def propagate_linear(M, b, x0, t, h=None):
    """Integrate x' = Mx + b from x(0) = x0 to time t with fixed-step RK4.

    The step is h <= 1e-2 / max(1, ||M||_inf), shrunk so an integer number
    of steps lands on t. Large step counts are handled by repeated squaring
    of the one-step propagator, which gives the same result as stepping.
    """
    M = _as_square(M)
    n = M.shape[0]
    b = np.zeros(n, dtype=complex) if b is None else np.asarray(b, dtype=complex)
    x0 = np.asarray(x0, dtype=complex)
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return x0.copy()
    hmax = 1e-2 / max(1.0, np.abs(M).sum(axis=1).max())
    if h is not None:
        hmax = min(hmax, h)
    nsteps = int(np.ceil(t / hmax))
    step = rk4_step_matrix(M, b, t / nsteps)

    y = np.append(x0, 1.0)
    power = step
    remaining = nsteps
    while remaining:
        if remaining & 1:
            y = power @ y
            if not np.all(np.isfinite(y)) or np.abs(y[:n]).max() > DIVERGENCE_LIMIT:
                raise DivergenceError("state norm exceeded 1e12 during propagation")
        remaining >>= 1
        if remaining:
            power = power @ power
            if not np.all(np.isfinite(power)):
                raise DivergenceError("propagator overflowed")
    return y[:n]


def principal_sqrt(z):
    """Square root with Re(w) >= 0, and Im(w) >= 0 on the imaginary axis."""
    w = np.sqrt(complex(z))
    if w.real == 0.0 and w.imag < 0.0:
        w = -w
    return complex(w)
