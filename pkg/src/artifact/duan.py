"""Duan-type inseparability measure for two modes."""
from dataclasses import dataclass
import math

from .errors import UnstableError

# occupations this close are treated as equal, giving a^2 = 1
SYMMETRIC_RTOL = 1e-12


@dataclass(frozen=True)
class EntanglementReport:
    n: float
    m: float
    c: float
    a_sq: float
    sigma: float
    upsilon: float
    entangled: bool
    stable: bool


def duan_report(moments, stable=True):
    if not stable:
        raise UnstableError("no steady state to evaluate")
    n1, n2 = float(moments.n1), float(moments.n2)
    if n1 < 0 or n2 < 0:
        raise ValueError("occupations must be non-negative")
    n, m, c = n1 + 0.5, n2 + 0.5, float(abs(moments.m12))
    if math.isclose(n1, n2, rel_tol=SYMMETRIC_RTOL, abs_tol=1e-300):
        a_sq = 1.0
    elif n1 == 0 or n2 == 0:
        # a^2 runs off to 0 or infinity; Upsilon keeps the finite limit below
        a_sq = math.nan
    else:
        a_sq = math.sqrt((2 * m - 1) / (2 * n - 1))
    if math.isnan(a_sq):
        sigma = math.nan
        ups = 4 * (math.sqrt(n1 * n2) - c)
    else:
        sigma = 2 * n * a_sq + 2 * m / a_sq - 4 * c
        ups = sigma - a_sq - 1 / a_sq
    ups += 0.0  # no negative zero
    return EntanglementReport(n=n, m=m, c=c, a_sq=a_sq, sigma=sigma, upsilon=ups,
                              entangled=bool(ups < 0), stable=stable)
