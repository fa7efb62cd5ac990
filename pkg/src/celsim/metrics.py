"""Observables of the two-mode Gaussian state: squeezing, intensity and
entanglement.

All quantities derive from a moment state (u, v, w) through the 4x4
covariance matrix with blocks built from m = 2u + 1, n = 2v + 1 and
c = 2w.  The smallest symplectic eigenvalue V_s of the partially
transposed covariance matrix certifies entanglement when V_s < 1, and the
logarithmic negativity is E_N = max(0, -log2 V_s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import MomentState

__all__ = [
    "CovarianceRecord",
    "quadrature_variance",
    "mean_photon_number",
    "covariance_record",
    "is_entangled",
    "symplectic_minimum",
]

# Relative slack for rounding of sigma^2 - 4 det(Omega) near degeneracy.
_DISC_TOL = 1e-9


@dataclass(frozen=True)
class CovarianceRecord:
    """Covariance-matrix summary of one moment state.

    det_omega equals (m*n - c^2)^2 exactly by construction, sigma is
    det_a + det_b - 2*det_c, and e_n = max(0, -log2 v_s).
    """

    m: float
    n: float
    c: float
    det_a: float
    det_b: float
    det_c: float
    det_omega: float
    sigma: float
    v_s: float
    e_n: float


def quadrature_variance(state: MomentState, sign: str) -> float:
    """Variance of the joint plus/minus quadrature, 1 + u + v +/- 2w.

    Values below 1 indicate two-mode squeezing (vacuum level is 1).
    """
    if sign == "plus":
        return 1.0 + state.u + state.v + 2.0 * state.w
    if sign == "minus":
        return 1.0 + state.u + state.v - 2.0 * state.w
    raise ValueError("sign must be 'plus' or 'minus'")


def mean_photon_number(state: MomentState) -> float:
    """Total mean photon number u + v of the two cavity modes."""
    return state.u + state.v


def symplectic_minimum(sigma, det_omega):
    """Smallest symplectic eigenvalue sqrt((sigma - sqrt(sigma^2 - 4 det))/2).

    Accepts scalars or arrays.  A discriminant that is negative by more
    than rounding slack marks a corrupted covariance and raises; small
    negative values are clamped to zero.
    """
    sigma = np.asarray(sigma, dtype=float)
    det_omega = np.asarray(det_omega, dtype=float)
    disc = sigma * sigma - 4.0 * det_omega
    scale = np.maximum(sigma * sigma, 4.0 * np.abs(det_omega))
    if np.any(disc < -_DISC_TOL * scale):
        raise ValueError("non-physical covariance: sigma^2 < 4 det(Omega)")
    disc = np.maximum(disc, 0.0)
    out = np.sqrt((sigma - np.sqrt(disc)) / 2.0)
    return float(out) if out.ndim == 0 else out


def _vs_from_moments(u, v, w):
    """Vectorized V_s for moment arrays (shared with the sweep module)."""
    m = 2.0 * np.asarray(u, dtype=float) + 1.0
    n = 2.0 * np.asarray(v, dtype=float) + 1.0
    c = 2.0 * np.asarray(w, dtype=float)
    sigma = m * m + n * n + 2.0 * c * c
    det_omega = (m * n - c * c) ** 2
    return symplectic_minimum(sigma, det_omega)


def covariance_record(state: MomentState) -> CovarianceRecord:
    """Populate the covariance summary for one physical moment state."""
    if state.u < -1e-9 or state.v < -1e-9:
        raise ValueError("unphysical moment state: negative intensity")
    m = 2.0 * state.u + 1.0
    n = 2.0 * state.v + 1.0
    c = 2.0 * state.w
    det_a = m * m
    det_b = n * n
    det_c = -c * c
    det_omega = (m * n - c * c) ** 2
    sigma = det_a + det_b - 2.0 * det_c
    v_s = symplectic_minimum(sigma, det_omega)
    e_n = max(0.0, -math.log2(v_s))
    return CovarianceRecord(
        m=m, n=n, c=c, det_a=det_a, det_b=det_b, det_c=det_c,
        det_omega=det_omega, sigma=sigma, v_s=v_s, e_n=e_n,
    )


def is_entangled(record: CovarianceRecord) -> bool:
    """True iff the smallest symplectic eigenvalue is below 1."""
    return record.v_s < 1.0
