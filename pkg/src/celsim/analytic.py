"""Closed-form time evolution of the second moments with thermal seeding.

The cavity field is described by the three normal-ordered second moments

    u(t) = <a*(t) a(t)>,   v(t) = <b*(t) b(t)>,   w(t) = <a(t) b(t)>,

which evolve from the thermal initial condition u(0) = nbar_a,
v(0) = nbar_b, w(0) = 0.  The solution splits into a seed-independent
noise part plus seed terms built from the four transfer coefficients
A_plus, A_minus, B_plus, B_minus of the linear mode equations; see
``docs/model.md`` for the derivation and the fixed-point witness.

The closed forms carry removable 1/eta and 1/eta^2 singularities.  For
|eta| < ETA_TOL every operation evaluates the exact eta -> 0 limit
instead (obtained from second-order expansions of the exponentials in
eta); the limit branch is validated against the moment-ODE oracle, which
has no eta singularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, require_valid

__all__ = [
    "ETA_TOL",
    "CoefficientSet",
    "MomentState",
    "MomentTrajectory",
    "coefficients",
    "noise_correlators",
    "moments",
    "trajectory",
    "time_grid",
    "steady_state_moments",
    "steady_state_variance",
]

# |eta| below this evaluates the eta -> 0 limit forms.
ETA_TOL = 1e-4


@dataclass(frozen=True)
class CoefficientSet:
    """Transfer coefficients of the linear mode equations at time t.

    At t = 0 the set is the identity (A_pm = 1, B_pm = 0); for stable
    parameters all four decay to zero, and the determinant of
    [[A_plus, B_plus], [B_minus, A_minus]] equals
    exp(-(kappa + A*eta) t / 2) * exp(-kappa t / 2).
    """

    A_plus: np.ndarray | float
    A_minus: np.ndarray | float
    B_plus: np.ndarray | float
    B_minus: np.ndarray | float


@dataclass(frozen=True)
class MomentState:
    """The three second moments at one time (t = inf marks steady state)."""

    t: float
    u: float
    v: float
    w: float


@dataclass(frozen=True)
class MomentTrajectory:
    """Second moments on a time grid, tagged with their provenance."""

    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    source: str  # "analytic" | "ode" | "fock"

    def __len__(self) -> int:
        return len(self.t)

    def state_at(self, i: int) -> MomentState:
        return MomentState(
            t=float(self.t[i]), u=float(self.u[i]), v=float(self.v[i]), w=float(self.w[i])
        )


def _phi(rate, t):
    """(1 - exp(-rate*t)) / rate, finite at rate = 0 where it equals t."""
    z = np.asarray(rate * t, dtype=float)
    safe = np.where(z == 0.0, 1.0, z)
    g = np.where(z == 0.0, 1.0, -np.expm1(-safe) / safe)
    return t * g


def _check_times(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or not np.all(np.isfinite(t)):
        raise ValueError("time must be finite and nonnegative")
    return t


def _coefficient_arrays(params: ModelParams, t: np.ndarray):
    A, kappa, eta = params.A, params.kappa, params.eta
    h2 = np.exp(-kappa * t / 2.0)
    if abs(eta) < ETA_TOL:
        q = A * t / 4.0
        return h2 * (1.0 + q), h2 * (1.0 - q), -h2 * q, h2 * q
    root = math.sqrt(1.0 - eta * eta)
    h1 = np.exp(-(kappa + A * eta) * t / 2.0)
    a_plus = ((eta - 1.0) * h1 + (eta + 1.0) * h2) / (2.0 * eta)
    a_minus = ((eta + 1.0) * h1 + (eta - 1.0) * h2) / (2.0 * eta)
    b_plus = root * (h1 - h2) / (2.0 * eta)
    return a_plus, a_minus, b_plus, -b_plus


def coefficients(params: ModelParams, t) -> CoefficientSet:
    """Evaluate the four transfer coefficients at time(s) ``t``.

    Accepts a scalar or array of nonnegative times.  For |eta| < ETA_TOL
    the analytic eta -> 0 limit is used.
    """
    require_valid(params)
    t = _check_times(t)
    ap, am, bp, bm = _coefficient_arrays(params, t)
    if t.ndim == 0:
        return CoefficientSet(float(ap), float(am), float(bp), float(bm))
    return CoefficientSet(ap, am, bp, bm)


def _noise_moment_arrays(params: ModelParams, t: np.ndarray):
    """Seed-independent (vacuum) parts of u, v, w."""
    A, kappa, eta = params.A, params.kappa, params.eta
    if abs(eta) < ETA_TOL:
        e2 = np.exp(-kappa * t)
        z = -np.expm1(-kappa * t)  # 1 - e2
        vn = A * A / (8.0 * kappa * kappa) * z - A * A * t / (8.0 * kappa) * e2
        un = vn + A / (2.0 * kappa) * z
        wn = vn + A / (4.0 * kappa) * z
        return un, vn, wn
    root = math.sqrt(1.0 - eta * eta)
    l1 = kappa + A * eta
    s3 = kappa + A * eta / 2.0
    p1 = _phi(l1, t)
    p3 = _phi(s3, t)
    un = A / (4.0 * eta) * ((1.0 - eta * eta) * p3 - (1.0 - eta) ** 2 * p1)
    vn = A * (1.0 - eta * eta) / (4.0 * eta) * (p3 - p1)
    wn = A * root / (4.0 * eta) * (p3 - (1.0 - eta) * p1)
    return un, vn, wn


def _moment_arrays(params: ModelParams, t: np.ndarray):
    un, vn, wn = _noise_moment_arrays(params, t)
    ap, am, bp, bm = _coefficient_arrays(params, t)
    na, nb = params.nbar_a, params.nbar_b
    u = un + na * ap * ap + nb * bp * bp
    v = vn + nb * am * am + na * bm * bm
    w = wn + na * ap * bm + nb * bp * am
    return u, v, w


def moments(params: ModelParams, t: float) -> MomentState:
    """Second moments at time ``t``, including the thermal seed terms.

    At t = 0 this reproduces the seed exactly: (u, v, w) =
    (nbar_a, nbar_b, 0).  w is real for all times and parameters.
    """
    require_valid(params)
    tt = _check_times(t)
    if tt.ndim != 0:
        raise ValueError("moments takes a single time; use trajectory for grids")
    u, v, w = _moment_arrays(params, tt)
    return MomentState(t=float(tt), u=float(u), v=float(v), w=float(w))


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """Uniform grid 0, dt, ..., ~t_max (deterministic endpoint rounding)."""
    if t_max <= 0 or dt <= 0 or dt > t_max:
        raise ValueError("need 0 < dt <= t_max")
    n = int(round(t_max / dt))
    return np.linspace(0.0, n * dt, n + 1)


def trajectory(params: ModelParams, t_max: float, dt: float) -> MomentTrajectory:
    """Closed-form moments evaluated on a uniform grid."""
    require_valid(params)
    t = time_grid(t_max, dt)
    u, v, w = _moment_arrays(params, t)
    return MomentTrajectory(t=t, u=u, v=v, w=w, source="analytic")


def noise_correlators(params: ModelParams, t):
    """Second-order correlators of the accumulated noise integrals.

    Returns ``(CC, DD, CD)`` where CC = <C+* C+>, DD = <D+* D+> (zero for
    every parameter set and time) and CD = <C+* D+>.  The identity
    CC + DD + 2*CD = u(t; vacuum seed) ties these to the moment formulas
    and is enforced by the test suite.  For |eta| < ETA_TOL the eta -> 0
    limits are evaluated.
    """
    require_valid(params)
    t = _check_times(t)
    A, kappa, eta = params.A, params.kappa, params.eta
    if abs(eta) < ETA_TOL:
        e2 = np.exp(-kappa * t)
        z = -np.expm1(-kappa * t)
        x = z / (2.0 * kappa * kappa) - t * e2 / (2.0 * kappa) - t * t * e2 / 4.0
        y = t * e2 - z / kappa
        cc = A / (8.0 * kappa) * (A * A * x - 2.0 * A * y + 4.0 * z)
        cd = A / (16.0 * kappa) * (-A * A * x + A * y)
    else:
        l1 = kappa + A * eta
        s3 = kappa + A * eta / 2.0
        p1 = _phi(l1, t)
        p2 = _phi(kappa, t)
        p3 = _phi(s3, t)
        cc = (A * (1.0 - eta) / (8.0 * eta * eta)) * (
            (eta - 1.0) ** 2 * p1 + (eta + 1.0) ** 2 * p2 + 2.0 * (eta * eta - 1.0) * p3
        )
        cd = (A * (1.0 - eta * eta) / (16.0 * eta * eta)) * (
            (eta - 1.0) * p1 - (eta + 1.0) * p2 + 2.0 * p3
        )
    dd = np.zeros_like(np.asarray(cc, dtype=float))
    if t.ndim == 0:
        return float(cc), float(dd), float(cd)
    return cc, dd, cd


def _require_stable(params: ModelParams) -> None:
    if not params.stable:
        raise ValueError(
            "no steady state: kappa + A*eta <= 0 (unstable parameter set)"
        )


def steady_state_moments(params: ModelParams) -> MomentState:
    """Long-time limits of u, v, w; independent of the seeds by construction.

    Raises ``ValueError`` for unstable parameters.  The returned state is
    marked with t = inf.
    """
    require_valid(params)
    _require_stable(params)
    A, kappa, eta = params.A, params.kappa, params.eta
    if abs(eta) < ETA_TOL:
        u = A * (4.0 * kappa + A) / (8.0 * kappa * kappa)
        v = A * A / (8.0 * kappa * kappa)
        w = A * (2.0 * kappa + A) / (8.0 * kappa * kappa)
    else:
        root = math.sqrt(1.0 - eta * eta)
        l1 = kappa + A * eta
        s3 = kappa + A * eta / 2.0
        u = A / (4.0 * eta) * ((1.0 - eta * eta) / s3 - (1.0 - eta) ** 2 / l1)
        v = A * (1.0 - eta * eta) / (4.0 * eta) * (1.0 / s3 - 1.0 / l1)
        w = A * root / (4.0 * eta) * (1.0 / s3 - (1.0 - eta) / l1)
    return MomentState(t=math.inf, u=u, v=v, w=w)


def steady_state_variance(params: ModelParams, sign: str) -> float:
    """Steady-state quadrature variance from its own closed form.

    ``sign`` selects the plus or minus quadrature.  The value agrees with
    ``1 + u + v +/- 2 w`` evaluated at :func:`steady_state_moments` to
    machine precision (asserted at 1e-10 relative by the test suite).
    For |eta| < ETA_TOL the expression is evaluated at eta = 0, matching
    the limit branch used by the moment operations.
    """
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    require_valid(params)
    _require_stable(params)
    s = 1.0 if sign == "plus" else -1.0
    A, kappa, eta = params.A, params.kappa, params.eta
    if abs(eta) < ETA_TOL:
        eta = 0.0
    root = math.sqrt(1.0 - eta * eta)
    l1 = kappa + A * eta
    den = 4.0 * kappa * (2.0 * kappa + A * eta) * l1
    gain_term = A * (1.0 - eta) * (
        4.0 * kappa * l1 + A * (A + 2.0 * kappa + A * eta) * (1.0 + s * root)
    ) / den
    cross_term = s * A * root * (
        4.0 * kappa * l1 + A * A * (eta * eta - 1.0 - s * root)
    ) / den
    return 1.0 + gain_term + cross_term
