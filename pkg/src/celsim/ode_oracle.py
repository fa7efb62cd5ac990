"""Moment-equation oracle: fixed-step RK4 on the linear ODEs for (u, v, w).

The master equation closes on the three second moments:

    du/dt = -2a u - 2c w + D_aa
    dv/dt = -2b v + 2c w
    dw/dt = -(a + b) w + c (u - v) + D_ab

with the drift/diffusion constants of :func:`celsim.model.drift_diffusion`
and the thermal initial condition (nbar_a, nbar_b, 0).  The derivation and
its fixed-point witness are documented in ``docs/model.md``.  This path is
free of the eta -> 0 singularity of the closed forms, which is what makes
it a useful independent check of the analytic module.

Unlike the closed forms, the integrator also accepts kappa = 0 (pure-gain
generator), which the Fock oracle needs for its undamped cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import MomentTrajectory
from .model import DriftDiffusion, ModelParams, drift_diffusion

__all__ = ["MomentOde", "integrate", "integrate_many", "initial_slope_check"]


def _check_evolvable(params: ModelParams) -> None:
    """Relaxed validity for oracle runs: kappa = 0 is allowed."""
    values = (params.A, params.kappa, params.eta, params.nbar_a, params.nbar_b)
    if not all(math.isfinite(x) for x in values):
        raise ValueError("parameters must be finite")
    if params.A <= 0 or params.kappa < 0:
        raise ValueError("need A > 0 and kappa >= 0")
    if not -1.0 <= params.eta <= 1.0:
        raise ValueError("eta must lie in [-1, 1]")
    if params.nbar_a < 0 or params.nbar_b < 0:
        raise ValueError("seed photon numbers must be nonnegative")


@dataclass(frozen=True)
class MomentOde:
    """Right-hand side of the moment equations for one parameter set."""

    drift: DriftDiffusion

    def matrix(self):
        """Return (M, d) with dy/dt = M y + d for y = (u, v, w)."""
        a, b, c = self.drift.drift_aa, self.drift.drift_bb, self.drift.cross
        m = np.array(
            [
                [-2.0 * a, 0.0, -2.0 * c],
                [0.0, -2.0 * b, 2.0 * c],
                [c, -c, -(a + b)],
            ]
        )
        d = np.array([self.drift.diff_aa, 0.0, self.drift.diff_ab])
        return m, d

    def rhs(self, y):
        m, d = self.matrix()
        return m @ np.asarray(y, dtype=float) + d


def initial_slope_check(params: ModelParams):
    """Moment derivatives at t = 0 for the seeded initial condition.

    Regression guard for the drift signs, e.g. du/dt(0) = D_aa - 2a nbar_a
    and dv/dt(0) = -2b nbar_b (the photon dip onset when mode b is seeded).
    """
    _check_evolvable(params)
    ode = MomentOde(drift_diffusion(params))
    du, dv, dw = ode.rhs([params.nbar_a, params.nbar_b, 0.0])
    return float(du), float(dv), float(dw)


def integrate_many(
    params_list, t_max: float, h: float
) -> list[MomentTrajectory]:
    """Integrate several parameter sets on one shared grid (classical RK4).

    All sets advance in lockstep, which keeps the full verification matrix
    fast; each trajectory is independent of the others.
    """
    if t_max <= 0 or h <= 0 or h > t_max:
        raise ValueError("need 0 < h <= t_max")
    for p in params_list:
        _check_evolvable(p)
    n_sets = len(params_list)
    n_steps = int(round(t_max / h))
    t = np.linspace(0.0, n_steps * h, n_steps + 1)

    mats = np.empty((n_sets, 3, 3))
    offs = np.empty((n_sets, 3))
    for i, p in enumerate(params_list):
        mats[i], offs[i] = MomentOde(drift_diffusion(p)).matrix()

    y = np.array([[p.nbar_a, p.nbar_b, 0.0] for p in params_list])
    out = np.empty((n_sets, n_steps + 1, 3))
    out[:, 0] = y

    def rhs(state):
        return np.einsum("kij,kj->ki", mats, state) + offs

    with np.errstate(over="ignore", invalid="ignore"):  # blowup -> isfinite check
        for step in range(n_steps):
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * h * k1)
            k3 = rhs(y + 0.5 * h * k2)
            k4 = rhs(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(y)):
                bad = np.where(~np.isfinite(y).all(axis=1))[0][0]
                raise ArithmeticError(
                    f"moment integration diverged at t = {t[step + 1]:g} "
                    f"(parameter set {bad}: unstable blowup)"
                )
            out[:, step + 1] = y

    return [
        MomentTrajectory(t=t, u=out[i, :, 0], v=out[i, :, 1], w=out[i, :, 2], source="ode")
        for i in range(n_sets)
    ]


def integrate(params: ModelParams, t_max: float, h: float = 1e-3) -> MomentTrajectory:
    """Fourth-order trajectory of (u, v, w) on a uniform grid.

    The initial condition is the thermal seed (nbar_a, nbar_b, 0).  Raises
    ``ArithmeticError`` naming the failure time if the state blows up
    (unstable parameter sets grow without bound).
    """
    return integrate_many([params], t_max, h)[0]
