"""Truncated Fock-space oracle: RK4 evolution of the two-mode density matrix.

The full generator (gain, damping and the two-photon cross terms) is
assembled once as a sparse superoperator acting on the row-major
vectorized density matrix; the dense (N_a N_b)^2 x (N_a N_b)^2 matrix is
never materialized.  Thermal product states and the generator are real in
the Fock basis, so the density matrix stays real and the integration runs
in float64; the ``FockState`` contract still exposes a complex matrix.

Per step the run records the moments <a^dag a>, <b^dag b>, <ab> plus the
structurally vanishing ones (<a>, <b>, <a^2>, <b^2>, <a^dag b>), the trace
and Hermiticity defects and the truncation tail mass.  Agreement of the
extracted moments with the moment-ODE oracle is the cross-check that both
discretize the same generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .analytic import MomentTrajectory
from .model import ModelParams
from .ode_oracle import _check_evolvable

__all__ = [
    "FockState",
    "FockRun",
    "thermal_product_state",
    "evolve",
    "evolve_many",
]

DEFAULT_CUTOFF = 25
DEFAULT_TAIL_THRESHOLD = 1e-6

# Names and (da, db) shifts of the recorded expectation values; 'n_a',
# 'n_b' and 'ab' feed the moment trajectory, the rest must stay ~0.
_VANISHING = ("a", "b", "a2", "b2", "adag_b")


@dataclass(frozen=True)
class FockState:
    """Truncated two-mode density matrix with health metrics.

    ``rho`` is complex of shape (N_a*N_b, N_a*N_b), indexed by photon-number
    pairs in row-major order (n_a * N_b + n_b).  ``tail_mass`` is the
    population in the top two number shells of either mode; when it exceeds
    the configured threshold the state is flagged truncation-suspect.
    """

    rho: np.ndarray
    N_a: int
    N_b: int
    trace_defect: float
    herm_defect: float
    tail_mass: float
    truncation_suspect: bool


@dataclass(frozen=True)
class FockRun:
    """One density-matrix evolution with per-step extracted quantities."""

    trajectory: MomentTrajectory
    vanishing: dict  # name -> |<O>| per grid point
    trace_defect: np.ndarray
    herm_defect: np.ndarray
    tail_mass: np.ndarray
    final_state: FockState
    truncation_suspect: bool

    @property
    def max_trace_defect(self) -> float:
        return float(self.trace_defect.max())

    @property
    def max_herm_defect(self) -> float:
        return float(self.herm_defect.max())

    @property
    def max_tail_mass(self) -> float:
        return float(self.tail_mass.max())

    def max_vanishing(self, name: str) -> float:
        return float(self.vanishing[name].max())


def _measure(rho: np.ndarray, N_a: int, N_b: int):
    """(trace defect, herm defect, tail mass) of a density matrix."""
    trace_defect = abs(rho.trace() - 1.0)
    herm_defect = np.abs(rho - rho.conj().T).max()
    diag = np.real(np.diagonal(rho)).reshape(N_a, N_b)
    tail = max(diag[N_a - 2 :, :].sum(), diag[:, N_b - 2 :].sum())
    return float(trace_defect), float(herm_defect), float(tail)


def _make_state(
    rho: np.ndarray, N_a: int, N_b: int, tail_threshold: float
) -> FockState:
    trace_defect, herm_defect, tail = _measure(rho, N_a, N_b)
    return FockState(
        rho=rho,
        N_a=N_a,
        N_b=N_b,
        trace_defect=trace_defect,
        herm_defect=herm_defect,
        tail_mass=tail,
        truncation_suspect=tail > tail_threshold,
    )


def thermal_product_state(
    nbar_a: float,
    nbar_b: float,
    N_a: int = DEFAULT_CUTOFF,
    N_b: int = DEFAULT_CUTOFF,
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD,
) -> FockState:
    """Separable two-mode thermal state, renormalized after truncation.

    Each mode carries the geometric photon-number distribution
    p_n ~ nbar^n / (1 + nbar)^(1+n); nbar = 0 degenerates to the vacuum
    projector.  The trace is exactly 1 after renormalization.
    """
    if nbar_a < 0 or nbar_b < 0:
        raise ValueError("thermal occupation must be nonnegative")
    if N_a < 2 or N_b < 2:
        raise ValueError("need at least two Fock levels per mode")

    def geometric(nbar, size):
        n = np.arange(size)
        if nbar == 0:
            p = np.zeros(size)
            p[0] = 1.0
            return p
        ratio = nbar / (1.0 + nbar)
        return ratio**n / (1.0 + nbar)

    diag = np.outer(geometric(nbar_a, N_a), geometric(nbar_b, N_b)).ravel()
    diag /= diag.sum()
    rho = np.diag(diag).astype(complex)
    return _make_state(rho, N_a, N_b, tail_threshold)


def _mode_operators(N_a: int, N_b: int):
    """Sparse annihilation operators on the product space (real entries)."""
    a = sp.diags(np.sqrt(np.arange(1, N_a)), offsets=1)
    b = sp.diags(np.sqrt(np.arange(1, N_b)), offsets=1)
    A = sp.kron(a, sp.identity(N_b), format="csr")
    B = sp.kron(sp.identity(N_a), b, format="csr")
    return A, B


def _superoperator(params: ModelParams, N_a: int, N_b: int) -> sp.csr_matrix:
    """Generator acting on the row-major vec of rho: vec(L rho R) = kron(L, R^T) vec(rho)."""
    A, B = _mode_operators(N_a, N_b)
    Ad, Bd = A.T.tocsr(), B.T.tocsr()
    dim = N_a * N_b
    eye = sp.identity(dim, format="csr")

    def sand(left, right):
        return sp.kron(left, right.T, format="csr")

    gain_a = params.A * (1.0 - params.eta) / 2.0
    loss_a = params.kappa
    loss_b = (params.A * (1.0 + params.eta) + 2.0 * params.kappa) / 2.0
    cross = params.A * math.sqrt(max(0.0, 1.0 - params.eta**2)) / 4.0

    def lindblad(op, opd, rate):
        opd_op = (opd @ op).tocsr()
        return rate * (
            sand(op, opd) - 0.5 * sand(opd_op, eye) - 0.5 * sand(eye, opd_op)
        )

    gen = lindblad(A, Ad, loss_a) + lindblad(Ad, A, gain_a) + lindblad(B, Bd, loss_b)
    if cross != 0.0:
        adbd = (Ad @ Bd).tocsr()
        ab = (A @ B).tocsr()
        gen = gen + cross * (
            sand(adbd, eye) + sand(eye, adbd) + sand(ab, eye) + sand(eye, ab)
            - 2.0 * sand(Ad, Bd) - 2.0 * sand(B, A)
        )
    return gen.tocsr()


def _observables(N_a: int, N_b: int) -> sp.csr_matrix:
    """Rows vec(O^T) so that row @ vec(rho) = Tr(O rho); order:
    n_a, n_b, ab, a, b, a2, b2, adag_b."""
    A, B = _mode_operators(N_a, N_b)
    Ad = A.T.tocsr()
    ops = [Ad @ A, B.T @ B, A @ B, A, B, A @ A, B @ B, Ad @ B]
    rows = [sp.csr_matrix(op.T.reshape(1, -1)) for op in ops]
    return sp.vstack(rows, format="csr")


def evolve_many(
    states: list[FockState],
    params: ModelParams,
    t_max: float,
    h: float = 1e-3,
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD,
) -> list[FockRun]:
    """Evolve several initial states under one generator in lockstep.

    All states must share the truncation bounds.  Inputs are not mutated;
    each run gets its own trajectory, health series and final state.
    """
    _check_evolvable(params)
    if not states:
        raise ValueError("need at least one initial state")
    if t_max <= 0 or h <= 0 or h > t_max:
        raise ValueError("need 0 < h <= t_max")
    N_a, N_b = states[0].N_a, states[0].N_b
    if any(s.N_a != N_a or s.N_b != N_b for s in states):
        raise ValueError("all states must share the truncation bounds")

    dim = N_a * N_b
    cols = []
    for s in states:
        if np.abs(s.rho.imag).max() > 1e-12:
            raise ValueError(
                "initial state must be real in the Fock basis (thermal states are)"
            )
        cols.append(np.real(s.rho).ravel())
    x = np.stack(cols, axis=1)  # (dim^2, n_states), float64

    gen = _superoperator(params, N_a, N_b)
    obs = _observables(N_a, N_b)
    diag_idx = np.arange(dim) * (dim + 1)

    n_steps = int(round(t_max / h))
    t = np.linspace(0.0, n_steps * h, n_steps + 1)
    n_states = len(states)
    moments = np.empty((n_steps + 1, 8, n_states))
    trace_defect = np.empty((n_steps + 1, n_states))
    herm_defect = np.empty((n_steps + 1, n_states))
    tail_mass = np.empty((n_steps + 1, n_states))

    def record(k, xk):
        moments[k] = obs @ xk
        diag = xk[diag_idx]  # (dim, n_states)
        trace_defect[k] = np.abs(diag.sum(axis=0) - 1.0)
        shells = diag.reshape(N_a, N_b, n_states)
        tail_mass[k] = np.maximum(
            shells[N_a - 2 :].sum(axis=(0, 1)), shells[:, N_b - 2 :].sum(axis=(0, 1))
        )
        for j in range(n_states):
            r = xk[:, j].reshape(dim, dim)
            herm_defect[k, j] = np.abs(r - r.T).max()

    record(0, x)
    with np.errstate(over="ignore", invalid="ignore"):  # blowup -> isfinite check
        for step in range(n_steps):
            k1 = gen @ x
            k2 = gen @ (x + 0.5 * h * k1)
            k3 = gen @ (x + 0.5 * h * k2)
            k4 = gen @ (x + h * k3)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)):
                raise ArithmeticError(
                    "density matrix evolution produced non-finite entries "
                    f"at t = {t[step + 1]:g}"
                )
            record(step + 1, x)

    runs = []
    for j in range(n_states):
        final = _make_state(
            x[:, j].reshape(dim, dim).astype(complex), N_a, N_b, tail_threshold
        )
        traj = MomentTrajectory(
            t=t,
            u=moments[:, 0, j].copy(),
            v=moments[:, 1, j].copy(),
            w=moments[:, 2, j].copy(),
            source="fock",
        )
        vanishing = {
            name: np.abs(moments[:, 3 + i, j]) for i, name in enumerate(_VANISHING)
        }
        runs.append(
            FockRun(
                trajectory=traj,
                vanishing=vanishing,
                trace_defect=trace_defect[:, j].copy(),
                herm_defect=herm_defect[:, j].copy(),
                tail_mass=tail_mass[:, j].copy(),
                final_state=final,
                truncation_suspect=bool(tail_mass[:, j].max() > tail_threshold),
            )
        )
    return runs


def evolve(
    state: FockState,
    params: ModelParams,
    t_max: float,
    h: float = 1e-3,
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD,
) -> FockRun:
    """Evolve one state under the full generator; see :func:`evolve_many`."""
    return evolve_many([state], params, t_max, h, tail_threshold)[0]
