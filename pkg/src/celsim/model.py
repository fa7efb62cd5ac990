"""Physical parameters, validation and derived drift/diffusion constants.

All rates share the inverse-time unit of the cavity damping constant and
time is measured in that unit's reciprocal; there is no SI handling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "ModelParams",
    "DriftDiffusion",
    "ValidationReport",
    "validate",
    "require_valid",
    "drift_diffusion",
    "thermal_occupancy",
    "CONFIG_KEYS",
    "load_config",
]


@dataclass(frozen=True)
class ModelParams:
    """Inputs of the two-mode cavity model.

    Attributes
    ----------
    A : float
        Linear gain coefficient, an inverse-time rate like ``kappa``; > 0.
    kappa : float
        Cavity damping constant; > 0.
    eta : float
        Population inversion (difference of the initial lower- and
        upper-level populations), dimensionless; must lie in [-1, 1].
    nbar_a : float
        Mean photon number of the thermal seed in mode a; >= 0.
    nbar_b : float
        Mean photon number of the thermal seed in mode b; >= 0.
    """

    A: float
    kappa: float
    eta: float = 0.0
    nbar_a: float = 0.0
    nbar_b: float = 0.0

    @property
    def stable(self) -> bool:
        """True when the slowest decay rate ``kappa + A*eta`` is positive."""
        return self.kappa + self.A * self.eta > 0.0

    def with_seeds(self, nbar_a: float, nbar_b: float) -> "ModelParams":
        return replace(self, nbar_a=nbar_a, nbar_b=nbar_b)


@dataclass(frozen=True)
class DriftDiffusion:
    """Drift and diffusion constants of the linear moment equations.

    ``drift_aa`` and ``drift_bb`` are the per-mode decay rates, ``cross``
    couples the two modes, and ``diff_aa``/``diff_ab`` are the noise
    injection rates into <a*a> and <ab>.  ``diff_ab == cross`` always.
    """

    drift_aa: float
    drift_bb: float
    cross: float
    diff_aa: float
    diff_ab: float


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; never raised, always returned."""

    errors: tuple[str, ...]
    unstable: bool

    @property
    def ok(self) -> bool:
        return not self.errors

    def summary(self) -> str:
        if self.errors:
            return "invalid: " + "; ".join(self.errors)
        if self.unstable:
            return "ok (UNSTABLE: kappa + A*eta <= 0, no steady state)"
        return "ok"


def validate(params: ModelParams) -> ValidationReport:
    """Check every parameter constraint and the stability of the model.

    Returns a report listing all violated constraints.  An unstable
    parameter set (``kappa + A*eta <= 0``) is flagged as a warning, not an
    error: the transient formulas stay evaluable, only steady-state
    operations refuse it.
    """
    errors = []
    for name in ("A", "kappa", "eta", "nbar_a", "nbar_b"):
        if not math.isfinite(getattr(params, name)):
            errors.append(f"{name} must be finite")
    if params.A <= 0:
        errors.append("A must be positive")
    if params.kappa <= 0:
        errors.append("kappa must be positive")
    if not -1.0 <= params.eta <= 1.0:
        errors.append("eta must lie in [-1, 1]")
    if params.nbar_a < 0:
        errors.append("nbar_a must be nonnegative")
    if params.nbar_b < 0:
        errors.append("nbar_b must be nonnegative")
    unstable = not errors and not params.stable
    return ValidationReport(errors=tuple(errors), unstable=unstable)


def require_valid(params: ModelParams) -> None:
    """Raise ``ValueError`` listing all violated constraints, if any."""
    report = validate(params)
    if report.errors:
        raise ValueError("invalid parameters: " + "; ".join(report.errors))


def drift_diffusion(params: ModelParams) -> DriftDiffusion:
    """Drift/diffusion constants implied by the master equation.

    a = kappa/2 - A(1-eta)/4        (mode-a decay)
    b = kappa/2 + A(1+eta)/4        (mode-b decay)
    c = A*sqrt(1-eta^2)/4           (intermodal coupling)
    D_aa = A(1-eta)/2               (<f_a f_a*> noise strength)
    D_ab = A*sqrt(1-eta^2)/4        (<f_b f_a> noise strength)

    Pure function of the inputs, never raises; finite for every eta in
    [-1, 1].  Validity of ``params`` is the caller's precondition.
    """
    A, kappa, eta = params.A, params.kappa, params.eta
    root = math.sqrt(max(0.0, 1.0 - eta * eta))
    return DriftDiffusion(
        drift_aa=kappa / 2.0 - A * (1.0 - eta) / 4.0,
        drift_bb=kappa / 2.0 + A * (1.0 + eta) / 4.0,
        cross=A * root / 4.0,
        diff_aa=A * (1.0 - eta) / 2.0,
        diff_ab=A * root / 4.0,
    )


def thermal_occupancy(freq_ratio: float) -> float:
    """Mean thermal photon number 1/(e^x - 1) for x = (mode frequency)/(k_B T).

    Strictly decreasing in x and divergent as x -> 0+.
    """
    if not freq_ratio > 0:
        raise ValueError("frequency ratio must be positive")
    return 1.0 / math.expm1(freq_ratio)


# Plain-text key-value configuration understood by the CLI.
CONFIG_KEYS = ("A", "kappa", "eta", "nbar_a", "nbar_b", "t_max", "dt")


def load_config(path: str) -> dict:
    """Parse a ``key = value`` configuration file.

    Blank lines and ``#`` comments are ignored.  Only the keys in
    ``CONFIG_KEYS`` are accepted; values must parse as floats.
    """
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, text = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = float(text.strip())
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: value for {key!r} is not a number"
                ) from None
    return values
