"""Tolerance constants shared by the numerical checks.

Every threshold used by library checks and by the scenario runner lives here.
The environment variable ``CLONOMETRY_TOLERANCE_SCALE`` multiplies all of
them, which is handy for exploratory runs at reduced truncation.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_SCALE = "CLONOMETRY_TOLERANCE_SCALE"


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    density_trace: float = 1e-10
    density_eig: float = 1e-10
    ket_norm: float = 1e-12
    projector: float = 1e-12
    expm_inverse: float = 1e-8
    # qubit cloning
    povm_closed_form: float = 1e-12
    channel_laws: float = 1e-10
    uncertainty: float = 1e-10
    sphere_grid: float = 1e-8
    coherent_second_moment: float = 1e-6
    # continuous variables
    cv_trace: float = 2e-3
    cv_trace_failure: float = 1e-2
    coherent_povm: float = 1e-3
    squeezed_povm: float = 2e-3
    added_noise: float = 5e-3
    twin_beam_photons: float = 1e-8
    route_crosscheck: float = 5e-3
    covariance: float = 2e-3
    selfdual: float = 1e-6
    # regularized Werner map
    werner_trace: float = 1e-6
    depolarizing_limit: float = 5e-3
    werner_rel_fit: float = 0.10
    werner_first_moment: float = 5e-2

    def scaled(self, factor: float) -> "Tolerances":
        return replace(self, **{f.name: getattr(self, f.name) * factor for f in fields(self)})


def tolerance_scale() -> float:
    raw = os.environ.get(ENV_SCALE, "1")
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{ENV_SCALE} must be a positive number, got {raw!r}") from None
    if not value > 0:
        raise ValueError(f"{ENV_SCALE} must be a positive number, got {raw!r}")
    return value


def get_tolerances() -> Tolerances:
    """Tolerances with the environment scale factor applied."""
    return Tolerances().scaled(tolerance_scale())


TOL = Tolerances()
