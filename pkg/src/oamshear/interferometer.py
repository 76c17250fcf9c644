"""Two-calcite shear interferometer as an equal-path two-replica device."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import defaults
from .lg_fields import BeamParams, LGModeSpec, eval_lg


@dataclass(frozen=True)
class InterferometerConfig:
    """Walk-off ``D``, rotation ``gamma`` of the second crystal and phase ``phi``.

    ``shear_override`` replaces the rotation-derived ``(dx, dy)`` when a pure
    transverse shift is wanted (e.g. ``dy = 0.5 mm`` with ``dx = 0``).
    """

    walk_off: float = defaults.WALK_OFF
    gamma: float = 0.0
    phase: float = 0.0
    path_balance: float = 1.0
    shear_override: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.walk_off > 0:
            raise ValueError("walk_off must be positive")
        if not abs(self.gamma) < math.pi / 4:
            raise ValueError("|gamma| must be below pi/4")
        if not 0 < self.path_balance <= 1:
            raise ValueError("path_balance must lie in (0, 1]")
        if self.shear_override is not None:
            object.__setattr__(self, "shear_override", tuple(float(s) for s in self.shear_override))

    @classmethod
    def from_shear(cls, dy: float, dx: float = 0.0, **kwargs) -> "InterferometerConfig":
        return cls(shear_override=(dx, dy), **kwargs)

    @property
    def shear(self) -> tuple[float, float]:
        if self.shear_override is not None:
            return self.shear_override
        return shear_from_rotation(self)

    def with_phase(self, phase: float) -> "InterferometerConfig":
        return replace(self, phase=phase)


def shear_from_rotation(config: InterferometerConfig) -> tuple[float, float]:
    """Exact ``(D (1 - cos gamma), D sin gamma)``; no small-angle approximation."""
    D, g = config.walk_off, config.gamma
    return D * (1.0 - math.cos(g)), D * math.sin(g)


def replicas(mode: LGModeSpec, beam: BeamParams, shear, x, y):
    """Direct and sheared replica amplitudes at ``(x, y)``, both analytic."""
    dx, dy = shear
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return eval_lg(mode, beam, x, y), eval_lg(mode, beam, x - dx, y - dy)


def superpose(mode: LGModeSpec, beam: BeamParams, config: InterferometerConfig):
    """Output amplitude ``psi(x, y) + b e^{i phi} psi(x - dx, y - dy)`` as a callable."""
    shear = config.shear
    factor = config.path_balance * np.exp(1j * config.phase)

    def field(x, y):
        a, b = replicas(mode, beam, shear, x, y)
        return a + factor * b

    return field


def point_probability(l: int, waist: float, dy: float, phi: float, x0: float) -> float:
    """Closed-form detection probability at ``(x0, 0)`` for a flat wavefront.

    ``alpha^2 + beta^2 + 2 alpha beta cos(phi + l phi0)`` with
    ``phi0 = arctan(dy / x0)``.
    """
    if x0 == 0:
        raise ValueError("x0 = 0 leaves phi0 undefined")
    m = abs(l)
    alpha = math.exp(-(x0**2) / waist**2) * abs(x0) ** m
    rho2 = x0**2 + dy**2
    beta = math.exp(-rho2 / waist**2) * rho2 ** (m / 2)
    phi0 = math.atan(dy / x0)
    return alpha**2 + beta**2 + 2 * alpha * beta * math.cos(phi + l * phi0)
