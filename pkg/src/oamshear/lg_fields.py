"""Laguerre-Gauss amplitudes with p = 0, pointwise and on Cartesian grids.

Modes are left un-normalised: ``exp(-r^2/w^2) * r^|l| * exp(-i l phi)``. The
factor ``r^|l| exp(-i l phi)`` is evaluated as the polynomial ``(x - i y)^l``
(``(x + i y)^|l|`` for negative l), which is exact at the origin and needs no
arctangent.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

FLAT = math.inf

# Sign of the quadratic curvature phase exp(SIGN * i pi r^2 / (lambda R)).
# With SIGN = -1 a positive R describes a diverging wavefront.
CURVATURE_PHASE_SIGN = -1


class GridWarning(RuntimeWarning):
    """Grid does not span enough of the beam to hold its power."""


@dataclass(frozen=True)
class BeamParams:
    """Envelope of one photon's spatial mode (SI units).

    ``radius_of_curvature`` is ``FLAT`` (infinity) for a plane wavefront.
    """

    wavelength: float = 815e-9
    waist: float = 1e-3
    radius_of_curvature: float = FLAT
    amplitude_scale: float = 1.0

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if not self.waist > 0:
            raise ValueError(f"waist must be positive, got {self.waist}")
        if self.radius_of_curvature is None:
            object.__setattr__(self, "radius_of_curvature", FLAT)
        if self.radius_of_curvature == 0 or math.isnan(self.radius_of_curvature):
            raise ValueError("radius_of_curvature must be non-zero (use FLAT for a plane wave)")

    @property
    def is_flat(self) -> bool:
        return math.isinf(self.radius_of_curvature)


@dataclass(frozen=True)
class LGModeSpec:
    l: int
    p: int = 0

    def __post_init__(self):
        if self.p != 0:
            raise ValueError("only p = 0 Laguerre-Gauss modes are supported")
        if int(self.l) != self.l:
            raise ValueError(f"topological charge must be an integer, got {self.l}")
        object.__setattr__(self, "l", int(self.l))


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    dx: float
    dy: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 samples per axis")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("grid spacing must be positive")

    @classmethod
    def spanning(cls, half_width: float, n: int = 512, center=(0.0, 0.0)) -> "GridSpec":
        """Square n x n grid whose outer nodes sit at +-half_width."""
        d = 2.0 * half_width / (n - 1)
        return cls(n, n, d, d, tuple(center))

    def axes(self):
        x = self.center[0] + (np.arange(self.nx) - 0.5 * (self.nx - 1)) * self.dx
        y = self.center[1] + (np.arange(self.ny) - 0.5 * (self.ny - 1)) * self.dy
        return x, y

    def mesh(self):
        x, y = self.axes()
        return np.meshgrid(x, y, indexing="ij")


@dataclass(frozen=True)
class ComplexField:
    """Samples ``values[i, j]`` at ``(x_i, y_j)`` of ``grid``."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(f"values shape {v.shape} does not match grid ({self.grid.nx}, {self.grid.ny})")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def helical_factor(l: int, x, y):
    """``r^|l| exp(-i l phi)`` as a polynomial in x and y."""
    if l == 0:
        return np.ones(np.broadcast(x, y).shape, dtype=complex)
    z = np.asarray(x) - 1j * np.sign(l) * np.asarray(y)
    return z ** abs(l)


def eval_lg(mode: LGModeSpec, beam: BeamParams, x, y):
    """Complex LG amplitude at ``(x, y)``; broadcasts over array inputs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    out = beam.amplitude_scale * np.exp(-r2 / beam.waist**2) * helical_factor(mode.l, x, y)
    if not beam.is_flat:
        out = out * np.exp(CURVATURE_PHASE_SIGN * 1j * np.pi * r2 / (beam.wavelength * beam.radius_of_curvature))
    return out[()] if out.ndim == 0 else out


def render_field(mode: LGModeSpec, beam: BeamParams, grid: GridSpec) -> ComplexField:
    x, y = grid.axes()
    span_x = min(abs(x[0] - grid.center[0]), abs(x[-1] - grid.center[0]))
    span_y = min(abs(y[0] - grid.center[1]), abs(y[-1] - grid.center[1]))
    if min(span_x, span_y) < 3 * beam.waist:
        warnings.warn(
            f"grid half-span {min(span_x, span_y):.3g} m is below 3w = {3 * beam.waist:.3g} m",
            GridWarning,
            stacklevel=2,
        )
    X, Y = np.meshgrid(x, y, indexing="ij")
    return ComplexField(grid, eval_lg(mode, beam, X, Y))


def total_power(field: ComplexField) -> float:
    """Discrete ``sum |psi|^2 dx dy``."""
    g = field.grid
    return float(np.sum(np.abs(field.values) ** 2) * g.dx * g.dy)


def mode_power(mode: LGModeSpec, beam: BeamParams) -> float:
    """Closed-form plane integral of ``|psi|^2``: ``pi Gamma(|l|+1) (w^2/2)^(|l|+1)``."""
    m = abs(mode.l)
    return beam.amplitude_scale**2 * math.pi * math.gamma(m + 1) * (beam.waist**2 / 2.0) ** (m + 1)


def write_field_csv(field: ComplexField, path) -> None:
    """CSV with header ``x,y,re,im``; rows run over y fastest (i outer, j inner)."""
    X, Y = field.grid.mesh()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "re", "im"])
        for xv, yv, v in zip(X.ravel(), Y.ravel(), field.values.ravel()):
            w.writerow([repr(float(xv)), repr(float(yv)), repr(float(v.real)), repr(float(v.imag))])
