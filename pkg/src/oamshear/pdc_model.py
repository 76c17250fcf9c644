"""Down-conversion mode-overlap coefficients and angular-correlation widths.

Everything here is computed by explicit 2D quadrature in polar coordinates:
Gauss-Legendre in radius (node count doubled until stable) and the periodic
trapezoid in angle, which integrates ``exp(i n phi)`` exactly for ``|n|`` below
the node count.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .errors import QuadratureError
from .lg_fields import BeamParams, LGModeSpec, eval_lg
from .quadrature import adaptive_gauss_legendre, periodic_trapezoid

MAX_CHARGE = 6


@dataclass(frozen=True)
class PdcParams:
    pump_waist: float = defaults.PUMP_WAIST
    collection_waist: float = defaults.COLLECTION_WAIST
    wavelength: float = defaults.WAVELENGTH
    collimated_weight_width: float = defaults.WEIGHT_WIDTH
    # Waist in the (sqrt(2) r / w_s)^2 factor of the l = 1 coupling; None means collection_waist.
    source_waist: float | None = None

    def __post_init__(self):
        for name in ("pump_waist", "collection_waist", "wavelength", "collimated_weight_width"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.source_waist is not None and not self.source_waist > 0:
            raise ValueError("source_waist must be positive")

    @property
    def w_s(self) -> float:
        return self.collection_waist if self.source_waist is None else self.source_waist

    @property
    def radial_extent(self) -> float:
        return 6.0 * max(self.pump_waist, self.collection_waist)


@dataclass(frozen=True)
class AngularWidths:
    w_tilde: float
    delta_pdc: float
    delta_diff: float


def angular_widths(params: PdcParams) -> AngularWidths:
    w_tilde = (params.pump_waist**-2 + 2.0 * params.collection_waist**-2) ** -0.5
    return AngularWidths(
        w_tilde=w_tilde,
        delta_pdc=params.wavelength / (math.pi * w_tilde),
        delta_diff=params.wavelength / (math.pi * params.collection_waist),
    )


def collimated_shift_width(params: PdcParams, focal_length: float = defaults.COLLIMATOR_FOCAL_LENGTH) -> float:
    """Transverse shift ``f * delta_PDC`` produced by the collimating lens.

    Cross-check for ``collimated_weight_width``, which the detection model uses
    directly.
    """
    return focal_length * angular_widths(params).delta_pdc


def _pump(r, params):
    return np.exp(-(r**2) / params.pump_waist**2)


def _polar_integral(integrand, params, n_azimuthal):
    """Integrate ``integrand(r, phi)`` (2D arrays) with ``r dr dphi`` measure."""
    phi, wphi = periodic_trapezoid(n_azimuthal)

    def radial(r):
        vals = integrand(r[:, None], phi[None, :])
        inner = vals @ wphi
        mags = np.abs(vals) @ wphi
        return r * inner, r * mags

    value, _ = adaptive_gauss_legendre(radial, 0.0, params.radial_extent)
    return value


def overlap_coefficient(l: int, lp: int, params: PdcParams, n_azimuthal: int = 64) -> complex:
    """``c_{l,l'} = int A_pump conj(psi_l) conj(psi_l')`` over the plane.

    Both modes share the collection waist, so the Gaussian part of the integrand
    is ``exp(-r^2/w_p^2 - 2 r^2/w^2)``.
    """
    if abs(l) > MAX_CHARGE or abs(lp) > MAX_CHARGE:
        raise ValueError(f"|l|, |l'| must be <= {MAX_CHARGE}")
    beam = BeamParams(wavelength=params.wavelength, waist=params.collection_waist)
    # Canonical order so that c(l, l') and c(l', l) are bitwise equal.
    m1, m2 = LGModeSpec(min(l, lp)), LGModeSpec(max(l, lp))

    def integrand(r, phi):
        x, y = r * np.cos(phi), r * np.sin(phi)
        return (np.conj(eval_lg(m1, beam, x, y)) * np.conj(eval_lg(m2, beam, x, y))) * _pump(r, params)

    value = complex(_polar_integral(integrand, params, n_azimuthal))
    if l + lp == 0:
        # The helical phases cancel identically; drop the rounding residue.
        value = complex(value.real, 0.0)
    return value


@dataclass
class CoefficientTable:
    l_max: int
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def rows(self):
        for (l, lp), v in sorted(self.values.items()):
            yield l, lp, v

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["l", "lprime", "re", "im", "abs"])
            for l, lp, v in self.rows():
                w.writerow([l, lp, repr(v.real), repr(v.imag), repr(abs(v))])


def coefficient_table(l_max: int, params: PdcParams) -> CoefficientTable:
    table = CoefficientTable(l_max)
    for l in range(-l_max, l_max + 1):
        for lp in range(-l_max, l_max + 1):
            table.values[(l, lp)] = overlap_coefficient(l, lp, params)
    return table


def _coupling(theta, params, radial_factor):
    widths = angular_widths(params)
    theta = float(theta)
    if abs(theta) > 10 * widths.delta_pdc:
        raise ValueError(f"|theta| must be <= 10 delta_PDC = {10 * widths.delta_pdc:.4g} rad")
    k = 2.0 * math.pi * theta / params.wavelength
    # Trapezoid in phi must resolve exp(i k r cos phi) out to the radial cutoff.
    n_azimuthal = max(64, 2 * int(math.ceil(abs(k) * params.radial_extent)) + 64)
    gauss = lambda r: np.exp(-(r**2) / params.pump_waist**2 - 2.0 * r**2 / params.collection_waist**2)

    def integrand(r, phi):
        return gauss(r) * radial_factor(r) * np.exp(1j * k * r * np.cos(phi))

    def at_zero(r, phi):
        return gauss(r) * radial_factor(r) * np.ones_like(phi)

    value = _polar_integral(integrand, params, n_azimuthal)
    norm = _polar_integral(at_zero, params, 64)
    if norm.real <= 0:
        raise QuadratureError("coupling normalisation is not positive")
    # Imaginary part vanishes by the phi -> pi - phi symmetry.
    return float(value.real / norm.real)


def coupling_amplitude_l0(theta: float, params: PdcParams) -> float:
    """Numeric ``c_00(theta) / c_00(0)``."""
    return _coupling(theta, params, lambda r: np.ones_like(r))


def coupling_amplitude_l1(theta: float, params: PdcParams) -> float:
    """Numeric ``c_11(theta) / c_11(0)`` with the ``(sqrt(2) r / w_s)^2`` factor."""
    w_s = params.w_s
    return _coupling(theta, params, lambda r: (math.sqrt(2.0) * r / w_s) ** 2)


def coupling_l0_closed_form(theta, params: PdcParams):
    w_tilde = angular_widths(params).w_tilde
    k = 2.0 * np.pi * np.asarray(theta) / params.wavelength
    return np.exp(-(w_tilde**2) * k**2 / 4.0)


def coupling_l1_closed_form(theta, params: PdcParams):
    # Fourier transform of r^2 exp(-r^2/w~^2): (1 - u) exp(-u), u = w~^2 k^2 / 4.
    w_tilde = angular_widths(params).w_tilde
    k = 2.0 * np.pi * np.asarray(theta) / params.wavelength
    u = w_tilde**2 * k**2 / 4.0
    return (1.0 - u) * np.exp(-u)


def translation_weight(r_shift, params: PdcParams):
    """Gaussian weight ``exp(-2 r^2 / w_c^2)`` of a collimated transverse shift."""
    r = np.asarray(r_shift, dtype=float)
    if np.any(r < 0):
        raise ValueError("r_shift must be non-negative")
    out = np.exp(-2.0 * r**2 / params.collimated_weight_width**2)
    return float(out) if out.ndim == 0 else out
