"""Synthetic coincidence counts with Poisson statistics.

Random numbers come from NumPy's ``PCG64`` bit generator seeded with
``AcquisitionProtocol.rng_seed``; one generator per dataset, drawn in phase
order then acquisition order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import defaults
from .fitting import SinusoidFit, fit_sinusoid

RNG_ALGORITHM = "numpy.random.PCG64"


@dataclass(frozen=True)
class AcquisitionProtocol:
    rate_scale: float = defaults.RATE_PER_MINUTE  # mean coincidences per minute over the fringe
    n_acquisitions: int = defaults.N_ACQUISITIONS
    t_acquisition: float = defaults.T_ACQUISITION  # seconds
    rng_seed: int = 20240611

    def __post_init__(self):
        if not (self.rate_scale > 0 and self.n_acquisitions > 0 and self.t_acquisition > 0):
            raise ValueError("rate, acquisition count and duration must be positive")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class CountRecord:
    phi: float
    counts: tuple[int, ...]

    @property
    def mean(self) -> float:
        return float(np.mean(self.counts))

    @property
    def standard_error(self) -> float:
        n = len(self.counts)
        if n < 2:
            return 0.0
        return float(np.std(self.counts, ddof=1) / math.sqrt(n))


def expected_counts(probability, protocol: AcquisitionProtocol) -> np.ndarray:
    """Mean counts per acquisition, normalised to the phase-averaged probability."""
    p = np.asarray(probability, dtype=float)
    if np.any(p < 0):
        raise ValueError("probabilities must be non-negative")
    mean_p = p.mean()
    if mean_p == 0:
        return np.zeros_like(p)
    return protocol.rate_scale * (protocol.t_acquisition / 60.0) * p / mean_p


def simulate_counts(scan, protocol: AcquisitionProtocol = AcquisitionProtocol()) -> list[CountRecord]:
    lam = expected_counts(scan.probability, protocol)
    rng = np.random.Generator(np.random.PCG64(protocol.rng_seed))
    draws = rng.poisson(np.repeat(lam[:, None], protocol.n_acquisitions, axis=1))
    return [CountRecord(float(p), tuple(int(c) for c in row)) for p, row in zip(scan.phi, draws)]


def fit_counts(records: list[CountRecord]) -> SinusoidFit:
    """Fit mean counts with inverse-variance weights from the standard errors.

    A bin whose acquisitions are all equal has zero sample spread; its variance
    falls back to the Poisson estimate ``max(mean, 1) / n``.
    """
    if len(records) < 4:
        raise ValueError("need at least 4 records")
    phi = np.array([r.phi for r in records])
    y = np.array([r.mean for r in records])
    var = np.array([
        r.standard_error**2 if r.standard_error > 0 else max(r.mean, 1.0) / len(r.counts)
        for r in records
    ])
    return fit_sinusoid(phi, y, weights=1.0 / var)


def write_counts_csv(records: list[CountRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["phi_rad", "acq_index", "counts"])
        for r in records:
            for i, c in enumerate(r.counts):
                w.writerow([repr(r.phi), i, c])
