"""Fixed-frequency sinusoid fits ``y = A + B cos(phi + C)``.

The model is linear in ``(A, P, Q)`` with ``y = A + P cos(phi) + Q sin(phi)``,
so the least-squares optimum is found directly; ``B = hypot(P, Q)`` and
``C = atan2(-Q, P)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import FitError, NoFringeError

MIN_VISIBILITY = 1e-6


def wrap_phase(x):
    """Map angles onto (-pi, pi]."""
    out = np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SinusoidFit:
    A: float
    B: float
    C: float
    rms_residual: float
    covariance: tuple  # 3x3 over (A, P, Q), row-major nested tuples
    sigma_C: float
    n_samples: int

    @property
    def visibility(self) -> float:
        return self.B / self.A if self.A != 0 else math.inf

    def __call__(self, phi):
        return self.A + self.B * np.cos(np.asarray(phi) + self.C)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["covariance"] = [list(row) for row in self.covariance]
        d["visibility"] = self.visibility
        return d


def fit_sinusoid(phi, y, weights=None, *, absolute_sigma=None) -> SinusoidFit:
    """Weighted linear least squares for ``A + B cos(phi + C)``.

    ``weights`` are inverse variances. When they are given the covariance is
    taken as absolute (``(X^T W X)^-1``) unless ``absolute_sigma=False``;
    without weights it is scaled by the residual variance.
    """
    phi = np.asarray(phi, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if phi.shape != y.shape:
        raise FitError("phi and y must have the same length")
    n = phi.size
    if n < 4:
        raise FitError(f"need at least 4 samples, got {n}")
    if weights is None:
        w = np.ones(n)
        absolute = False if absolute_sigma is None else absolute_sigma
    else:
        w = np.asarray(weights, dtype=float).ravel()
        if w.shape != y.shape or np.any(w < 0) or not np.all(np.isfinite(w)):
            raise FitError("weights must be finite, non-negative and match the samples")
        absolute = True if absolute_sigma is None else absolute_sigma

    X = np.column_stack([np.ones(n), np.cos(phi), np.sin(phi)])
    sw = np.sqrt(w)
    Xw = X * sw[:, None]
    if np.linalg.matrix_rank(Xw, tol=1e-10 * max(1.0, np.abs(Xw).max())) < 3:
        raise FitError("design matrix is rank deficient (phases degenerate modulo pi)")
    coef, *_ = np.linalg.lstsq(Xw, y * sw, rcond=None)
    A, P, Q = (float(c) for c in coef)
    resid = y - X @ coef
    rms = float(np.sqrt(np.mean(resid**2)))

    cov = np.linalg.inv(Xw.T @ Xw)
    if not absolute:
        dof = n - 3
        s2 = float(np.sum(w * resid**2) / dof) if dof > 0 else 0.0
        cov = cov * s2

    B = math.hypot(P, Q)
    if B <= MIN_VISIBILITY * abs(A) or B == 0.0:
        raise NoFringeError(f"fringe amplitude {B:.3g} is negligible against offset {A:.3g}")
    C = float(wrap_phase(math.atan2(-Q, P)))
    grad = np.array([0.0, Q / B**2, -P / B**2])
    sigma_C = float(np.sqrt(max(grad @ cov @ grad, 0.0)))
    return SinusoidFit(
        A=A,
        B=B,
        C=C,
        rms_residual=rms,
        covariance=tuple(tuple(float(v) for v in row) for row in cov),
        sigma_C=sigma_C,
        n_samples=n,
    )


def write_fit_report(fits: dict, path, **extra) -> None:
    """JSON report of named fits plus any extra scalar entries."""
    payload = {name: fit.to_dict() for name, fit in fits.items()}
    payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
