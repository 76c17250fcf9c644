"""Quadrature rules: Gauss-Legendre (fixed and doubling), periodic trapezoid, disk."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import QuadratureError


@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a: float, b: float, n: int):
    """Nodes and weights of the n-point Gauss-Legendre rule on [a, b]."""
    x, w = _leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def periodic_trapezoid(n: int):
    """Equispaced nodes on [0, 2pi) with equal weights 2pi/n."""
    theta = 2.0 * np.pi * np.arange(n) / n
    return theta, np.full(n, 2.0 * np.pi / n)


def adaptive_gauss_legendre(f, a, b, *, rtol=1e-13, n0=16, n_max=2048, accept=1e-6):
    """Integrate ``f`` over [a, b], doubling the node count until it settles.

    ``f`` takes a 1D array of nodes and returns a pair ``(values, magnitudes)``
    where ``magnitudes`` bounds ``|values|`` pointwise; the integral of the
    magnitudes sets the scale for the relative tolerance, so integrals that
    cancel to zero are still judged correctly.

    Stops once two consecutive rules agree to ``rtol``. If ``n_max`` is reached,
    the last change must still be below ``accept`` or ``QuadratureError`` is
    raised.
    """
    prev = None
    n = n0
    while True:
        x, w = gauss_legendre(a, b, n)
        vals, mags = f(x)
        value = np.sum(w * vals)
        scale = float(np.sum(w * mags))
        if prev is not None:
            change = abs(value - prev)
            if change <= rtol * max(scale, np.finfo(float).tiny):
                return value, change
            if 2 * n > n_max:
                if change <= accept * max(scale, np.finfo(float).tiny):
                    return value, change
                raise QuadratureError(
                    f"Gauss-Legendre did not converge on [{a:g}, {b:g}]: "
                    f"relative change {change / scale:.3e} at n={n}"
                )
        prev = value
        n *= 2


def disk_rule(center, radius: float, n_radial: int, n_azimuthal: int):
    """Polar product rule for a disk.

    Gauss-Legendre in radius (with the ``r dr`` Jacobian folded into the weights)
    times the periodic trapezoid in angle. Returns flat arrays ``x, y, w``.
    """
    r, wr = gauss_legendre(0.0, radius, n_radial)
    theta, wt = periodic_trapezoid(n_azimuthal)
    x = center[0] + np.outer(r, np.cos(theta))
    y = center[1] + np.outer(r, np.sin(theta))
    w = np.outer(wr * r, wt)
    return x.ravel(), y.ravel(), w.ravel()
