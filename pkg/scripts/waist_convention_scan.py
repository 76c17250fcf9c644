"""Collected fraction and point-limit approach under each waist convention.

Prints, for every reading of the 2.38 mm coupled-mode diameter, the iris
power fraction (d_i = 1.5 mm, centre 0 and 0.8 mm) and the distance of
|delta phi| from 2 atan(5/7) as the iris shrinks (Delta y = 0.5 mm).
"""

import argparse
import math

from oamshear.detection import (
    WAIST_CONVENTIONS,
    CorrelationSamplingPlan,
    IrisConfig,
    collected_fraction,
    shift_between_charges,
    waist_from_coupled_diameter,
)
from oamshear.interferometer import InterferometerConfig
from oamshear.lg_fields import BeamParams, LGModeSpec

MM = 1e-3


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--diameters", type=float, nargs="+", default=[2.0, 1.5, 1.0, 0.5, 0.1], help="iris diameters, mm")
    args = ap.parse_args()
    target = 2 * math.atan(5 / 7)
    cfg = InterferometerConfig.from_shear(0.5 * MM)
    plan = CorrelationSamplingPlan(enabled=False)
    for conv in WAIST_CONVENTIONS:
        w = waist_from_coupled_diameter(2.38 * MM, convention=conv)
        beam = BeamParams(waist=w)
        f0 = collected_fraction(LGModeSpec(1), beam, IrisConfig((0.0, 0.0), 1.5 * MM))
        f8 = collected_fraction(LGModeSpec(1), beam, IrisConfig((0.8 * MM, 0.0), 1.5 * MM))
        dist = []
        for d in args.diameters:
            dphi = shift_between_charges(beam, cfg, IrisConfig((0.7 * MM, 0.0), d * MM), plan=plan).delta_phi
            dist.append(abs(abs(dphi) - target))
        mono = all(b < a for a, b in zip(dist, dist[1:]))
        print(f"{conv:18s} w = {w / MM:.4f} mm  fraction {f0:.3f} -> {f8:.3f}  "
              f"distance " + " ".join(f"{d}:{e:.4f}" for d, e in zip(args.diameters, dist)) + f"  monotone={mono}")


if __name__ == "__main__":
    main()
