"""Experimental values of the calcite-detector setup (SI units)."""

PUMP_WAVELENGTH = 407.5e-9
WAVELENGTH = 2 * PUMP_WAVELENGTH  # degenerate down-converted photons
WALK_OFF = 4.18e-3
PUMP_WAIST = 40e-6
COLLECTION_WAIST = 31e-6
WEIGHT_WIDTH = 0.93e-3
COUPLED_MODE_DIAMETER = 2.38e-3
COLLIMATOR_FOCAL_LENGTH = 0.100
RATE_PER_MINUTE = 500.0
N_ACQUISITIONS = 25
T_ACQUISITION = 40.0
