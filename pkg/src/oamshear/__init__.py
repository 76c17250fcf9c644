"""Local discrimination of orbital angular momentum with a calcite shear interferometer."""

__version__ = "0.1.0"
