"""Scenario registry and YAML config validation.

A scenario file is a YAML mapping::

    kind: fig3_shift_vs_x0
    output: fig3            # optional; relative to $OAMSHEAR_OUTPUT_ROOT
    parameters:
      shear_y_mm: 0.5
      iris_diameters_mm: [1.5, 2.0]

Parameters use the units in their names. Missing parameters take the defaults
below; unknown ones are rejected. JSON is valid YAML, so the ``scenario.json``
sidecar written next to every bundle can be fed straight back to ``run``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .detection import WAIST_CONVENTIONS
from .errors import ConfigError

TOP_LEVEL_KEYS = {"kind", "output", "parameters", "provenance"}


@dataclass(frozen=True)
class Param:
    default: object
    type: str  # float | int | bool | str | floats | radius | radii
    check: str | None = None  # positive | nonneg | unit | gamma | choices
    choices: tuple = ()
    doc: str = ""


COMMON = {
    "wavelength_nm": Param(815.0, "float", "positive", doc="down-converted wavelength"),
    "walk_off_mm": Param(4.18, "float", "positive", doc="calcite walk-off separation D"),
    "pump_waist_um": Param(40.0, "float", "positive"),
    "collection_waist_um": Param(31.0, "float", "positive"),
    "weight_width_mm": Param(0.93, "float", "positive", doc="w_c of the translation weight"),
    "coupled_mode_diameter_mm": Param(2.38, "float", "positive"),
    "waist_convention": Param("second_moment", "str", "choices", WAIST_CONVENTIONS),
    "path_balance": Param(1.0, "float", "unit"),
    "charge": Param(1, "int", "positive", doc="|l| of the compared modes"),
    "n_phase": Param(16, "int", "phase_samples"),
    "corr_radial": Param(8, "int", "positive"),
    "corr_azimuthal": Param(16, "int", "positive"),
    "corr_truncation": Param(2.0, "float", "positive"),
    "iris_radial_nodes": Param(64, "int", "positive"),
    "iris_azimuthal_nodes": Param(128, "int", "positive"),
}

KINDS = {
    "fig3_shift_vs_x0": {
        "shear_y_mm": Param(0.5, "float", "nonneg"),
        "x0_min_mm": Param(0.0, "float"),
        "x0_max_mm": Param(0.8, "float"),
        "n_x0": Param(17, "int", "positive"),
        "iris_y_mm": Param(0.0, "float"),
        "iris_diameters_mm": Param([1.5, 2.0], "floats", "positive"),
        "point_diameter_mm": Param(0.01, "float", "positive"),
        "radius_of_curvature_m": Param(None, "radius"),
    },
    "fig4_shift_vs_gamma": {
        "gamma_min_deg": Param(0.0, "float", "gamma"),
        "gamma_max_deg": Param(8.0, "float", "gamma"),
        "n_gamma": Param(17, "int", "positive"),
        "radii_m": Param([None, 3.0, 1.5], "radii"),
        "iris_x_mm": Param(0.7, "float"),
        "iris_y_mm": Param(0.0, "float"),
        "iris_diameter_mm": Param(2.0, "float", "positive"),
        "correlations": Param(True, "bool"),
    },
    "fringe_scan": {
        "gamma_deg": Param(0.0, "float", "gamma"),
        "iris_x_mm": Param(0.0, "float"),
        "iris_y_mm": Param(0.0, "float"),
        "iris_diameter_mm": Param(2.0, "float", "positive"),
        "correlations": Param(True, "bool"),
        "radius_of_curvature_m": Param(None, "radius"),
        "n_phase": Param(32, "int", "phase_samples"),
    },
    "counts_experiment": {
        "gamma_deg": Param(5.0, "float", "gamma"),
        "iris_x_mm": Param(0.7, "float"),
        "iris_y_mm": Param(0.0, "float"),
        "iris_diameter_mm": Param(1.5, "float", "positive"),
        "correlations": Param(True, "bool"),
        "radius_of_curvature_m": Param(None, "radius"),
        "rate_per_min": Param(500.0, "float", "positive"),
        "n_acquisitions": Param(25, "int", "positive"),
        "t_acquisition_s": Param(40.0, "float", "positive"),
        "seed": Param(1, "int", "seed"),
    },
    "conservation_table": {
        "l_max": Param(3, "int", "lmax"),
    },
    "coupling_curves": {
        "n_theta": Param(61, "int", "positive"),
        "theta_max_delta": Param(3.0, "float", "theta_range"),
    },
}

DESCRIPTIONS = {
    "fig3_shift_vs_x0": "phase shift between l=+1 and l=-1 vs iris position x0, with and without angular correlations",
    "fig4_shift_vs_gamma": "phase shift vs rotation gamma of the second crystal for several radii of curvature",
    "fringe_scan": "noiseless P(phi, +-l) scans with sinusoid fits",
    "counts_experiment": "Poisson coincidence-count datasets and fitted phase shift",
    "conservation_table": "overlap coefficients c_{l,l'} for |l|, |l'| <= l_max",
    "coupling_curves": "angular coupling amplitudes c00(theta), c11(theta), numeric vs closed form",
}


def parameters_for(kind: str) -> dict:
    specs = dict(COMMON)
    specs.update(KINDS[kind])
    return specs


@dataclass
class Scenario:
    kind: str
    parameters: dict
    output: str | None = None
    source: str | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "parameters": dict(self.parameters)}


def _coerce(name, spec: Param, value):
    """Return (value, error message or None)."""
    t = spec.type
    if t == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return None, f"expected a number, got {value!r}"
        value = float(value)
        if not math.isfinite(value):
            return None, "must be finite"
    elif t == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            return None, f"expected an integer, got {value!r}"
    elif t == "bool":
        if not isinstance(value, bool):
            return None, f"expected true/false, got {value!r}"
    elif t == "str":
        if not isinstance(value, str):
            return None, f"expected a string, got {value!r}"
    elif t == "floats":
        if not isinstance(value, list) or not value:
            return None, "expected a non-empty list of numbers"
        out = []
        for v in value:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                return None, f"list entry {v!r} is not a number"
            out.append(float(v))
        value = out
    elif t == "radius":
        if value is None or (isinstance(value, str) and value.lower() in ("inf", "flat")):
            value = None
        elif isinstance(value, bool) or not isinstance(value, (int, float)) or value == 0:
            return None, "expected a non-zero radius in metres, or null/'flat'"
        else:
            value = float(value)
    elif t == "radii":
        if not isinstance(value, list) or not value:
            return None, "expected a non-empty list of radii (null or 'flat' for a plane wave)"
        out = []
        for v in value:
            c, err = _coerce(name, Param(None, "radius"), v)
            if err:
                return None, err
            out.append(c)
        value = out
    return value, _range_error(spec, value)


def _range_error(spec: Param, value):
    c = spec.check
    values = value if isinstance(value, list) else [value]
    for v in values:
        if c == "positive" and not v > 0:
            return f"must be > 0, got {v}"
        if c == "nonneg" and not v >= 0:
            return f"must be >= 0, got {v}"
        if c == "unit" and not 0 < v <= 1:
            return f"must lie in (0, 1], got {v}"
        if c == "gamma" and not abs(v) < 45.0:
            return f"|gamma| must be below 45 degrees, got {v}"
        if c == "choices" and v not in spec.choices:
            return f"must be one of {list(spec.choices)}, got {v!r}"
        if c == "phase_samples" and not v >= 8:
            return f"need at least 8 phase samples, got {v}"
        if c == "lmax" and not 0 <= v <= 6:
            return f"must lie in [0, 6], got {v}"
        if c == "seed" and not 0 <= v < 2**64:
            return f"must be a 64-bit unsigned integer, got {v}"
        if c == "theta_range" and not 0 < v <= 10:
            return f"must lie in (0, 10], got {v}"
    return None


def _marks(node):
    """Map top-level and parameter keys to 1-based (line, column)."""
    marks = {}
    if not isinstance(node, yaml.MappingNode):
        return marks
    for k, v in node.value:
        key = k.value
        marks[key] = (k.start_mark.line + 1, k.start_mark.column + 1)
        if key == "parameters" and isinstance(v, yaml.MappingNode):
            for pk, _ in v.value:
                marks[f"parameters.{pk.value}"] = (pk.start_mark.line + 1, pk.start_mark.column + 1)
    return marks


def validate_text(text: str, source: str | None = None) -> Scenario:
    """Parse and normalise a scenario; raise ``ConfigError`` listing every problem."""
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line, col = (mark.line + 1, mark.column + 1) if mark else (None, None)
        raise ConfigError([{"field": "<syntax>", "message": str(exc.problem), "line": line, "column": col}])
    marks = _marks(node)
    diags = []

    def diag(fieldname, message):
        line, col = marks.get(fieldname, (None, None))
        diags.append({"field": fieldname, "message": message, "line": line, "column": col})

    if not isinstance(data, dict):
        raise ConfigError([{"field": "<root>", "message": "scenario must be a mapping", "line": 1, "column": 1}])
    for key in data:
        if key not in TOP_LEVEL_KEYS:
            diag(key, f"unknown top-level key; allowed: {sorted(TOP_LEVEL_KEYS)}")
    kind = data.get("kind")
    if kind not in KINDS:
        diag("kind", f"unknown scenario kind {kind!r}; expected one of {sorted(KINDS)}")
        raise ConfigError(diags)
    output = data.get("output")
    if output is not None and not isinstance(output, str):
        diag("output", "output must be a path string")
    raw = data.get("parameters") or {}
    if not isinstance(raw, dict):
        diag("parameters", "parameters must be a mapping")
        raw = {}

    specs = parameters_for(kind)
    params = {}
    for name, spec in specs.items():
        if name not in raw:
            params[name] = list(spec.default) if isinstance(spec.default, list) else spec.default
            continue
        value, err = _coerce(name, spec, raw[name])
        if err:
            diag(f"parameters.{name}", err)
        else:
            params[name] = value
    for name in raw:
        if name not in specs:
            diag(f"parameters.{name}", f"not a parameter of {kind}")
    if not diags:
        diags.extend(_cross_checks(kind, params, marks))
    if diags:
        raise ConfigError(diags)
    return Scenario(kind=kind, parameters=params, output=output, source=source)


def _cross_checks(kind, p, marks):
    out = []

    def bad(name, message):
        line, col = marks.get(f"parameters.{name}", marks.get("parameters", (None, None)))
        out.append({"field": f"parameters.{name}", "message": message, "line": line, "column": col})

    if kind == "fig3_shift_vs_x0" and p["x0_max_mm"] < p["x0_min_mm"]:
        bad("x0_max_mm", "must be >= x0_min_mm")
    if kind == "fig4_shift_vs_gamma" and p["gamma_max_deg"] < p["gamma_min_deg"]:
        bad("gamma_max_deg", "must be >= gamma_min_deg")
    return out


def validate_config(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([{"field": "<file>", "message": str(exc), "line": None, "column": None}])
    return validate_text(text, source=str(path))


def default_scenario(kind: str) -> Scenario:
    return validate_text(yaml.safe_dump({"kind": kind}))
