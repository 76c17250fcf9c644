"""Scenario execution: sweeps, CSV/SVG/JSON bundle output."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .counts_sim import RNG_ALGORITHM, AcquisitionProtocol, fit_counts, simulate_counts, write_counts_csv
from .detection import (
    CorrelationSamplingPlan,
    DiskQuadrature,
    IrisConfig,
    default_phase_grid,
    fringe_scan,
    phase_shift,
    waist_from_coupled_diameter,
)
from .fitting import wrap_phase, write_fit_report
from .interferometer import InterferometerConfig
from .lg_fields import FLAT, BeamParams
from .pdc_model import (
    PdcParams,
    angular_widths,
    coefficient_table,
    coupling_amplitude_l0,
    coupling_amplitude_l1,
    coupling_l0_closed_form,
    coupling_l1_closed_form,
)
from .scenarios import Scenario
from .svgplot import line_plot

MM = 1e-3


class Physics:
    """Physical objects derived from a normalised parameter dict."""

    def __init__(self, p: dict):
        self.p = p
        self.pdc = PdcParams(
            pump_waist=p["pump_waist_um"] * 1e-6,
            collection_waist=p["collection_waist_um"] * 1e-6,
            wavelength=p["wavelength_nm"] * 1e-9,
            collimated_weight_width=p["weight_width_mm"] * MM,
        )
        self.charge = p["charge"]
        self.waist = waist_from_coupled_diameter(p["coupled_mode_diameter_mm"] * MM, self.charge, p["waist_convention"])
        self.quad = DiskQuadrature(p["iris_radial_nodes"], p["iris_azimuthal_nodes"])
        self.n_phase = p["n_phase"]

    def plan(self, enabled: bool) -> CorrelationSamplingPlan:
        p = self.p
        return CorrelationSamplingPlan(enabled, p["corr_radial"], p["corr_azimuthal"], p["corr_truncation"])

    def beam(self, radius=None) -> BeamParams:
        return BeamParams(self.pdc.wavelength, self.waist, FLAT if radius is None else radius)

    def rotation(self, gamma_deg: float) -> InterferometerConfig:
        return InterferometerConfig(self.p["walk_off_mm"] * MM, math.radians(gamma_deg),
                                    path_balance=self.p["path_balance"])


def _shift_point(job):
    beam, config, iris, charge, pdc, plan, n_phase, quad = job
    grid = default_phase_grid(n_phase)
    sp = fringe_scan(charge, beam, config, grid, iris, pdc, plan, quad)
    sm = fringe_scan(-charge, beam, config, grid, iris, pdc, plan, quad)
    res = phase_shift(sp, sm)
    return {
        "delta_phi_rad": res.delta_phi,
        "C_plus_rad": res.fit_plus.C,
        "C_minus_rad": res.fit_minus.C,
        "visibility_plus": res.fit_plus.visibility,
        "visibility_minus": res.fit_minus.visibility,
    }


def _map(fn, jobs, workers):
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "inf" if math.isinf(v) else repr(v)
    return str(v)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(row[h]) for h in header])


def _radius_label(r):
    return "flat" if r is None else f"R = {r:g} m"


SHIFT_COLUMNS = ["delta_phi_rad", "C_plus_rad", "C_minus_rad", "visibility_plus", "visibility_minus"]


def run_fig3(ph: Physics, out: Path, workers: int) -> list[str]:
    p = ph.p
    x0s = np.linspace(p["x0_min_mm"], p["x0_max_mm"], p["n_x0"]) * MM
    diameters = [d * MM for d in p["iris_diameters_mm"]] + [p["point_diameter_mm"] * MM]
    labels = [f"d_i = {d:g} mm" for d in p["iris_diameters_mm"]] + ["point"]
    config = InterferometerConfig.from_shear(p["shear_y_mm"] * MM, walk_off=p["walk_off_mm"] * MM,
                                             path_balance=p["path_balance"])
    beam = ph.beam(p["radius_of_curvature_m"])
    files = []
    for enabled, tag in ((False, "without_correlations"), (True, "with_correlations")):
        plan = ph.plan(enabled)
        jobs = [(beam, config, IrisConfig((x0, p["iris_y_mm"] * MM), d), ph.charge, ph.pdc, plan, ph.n_phase, ph.quad)
                for d in diameters for x0 in x0s]
        results = _map(_shift_point, jobs, workers)
        rows = []
        for (job, res) in zip(jobs, results):
            iris = job[2]
            rows.append({"x0_m": iris.center[0], "iris_diameter_m": iris.diameter, **res})
        name = f"shift_vs_x0_{tag}"
        _write_csv(out / f"{name}.csv", ["x0_m", "iris_diameter_m", *SHIFT_COLUMNS], rows)
        series = []
        for d, label in zip(diameters, labels):
            sel = [r for r in rows if r["iris_diameter_m"] == d]
            series.append({"label": label, "x": [r["x0_m"] for r in sel], "y": [r["delta_phi_rad"] for r in sel],
                           "style": "both"})
        line_plot(series, out / f"{name}.svg", title=f"Phase shift l=+{ph.charge} vs l=-{ph.charge}, {tag.replace('_', ' ')}",
                  xlabel="iris position x0 (m)", ylabel="delta phi (rad)")
        files += [f"{name}.csv", f"{name}.svg"]
    return files


def run_fig4(ph: Physics, out: Path, workers: int) -> list[str]:
    p = ph.p
    gammas = np.linspace(p["gamma_min_deg"], p["gamma_max_deg"], p["n_gamma"])
    iris = IrisConfig((p["iris_x_mm"] * MM, p["iris_y_mm"] * MM), p["iris_diameter_mm"] * MM)
    plan = ph.plan(p["correlations"])
    jobs, keys = [], []
    for radius in p["radii_m"]:
        for g in gammas:
            jobs.append((ph.beam(radius), ph.rotation(float(g)), iris, ph.charge, ph.pdc, plan, ph.n_phase, ph.quad))
            keys.append((radius, float(g)))
    results = _map(_shift_point, jobs, workers)
    rows = []
    for (radius, g), job, res in zip(keys, jobs, results):
        dx, dy = job[1].shear
        rows.append({"gamma_deg": g, "radius_of_curvature_m": FLAT if radius is None else radius,
                     "shear_x_m": dx, "shear_y_m": dy, **res})
    _write_csv(out / "shift_vs_gamma.csv",
               ["gamma_deg", "radius_of_curvature_m", "shear_x_m", "shear_y_m", *SHIFT_COLUMNS], rows)
    series = []
    for radius in p["radii_m"]:
        rr = FLAT if radius is None else radius
        sel = [r for r in rows if r["radius_of_curvature_m"] == rr]
        series.append({"label": _radius_label(radius), "x": [r["gamma_deg"] for r in sel],
                       "y": [r["delta_phi_rad"] for r in sel], "style": "both"})
    line_plot(series, out / "shift_vs_gamma.svg", title="Phase shift vs rotation of the second crystal",
              xlabel="gamma (deg)", ylabel="delta phi (rad)")
    return ["shift_vs_gamma.csv", "shift_vs_gamma.svg"]


def _scans(ph: Physics, p: dict):
    iris = IrisConfig((p["iris_x_mm"] * MM, p["iris_y_mm"] * MM), p["iris_diameter_mm"] * MM)
    beam = ph.beam(p["radius_of_curvature_m"])
    config = ph.rotation(p["gamma_deg"])
    grid = default_phase_grid(ph.n_phase)
    plan = ph.plan(p["correlations"])
    return [fringe_scan(l, beam, config, grid, iris, ph.pdc, plan, ph.quad) for l in (ph.charge, -ph.charge)]


def _tag(l):
    return f"l{l:+d}"


def run_fringe_scan(ph: Physics, out: Path, workers: int) -> list[str]:
    scans = _scans(ph, ph.p)
    res = phase_shift(*scans)
    files = []
    series = []
    fit_rows = []
    for scan, fit in zip(scans, (res.fit_plus, res.fit_minus)):
        name = f"fringe_{_tag(scan.l)}.csv"
        scan.to_csv(out / name)
        files += [name, name + ".json"]
        series.append({"label": f"P(phi, {scan.l:+d})", "x": scan.phi, "y": scan.probability, "style": "points"})
        fitted = fit(scan.phi)
        fit_rows += [{"l": scan.l, "phi_rad": a, "fit": b} for a, b in zip(scan.phi, fitted)]
        series.append({"label": f"fit {scan.l:+d}", "x": scan.phi, "y": fitted, "style": "line"})
    _write_csv(out / "fit_curves.csv", ["l", "phi_rad", "fit"], fit_rows)
    write_fit_report({_tag(ph.charge): res.fit_plus, _tag(-ph.charge): res.fit_minus}, out / "fits.json",
                     delta_phi_rad=res.delta_phi)
    line_plot(series, out / "fringe_scan.svg", title="Detected probability vs phase",
              xlabel="phi (rad)", ylabel="P (arb. units)")
    return files + ["fit_curves.csv", "fits.json", "fringe_scan.svg"]


def run_counts(ph: Physics, out: Path, workers: int) -> list[str]:
    p = ph.p
    scans = _scans(ph, p)
    noiseless = phase_shift(*scans)
    files, series, summary, fits = [], [], [], {}
    for i, scan in enumerate(scans):
        # Independent streams for the two charges, derived from the scenario seed.
        seed = (p["seed"] * 2 + i) % 2**64
        protocol = AcquisitionProtocol(p["rate_per_min"], p["n_acquisitions"], p["t_acquisition_s"], seed)
        records = simulate_counts(scan, protocol)
        name = f"counts_{_tag(scan.l)}.csv"
        write_counts_csv(records, out / name)
        files.append(name)
        fit = fit_counts(records)
        fits[_tag(scan.l)] = fit
        for r in records:
            summary.append({"l": scan.l, "phi_rad": r.phi, "mean_counts": r.mean,
                            "standard_error": r.standard_error, "fit": float(fit(r.phi))})
        series.append({"label": f"counts {scan.l:+d}", "x": [r.phi for r in records],
                       "y": [r.mean for r in records], "style": "points"})
        series.append({"label": f"fit {scan.l:+d}", "x": [r.phi for r in records],
                       "y": [float(fit(r.phi)) for r in records], "style": "line"})
    _write_csv(out / "counts_summary.csv", ["l", "phi_rad", "mean_counts", "standard_error", "fit"], summary)
    plus, minus = fits[_tag(ph.charge)], fits[_tag(-ph.charge)]
    delta = float(wrap_phase(plus.C - minus.C))
    write_fit_report(fits, out / "fits.json", delta_phi_rad=delta,
                     delta_phi_sigma_rad=math.hypot(plus.sigma_C, minus.sigma_C),
                     noiseless_delta_phi_rad=noiseless.delta_phi, rng_algorithm=RNG_ALGORITHM)
    line_plot(series, out / "counts.svg", title="Synthetic coincidence counts",
              xlabel="phi (rad)", ylabel="mean counts per acquisition")
    return files + ["counts_summary.csv", "fits.json", "counts.svg"]


def run_conservation(ph: Physics, out: Path, workers: int) -> list[str]:
    table = coefficient_table(ph.p["l_max"], ph.pdc)
    table.to_csv(out / "coefficients.csv")
    c00 = abs(table[(0, 0)])
    ls = list(range(-table.l_max, table.l_max + 1))
    diag = [abs(table[(l, -l)]) / c00 for l in ls]
    line_plot([{"label": "|c(l,-l)| / c(0,0)", "x": ls, "y": diag, "style": "both"}], out / "coefficients.svg",
              title="Overlap coefficients on the anti-diagonal", xlabel="l", ylabel="relative magnitude")
    _write_csv(out / "coefficients_diagonal.csv", ["l", "relative_abs"],
               [{"l": l, "relative_abs": v} for l, v in zip(ls, diag)])
    return ["coefficients.csv", "coefficients_diagonal.csv", "coefficients.svg"]


def run_coupling(ph: Physics, out: Path, workers: int) -> list[str]:
    p = ph.p
    widths = angular_widths(ph.pdc)
    thetas = np.linspace(0.0, p["theta_max_delta"] * widths.delta_pdc, p["n_theta"])
    rows = []
    for t in thetas:
        rows.append({
            "theta_rad": float(t),
            "theta_over_delta_pdc": float(t / widths.delta_pdc),
            "c00_numeric": coupling_amplitude_l0(t, ph.pdc),
            "c00_closed_form": float(coupling_l0_closed_form(t, ph.pdc)),
            "c11_numeric": coupling_amplitude_l1(t, ph.pdc),
            "c11_closed_form": float(coupling_l1_closed_form(t, ph.pdc)),
        })
    cols = list(rows[0])
    _write_csv(out / "coupling.csv", cols, rows)
    line_plot(
        [{"label": "c00(theta)", "x": [r["theta_rad"] for r in rows], "y": [r["c00_numeric"] for r in rows]},
         {"label": "c11(theta)", "x": [r["theta_rad"] for r in rows], "y": [r["c11_numeric"] for r in rows]}],
        out / "coupling.svg", title="Angular coupling amplitudes", xlabel="theta (rad)", ylabel="normalised amplitude")
    with open(out / "widths.json", "w") as fh:
        json.dump({"w_tilde_m": widths.w_tilde, "delta_pdc_rad": widths.delta_pdc,
                   "delta_diff_rad": widths.delta_diff}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return ["coupling.csv", "coupling.svg", "widths.json"]


RUNNERS = {
    "fig3_shift_vs_x0": run_fig3,
    "fig4_shift_vs_gamma": run_fig4,
    "fringe_scan": run_fringe_scan,
    "counts_experiment": run_counts,
    "conservation_table": run_conservation,
    "coupling_curves": run_coupling,
}


def run_scenario(scenario: Scenario, out_dir, workers: int = 1) -> list[Path]:
    """Run a validated scenario into ``out_dir``; returns the written files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ph = Physics(scenario.parameters)
    files = RUNNERS[scenario.kind](ph, out, workers)
    sidecar = {
        **scenario.to_dict(),
        "provenance": {
            "package": "oamshear",
            "version": __version__,
            "derived": {"mode_waist_m": ph.waist},
            "rng_algorithm": RNG_ALGORITHM,
            "files": sorted(files),
        },
    }
    with open(out / "scenario.json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return [out / f for f in files] + [out / "scenario.json"]
