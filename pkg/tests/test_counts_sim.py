import math

import numpy as np
import pytest

from oamshear.counts_sim import (
    AcquisitionProtocol,
    CountRecord,
    expected_counts,
    fit_counts,
    simulate_counts,
    write_counts_csv,
)
from oamshear.detection import (
    CorrelationSamplingPlan,
    FringeScan,
    IrisConfig,
    default_phase_grid,
    fringe_scan,
    phase_shift,
    waist_from_coupled_diameter,
)
from oamshear.fitting import wrap_phase
from oamshear.interferometer import InterferometerConfig
from oamshear.lg_fields import BeamParams

GRID = default_phase_grid(16)


def test_constant_probability_rate():
    scan = FringeScan(1, GRID, np.full(16, 0.3))
    records = simulate_counts(scan, AcquisitionProtocol(rng_seed=3))
    lam = 500 * 40 / 60
    assert expected_counts(scan.probability, AcquisitionProtocol())[0] == pytest.approx(lam)
    sigma = math.sqrt(lam / 25)
    for r in records:
        assert len(r.counts) == 25
        assert abs(r.mean - lam) < 4 * sigma


def test_zero_bin_gives_zero_counts():
    p = 1 + np.cos(GRID)
    p[8] = 0.0
    records = simulate_counts(FringeScan(1, GRID, p), AcquisitionProtocol(rng_seed=1))
    assert records[8].counts == (0,) * 25
    assert records[8].standard_error == 0


def test_all_zero_scan():
    records = simulate_counts(FringeScan(1, GRID, np.zeros(16)))
    assert all(r.mean == 0 for r in records)


def test_seed_determinism(tmp_path):
    scan = FringeScan(1, GRID, 1 + 0.7 * np.cos(GRID + 0.3))
    a = simulate_counts(scan, AcquisitionProtocol(rng_seed=99))
    b = simulate_counts(scan, AcquisitionProtocol(rng_seed=99))
    c = simulate_counts(scan, AcquisitionProtocol(rng_seed=100))
    assert a == b
    assert a != c
    write_counts_csv(a, tmp_path / "a.csv")
    write_counts_csv(b, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert lines[0] == "phi_rad,acq_index,counts"
    assert len(lines) == 1 + 16 * 25


def test_record_statistics():
    r = CountRecord(0.0, (10, 12, 14, 16))
    assert r.mean == 13
    assert r.standard_error == pytest.approx(np.std([10, 12, 14, 16], ddof=1) / 2)


def test_protocol_validation():
    with pytest.raises(ValueError):
        AcquisitionProtocol(rate_scale=0)
    with pytest.raises(ValueError):
        AcquisitionProtocol(rng_seed=-1)
    with pytest.raises(ValueError):
        expected_counts([1.0, -0.1], AcquisitionProtocol())


def test_fit_counts_needs_records():
    with pytest.raises(ValueError):
        fit_counts([CountRecord(0.0, (1, 2))] * 3)


def test_phase_recovery_coverage():
    scan = FringeScan(1, GRID, 1 + 0.6 * np.cos(GRID + 0.4))
    hits = 0
    for seed in range(200):
        fit = fit_counts(simulate_counts(scan, AcquisitionProtocol(rng_seed=seed)))
        hits += abs(wrap_phase(fit.C - 0.4)) < 3 * fit.sigma_C
    assert hits >= 198


def test_high_rate_converges_to_noiseless():
    beam = BeamParams(waist=waist_from_coupled_diameter(2.38e-3))
    cfg = InterferometerConfig(gamma=math.radians(5))
    iris = IrisConfig((0.7e-3, 0.0), 1.5e-3)
    plan = CorrelationSamplingPlan()
    scans = [fringe_scan(l, beam, cfg, GRID, iris, plan=plan) for l in (1, -1)]
    noiseless = phase_shift(*scans).delta_phi
    fits = [fit_counts(simulate_counts(s, AcquisitionProtocol(rate_scale=1e6, rng_seed=5 + i))) for i, s in enumerate(scans)]
    assert abs(wrap_phase(fits[0].C - fits[1].C) - noiseless) < 1e-2
