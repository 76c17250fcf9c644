import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from oamshear.errors import QuadratureError
from oamshear.pdc_model import (
    PdcParams,
    angular_widths,
    coefficient_table,
    collimated_shift_width,
    coupling_amplitude_l0,
    coupling_amplitude_l1,
    coupling_l0_closed_form,
    coupling_l1_closed_form,
    overlap_coefficient,
    translation_weight,
)
from oamshear.quadrature import adaptive_gauss_legendre

P = PdcParams()  # w_p = 40 um, w = 31 um, lambda = 815 nm, w_c = 0.93 mm
WIDTHS = angular_widths(P)


def test_widths_hand_arithmetic():
    # (1/1600 + 2/961)^(-1/2) um = 19.223 um; 815 nm / (pi 19.223 um) = 13.495 mrad
    assert WIDTHS.w_tilde == pytest.approx(19.22e-6, abs=0.005e-6)
    assert WIDTHS.delta_pdc == pytest.approx(13.5e-3, abs=0.05e-3)
    assert WIDTHS.delta_diff == pytest.approx(815e-9 / (math.pi * 31e-6), rel=1e-15)


def test_widths_invariants():
    assert WIDTHS.w_tilde < min(P.pump_waist, P.collection_waist)
    assert WIDTHS.delta_pdc > WIDTHS.delta_diff > 0


def test_wide_pump_limit():
    wide = angular_widths(PdcParams(pump_waist=1.0))
    assert wide.w_tilde == pytest.approx(31e-6 / math.sqrt(2), rel=1e-8)


def test_collimated_shift_cross_check():
    # f * delta_PDC with f = 100 mm: same order as the quoted w_c = 0.93 mm
    assert collimated_shift_width(P) == pytest.approx(0.1 * WIDTHS.delta_pdc)
    assert 0.5 < collimated_shift_width(P) / P.collimated_weight_width < 2


def test_invalid_params():
    with pytest.raises(ValueError):
        PdcParams(pump_waist=0)
    with pytest.raises(ValueError):
        overlap_coefficient(7, -7, P)


def test_c00_positive_real():
    c = overlap_coefficient(0, 0, P)
    assert c.real > 0 and c.imag == 0


def test_oam_conservation_single_pair():
    c00 = overlap_coefficient(0, 0, P)
    assert abs(overlap_coefficient(1, 0, P)) < 1e-8 * abs(c00)


def _gamma_ratio_oracle(l, a):
    # int r^(2|l|+1) e^{-r^2/a^2} dr / int r e^{-r^2/a^2} dr, by scipy quad in units of a
    num, _ = integrate.quad(lambda u: u ** (2 * abs(l) + 1) * math.exp(-u * u), 0, np.inf, epsrel=1e-13)
    den, _ = integrate.quad(lambda u: u * math.exp(-u * u), 0, np.inf, epsrel=1e-13)
    return num / den * a ** (2 * abs(l))


@pytest.mark.parametrize("l", [1, 2, 3])
def test_antidiagonal_ratio_matches_gamma_oracle(l):
    ratio = overlap_coefficient(l, -l, P) / overlap_coefficient(0, 0, P)
    oracle = _gamma_ratio_oracle(l, WIDTHS.w_tilde)
    assert ratio.real == pytest.approx(oracle, rel=1e-10)
    assert ratio.imag == 0


def test_ratio_one_equals_w_tilde_squared():
    # Gamma(2) a^2: frozen closed form of the l = 1 oracle
    ratio = overlap_coefficient(1, -1, P) / overlap_coefficient(0, 0, P)
    assert ratio.real == pytest.approx(WIDTHS.w_tilde**2, rel=1e-10)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_antidiagonal_symmetric(l):
    assert overlap_coefficient(l, -l, P) == overlap_coefficient(-l, l, P)


def test_table_structure(tmp_path):
    table = coefficient_table(2, P)
    c00 = abs(table[(0, 0)])
    for (l, lp), v in table.values.items():
        if l + lp:
            assert abs(v) < 1e-8 * c00
        else:
            assert v.real > 0
        assert table[(l, lp)] == table[(lp, l)]
    table.to_csv(tmp_path / "c.csv")
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[0] == "l,lprime,re,im,abs"
    assert len(lines) == 1 + 25


def test_coupling_l0_normalised():
    assert coupling_amplitude_l0(0.0, P) == pytest.approx(1.0, abs=1e-14)


def test_coupling_l0_at_k_two_over_w_tilde():
    theta = 2 / WIDTHS.w_tilde * P.wavelength / (2 * math.pi)
    assert coupling_amplitude_l0(theta, P) == pytest.approx(math.exp(-1), rel=1e-6)
    # delta_PDC is the same angle: k = 2 pi delta / lambda = 2 / w~
    assert theta == pytest.approx(WIDTHS.delta_pdc, rel=1e-14)


def test_coupling_l0_closed_form_dense():
    thetas = np.linspace(0, 3 * WIDTHS.delta_pdc, 31)
    num = np.array([coupling_amplitude_l0(t, P) for t in thetas])
    assert np.max(np.abs(num / coupling_l0_closed_form(thetas, P) - 1)) < 1e-6


def _hankel_l1_oracle(theta):
    # Independent route: phi integral done analytically as 2 pi J0(k r), radial by scipy quad.
    a = WIDTHS.w_tilde
    k = 2 * math.pi * theta / P.wavelength
    f = lambda u: u**3 * math.exp(-u * u) * special.j0(k * a * u)
    num, _ = integrate.quad(f, 0, 12, epsabs=1e-15, epsrel=1e-12, limit=200)
    den, _ = integrate.quad(lambda u: u**3 * math.exp(-u * u), 0, 12, epsrel=1e-13)
    return num / den


@pytest.mark.parametrize("frac", [0.0, 0.5, 1.0, 1.7, 2.5])
def test_coupling_l1_matches_hankel_oracle(frac):
    theta = frac * WIDTHS.delta_pdc
    assert coupling_amplitude_l1(theta, P) == pytest.approx(_hankel_l1_oracle(theta), abs=1e-9)
    assert coupling_amplitude_l1(theta, P) == pytest.approx(float(coupling_l1_closed_form(theta, P)), abs=1e-9)


def test_coupling_l1_shape():
    d = WIDTHS.delta_pdc
    assert coupling_amplitude_l1(0.0, P) == pytest.approx(1.0, abs=1e-14)
    # Decreasing up to sqrt(2) delta_PDC, where (1 - u) e^{-u} bottoms out.
    grid = np.linspace(0, math.sqrt(2) * d, 25)
    vals = [coupling_amplitude_l1(t, P) for t in grid]
    assert np.all(np.diff(vals) < 0)
    assert abs(coupling_amplitude_l1(d, P)) < 1e-9
    assert coupling_amplitude_l1(2 * d, P) > coupling_amplitude_l1(1.5 * d, P)


@pytest.mark.parametrize("frac", [0.25, 0.5, 1.0, 2.0, 3.0])
def test_l1_narrower_than_l0(frac):
    # Golden sign from the quadrature oracle: c11 - c00 < 0 for theta > 0.
    t = frac * WIDTHS.delta_pdc
    assert coupling_amplitude_l1(t, P) - coupling_amplitude_l0(t, P) < 0


def test_w_s_only_rescales():
    other = PdcParams(source_waist=0.85e-3)
    t = 0.7 * WIDTHS.delta_pdc
    assert coupling_amplitude_l1(t, other) == pytest.approx(coupling_amplitude_l1(t, P), rel=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.floats(min_value=0, max_value=3))
def test_couplings_even(frac):
    t = frac * WIDTHS.delta_pdc
    assert coupling_amplitude_l0(-t, P) == pytest.approx(coupling_amplitude_l0(t, P), rel=1e-12, abs=1e-15)
    assert coupling_amplitude_l1(-t, P) == pytest.approx(coupling_amplitude_l1(t, P), rel=1e-12, abs=1e-15)


def test_theta_range_enforced():
    with pytest.raises(ValueError):
        coupling_amplitude_l0(10.5 * WIDTHS.delta_pdc, P)


def test_translation_weight():
    assert translation_weight(0.0, P) == 1.0
    assert translation_weight(0.93e-3, P) == pytest.approx(math.exp(-2), rel=1e-15)
    assert translation_weight(0.93e-3, P) == pytest.approx(0.1353, abs=5e-5)
    np.testing.assert_allclose(translation_weight(np.array([0.0, 0.93e-3]), P), [1.0, math.exp(-2)])
    with pytest.raises(ValueError):
        translation_weight(-1e-3, P)


def test_adaptive_quadrature_reports_nonconvergence():
    # An oscillation a 32-node rule cannot resolve.
    f = lambda x: (np.cos(300 * x), np.ones_like(x))
    with pytest.raises(QuadratureError):
        adaptive_gauss_legendre(f, 0.0, 1.0, n0=8, n_max=32)


def test_adaptive_quadrature_polynomial_exact():
    value, _ = adaptive_gauss_legendre(lambda x: (x**5, np.abs(x**5)), 0.0, 2.0)
    assert value == pytest.approx(64 / 6, rel=1e-14)
