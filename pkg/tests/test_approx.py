import numpy as np
import pytest
from dataclasses import replace
from scipy import integrate as sci

from mwhomodyne.approx import (ClosedFormParams, UnsupportedGeometryError,
                               flux_closed_form, flux_lr_saddle, g_of_z,
                               gaussian_fit_g, overlap_h, phase_offset,
                               visibility_v0)
from mwhomodyne.specfun import gaussian_kernel
from mwhomodyne.twobec import interference_flux_components, onset_time


def g_oracle_2d(z):
    """Brute-force 2D quadrature of the defining double integral."""
    if z >= 2.0:
        return 0.0

    def inner(x):
        def f(r):
            a = max(1.0 - x * x - r * r, 0.0)
            b = max(1.0 - (x - z) ** 2 - r * r, 0.0)
            return r * np.sqrt(a) * np.sqrt(b)

        v, _ = sci.quad(f, 0.0, np.sqrt(1.0 - x * x), limit=200,
                        epsabs=1e-12, epsrel=1e-11)
        return v

    v, _ = sci.quad(inner, z / 2.0, 1.0, limit=200, epsabs=1e-11, epsrel=1e-10)
    return 2.0 * v


def test_g_at_zero_analytic():
    assert g_of_z(0.0) == pytest.approx(4.0 / 15.0, abs=1e-10)


def test_g_at_two_exact_zero():
    assert g_of_z(2.0) == 0.0
    assert g_of_z(2.5) == 0.0


def test_g_negative_symmetry():
    assert g_of_z(-0.7) == g_of_z(0.7)


@pytest.mark.parametrize("z", [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75])
def test_g_matches_2d_oracle(z):
    assert g_of_z(z) == pytest.approx(g_oracle_2d(z), abs=1e-6)


def test_g_monotone_decreasing():
    zs = np.linspace(0.0, 2.0, 41)
    vals = [g_of_z(z) for z in zs]
    assert all(b < a + 1e-14 for a, b in zip(vals, vals[1:]))


def test_gaussian_fit_values():
    assert gaussian_fit_g(0.0) == 4.0 / 15.0
    assert gaussian_fit_g(np.sqrt(0.8)) == pytest.approx((4.0 / 15.0) * np.exp(-1.0),
                                                         rel=1e-14)
    assert gaussian_fit_g(-1.3) == gaussian_fit_g(1.3)


def test_g_fit_sup_gap():
    zs = np.linspace(0.0, 2.0, 81)
    gap = max(abs(g_of_z(z) - gaussian_fit_g(z)) for z in zs)
    assert gap <= 0.05 * (4.0 / 15.0)


def test_overlap_self(fig2_scenario):
    p = fig2_scenario.profile_left
    h = overlap_h(p, p, np.zeros(3))
    assert h == pytest.approx(p.n_condensed, rel=1e-6)


def test_overlap_disjoint(fig2_scenario):
    p = fig2_scenario.profile_left
    assert overlap_h(p, p, np.array([fig2_scenario.d, 0.0, 0.0])) == 0.0


def test_overlap_orthogonal_track(fig2_scenario):
    # q perpendicular to d: displacement magnitude never drops below d
    p = fig2_scenario.profile_left
    d = fig2_scenario.d
    for v_tau in (0.0, 0.5 * d, d, 2 * d):
        disp = np.array([d, -v_tau, 0.0])
        assert overlap_h(p, p, disp) == 0.0


def test_overlap_matches_unit_sphere_form(fig2_scenario):
    # equal spheres: h(s) = (15/4) N_C G(s/r)
    p = fig2_scenario.profile_left
    for z in (0.3, 1.0, 1.7):
        h = overlap_h(p, p, np.array([z * p.r_x, 0.0, 0.0]))
        assert h == pytest.approx(3.75 * p.n_condensed * g_of_z(z), rel=1e-5)


def test_saddle_before_onset(fig2_scenario):
    t = 0.6 * onset_time(fig2_scenario)
    val = flux_lr_saddle(fig2_scenario, t)
    assert abs(val) < 1e-9 * fig2_scenario.profile_left.n_condensed


def test_saddle_matches_exact_component(fig2_scenario):
    # t = 2 periods past t_c; compare to the exact L->R term relative to
    # the component amplitude (pointwise ratios blow up at zero crossings)
    t_c = onset_time(fig2_scenario)
    t = t_c + 2.0 * 2 * np.pi / fig2_scenario.delta_mu
    x1, _ = interference_flux_components(fig2_scenario, np.array([t]))
    exact = float(np.real(x1[0]))
    amp = abs(complex(x1[0]))
    sad = flux_lr_saddle(fig2_scenario, t)
    assert abs(sad - exact) <= 0.10 * amp


def test_saddle_resonant_growth(fig2_scenario):
    s = replace(fig2_scenario, delta_mu=0.0, phi_lr=0.0)
    t_c = onset_time(s)
    vals = [flux_lr_saddle(s, f * t_c) for f in (1.2, 1.6, 2.0, 2.4)]
    assert all(v >= -1e-9 for v in vals)
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_saddle_validity_warning(fig2_scenario):
    slow = replace(fig2_scenario, q_mag=fig2_scenario.q_mag / 50.0)
    with pytest.warns(UserWarning):
        flux_lr_saddle(slow, onset_time(fig2_scenario))


def test_closed_form_flat_before_onset(fig2_scenario):
    p = ClosedFormParams.from_scenario(fig2_scenario)
    t_c = onset_time(fig2_scenario)
    k_m = 0.5 * (gaussian_kernel(-p.omega_minus_wq, p.t0)
                 + gaussian_kernel(-p.omega_minus_wq + p.delta_mu, p.t0))
    for f in (0.2, 0.5, 0.9):
        out = flux_closed_form(fig2_scenario, f * t_c)
        assert out.f_lr == 0.0 and out.f_rl == 0.0
        assert out.f_total == pytest.approx(2 * np.pi * p.n_condensed * k_m, rel=1e-12)


def test_closed_form_fully_coherent_peak(fig2_scenario):
    s = replace(fig2_scenario, delta_mu=0.0, phi_lr=0.0)
    t = 2.0 * onset_time(fig2_scenario)
    out = flux_closed_form(s, t)
    n_c = s.profile_left.n_condensed
    t0 = 1.0 / (s.q_mag * s.profile_left.r_x)
    assert out.f_total == pytest.approx(4 * np.pi * n_c * gaussian_kernel(0.0, t0),
                                        rel=1e-12)


def test_closed_form_background_identity(fig2_scenario):
    p = ClosedFormParams.from_scenario(fig2_scenario)
    out = flux_closed_form(fig2_scenario, 1e-5)
    assert out.f_l == pytest.approx(
        np.pi * p.n_condensed * gaussian_kernel(-p.omega_minus_wq, p.t0), rel=1e-10)


def test_closed_form_periodicity(fig2_scenario):
    t_c = onset_time(fig2_scenario)
    period = 2 * np.pi / fig2_scenario.delta_mu
    for t in (1.5 * t_c, 2.2 * t_c):
        a = flux_closed_form(fig2_scenario, t).f_total
        b = flux_closed_form(fig2_scenario, t + period).f_total
        assert b == pytest.approx(a, rel=1e-12)


def test_closed_form_step_at_onset(fig2_scenario):
    t_c = onset_time(fig2_scenario)
    below = flux_closed_form(fig2_scenario, t_c * (1 - 1e-9)).f_total
    above = flux_closed_form(fig2_scenario, t_c * (1 + 1e-9)).f_total
    assert abs(above - below) > 0.1 * below  # documented jump at t_c


def test_closed_form_rejects_angle(fig2_scenario):
    with pytest.raises(UnsupportedGeometryError):
        flux_closed_form(replace(fig2_scenario, alpha=0.3), 1e-3)


def test_closed_form_detuning_warning(fig2_scenario):
    # |(w_q - Omega) t0| > 5: dropped error-function tails get flagged
    detune_si = 6.0 * fig2_scenario.v_q / fig2_scenario.profile_left.r_x
    far = replace(fig2_scenario, omega=fig2_scenario.omega + detune_si)
    with pytest.warns(UserWarning):
        flux_closed_form(far, 1e-3)


def test_visibility_v0(fig2_scenario):
    assert visibility_v0(replace(fig2_scenario, delta_mu=0.0)) == 1.0
    # delta mu -> infinity: verbatim formula tends to 2
    huge = replace(fig2_scenario, delta_mu=1e9)
    assert visibility_v0(huge) == pytest.approx(2.0, rel=1e-12)
    # symmetric detuning: even kernel makes V0 = 1
    sym = replace(fig2_scenario,
                  omega=fig2_scenario.omega + fig2_scenario.delta_mu / 2.0)
    assert visibility_v0(sym) == pytest.approx(1.0, rel=1e-12)


def test_phase_offset(fig2_scenario):
    s0 = replace(fig2_scenario, delta_mu=0.0)
    out = phase_offset(s0)  # Omega = omega_q, delta mu = 0
    assert out["theta_main"] == pytest.approx(0.0, abs=1e-12)
    assert out["theta_b11"] == pytest.approx(0.0, abs=1e-12)
    # Omega = omega_q: theta_main = (d/v_q) delta mu
    out = phase_offset(fig2_scenario)
    d_over_v = fig2_scenario.d / fig2_scenario.v_q
    assert out["theta_main"] == pytest.approx(d_over_v * fig2_scenario.delta_mu,
                                              rel=1e-10)
    # slope of theta_b11 in Omega is 2 d/v_q
    eps = 10.0  # rad/s
    shifted = replace(fig2_scenario, omega=fig2_scenario.omega + eps)
    slope = (phase_offset(shifted)["theta_b11"] - out["theta_b11"]) / eps
    assert slope == pytest.approx(2 * d_over_v, rel=1e-6)


def test_closed_form_params_invariants(fig2_scenario):
    with pytest.raises(ValueError):
        ClosedFormParams(t0=-1.0, d_over_rx=5.0, omega_minus_wq=0.0,
                         delta_mu=1.0, phi_lr=0.0, n_condensed=1.0)
    with pytest.raises(ValueError):
        ClosedFormParams(t0=1.0, d_over_rx=1.5, omega_minus_wq=0.0,
                         delta_mu=1.0, phi_lr=0.0, n_condensed=1.0)
