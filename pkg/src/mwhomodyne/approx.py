"""Closed-form and saddle-point approximations of the flux.

The overlap route: taking the condensate wave functions at the
stationary point of the free-propagation phase turns the interference
flux into a time integral of the displaced-cloud overlap.  Carrying that
through the Thomas-Fermi profiles gives the dimensionless overlap
function G(z), its Gaussian fit, the Gaussian resonance kernel K, and
the piecewise-cosine closed form of the total flux for q parallel to d.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadSpec, grid_for_phase, integrate_1d, integrate_nd
from .specfun import gaussian_kernel
from .units import HBAR, InternalUnits

_G_SPEC = QuadSpec(abs_tol=1e-14, rel_tol=1e-12)


class UnsupportedGeometryError(ValueError):
    pass


@dataclass(frozen=True)
class ClosedFormParams:
    """Dimensionless inputs of the closed-form flux."""

    t0: float            # r_x / v_q, internal time units
    d_over_rx: float
    omega_minus_wq: float  # Omega - omega_q, internal frequency
    delta_mu: float        # internal frequency
    phi_lr: float
    n_condensed: float

    def __post_init__(self):
        if self.t0 <= 0.0:
            raise ValueError("ClosedFormParams: t0 must be > 0")
        if self.d_over_rx <= 2.0:
            raise ValueError("ClosedFormParams: need d > 2 r_x for a defined onset")

    @classmethod
    def from_scenario(cls, s):
        u = InternalUnits(length=s.profile_left.r_x, mass=s.mass)
        q = u.wavevector_in(s.q_mag)
        return cls(t0=1.0 / q, d_over_rx=u.length_in(s.d),
                   omega_minus_wq=u.frequency_in(s.omega - s.omega_q),
                   delta_mu=u.frequency_in(s.delta_mu), phi_lr=s.phi_lr,
                   n_condensed=s.profile_left.n_condensed)


def _lens_slice(a, b):
    """Closed form of int_0^{sqrt(min(a,b))} rho sqrt(a-rho^2) sqrt(b-rho^2) drho.

    Equals (1/2) int_0^m sqrt((a-u)(b-u)) du with m = min(a, b); a, b >= 0.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    lo = np.minimum(a, b)
    c = np.abs(b - a)
    root = np.sqrt(np.maximum(a * b, 0.0))
    main = 0.125 * (a + b) * root  # (1/2) * ((2 lo + c)/4) sqrt(lo (lo + c))
    with np.errstate(divide="ignore", invalid="ignore"):
        log_term = np.where(
            c > 1e-14 * np.maximum(a + b, 1e-300),
            (c * c / 16.0) * np.log((a + b + 2.0 * root) / np.where(c > 0, c, 1.0)),
            0.0)
    return np.where(lo > 0.0, main - log_term, 0.0)


def g_of_z(z):
    """Displaced-unit-sphere overlap G(z); G(0) = 4/15, G(|z| >= 2) = 0.

    The transverse integral of the defining double integral is done in
    closed form, leaving a single smooth 1D integral (independent of the
    brute-force 2D oracle used in the tests).
    """
    z = abs(float(z))
    if z >= 2.0:
        return 0.0

    def integrand(x):
        return 2.0 * _lens_slice(1.0 - x * x, 1.0 - (x - z) ** 2)

    res = integrate_1d(integrand, z / 2.0, 1.0, _G_SPEC)
    return float(np.real(res.value))


def gaussian_fit_g(z):
    """Gaussian fit (4/15) exp(-1.25 z^2) of the overlap function."""
    z = np.asarray(z, dtype=np.float64)
    out = (4.0 / 15.0) * np.exp(-1.25 * z * z)
    return out if out.ndim else float(out)


def overlap_h(profile_j, profile_l, displacement, spec=None):
    """Overlap integral of two displaced condensates, in atom-count units.

    h = int f_j(r + displacement) f_l(r) d^3 r; `displacement` is a 3-vector
    in meters.  Spherical pairs reduce to a cylindrical 2D integral;
    general ellipsoids fall back to a 3D box integral.
    """
    spec = spec or QuadSpec(abs_tol=1e-6, rel_tol=1e-6, max_subdivisions=400)
    disp = np.asarray(displacement, dtype=np.float64)
    if disp.shape != (3,):
        raise ValueError("overlap_h: displacement must be a 3-vector")
    s = float(np.linalg.norm(disp))
    if profile_j.is_spherical and profile_l.is_spherical:
        r_j, r_l = profile_j.r_x, profile_l.r_x
        if s >= r_j + r_l:
            return 0.0
        # axis along the displacement; transverse integral in closed form
        nj = profile_j.mu / profile_j.g
        nl = profile_l.mu / profile_l.g
        x_lo, x_hi = max(-r_l, -s - r_j), min(r_l, -s + r_j)

        def f(x):
            a_l = np.maximum(r_l**2 - x**2, 0.0)
            a_j = np.maximum(r_j**2 - (x + s) ** 2, 0.0)
            return 2.0 * np.pi * np.sqrt(nj * nl) / (r_j * r_l) * _lens_slice(a_l, a_j)

        res = integrate_1d(f, x_lo, x_hi, spec)
        return max(float(np.real(res.value)), 0.0)

    # general ellipsoids: 3D bounding box of the intersection region;
    # f_j(r + d) f_l(r) means f_j is shifted by -d in f_l's frame
    def f3s(x, y, z):
        return profile_j.amplitude(x + disp[0], y + disp[1], z + disp[2]) \
            * profile_l.amplitude(x, y, z)

    lo = np.maximum(-profile_l.radii, -disp - profile_j.radii)
    hi = np.minimum(profile_l.radii, -disp + profile_j.radii)
    if np.any(lo >= hi):
        return 0.0
    res = integrate_nd(f3s, list(zip(lo, hi)), spec)
    return max(float(np.real(res.value)), 0.0)


def flux_lr_saddle(s, t, spec=None):
    """L->R interference term by the saddle-point (overlap) route.

    Valid when hbar q greatly exceeds the momentum width hbar/r_min of
    the clouds; a warning is attached when hbar q < 20 * delta p.
    """
    if not t > 0.0:
        raise ValueError("flux_lr_saddle: t must be > 0")
    spec = spec or QuadSpec(abs_tol=1e-8, rel_tol=1e-5, max_subdivisions=200)
    r_min = min(min(s.profile_left.radii), min(s.profile_right.radii))
    delta_p = HBAR / r_min
    if HBAR * s.q_mag < 20.0 * delta_p:
        warnings.warn("flux_lr_saddle: hbar q < 20 delta p, saddle-point "
                      "approximation unreliable", stacklevel=2)
    u = InternalUnits(length=s.profile_left.r_x, mass=s.mass)
    t_int = u.time_in(t)
    w_detune = u.frequency_in(s.omega - s.omega_q)
    dmu = u.frequency_in(s.delta_mu)
    cos_a, sin_a = math.cos(s.alpha), math.sin(s.alpha)

    def h_of_tau(tau_int):
        tau_s = u.time_out(np.asarray(tau_int))
        out = np.empty(np.shape(tau_s))
        for i, ts in np.ndenumerate(np.atleast_1d(tau_s)):
            shift = s.v_q * ts
            disp = np.array([s.d - shift * cos_a, -shift * sin_a, 0.0])
            out[i] = overlap_h(s.profile_left, s.profile_right, disp)
        return out.reshape(np.shape(tau_int))

    res = integrate_1d(lambda tau: np.exp(-1j * w_detune * tau) * h_of_tau(tau),
                       0.0, t_int, spec)
    phase = np.exp(1j * (dmu * t_int - s.phi_lr))
    return float(s.gamma_scale * np.real(phase * res.value))


@dataclass(frozen=True)
class ClosedFormFlux:
    f_l: float
    f_r: float
    f_lr: float
    f_rl: float
    f_total: float


def flux_closed_form(s, t, params=None):
    """Closed-form flux components for q parallel to d (alpha = 0).

    F_total = 2 pi Gamma N_C K_m [1 + V0 cos(dmu t - phi_LR +
    (w_q - Omega) d/v_q) step(t - t_c)], with the R->L component zero
    for q > 0.  Values in Gamma units (internal time), as the exact route.
    """
    if abs(math.remainder(s.alpha, 2.0 * math.pi)) > 1e-12:
        raise UnsupportedGeometryError("flux_closed_form: derived only for alpha = 0")
    if not t > 0.0:
        raise ValueError("flux_closed_form: t must be > 0")
    p = params or ClosedFormParams.from_scenario(s)
    if abs(p.omega_minus_wq * p.t0) > 5.0:
        warnings.warn("flux_closed_form: |(w_q - Omega) t0| > 5, dropped "
                      "error-function tails are not negligible", stacklevel=2)
    u = InternalUnits(length=s.profile_left.r_x, mass=s.mass)
    t_int = u.time_in(t)
    gamma = s.gamma_scale
    n_c = p.n_condensed
    k_minus = gaussian_kernel(-p.omega_minus_wq, p.t0)
    k_plus = gaussian_kernel(-p.omega_minus_wq + p.delta_mu, p.t0)
    f_l = math.pi * gamma * n_c * k_minus
    f_r = math.pi * gamma * n_c * k_plus
    t_c = (p.d_over_rx - 2.0) * p.t0
    step = 1.0 if t_int >= t_c else 0.0
    theta = p.delta_mu * t_int - p.phi_lr - p.omega_minus_wq * p.d_over_rx * p.t0
    f_lr = 2.0 * math.pi * gamma * n_c * k_minus * step * math.cos(theta)
    f_rl = 0.0  # q > 0: atoms outcoupled from the right never reach the left
    return ClosedFormFlux(f_l=f_l, f_r=f_r, f_lr=f_lr, f_rl=f_rl,
                          f_total=f_l + f_r + f_lr + f_rl)


def visibility_v0(s, params=None):
    """Printed closed-form visibility 2K(w_q-Omega)/(K(w_q-Omega)+K(w_q-Omega+dmu)).

    Evaluated verbatim; can exceed 1 (cf. the closed form's oscillation
    dipping the total flux below zero near resonance).
    """
    p = params or ClosedFormParams.from_scenario(s)
    k_minus = gaussian_kernel(-p.omega_minus_wq, p.t0)
    k_plus = gaussian_kernel(-p.omega_minus_wq + p.delta_mu, p.t0)
    return 2.0 * k_minus / (k_minus + k_plus)


def phase_offset(s, params=None):
    """Both printed phase-offset conventions, labeled.

    theta_main = (d/v_q)(w_q - Omega + dmu); theta_b11 = (d/v_q)
    (2 Omega - 2 w_q - dmu), whose slope in Omega is 2 d/v_q.
    """
    p = params or ClosedFormParams.from_scenario(s)
    d_over_v = p.d_over_rx * p.t0
    return {
        "theta_main": d_over_v * (-p.omega_minus_wq + p.delta_mu),
        "theta_b11": d_over_v * (2.0 * p.omega_minus_wq - p.delta_mu),
    }
