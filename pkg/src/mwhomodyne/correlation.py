"""First-order-correlation readout: two illuminated spots in a single gas.

The photon flux of the double-spot excitation reduces, for Gaussian
envelopes and the supported correlation models, to closed Gaussian
integrals over momentum per time-kernel slice; only a short 1D tau
integral remains.  The delta-spot limit gives the visibility
Re{e^{i q.d} G1(d/2, -d/2)} / n0(d/2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadSpec, grid_for_phase
from .units import InternalUnits

_FLUX_SPEC = QuadSpec(abs_tol=1e-14, rel_tol=1e-8, min_nodes_per_oscillation=8)


class UndefinedVisibilityError(ValueError):
    pass


class UnsupportedModelError(TypeError):
    pass


@dataclass(frozen=True)
class ExcitationSpec:
    """Two Gaussian illumination spots at +-d/2 and the pulse parameters."""

    d: tuple            # spot separation vector (m)
    delta_r: float      # Gaussian envelope width (m)
    q_vec: tuple        # scattering wavevector (1/m)
    pulse_t: float      # s
    omega_tilde: float  # carrier frequency scale (rad/s)
    omega_alpha: float  # excitation-spectrum scale (rad/s)
    mass: float         # kg

    def __post_init__(self):
        if self.delta_r <= 0.0:
            raise ValueError("ExcitationSpec: delta_r must be > 0")
        if self.delta_r > np.linalg.norm(self.d) / 5.0:
            warnings.warn("ExcitationSpec: delta_r > |d|/5, spots are not "
                          "well separated", stacklevel=2)

    @property
    def d_vec(self):
        return np.asarray(self.d, dtype=np.float64)

    @property
    def q(self):
        return np.asarray(self.q_vec, dtype=np.float64)


@dataclass(frozen=True)
class PulseRegime:
    ok: bool
    reason: str | None = None


def pulse_regime_check(spec):
    """ok iff omega_tilde * t >= 10 and omega_alpha * t <= 0.1."""
    wt = spec.omega_tilde * spec.pulse_t
    wa = spec.omega_alpha * spec.pulse_t
    if wt < 10.0:
        return PulseRegime(False, "omega_tilde * t = %.3g < 10" % wt)
    if wa > 0.1:
        return PulseRegime(False, "omega_alpha * t = %.3g > 0.1" % wa)
    return PulseRegime(True)


# --- correlation models -------------------------------------------------

@dataclass(frozen=True)
class UniformCondensate:
    """Pure condensate of uniform amplitude: G1(r, r') = density."""

    density: float = 1.0


@dataclass(frozen=True)
class PureCondensateTF:
    """Pure trapped condensate: G1(r, r') = f0(r) f0(r')."""

    profile: object  # TFProfile


@dataclass(frozen=True)
class ThermalGaussian:
    """Gaussian coherence G1(r, r') = n exp(-pi |r-r'|^2 / lambda^2)."""

    density: float
    coherence_length: float


@dataclass(frozen=True)
class TabulatedG1:
    """G1 tabulated on scalar coordinates along the spot axis.

    `r_coords`/`rp_coords` are the grids of the two scalar coordinates
    (projections onto the axis unit vector) and `values` the complex
    G1 table, G1(r, r') = values[i, j].
    """

    axis: tuple
    r_coords: np.ndarray
    rp_coords: np.ndarray
    values: np.ndarray

    def _interp(self, u, v):
        r, rp = np.asarray(self.r_coords), np.asarray(self.rp_coords)
        if not (r[0] <= u <= r[-1] and rp[0] <= v <= rp[-1]):
            raise ValueError("TabulatedG1: (%g, %g) outside tabulated range" % (u, v))
        i = min(np.searchsorted(r, u, side="right") - 1, len(r) - 2)
        j = min(np.searchsorted(rp, v, side="right") - 1, len(rp) - 2)
        fu = (u - r[i]) / (r[i + 1] - r[i])
        fv = (v - rp[j]) / (rp[j + 1] - rp[j])
        z = self.values
        return ((1 - fu) * (1 - fv) * z[i, j] + fu * (1 - fv) * z[i + 1, j]
                + (1 - fu) * fv * z[i, j + 1] + fu * fv * z[i + 1, j + 1])


def g1_eval(model, r, r_prime):
    """First-order correlation G1(r, r') for the given model (r in m)."""
    r = np.asarray(r, dtype=np.float64)
    rp = np.asarray(r_prime, dtype=np.float64)
    if isinstance(model, UniformCondensate):
        return complex(model.density)
    if isinstance(model, PureCondensateTF):
        f = model.profile.amplitude
        return complex(f(*r) * f(*rp))
    if isinstance(model, ThermalGaussian):
        s2 = float(np.sum((r - rp) ** 2))
        return complex(model.density * math.exp(-math.pi * s2 / model.coherence_length**2))
    if isinstance(model, TabulatedG1):
        axis = np.asarray(model.axis, dtype=np.float64)
        axis = axis / np.linalg.norm(axis)
        return complex(model._interp(float(r @ axis), float(rp @ axis)))
    raise UnsupportedModelError("g1_eval: unknown model %r" % type(model))


# --- flux ----------------------------------------------------------------

def _gauss_terms(spec, model, u):
    """Momentum-space Gaussian forms c exp(-a k^2 + b.k) of T_jk, internal units.

    Returns a list of (c, a, b2) with b2 = b.b (complex) for the four
    spot pairs, split into background (j = k) and cross (j != k) groups.
    """
    d = u.length_in(spec.d_vec)
    dr = u.length_in(spec.delta_r)
    q = spec.q * u.length  # wavevector: multiply by L0
    if isinstance(model, UniformCondensate):
        dens = {"LL": model.density, "RR": model.density,
                "LR": model.density, "RL": model.density}
    elif isinstance(model, PureCondensateTF):
        f = model.profile.amplitude
        f_l = f(*(-spec.d_vec / 2.0))
        f_r = f(*(spec.d_vec / 2.0))
        if f_l == 0.0 or f_r == 0.0:
            raise UndefinedVisibilityError(
                "flux_correlation_exact: a spot sits outside the condensate")
        warnings.warn("PureCondensateTF flux uses the spot-local density "
                      "(gradient of f0 across a spot neglected)", stacklevel=3)
        dens = {"LL": f_l * f_l, "RR": f_r * f_r, "LR": f_l * f_r, "RL": f_r * f_l}
    elif isinstance(model, ThermalGaussian):
        dens = {"LL": model.density, "RR": model.density,
                "LR": model.density, "RL": model.density}
    else:
        raise UnsupportedModelError(
            "flux_correlation_exact: %r not supported (uniform, TF and "
            "thermal models only)" % type(model))

    # D = r_j - r_k for pairs (L at -d/2, R at +d/2)
    pairs = {"LL": np.zeros(3), "RR": np.zeros(3), "LR": -d, "RL": d}
    background, cross = [], []
    for name, dvec in pairs.items():
        n_fac = dens[name]
        if isinstance(model, ThermalGaussian):
            lam = u.length_in(model.coherence_length)
            a_big = 1.0 / (2.0 * dr**2) + math.pi / lam**2
            beta0 = dvec / dr**2 + 1j * q
            # T = n (pi/A)^{3/2} exp(beta0^2/(4A) - D^2/(2 dr^2))
            #     * exp(-k^2/(4A) - i beta0.k/(2A))
            a = 1.0 / (4.0 * a_big)
            b = -1j * beta0 / (2.0 * a_big)
            c = n_fac * (math.pi / a_big) ** 1.5 * np.exp(
                (beta0 @ beta0) / (4.0 * a_big) - (dvec @ dvec) / (2.0 * dr**2))
        else:
            a = 0.5 * dr**2
            b = dr**2 * q - 1j * dvec
            c = n_fac * (2.0 * math.pi * dr**2) ** 1.5 * np.exp(
                -0.5 * (q @ q) * dr**2 + 1j * (q @ dvec))
        entry = (complex(c), complex(a), complex(b @ b))
        (background if name in ("LL", "RR") else cross).append(entry)
    return background, cross


def _v_of_tau(terms, tau):
    """sum_jk V_jk(tau) for Gaussian terms: c (4 pi gamma)^{-3/2} e^{b2/(4 gamma)}."""
    out = np.zeros(np.shape(tau), dtype=complex)
    for c, a, b2 in terms:
        gamma = a - 0.5j * np.asarray(tau)
        out = out + c * (4.0 * np.pi * gamma) ** -1.5 * np.exp(b2 / (4.0 * gamma))
    return out


def flux_correlation_components(spec, model, t, quad_spec=None):
    """(total, background, cross) flux parts at time t (s), arbitrary units."""
    if not t > 0.0:
        raise ValueError("flux_correlation_exact: t must be > 0")
    regime = pulse_regime_check(spec)
    if not regime.ok:
        warnings.warn("flux_correlation_exact: outside pulse regime (%s)"
                      % regime.reason, stacklevel=2)
    qs = quad_spec or _FLUX_SPEC
    u = InternalUnits(length=float(np.linalg.norm(spec.d_vec)), mass=spec.mass)
    t_int = u.time_in(t)
    w_t = u.frequency_in(spec.omega_tilde)
    q_int = spec.q * u.length
    dr_int = u.length_in(spec.delta_r)
    background, cross = _gauss_terms(spec, model, u)

    # resolve the kernel carrier, the q^2/2 virtual component, and the
    # envelope-phase structure of the Gaussian terms
    rate = 24.0 * abs(w_t) + 0.5 * (q_int @ q_int) * (1.0 + 2.0 * dr_int**2) + 1.0 / t_int
    # the Gaussian V(tau) terms have an initial feature of width ~Re(a);
    # geometric breakpoints resolve it at any delta_r
    a_min = min(np.real(a) for _, a, _ in background + cross)
    breaks = []
    b = a_min / 8.0
    while b < t_int:
        breaks.append(b)
        b *= 2.0
    out = {}
    scale = 0.0
    for name, terms in (("background", background), ("cross", cross)):
        for density in (1.0, 2.0, 4.0, 8.0):
            grid = grid_for_phase(0.0, t_int, rate * density, qs, breakpoints=breaks)
            g = np.exp(-1j * w_t * grid.x) * _v_of_tau(terms, grid.x)
            val = float(np.real(grid.integrate(g)))
            err = float(grid.error(g))
            # a vanishing cross term is judged against the background scale
            if err <= max(qs.abs_tol, qs.rel_tol * max(abs(val), scale)):
                break
        else:
            warnings.warn("flux_correlation_exact: %s integral not converged "
                          "(err %.2e)" % (name, err), stacklevel=3)
        out[name] = val
        scale = max(scale, abs(val))
    return out["background"] + out["cross"], out["background"], out["cross"]


def flux_correlation_exact(spec, model, t, quad_spec=None):
    """Photon flux of the double-spot excitation at time t (s)."""
    total, _, _ = flux_correlation_components(spec, model, t, quad_spec)
    return total


def visibility_delta_limit(spec, model):
    """Delta-spot visibility Re{e^{i q.d} G1(d/2, -d/2)} / n0(d/2)."""
    half = spec.d_vec / 2.0
    n_plus = g1_eval(model, half, half)
    n_minus = g1_eval(model, -half, -half)
    if abs(n_plus - n_minus) > 1e-10 * max(abs(n_plus), 1e-300):
        warnings.warn("visibility_delta_limit: model is not reflection "
                      "symmetric about r = 0", stacklevel=2)
    n0 = float(np.real(n_plus))
    if n0 <= 0.0:
        raise UndefinedVisibilityError("visibility_delta_limit: n0(d/2) = 0")
    g_cross = g1_eval(model, half, -half)
    phase = np.exp(1j * float(spec.q @ spec.d_vec))
    return float(np.real(phase * g_cross) / n0)


def visibility_from_flux(spec, model, t=None, quad_spec=None):
    """Finite-spot visibility (F - K)/K with K the j = k background."""
    t = spec.pulse_t if t is None else t
    total, background, _ = flux_correlation_components(spec, model, t, quad_spec)
    if background <= 0.0:
        raise UndefinedVisibilityError("visibility_from_flux: background <= 0")
    return (total - background) / background
