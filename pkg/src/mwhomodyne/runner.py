"""Scenario execution and CSV output.

CSV values are written with 17 significant digits ('.' decimal
separator, LF line endings) so reruns diff bit-identically; run metadata
goes into '#'-prefixed header comments.  Sweeps fan out over a thread
pool; every point is computed independently and assembled in input
order, so the bytes do not depend on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .bosehubbard import (BHParams, LatticeScenario, amplitude_vs_r,
                          meanfield_solve)
from .condensate import ThermalState, TrapSpec, critical_temperature, tf_profile
from .correlation import (ExcitationSpec, ThermalGaussian, UniformCondensate,
                          visibility_delta_limit, visibility_from_flux)
from .quadrature import QuadSpec
from .twobec import (FLUX_SPEC, TwoBecScenario, amplitude_C, flux_series,
                     onset_time)
from .approx import ClosedFormParams, flux_closed_form, flux_lr_saddle
from .units import HBAR, InternalUnits


@dataclass(frozen=True)
class RunOutput:
    header: list
    rows: np.ndarray
    metadata: dict

    def to_csv(self):
        lines = []
        for key in sorted(self.metadata):
            lines.append("# %s = %s" % (key, _fmt(self.metadata[key])))
        lines.append(",".join(self.header))
        for row in self.rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def write(self, path):
        data = self.to_csv().encode("ascii")
        with open(path, "wb") as fh:
            fh.write(data)
        return data


def _fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _quad_spec(numerics, base):
    kwargs = {}
    for key in ("abs_tol", "rel_tol", "eps_env"):
        if key in numerics:
            kwargs[key] = float(numerics[key])
    if "min_nodes_per_oscillation" in numerics:
        kwargs["min_nodes_per_oscillation"] = int(numerics["min_nodes_per_oscillation"])
    return replace(base, **kwargs) if kwargs else base


def _trap_from_config(params):
    trap = params["trap"]
    freqs = {}
    for axis in ("x", "y", "z"):
        if "omega_%s_rad_per_s" % axis in trap:
            freqs[axis] = float(trap["omega_%s_rad_per_s" % axis])
        else:
            freqs[axis] = 2.0 * math.pi * float(trap["omega_%s_hz" % axis])
    return TrapSpec(omega_x=freqs["x"], omega_y=freqs["y"], omega_z=freqs["z"],
                    mass=float(trap["mass_kg"]), n_atoms=float(trap["n_atoms"]),
                    a_s=float(trap["a_s_m"]))


def _two_bec_scenario(params):
    trap = _trap_from_config(params)
    return TwoBecScenario.symmetric(
        trap,
        d_over_rx=float(params["d_over_rx"]),
        v_q=float(params["v_q_m_per_s"]),
        delta_mu=float(params["delta_mu_rad_per_s"]),
        alpha=float(params.get("alpha_rad", 0.0)),
        omega_minus_wq=float(params.get("omega_minus_wq_rad_per_s", 0.0)),
        phi_lr=float(params.get("phi_lr_rad", 0.0)),
        n_condensed=params.get("n_condensed"))


def _time_grid(s, params):
    times = params.get("times", {})
    n_periods = float(times.get("n_periods", 6.0))
    n_points = int(times.get("n_points", 600))
    t_max = n_periods * 2.0 * math.pi / abs(s.delta_mu)
    return np.linspace(0.0, t_max, n_points + 1)[1:]


def _run_two_bec(cfg):
    s = _two_bec_scenario(cfg.params)
    spec = _quad_spec(cfg.numerics, FLUX_SPEC)
    times = _time_grid(s, cfg.params)
    method = cfg.params.get("method", "exact")
    if method == "exact":
        ser = flux_series(s, times, spec=spec)
        fb, fi = ser.f_background, ser.f_interference
        meta = dict(ser.metadata)
    elif method == "closed-form":
        p = ClosedFormParams.from_scenario(s)
        comps = [flux_closed_form(s, t, p) for t in times]
        fb = np.array([c.f_l + c.f_r for c in comps])
        fi = np.array([c.f_lr + c.f_rl for c in comps])
        meta = {"t0_internal": p.t0, "length_unit_m": s.profile_left.r_x}
    elif method == "saddle":
        p = ClosedFormParams.from_scenario(s)
        fb = np.array([flux_closed_form(s, t, p).f_l + flux_closed_form(s, t, p).f_r
                       for t in times])
        fi = np.array([flux_lr_saddle(s, t) for t in times])
        meta = {"length_unit_m": s.profile_left.r_x}
    else:
        raise ValueError("unknown method %r" % method)
    f = fb + fi
    rows = np.column_stack([times, fb, fi, f, f / fb])
    meta.update({"kind": "two_bec", "method": method, "version": __version__,
                 "t_c_s": onset_time(s)})
    return RunOutput(["t_s", "F_B", "F_I", "F", "F_over_FB"], rows, meta)


def _run_thermometry(cfg, threads=1):
    s = _two_bec_scenario(cfg.params)
    spec = _quad_spec(cfg.numerics, FLUX_SPEC)
    trap = _trap_from_config(cfg.params)
    t_crit = critical_temperature(trap)
    grid = [float(x) for x in cfg.params["t_over_tc"]]
    t_c = onset_time(s)

    def one(frac):
        if frac == 0.0:
            thermal = None
            dmu_eff = s.delta_mu
        else:
            thermal = ThermalState.for_profile(s.profile_right, frac * t_crit, t_crit)
            dmu_eff = s.delta_mu + thermal.delta_mu_T
        times = np.linspace(0.0, 1.2 * t_c + 5.0 * 2.0 * math.pi / dmu_eff, 481)[1:]
        ser = flux_series(s, times, thermal=thermal, spec=spec)
        c_val = amplitude_C(ser, 1.2 * t_c)
        nc = 1.0 - frac**3
        return c_val, math.sqrt(nc)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(one, grid))
    c_vals = np.array([r[0] for r in results])
    sqrt_nc = np.array([r[1] for r in results])
    c0 = c_vals[0] if grid[0] == 0.0 else None
    c_over = c_vals / c0 if c0 else np.full_like(c_vals, np.nan)
    rows = np.column_stack([grid, c_vals, c_over, sqrt_nc])
    meta = {"kind": "thermometry", "method": "exact", "version": __version__,
            "T_c_K": t_crit, "t_c_s": t_c}
    return RunOutput(["T_over_Tc", "C", "C_over_C0", "sqrt_nc"], rows, meta)


def _lattice_scenario(params):
    d0 = float(params["d0_m"])
    mass = float(params["mass_kg"])
    u = InternalUnits(length=d0, mass=mass)
    w_r = HBAR * math.pi**2 / (2.0 * mass * d0**2)
    return LatticeScenario(
        m_sites=int(params.get("m_sites", 50)),
        d0=d0,
        v0_over_er=float(params["v0_over_er"]),
        x0=float(params["x0_over_d0"]) * d0,
        d=float(params["d_over_d0"]) * d0,
        q_mag=2.0 * math.pi / d0,
        omega_minus_wq=float(params.get("omega_minus_wq_over_wr", 1.0)) * w_r,
        delta_mu=float(params["delta_mu_over_wr"]) * w_r,
        phi_lr=float(params.get("phi_lr_rad", 0.0)),
        n_left=float(params["n_left_per_d0sq"]) / d0**2,
        mass=mass), u


def _run_lattice(cfg, threads=1):
    s, _ = _lattice_scenario(cfg.params)
    spec = _quad_spec(cfg.numerics, QuadSpec(abs_tol=1e-12, rel_tol=1e-5))
    r_grid = np.array([float(x) for x in cfg.params["r_grid"]])
    mu = float(cfg.params["mu_over_u"])
    n_max = int(cfg.params.get("n_max", 8))
    r, psi, c_vals = amplitude_vs_r(s, r_grid, mu, n_max=n_max, spec=spec)
    ref = c_vals[-1] / psi[-1] * meanfield_solve(
        BHParams(r=0.2, mu_over_u=mu, n_max=n_max)).psi if psi[-1] > 0 else 0.0
    c_over = c_vals / ref if ref else np.zeros_like(c_vals)
    rows = np.column_stack([r, psi, c_vals, c_over])
    meta = {"kind": "lattice", "method": "exact", "version": __version__,
            "mu_over_u": mu, "n_max": n_max,
            "c_ref_at_r0.2": ref}
    return RunOutput(["r", "psi", "C", "C_over_C0"], rows, meta)


def _run_correlation(cfg, threads=1):
    p = cfg.params
    d_m = float(p["d_m"])
    mass = float(p["mass_kg"])
    u = InternalUnits(length=d_m, mass=mass)
    k_tilde = float(p["k_tilde_d"])  # resonant wavenumber in units of 1/d
    w_tilde = u.frequency_out(0.5 * k_tilde**2)
    pulse_t = u.time_out(10.0 / (0.5 * k_tilde**2))
    q_dot_d = float(p.get("q_dot_d", 2.0 * math.pi))
    if p["model"] == "uniform":
        model = UniformCondensate(1.0)
    else:
        model = ThermalGaussian(1.0, float(p["coherence_length_m"]))
    sweep = p.get("sweep", {})
    par = sweep.get("parameter", "delta_r_over_d")
    values = [float(v) for v in sweep.get("values", [0.1, 0.05, 0.025])]
    method = p.get("method", "exact")

    def spec_for(dr_frac, qd):
        return ExcitationSpec(d=(d_m, 0.0, 0.0), delta_r=dr_frac * d_m,
                              q_vec=(qd / d_m, 0.0, 0.0), pulse_t=pulse_t,
                              omega_tilde=w_tilde,
                              omega_alpha=0.01 / pulse_t, mass=mass)

    def one(v):
        if par == "delta_r_over_d":
            spec = spec_for(v, q_dot_d)
        else:
            spec = spec_for(float(p.get("delta_r_over_d", 0.05)), v)
        if method == "closed-form":
            return visibility_delta_limit(spec, model)
        return visibility_from_flux(spec, model)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        vis = list(pool.map(one, values))
    rows = np.column_stack([values, vis])
    meta = {"kind": "correlation", "method": method, "version": __version__,
            "sweep_parameter": par, "q_dot_d": q_dot_d, "k_tilde_d": k_tilde}
    return RunOutput(["param", "visibility"], rows, meta)


def run_scenario(cfg, threads=1):
    """Execute a validated ScenarioConfig; returns a RunOutput.

    `threads` only sizes the worker pool for sweep points; outputs are
    assembled in input order and are byte-identical for any pool size.
    """
    if cfg.kind == "two_bec":
        return _run_two_bec(cfg)
    if cfg.kind == "thermometry":
        return _run_thermometry(cfg, threads)
    if cfg.kind == "lattice":
        return _run_lattice(cfg, threads)
    if cfg.kind == "correlation":
        return _run_correlation(cfg, threads)
    raise ValueError("unknown scenario kind %r" % cfg.kind)
