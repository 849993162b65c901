"""Scenario configuration: JSON documents with explicit unit-suffixed keys.

A config carries a top-level "kind" discriminator; every physical
quantity names its unit in the key (e.g. "d_m", "delta_mu_rad_per_s") so
the Hz/(rad/s) ambiguity cannot leak in silently.  Validation collects
every violation, not just the first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

KINDS = ("two_bec", "thermometry", "lattice", "correlation")


class ConfigError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n" + "\n".join(
            "  - %s" % v for v in self.violations))


@dataclass
class ScenarioConfig:
    kind: str
    params: dict
    numerics: dict = field(default_factory=dict)
    out_path: str | None = None


_TRAP_DEFAULTS = {
    "mass_kg": None, "n_atoms": None, "a_s_m": None,
}


def _check_positive(errors, data, key, prefix=""):
    v = data.get(key)
    if v is None:
        errors.append("%s%s: required" % (prefix, key))
        return None
    if not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
        errors.append("%s%s: must be a positive finite number" % (prefix, key))
        return None
    return float(v)


def _check_number(errors, data, key, default=None, prefix=""):
    v = data.get(key, default)
    if v is None:
        errors.append("%s%s: required" % (prefix, key))
        return None
    if not isinstance(v, (int, float)) or not math.isfinite(v):
        errors.append("%s%s: must be a finite number" % (prefix, key))
        return None
    return float(v)


def _trap_frequencies(errors, trap, prefix):
    """Angular frequencies from *_rad_per_s or *_hz keys (hz multiplied by 2 pi)."""
    out = {}
    for axis in ("x", "y", "z"):
        k_rad = "omega_%s_rad_per_s" % axis
        k_hz = "omega_%s_hz" % axis
        if k_rad in trap and k_hz in trap:
            errors.append("%s: give %s or %s, not both" % (prefix, k_rad, k_hz))
        elif k_rad in trap:
            out[axis] = _check_positive(errors, trap, k_rad, prefix + ".")
        elif k_hz in trap:
            v = _check_positive(errors, trap, k_hz, prefix + ".")
            out[axis] = None if v is None else 2.0 * math.pi * v
        else:
            errors.append("%s: missing %s (or %s)" % (prefix, k_rad, k_hz))
    return out


def _validate_trap(errors, params, prefix="trap"):
    trap = params.get("trap")
    if not isinstance(trap, dict):
        errors.append("%s: required object" % prefix)
        return
    _trap_frequencies(errors, trap, prefix)
    for key in ("mass_kg", "n_atoms", "a_s_m"):
        _check_positive(errors, trap, key, prefix + ".")


def _validate_two_bec(errors, params, kind):
    _validate_trap(errors, params)
    _check_positive(errors, params, "d_over_rx")
    _check_positive(errors, params, "v_q_m_per_s")
    _check_number(errors, params, "delta_mu_rad_per_s")
    _check_number(errors, params, "alpha_rad", default=0.0)
    _check_number(errors, params, "omega_minus_wq_rad_per_s", default=0.0)
    _check_number(errors, params, "phi_lr_rad", default=0.0)
    times = params.get("times", {})
    if not isinstance(times, dict):
        errors.append("times: must be an object")
    else:
        _check_positive(errors, {"n_periods": times.get("n_periods", 6.0)}, "n_periods",
                        prefix="times.")
        n_pts = times.get("n_points", 600)
        if not isinstance(n_pts, int) or n_pts < 2:
            errors.append("times.n_points: must be an integer >= 2")
    if kind == "thermometry":
        grid = params.get("t_over_tc")
        if not isinstance(grid, list) or not grid or \
                any(not isinstance(x, (int, float)) or not 0 <= x < 1 for x in grid):
            errors.append("t_over_tc: must be a non-empty list of values in [0, 1)")


def _validate_lattice(errors, params):
    for key in ("d0_m", "x0_over_d0", "d_over_d0", "mass_kg", "n_left_per_d0sq"):
        _check_positive(errors, params, key)
    v0 = _check_positive(errors, params, "v0_over_er")
    if v0 is not None and v0 <= 1.0:
        errors.append("v0_over_er: must exceed 1 (single-band ansatz)")
    m_sites = params.get("m_sites", 50)
    if not isinstance(m_sites, int) or m_sites < 2:
        errors.append("m_sites: must be an integer >= 2")
    _check_number(errors, params, "delta_mu_over_wr")
    _check_number(errors, params, "omega_minus_wq_over_wr", default=1.0)
    _check_number(errors, params, "phi_lr_rad", default=0.0)
    mu = _check_number(errors, params, "mu_over_u")
    if mu is not None and not (0.0 < mu < 1.0):
        errors.append("mu_over_u: must lie in (0, 1) for the first Mott lobe")
    grid = params.get("r_grid")
    if not isinstance(grid, list) or not grid or \
            any(not isinstance(x, (int, float)) or x < 0 for x in grid):
        errors.append("r_grid: must be a non-empty list of values >= 0")


def _validate_correlation(errors, params):
    for key in ("d_m", "mass_kg", "coherence_length_m"):
        if key == "coherence_length_m" and params.get("model") != "thermal_gaussian":
            continue
        _check_positive(errors, params, key)
    model = params.get("model")
    if model not in ("uniform", "thermal_gaussian"):
        errors.append("model: must be 'uniform' or 'thermal_gaussian'")
    _check_positive(errors, params, "k_tilde_d")
    _check_number(errors, params, "q_dot_d", default=2.0 * math.pi)
    sweep = params.get("sweep", {})
    if not isinstance(sweep, dict):
        errors.append("sweep: must be an object")
    else:
        par = sweep.get("parameter", "delta_r_over_d")
        if par not in ("delta_r_over_d", "q_dot_d"):
            errors.append("sweep.parameter: must be 'delta_r_over_d' or 'q_dot_d'")
        vals = sweep.get("values", [0.1, 0.05, 0.025])
        if not isinstance(vals, list) or not vals:
            errors.append("sweep.values: must be a non-empty list")


def validate_config_dict(doc):
    """Full validation of a parsed config document; returns ScenarioConfig."""
    errors = []
    if not isinstance(doc, dict):
        raise ConfigError(["top level: must be a JSON object"])
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ConfigError(["kind: must be one of %s (got %r)" % (", ".join(KINDS), kind)])
    params = doc.get("params", {})
    if not isinstance(params, dict):
        errors.append("params: must be an object")
        params = {}
    if kind in ("two_bec", "thermometry"):
        _validate_two_bec(errors, params, kind)
    elif kind == "lattice":
        _validate_lattice(errors, params)
    else:
        _validate_correlation(errors, params)
    numerics = doc.get("numerics", {})
    if not isinstance(numerics, dict):
        errors.append("numerics: must be an object")
        numerics = {}
    for key in ("rel_tol", "abs_tol", "eps_env"):
        if key in numerics:
            v = numerics[key]
            if not isinstance(v, (int, float)) or v <= 0:
                errors.append("numerics.%s: must be > 0" % key)
    if "min_nodes_per_oscillation" in numerics:
        v = numerics["min_nodes_per_oscillation"]
        if not isinstance(v, int) or v < 4:
            errors.append("numerics.min_nodes_per_oscillation: integer >= 4 required")
    if errors:
        raise ConfigError(errors)
    return ScenarioConfig(kind=kind, params=params, numerics=numerics,
                          out_path=doc.get("out"))


def parse_config(path):
    """Load and validate a JSON scenario config file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(["not valid JSON: %s" % exc]) from exc
    return validate_config_dict(doc)
