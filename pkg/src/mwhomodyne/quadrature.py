"""Deterministic adaptive quadrature (1D-3D) on Gauss-Kronrod panels.

Shared by the flux engines for node seeding and by the oracle/validation
checks.  Subdivision order and the final reduction order are fixed, so
results are bit-identical across runs and worker counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# 15-point Kronrod rule with embedded 7-point Gauss (abscissae on [-1, 1]).
_XGK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
# 7-point Gauss weights mapped onto the Kronrod node layout (odd indices).
_WG = np.zeros(15)
_WG[1::2] = [0.129484966168870, 0.279705391489277, 0.381830050505119,
             0.417959183673469, 0.381830050505119, 0.279705391489277,
             0.129484966168870]
# renormalize the truncated literals so constants integrate exactly
_WGK *= 2.0 / _WGK.sum()
_WG *= 2.0 / _WG.sum()

NODES_PER_PANEL = 15


@dataclass(frozen=True)
class QuadSpec:
    """Numeric controls for the integration engines."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000
    min_nodes_per_oscillation: int = 8
    eps_env: float = 1e-6  # envelope threshold for k-domain truncation

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValueError("QuadSpec: tolerances must be > 0")
        if self.min_nodes_per_oscillation < 4:
            raise ValueError("QuadSpec: min_nodes_per_oscillation >= 4 required")


@dataclass(frozen=True)
class QuadResult:
    value: complex
    err_estimate: float
    evaluations: int
    converged: bool


def oscillation_nodes(phase_span, spec):
    """Node count needed to resolve `phase_span` radians of oscillation."""
    if phase_span < 0.0:
        raise ValueError("oscillation_nodes: phase_span must be >= 0")
    n = math.ceil(phase_span / (2.0 * np.pi)) * spec.min_nodes_per_oscillation
    return max(spec.min_nodes_per_oscillation, n)


class CompositeGrid:
    """Fixed composite Gauss-Kronrod grid over consecutive panels.

    Holds flat node/weight arrays; `integrate` contracts sampled values
    (vectorized over leading axes) against the Kronrod weights and
    `error` returns the summed |Kronrod - Gauss| panel differences.
    """

    def __init__(self, edges):
        edges = np.asarray(edges, dtype=np.float64)
        if edges.ndim != 1 or len(edges) < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("CompositeGrid: edges must be strictly increasing")
        self.edges = edges
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        self.x = (mid[:, None] + half[:, None] * _XGK[None, :]).ravel()
        self.w = (half[:, None] * _WGK[None, :]).ravel()
        self.w_gauss = (half[:, None] * _WG[None, :]).ravel()
        self.n_panels = len(half)

    def integrate(self, fx):
        return np.asarray(fx) @ self.w

    def error(self, fx):
        fx = np.asarray(fx)
        diff = fx * (self.w - self.w_gauss)
        per_panel = diff.reshape(fx.shape[:-1] + (self.n_panels, NODES_PER_PANEL)).sum(axis=-1)
        return np.abs(per_panel).sum(axis=-1)

    def panel_values(self, fx):
        fx = np.asarray(fx)
        shaped = (fx * self.w).reshape(fx.shape[:-1] + (self.n_panels, NODES_PER_PANEL))
        return shaped.sum(axis=-1)

    def panel_errors(self, fx):
        fx = np.asarray(fx)
        diff = fx * (self.w - self.w_gauss)
        per_panel = diff.reshape(fx.shape[:-1] + (self.n_panels, NODES_PER_PANEL)).sum(axis=-1)
        return np.abs(per_panel)


def grid_for_phase(a, b, phase_rate, spec, breakpoints=()):
    """Composite grid on [a, b] dense enough for |d(phase)/dx| <= phase_rate."""
    pts = sorted({float(a), float(b), *(float(p) for p in breakpoints if a < p < b)})
    edges = [pts[0]]
    for left, right in zip(pts[:-1], pts[1:]):
        span = (right - left) * max(phase_rate, 0.0)
        n_nodes = oscillation_nodes(span, spec)
        n_panels = max(1, math.ceil(n_nodes / NODES_PER_PANEL))
        edges.extend(np.linspace(left, right, n_panels + 1)[1:])
    return CompositeGrid(np.array(edges))


def _panel_rule(f, a, b):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _XGK
    fx = np.asarray(f(x))
    ik = half * (fx @ _WGK)
    ig = half * (fx @ _WG)
    return ik, abs(ik - ig)


def integrate_1d(f, a, b, spec=None):
    """Adaptive Gauss-Kronrod integration of a vectorized integrand on [a, b].

    `f` must accept an ndarray of abscissae and return values of the same
    shape (real or complex).  Panels failing the local tolerance are
    bisected, left to right, until convergence or `max_subdivisions`.
    """
    spec = spec or QuadSpec()
    if not (b > a):
        raise ValueError("integrate_1d: requires a < b")
    width = b - a
    panels = [(float(a), float(b))]
    values = {}
    errors = {}
    evaluations = 0
    splits = 0

    def visit(seg):
        nonlocal evaluations
        if seg not in values:
            ik, err = _panel_rule(f, seg[0], seg[1])
            values[seg] = ik
            errors[seg] = err
            evaluations += NODES_PER_PANEL

    visit(panels[0])
    while True:
        total = sum(values[s] for s in panels)
        tol = max(spec.abs_tol, spec.rel_tol * abs(total))
        bad = [s for s in panels if errors[s] > tol * (s[1] - s[0]) / width]
        if not bad or splits >= spec.max_subdivisions:
            break
        new_panels = []
        for seg in panels:
            if seg in set(bad) and splits < spec.max_subdivisions:
                mid = 0.5 * (seg[0] + seg[1])
                left, right = (seg[0], mid), (mid, seg[1])
                visit(left)
                visit(right)
                new_panels.extend([left, right])
                splits += 1
            else:
                new_panels.append(seg)
        panels = new_panels

    value = sum(values[s] for s in panels)
    err = float(sum(errors[s] for s in panels))
    converged = err <= max(spec.abs_tol, spec.rel_tol * abs(value))
    if np.iscomplexobj(value) or isinstance(value, complex):
        value = complex(value)
    else:
        value = float(value)
    return QuadResult(value, err, evaluations, bool(converged))


def integrate_nd(f, box, spec=None):
    """Nested adaptive integration over a 2- or 3-dimensional box.

    `box` is a sequence of (lo, hi) pairs.  The integrand is called as
    f(x1, ..., xN) with the innermost argument vectorized (ndarray) and
    the outer arguments scalar.
    """
    spec = spec or QuadSpec()
    box = [tuple(map(float, b)) for b in box]
    if len(box) not in (2, 3):
        raise ValueError("integrate_nd: only 2 or 3 dimensions supported")
    evaluations = 0
    worst_err = 0.0
    all_converged = True
    inner_spec = replace(spec, abs_tol=spec.abs_tol / 4.0, rel_tol=spec.rel_tol / 4.0)

    def outer_integrand(xs):
        nonlocal evaluations, worst_err, all_converged
        out = np.empty(len(xs), dtype=np.complex128)
        for i, x in enumerate(xs):
            if len(box) == 2:
                r = integrate_1d(lambda y: f(x, y), box[1][0], box[1][1], inner_spec)
            else:
                r = integrate_nd(lambda y, z: f(x, y, z), box[1:], inner_spec)
            evaluations += r.evaluations
            worst_err = max(worst_err, r.err_estimate)
            all_converged = all_converged and r.converged
            out[i] = r.value
        return out

    res = integrate_1d(outer_integrand, box[0][0], box[0][1], spec)
    value = res.value
    if abs(np.imag(np.complex128(value))) == 0.0:
        value = float(np.real(np.complex128(value)))
    err = res.err_estimate + worst_err * (box[0][1] - box[0][0])
    converged = res.converged and all_converged
    return QuadResult(value, float(err), evaluations + res.evaluations, bool(converged))
