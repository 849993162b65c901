"""Single-site mean-field Bose-Hubbard solver and the lattice flux scenario.

The order parameter psi = <b> minimizes the decoupled single-site energy
E(psi) = eig0[-zJ psi (b^+ + b) + (U/2) n(n-1) - mu n] + zJ psi^2 over
psi >= 0, refined by damped self-consistent iteration.  The interference
flux of the slab/lattice pair is evaluated with the same finite-time
kernel route as the two-condensate case; it is strictly proportional to
psi, so parameter sweeps reuse one geometry factor.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadSpec, grid_for_phase
from .units import InternalUnits

FLUX_SPEC = QuadSpec(abs_tol=1e-12, rel_tol=1e-5, min_nodes_per_oscillation=8)


class TruncationSaturationError(RuntimeError):
    pass


@dataclass(frozen=True)
class BHParams:
    """Mean-field parameters in units of the onsite interaction U."""

    r: float            # z J / U
    mu_over_u: float
    n_max: int = 8
    tol: float = 1e-10

    def __post_init__(self):
        if self.r < 0.0:
            raise ValueError("BHParams: r must be >= 0")
        if self.n_max < 4:
            raise ValueError("BHParams: n_max must be >= 4")


@dataclass(frozen=True)
class MeanFieldSolution:
    psi: float
    energy: float   # per site, U units
    mean_n: float
    converged: bool


def _site_operators(n_max):
    n = np.arange(n_max + 1, dtype=np.float64)
    b = np.diag(np.sqrt(n[1:]), k=1)
    return n, b


def _ground_state(p, psi, n, b):
    h = np.diag(0.5 * n * (n - 1.0) - p.mu_over_u * n)
    h -= p.r * psi * (b + b.T)
    vals, vecs = np.linalg.eigh(h)
    return vals[0], vecs[:, 0]


def _energy(p, psi, n, b):
    e0, _ = _ground_state(p, psi, n, b)
    return e0 + p.r * psi * psi


def meanfield_solve(p):
    """Ground-state order parameter, energy and occupation for `p`.

    Golden-section minimization of the variational energy over
    psi in [0, sqrt(n_max)], then damped self-consistent refinement
    psi <- (psi + <b>)/2; ties within `tol` of the psi = 0 energy break
    to the Mott solution.
    """
    n, b = _site_operators(p.n_max)
    lo, hi = 0.0, math.sqrt(p.n_max)
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a, c = lo, hi
    x1 = c - gr * (c - a)
    x2 = a + gr * (c - a)
    f1, f2 = _energy(p, x1, n, b), _energy(p, x2, n, b)
    for _ in range(200):
        if c - a < 1e-12:
            break
        if f1 <= f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - gr * (c - a)
            f1 = _energy(p, x1, n, b)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + gr * (c - a)
            f2 = _energy(p, x2, n, b)
    psi = 0.5 * (a + c)

    converged = False
    for _ in range(500):
        _, vec = _ground_state(p, psi, n, b)
        b_mean = float(vec @ b @ vec)
        new = 0.5 * psi + 0.5 * b_mean
        if abs(new - psi) < p.tol:
            psi = new
            converged = True
            break
        psi = new
    psi = max(psi, 0.0)

    e_psi = _energy(p, psi, n, b)
    e_mott = _energy(p, 0.0, n, b)
    if abs(e_psi - e_mott) < p.tol or e_psi > e_mott:
        psi, e_psi = 0.0, e_mott
    _, vec = _ground_state(p, psi, n, b)
    mean_n = float(vec @ (np.arange(p.n_max + 1) * vec))
    if mean_n > p.n_max - 1.0:
        raise TruncationSaturationError(
            "meanfield_solve: mean occupation %.2f within 1 of n_max=%d"
            % (mean_n, p.n_max))
    return MeanFieldSolution(psi=float(psi), energy=float(e_psi),
                             mean_n=mean_n, converged=converged)


def lobe_boundary(mu_over_u, n0):
    """Second-order perturbative Mott-lobe boundary r_c(mu) for lobe n0.

    1/r_c = (n0+1)/(n0 - mu/U) + n0/(mu/U - n0 + 1).
    """
    if not (n0 - 1 < mu_over_u < n0):
        raise ValueError("lobe_boundary: mu/U must lie in (n0-1, n0)")
    inv = (n0 + 1.0) / (n0 - mu_over_u) + n0 / (mu_over_u - n0 + 1.0)
    return 1.0 / inv


def wannier_width(v0_over_er, d0):
    """Gaussian Wannier width a = (d0/pi) (E_R/V0)^{1/4} (harmonic well)."""
    if v0_over_er <= 1.0:
        raise ValueError("wannier_width: single-band ansatz needs V0 > E_R")
    return (d0 / math.pi) * v0_over_er ** -0.25


@dataclass(frozen=True)
class LatticeScenario:
    """Slab + 2D-lattice pair, separated along the tight (x) axis.

    Both systems share the harmonic ground state of width x0 along x and
    extend over m_sites * d0 in y and z; the lattice comb lives in the
    y-z plane.  Separation d and the recoil q point along x, so the
    outcoupled atoms cross the gap between the two pancakes (the printed
    oscillation phase k_x d refers to this axis).
    """

    m_sites: int
    d0: float            # lattice period (m)
    v0_over_er: float
    x0: float            # tight-axis ground width (m)
    d: float             # separation (m)
    q_mag: float         # 1/m
    omega_minus_wq: float  # rad/s
    delta_mu: float        # rad/s
    phi_lr: float
    n_left: float          # planar density of the slab condensate (1/m^2)
    mass: float            # kg

    def __post_init__(self):
        if self.m_sites < 2:
            raise ValueError("LatticeScenario: m_sites must be >= 2")
        for name in ("d0", "x0", "d", "q_mag", "mass"):
            if getattr(self, name) <= 0.0:
                raise ValueError("LatticeScenario: %s must be > 0" % name)

    @property
    def omega_r(self):
        """Lattice recoil frequency hbar pi^2/(2 m d0^2)."""
        from .units import HBAR
        return HBAR * math.pi**2 / (2.0 * self.mass * self.d0**2)


class _LatticeEngine:
    """tau-integral engine for the separable slab/lattice flux."""

    def __init__(self, s, spec=None):
        self.s = s
        self.spec = spec or FLUX_SPEC
        self.units = InternalUnits(length=s.d0, mass=s.mass)
        u = self.units
        self.q = u.wavevector_in(s.q_mag)
        self.v = self.q
        self.d = u.length_in(s.d)
        self.x0 = u.length_in(s.x0)
        self.a = u.length_in(wannier_width(s.v0_over_er, s.d0))
        self.m = s.m_sites
        self.omega_q = 0.5 * self.q**2
        self.w_det = u.frequency_in(s.omega_minus_wq)  # Omega - omega_q
        self.dmu = u.frequency_in(s.delta_mu)
        self.n_l = s.n_left * u.length**2  # atoms per d0^2
        # transverse k truncation: two comb orders past the Wannier falloff
        self.k_cut = min(2.0 * (2.0 * math.pi) + 2.0, 5.3 / self.a)

    def _transverse_factor(self, k):
        """box-FT(left) * Wannier-comb-FT(right) along one lattice axis."""
        m, a = self.m, self.a
        box = np.where(np.abs(k) < 1e-12, float(m),
                       2.0 * np.sin(0.5 * k * m) / np.where(np.abs(k) < 1e-12, 1.0, k))
        # centered M-site Dirichlet sum
        half = np.sin(0.5 * k)
        comb = np.where(np.abs(half) < 1e-12, float(m),
                        np.sin(0.5 * m * k) / np.where(np.abs(half) < 1e-12, 1.0, half))
        wann = (4.0 * np.pi * a * a) ** 0.25 * np.exp(-0.5 * (a * k) ** 2)
        return box * comb * wann

    def _i_transverse(self, tau):
        """I_yz(tau) = int dk boxW(k) e^{i k^2 tau/2}, on the shared k grid."""
        spec = self.spec
        rate = self.k_cut * max(float(tau[-1]), 1e-12) + 0.5 * self.m
        grid = grid_for_phase(-self.k_cut, self.k_cut, rate, spec)
        w = self._transverse_factor(grid.x)
        out = np.empty(len(tau), complex)
        chunk = max(1, int(4e6 // len(grid.x)))
        for lo in range(0, len(tau), chunk):
            sl = slice(lo, min(lo + chunk, len(tau)))
            phase = np.exp(0.5j * grid.x[None, :] ** 2 * tau[sl][:, None])
            out[sl] = grid.integrate(phase * w[None, :])
        return out

    def _i_axial(self, tau, beta):
        """Analytic x-axis factor int dk f0t(k)^2 e^{i k^2 tau/2 + i k beta}."""
        gamma = self.x0**2 - 0.5j * tau
        return (2.0 * math.sqrt(math.pi) * self.x0 * np.sqrt(np.pi / gamma)
                * np.exp(-0.25 * beta**2 / gamma))

    def unit_series(self, times_s):
        """Complex L->R and R->L terms for psi = 1, sqrt(n_l) absorbed.

        Returns (times_int, X1, X2) with fluxes in Gamma * M_total units
        after multiplying by psi and the phase factors.
        """
        u = self.units
        times_int = u.time_in(np.asarray(times_s, dtype=np.float64))
        if times_int.ndim != 1 or len(times_int) == 0 or np.any(np.diff(times_int) <= 0):
            raise ValueError("unit_series: strictly increasing, non-empty grid required")
        rate = (abs(self.w_det) + abs(self.dmu) + self.k_cut**2
                + 0.5 * self.v**2 + 2.0 / self.x0**2)
        edges = np.concatenate(([0.0], times_int)) if times_int[0] > 0.0 else times_int
        tg = grid_for_phase(edges[0], edges[-1], rate, self.spec, breakpoints=edges[1:-1])
        tau = tg.x

        i_yz = self._i_transverse(tau)
        pref = math.sqrt(self.n_l) / (2.0 * math.pi) ** 3 / (self.m ** 2)
        c_1 = pref * self._i_axial(tau, self.v * tau - self.d) * i_yz**2
        c_2 = pref * self._i_axial(tau, self.v * tau + self.d) * i_yz**2
        g_1 = np.exp(-1j * self.w_det * tau) * c_1
        g_2 = np.exp(1j * (-self.w_det + self.dmu) * tau) * c_2

        pv = np.stack([tg.panel_values(g) for g in (g_1, g_2)])
        cum = np.concatenate([np.zeros((2, 1), complex), np.cumsum(pv, axis=1)], axis=1)
        idx = np.searchsorted(tg.edges, times_int)
        return times_int, cum[0, idx], cum[1, idx]


def lattice_interference_flux(s, sol, t, spec=None):
    """Interference flux F_I(t) of the slab/lattice pair, Gamma M units.

    Strictly proportional to the order parameter sol.psi; zero in the
    Mott phase.
    """
    if not sol.converged and sol.psi > 0.0:
        warnings.warn("lattice_interference_flux: unconverged mean-field solution",
                      stacklevel=2)
    series = lattice_flux_series(s, sol, [t], spec=spec)
    return float(series[1][0])


def lattice_flux_series(s, sol, times_s, spec=None):
    """(times, F_I) for the scenario; F_I proportional to sol.psi exactly."""
    times_s = np.asarray(times_s, dtype=np.float64)
    if sol.psi == 0.0:
        return times_s, np.zeros(len(times_s))
    eng = _LatticeEngine(s, spec)
    t_int, x1, x2 = eng.unit_series(times_s)
    ph = np.exp(1j * (eng.dmu * t_int - s.phi_lr))
    f_unit = np.real(ph * x1) + np.real(np.conj(ph) * x2)
    return times_s, sol.psi * f_unit


def amplitude_vs_r(s, r_grid, mu_over_u, n_max=8, times_s=None, spec=None):
    """Oscillation amplitude C(r) = max(F_I) - min(F_I) across an r sweep.

    Returns (r, psi(r), C(r)).  One geometry factor is computed at
    psi = 1 and scaled, so C(r)/psi(r) is constant by construction.
    """
    r_grid = np.asarray(r_grid, dtype=np.float64)
    psis = np.array([meanfield_solve(BHParams(r=float(r), mu_over_u=mu_over_u,
                                              n_max=n_max)).psi
                     for r in r_grid])
    if times_s is None:
        u = InternalUnits(length=s.d0, mass=s.mass)
        period = 2.0 * math.pi / abs(u.frequency_in(s.delta_mu))
        t_on = u.length_in(s.d) / u.wavevector_in(s.q_mag)
        grid_int = np.linspace(1.2 * t_on, 1.2 * t_on + 5.0 * period, 400)
        times_s = u.time_out(grid_int)
    eng = _LatticeEngine(s, spec)
    t_int, x1, x2 = eng.unit_series(np.asarray(times_s, dtype=np.float64))
    ph = np.exp(1j * (eng.dmu * t_int - s.phi_lr))
    f_unit = np.real(ph * x1) + np.real(np.conj(ph) * x2)
    c_unit = float(f_unit.max() - f_unit.min())
    return r_grid, psis, psis * c_unit
