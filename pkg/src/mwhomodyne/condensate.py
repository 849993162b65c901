"""Thomas-Fermi condensate descriptions.

Chemical potential, radii, real-space profile, the Bessel-form Fourier
transform, and the finite-temperature rescaling used for thermometry.
All quantities are SI; the flux engines nondimensionalize internally.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .specfun import j2_over_x2
from .units import HBAR, KB, ZETA3


class NoCondensateError(ValueError):
    """Raised when a rescaling is requested at or above T_c."""


@dataclass(frozen=True)
class TrapSpec:
    """Harmonic trap and atomic species parameters."""

    omega_x: float  # rad/s
    omega_y: float  # rad/s
    omega_z: float  # rad/s
    mass: float     # kg
    n_atoms: float
    a_s: float      # m

    def __post_init__(self):
        if min(self.omega_x, self.omega_y, self.omega_z) <= 0.0:
            raise ValueError("TrapSpec: trap frequencies must be > 0")
        if self.mass <= 0.0:
            raise ValueError("TrapSpec: mass must be > 0")
        if self.n_atoms < 1:
            raise ValueError("TrapSpec: n_atoms must be >= 1")
        if self.a_s <= 0.0:
            raise ValueError("TrapSpec: a_s must be > 0")

    @property
    def omega_bar(self):
        return (self.omega_x * self.omega_y * self.omega_z) ** (1.0 / 3.0)

    @property
    def a_bar(self):
        return np.sqrt(HBAR / (self.mass * self.omega_bar))

    @property
    def g(self):
        return 4.0 * np.pi * HBAR**2 * self.a_s / self.mass


@dataclass(frozen=True)
class TFProfile:
    """Thomas-Fermi condensate: mu, radii, Fourier amplitude, atom count."""

    mu: float          # J
    r_x: float         # m
    r_y: float         # m
    r_z: float         # m
    kappa0: float      # m^{3/2}
    n_condensed: float
    g: float           # J m^3

    @property
    def radii(self):
        return np.array([self.r_x, self.r_y, self.r_z])

    @property
    def is_spherical(self):
        r = self.radii
        return bool(np.all(np.abs(r - r[0]) <= 1e-12 * r[0]))

    def amplitude(self, x, y, z):
        """Real-space amplitude sqrt((mu - V)/g) inside the TF ellipsoid, else 0."""
        x, y, z = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float),
                                      np.asarray(z, float))
        u2 = (x / self.r_x) ** 2 + (y / self.r_y) ** 2 + (z / self.r_z) ** 2
        dens = np.maximum(self.mu * (1.0 - u2), 0.0) / self.g
        out = np.sqrt(dens)
        return out if out.ndim else float(out)


def chemical_potential_t0(trap, n_condensed=None):
    """Zero-temperature chemical potential (15 N a_s / a_bar)^{2/5} hbar wbar / 2."""
    n_c = trap.n_atoms if n_condensed is None else n_condensed
    return 0.5 * (15.0 * n_c * trap.a_s / trap.a_bar) ** 0.4 * HBAR * trap.omega_bar


def tf_profile(trap, n_condensed=None):
    """Thomas-Fermi profile of `n_condensed` atoms (defaults to all) in `trap`."""
    n_c = trap.n_atoms if n_condensed is None else float(n_condensed)
    mu = chemical_potential_t0(trap, n_c)
    rx = np.sqrt(2.0 * mu / (trap.mass * trap.omega_x**2))
    ry = np.sqrt(2.0 * mu / (trap.mass * trap.omega_y**2))
    rz = np.sqrt(2.0 * mu / (trap.mass * trap.omega_z**2))
    kappa0 = np.sqrt(15.0 * np.pi**3 * n_c * rx * ry * rz / 2.0)
    return TFProfile(mu=float(mu), r_x=float(rx), r_y=float(ry), r_z=float(rz),
                     kappa0=float(kappa0), n_condensed=n_c, g=trap.g)


def tf_fourier(k_vec, profile, signed=False):
    """Fourier amplitude kappa0 |J2(p0)|/p0^2 with p0^2 = sum (k_l r_l)^2.

    `k_vec` is a 3-vector or array of 3-vectors (last axis length 3), in
    1/m.  With signed=True the true (sign-carrying) transform is returned
    instead of the absolute-value form.
    """
    k = np.asarray(k_vec, dtype=np.float64)
    if k.shape[-1] != 3:
        raise ValueError("tf_fourier: k_vec must have last axis of length 3")
    p0 = np.sqrt((k[..., 0] * profile.r_x) ** 2 + (k[..., 1] * profile.r_y) ** 2
                 + (k[..., 2] * profile.r_z) ** 2)
    val = profile.kappa0 * j2_over_x2(p0)
    out = np.asarray(val if signed else np.abs(val))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ThermalState:
    """Finite-temperature state of one well."""

    T: float           # K
    T_c: float         # K
    n_c: float         # condensate fraction
    delta_mu_T: float  # (mu(0) - mu(T))/hbar >= 0, rad/s

    @classmethod
    def for_profile(cls, profile0, T, T_c):
        """Thermal state for a condensate whose T=0 profile is `profile0`."""
        nc = condensate_fraction(T, T_c)
        mu_t = profile0.mu * nc ** 0.4
        return cls(T=float(T), T_c=float(T_c), n_c=float(nc),
                   delta_mu_T=float((profile0.mu - mu_t) / HBAR))


def condensate_fraction(T, T_c):
    """Ideal-gas harmonic-trap condensate fraction 1 - (T/T_c)^3."""
    if T < 0.0 or T_c <= 0.0:
        raise ValueError("condensate_fraction: need T >= 0 and T_c > 0")
    if T > T_c:
        warnings.warn("condensate_fraction: T > T_c, returning 0", stacklevel=2)
        return 0.0
    return 1.0 - (T / T_c) ** 3


def critical_temperature(trap):
    """Ideal-gas critical temperature k_B T_c = hbar wbar (N/zeta(3))^{1/3}."""
    return HBAR * trap.omega_bar * (trap.n_atoms / ZETA3) ** (1.0 / 3.0) / KB


def thermal_rescale(profile0, thermal):
    """Profile at temperature T: mu and radii rescaled, kappa recomputed.

    mu(T) = mu(0) (1 - T^3/T_c^3)^{2/5}, r_l(T) = r_l(0) (...)^{1/5},
    N_C(T) = N n_C(T).
    """
    if thermal.T >= thermal.T_c:
        raise NoCondensateError("thermal_rescale: no condensate at T >= T_c")
    nc = 1.0 - (thermal.T / thermal.T_c) ** 3
    mu = profile0.mu * nc ** 0.4
    scale = nc ** 0.2
    rx, ry, rz = profile0.r_x * scale, profile0.r_y * scale, profile0.r_z * scale
    n_c = profile0.n_condensed * nc
    kappa = np.sqrt(15.0 * np.pi**3 * n_c * rx * ry * rz / 2.0)
    return TFProfile(mu=float(mu), r_x=float(rx), r_y=float(ry), r_z=float(rz),
                     kappa0=float(kappa), n_condensed=float(n_c), g=profile0.g)
