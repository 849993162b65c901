"""Physical constants and the SI <-> internal unit conversion layer.

Internal units set hbar = m = 1 with a scenario-specific length scale L0
(the left condensate's x radius for the two-well scenarios, the lattice
period for the lattice scenario).  In these units the recoil velocity is
v_q = q and the recoil frequency is omega_q = q^2/2, which keeps every
quadrature variable at O(1)-O(100).
"""

from __future__ import annotations

from dataclasses import dataclass

HBAR = 1.054571817e-34       # J s
KB = 1.380649e-23            # J/K
AMU = 1.66053906892e-27      # kg
BOHR_RADIUS = 5.29177210544e-11  # m
ZETA3 = 1.2020569031595943

SODIUM_MASS = 22.98976928 * AMU
RUBIDIUM87_MASS = 86.909180531 * AMU


@dataclass(frozen=True)
class InternalUnits:
    """Conversion record for a given mass and length scale."""

    length: float  # m
    mass: float    # kg

    @property
    def time(self):
        return self.mass * self.length**2 / HBAR

    @property
    def energy(self):
        return HBAR / self.time

    # SI -> internal
    def length_in(self, x_m):
        return x_m / self.length

    def time_in(self, t_s):
        return t_s / self.time

    def frequency_in(self, w_rad_s):
        return w_rad_s * self.time

    def wavevector_in(self, k_per_m):
        return k_per_m * self.length

    def velocity_in(self, v_m_s):
        return v_m_s * self.time / self.length

    # internal -> SI
    def length_out(self, x):
        return x * self.length

    def time_out(self, t):
        return t * self.time

    def frequency_out(self, w):
        return w / self.time

    def wavevector_out(self, k):
        return k / self.length

    def velocity_out(self, v):
        return v * self.length / self.time
