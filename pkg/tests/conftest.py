import numpy as np
import pytest

from mwhomodyne.condensate import TrapSpec
from mwhomodyne.twobec import TwoBecScenario, default_time_grid, flux_series
from mwhomodyne.units import BOHR_RADIUS, SODIUM_MASS


@pytest.fixture(scope="session")
def fig2_trap():
    # 10^6 sodium atoms, spherical trap omega = 2 pi 325 rad/s, a_s = 55 a0
    return TrapSpec(omega_x=2 * np.pi * 325.0, omega_y=2 * np.pi * 325.0,
                    omega_z=2 * np.pi * 325.0, mass=SODIUM_MASS,
                    n_atoms=1e6, a_s=55 * BOHR_RADIUS)


@pytest.fixture(scope="session")
def fig2_scenario(fig2_trap):
    # v_q = 6 cm/s, delta mu = 2 pi kHz, d = 5 r_x, Omega = omega_q, alpha = 0
    return TwoBecScenario.symmetric(fig2_trap, d_over_rx=5.0, v_q=0.06,
                                    delta_mu=2 * np.pi * 1e3)


@pytest.fixture(scope="session")
def fig2_series(fig2_scenario):
    times = default_time_grid(fig2_scenario, n_periods=6.0, n_points=600)
    return flux_series(fig2_scenario, times)


def zero_crossing_period(times, values):
    """Mean oscillation period from linear-interpolated zero crossings."""
    v = np.asarray(values) - np.mean(values)
    sign = np.sign(v)
    idx = np.where(np.diff(sign) != 0)[0]
    t = np.asarray(times)
    crossings = t[idx] - v[idx] * (t[idx + 1] - t[idx]) / (v[idx + 1] - v[idx])
    if len(crossings) < 3:
        raise ValueError("not enough zero crossings")
    return 2.0 * float(np.mean(np.diff(crossings)))
