"""Matter-wave homodyne detection simulator.

Flux of photons/atoms outcoupled from two illuminated ultracold systems:
exact finite-time momentum integrals, closed-form approximations,
condensate thermometry, Mott-insulator/superfluid monitoring, and the
first-order-correlation readout.
"""

__version__ = "0.1.0"

from .condensate import (NoCondensateError, TFProfile, ThermalState, TrapSpec,
                         chemical_potential_t0, condensate_fraction,
                         critical_temperature, tf_fourier, tf_profile,
                         thermal_rescale)
from .quadrature import (QuadResult, QuadSpec, integrate_1d, integrate_nd,
                         oscillation_nodes)
from .specfun import (DiffractionSample, bessel_j0, bessel_j1, bessel_j2,
                      diffraction, diffraction_phased, gaussian_kernel)
from .twobec import (FluxSeries, TwoBecScenario, amplitude_C, background_flux,
                     default_time_grid, flux_series, interference_flux_exact,
                     interference_flux_thermal, onset_time)

__all__ = [
    "DiffractionSample", "FluxSeries", "NoCondensateError", "QuadResult",
    "QuadSpec", "TFProfile", "ThermalState", "TrapSpec", "TwoBecScenario",
    "amplitude_C", "background_flux", "bessel_j0", "bessel_j1", "bessel_j2",
    "chemical_potential_t0", "condensate_fraction", "critical_temperature",
    "default_time_grid", "diffraction", "diffraction_phased", "flux_series",
    "gaussian_kernel", "integrate_1d", "integrate_nd",
    "interference_flux_exact", "interference_flux_thermal",
    "onset_time", "oscillation_nodes", "tf_fourier", "tf_profile",
    "thermal_rescale",
]
