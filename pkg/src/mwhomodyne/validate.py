"""Cross-module oracle suite behind the `validate` CLI command.

Each check compares an implementation value against an independent route
(brute-force Fourier transform, frozen sine-integral constant, analytic
overlap value, perturbative lobe boundary).  Fault-injection offsets let
the tests confirm each check actually bites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import condensate, specfun
from .approx import g_of_z
from .bosehubbard import BHParams, lobe_boundary, meanfield_solve
from .quadrature import QuadSpec, integrate_1d
from .units import SODIUM_MASS, BOHR_RADIUS

# (2/pi) Si(200): value of the diffraction-kernel integral over the
# +-400/t window (computed once with a high-precision sine integral)
SI_WINDOW_VALUE = 0.99846320785562800


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    expected: float
    tol: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return "%-28s %s  measured=%.12g expected=%.12g tol=%.1g" % (
            self.name, status, self.measured, self.expected, self.tol)


def _parseval_check(trap, label):
    profile = condensate.tf_profile(trap)
    # k-space norm via the 1D radial reduction of |f0~|^2 (uses bessel_j2)
    r3 = profile.r_x * profile.r_y * profile.r_z
    spec = QuadSpec(abs_tol=1e-12, rel_tol=1e-9, max_subdivisions=4000)
    res = integrate_1d(lambda u: specfun.j2_over_x2(u) ** 2 * u * u, 1e-9, 400.0, spec)
    norm_k = profile.kappa0**2 / (2.0 * math.pi**2 * r3) * float(np.real(res.value))
    return CheckResult("parseval_" + label,
                       abs(norm_k / profile.n_condensed - 1.0) <= 1e-3,
                       norm_k, profile.n_condensed, 1e-3)


def _fourier_bruteforce_check(trap):
    """f0~(k) against a sine-transform oracle at sample wavevectors."""
    profile = condensate.tf_profile(trap)
    worst = 0.0
    spec = QuadSpec(abs_tol=1e-10, rel_tol=1e-9, max_subdivisions=2000)
    for kvec in ([0.4, 0.0, 0.0], [0.0, 1.1, 0.3], [0.9, 0.8, 0.7],
                 [2.0, 0.0, 1.0], [0.2, 0.2, 0.2]):
        k = np.array(kvec) / profile.r_x
        p0 = float(np.sqrt(np.sum((k * profile.radii) ** 2)))
        # oracle: scaled unit ball, 1D sine transform (no Bessel functions)
        amp = math.sqrt(profile.mu / profile.g) * profile.r_x * profile.r_y * profile.r_z

        def radial(u, p0=p0):
            return u * np.sin(p0 * u) * np.sqrt(np.maximum(1.0 - u * u, 0.0))

        res = integrate_1d(radial, 0.0, 1.0, spec)
        oracle = amp * 4.0 * math.pi / p0 * float(np.real(res.value))
        ours = condensate.tf_fourier(k, profile, signed=True)
        worst = max(worst, abs(ours / oracle - 1.0))
    return CheckResult("fourier_bruteforce", worst <= 1e-3, worst, 0.0, 1e-3)


def _g0_check():
    measured = g_of_z(0.0)
    return CheckResult("overlap_g_at_0", abs(measured - 4.0 / 15.0) <= 1e-10,
                       measured, 4.0 / 15.0, 1e-10)


def _diffraction_norm_check():
    t = 0.731
    w = 400.0 / t
    spec = QuadSpec(abs_tol=1e-10, rel_tol=1e-9, max_subdivisions=6000)
    res = integrate_1d(lambda x: specfun.diffraction(x, t), -w, w, spec)
    measured = float(np.real(res.value))
    return CheckResult("diffraction_window", abs(measured - SI_WINDOW_VALUE) <= 1e-6,
                       measured, SI_WINDOW_VALUE, 1e-6)


def _lobe_check(lobe_offset=0.0):
    mu = math.sqrt(2.0) - 1.0
    rc = lobe_boundary(mu, 1) + lobe_offset
    lo, hi = 0.05, 0.30
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if meanfield_solve(BHParams(r=mid, mu_over_u=mu)).psi > 1e-6:
            hi = mid
        else:
            lo = mid
    measured = 0.5 * (lo + hi)
    return CheckResult("bose_hubbard_lobe", abs(measured - rc) <= 1e-3, measured, rc, 1e-3)


def validate(j2_offset=0.0, lobe_offset=0.0):
    """Run every oracle check; returns a list of CheckResult.

    The offsets are fault-injection hooks: a nonzero `j2_offset` biases
    the Bessel evaluation (the Parseval and Fourier checks must then
    fail), `lobe_offset` biases the perturbative boundary.
    """
    trap_iso = condensate.TrapSpec(2 * math.pi * 325.0, 2 * math.pi * 325.0,
                                   2 * math.pi * 325.0, SODIUM_MASS, 1e6,
                                   55 * BOHR_RADIUS)
    trap_a = condensate.TrapSpec(2 * math.pi * 200.0, 2 * math.pi * 320.0,
                                 2 * math.pi * 500.0, SODIUM_MASS, 5e5,
                                 55 * BOHR_RADIUS)
    trap_b = condensate.TrapSpec(2 * math.pi * 90.0, 2 * math.pi * 90.0,
                                 2 * math.pi * 700.0, SODIUM_MASS, 2e6,
                                 60 * BOHR_RADIUS)
    results = []
    with specfun.j2_perturbation(j2_offset):
        results.append(_parseval_check(trap_iso, "spherical"))
        results.append(_parseval_check(trap_a, "prolate"))
        results.append(_parseval_check(trap_b, "pancake"))
        results.append(_fourier_bruteforce_check(trap_iso))
    results.append(_g0_check())
    results.append(_diffraction_norm_check())
    results.append(_lobe_check(lobe_offset))
    return results
