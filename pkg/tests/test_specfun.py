import mpmath as mp
import numpy as np
import pytest

from mwhomodyne.quadrature import QuadSpec, integrate_1d
from mwhomodyne.specfun import (DiffractionSample, _SEAM, _besselj_asymptotic,
                                _besselj_series, bessel_j0, bessel_j1,
                                bessel_j2, diffraction, diffraction_phased,
                                gaussian_kernel)

# frozen oracle values (power-series oracle evaluated in mpmath)
J2_AT_0P1 = 0.0012489586587999188   # sum (-1)^k (x/2)^{2k+2}/(k!(k+2)!) at x=0.1
J2_FIRST_ZERO = 5.1356223018406826  # root of the series oracle
SI_WINDOW = 0.99846320785562800     # (2/pi) Si(200): integral over +-400/t


def oracle_j(nu, x):
    """Independent power-series oracle in arbitrary precision.

    The alternating terms peak near e^{x} in magnitude, so the working
    precision scales with x.
    """
    with mp.workdps(40 + int(0.5 * x)):
        xm = mp.mpf(x)
        total, term = mp.mpf(0), mp.mpf(0)
        for k in range(200 + 2 * int(x)):
            term = (-1) ** k * (xm / 2) ** (2 * k + nu) \
                / (mp.factorial(k) * mp.factorial(k + nu))
            total += term
        return float(total)


def test_j2_at_zero_is_exactly_zero():
    assert bessel_j2(0.0) == 0.0


def test_j2_small_argument_oracle():
    assert bessel_j2(0.1) == pytest.approx(J2_AT_0P1, abs=1e-12)


def test_j2_first_zero():
    assert abs(bessel_j2(5.135622)) < 1e-6
    assert abs(bessel_j2(J2_FIRST_ZERO)) < 1e-12


def test_j2_accuracy_to_200():
    xs = np.concatenate([np.linspace(0.05, 17.9, 41), np.linspace(18.0, 200.0, 47)])
    for x in xs:
        assert bessel_j2(float(x)) == pytest.approx(oracle_j(2, float(x)), abs=1e-12)


def test_j2_parity():
    xs = np.linspace(0.1, 150.0, 37)
    assert np.array_equal(bessel_j2(xs), bessel_j2(-xs))


def test_j2_branch_seam_agreement():
    # both branches evaluated at identical points around the seam
    for x in (0.97 * _SEAM, _SEAM, 1.03 * _SEAM):
        series = float(_besselj_series(2, np.array([x]))[0])
        asym = float(_besselj_asymptotic(2, np.array([x]))[0])
        assert abs(series - asym) < 1e-12


def test_recurrence_consistency():
    # J2 = (2/x) J1 - J0 against the independent series oracle for J0, J1
    for x in np.linspace(0.4, 50.0, 29):
        x = float(x)
        rhs = (2.0 / x) * oracle_j(1, x) - oracle_j(0, x)
        assert bessel_j2(x) == pytest.approx(rhs, abs=1e-10)
        assert bessel_j0(x) == pytest.approx(oracle_j(0, x), abs=1e-12)
        assert bessel_j1(x) == pytest.approx(oracle_j(1, x), abs=1e-12)


def test_j2_nonfinite_raises():
    with pytest.raises(ValueError):
        bessel_j2(np.nan)
    with pytest.raises(ValueError):
        bessel_j2(np.inf)


@pytest.mark.parametrize("t", [0.1, 0.731, 5.0])
def test_diffraction_at_zero_exact(t):
    assert diffraction(0.0, t) == t / (2.0 * np.pi)


def test_diffraction_zeros():
    t = 0.37
    for n in (1, 2, 5):
        assert abs(diffraction(2.0 * np.pi * n / t, t)) < 1e-15


def test_diffraction_bad_time():
    with pytest.raises(ValueError):
        diffraction(1.0, 0.0)
    with pytest.raises(ValueError):
        diffraction(1.0, -2.0)


def test_diffraction_window_integral_matches_sine_integral_oracle():
    # quadrature over the +-400/t window; the sine-integral limit value is
    # (2/pi) Si(200) = 0.99846..., i.e. 1 is approached only as the window
    # widens (the distance to 1 here is 1.54e-3)
    t = 0.731
    w = 400.0 / t
    spec = QuadSpec(abs_tol=1e-10, rel_tol=1e-10, max_subdivisions=6000)
    res = integrate_1d(lambda x: diffraction(x, t), -w, w, spec)
    assert res.converged
    assert np.real(res.value) == pytest.approx(SI_WINDOW, abs=1e-6)


def test_diffraction_widening_window_monotone():
    # at period-aligned windows (u = 2 pi n) the deviation from 1 decreases
    # monotonically; beyond u ~ 50 (window 100/t) it stays below 1.3e-2
    t = 1.0
    spec = QuadSpec(abs_tol=1e-10, rel_tol=1e-10, max_subdivisions=4000)
    devs = []
    for n in (8, 16, 32, 64, 160):
        w = 4.0 * np.pi * n / t  # u = w t/2 = 2 pi n
        res = integrate_1d(lambda x: diffraction(x, t), -w, w, spec)
        devs.append(abs(np.real(res.value) - 1.0))
    assert all(b < a for a, b in zip(devs, devs[1:]))
    assert devs[-1] < 1e-3


def test_diffraction_phased_properties():
    t = 0.52
    omegas = np.linspace(-40.0, 40.0, 201)
    assert np.allclose(np.abs(diffraction_phased(omegas, t)),
                       np.abs(diffraction(omegas, t)), atol=1e-15)
    assert diffraction_phased(0.0, t) == t / (2.0 * np.pi)
    w = np.pi / t  # omega t = pi
    val = diffraction_phased(w, t)
    assert abs(val) == pytest.approx(1.0 / (np.pi * w), rel=1e-12)
    assert np.angle(val) == pytest.approx(-np.pi / 2.0, abs=1e-12)
    w2 = 2.0 * np.pi / t
    assert abs(np.real(diffraction_phased(w2, t))) < 1e-15


def test_gaussian_kernel_values():
    t0 = 2.0
    assert gaussian_kernel(0.0, t0) == pytest.approx(t0 / np.sqrt(5.0 * np.pi), rel=1e-14)
    # exponent -1 at x = sqrt(5)/t0
    ratio = gaussian_kernel(np.sqrt(5.0) / t0, t0) / gaussian_kernel(0.0, t0)
    assert ratio == pytest.approx(np.exp(-1.0), rel=1e-12)
    with pytest.raises(ValueError):
        gaussian_kernel(1.0, 0.0)


def test_gaussian_kernel_normalization_and_variance():
    t0 = 0.73
    spec = QuadSpec(abs_tol=1e-12, rel_tol=1e-11)
    lim = 40.0 / t0
    norm = integrate_1d(lambda x: gaussian_kernel(x, t0), -lim, lim, spec)
    assert np.real(norm.value) == pytest.approx(1.0, abs=1e-8)
    var = integrate_1d(lambda x: x * x * gaussian_kernel(x, t0), -lim, lim, spec)
    assert np.real(var.value) == pytest.approx(2.5 / t0**2, rel=1e-8)


def test_gaussian_kernel_shape():
    t0 = 1.3
    xs = np.linspace(-10, 10, 401)
    k = gaussian_kernel(xs, t0)
    assert np.all(k > 0)
    assert np.allclose(k, k[::-1])
    peak = np.argmax(k)
    assert np.all(np.diff(k[:peak + 1]) > 0) and np.all(np.diff(k[peak:]) < 0)


def test_diffraction_sample_invariants():
    t = 0.41
    s0 = DiffractionSample.at(0.0, t)
    assert s0.value == t / (2.0 * np.pi)
    assert s0.value.imag == 0.0
    for w in (0.7, 3.3, 11.0):
        plus, minus = DiffractionSample.at(w, t), DiffractionSample.at(-w, t)
        assert abs(plus.value) == pytest.approx(abs(minus.value), rel=1e-13)
        mod = diffraction(w, t)
        if abs(mod) > 1e-300:
            phase_factor = plus.value / mod
            assert abs(phase_factor) == pytest.approx(1.0, rel=1e-12)
