import numpy as np
import pytest

from mwhomodyne.quadrature import (CompositeGrid, QuadSpec, grid_for_phase,
                                   integrate_1d, integrate_nd,
                                   oscillation_nodes)
from mwhomodyne.specfun import bessel_j2

# frozen oracle: int_0^50 J2(u)^2/u^2 du (tail-corrected high-precision value;
# differs from the full-range 4/(15 pi) by the residual tail ~6.5e-5)
J2_PARTIAL = 0.0848178237985731


def test_linear_exact():
    res = integrate_1d(lambda x: x, 0.0, 1.0)
    assert res.value == pytest.approx(0.5, abs=1e-15)
    assert res.converged


def test_gaussian_halfline():
    res = integrate_1d(lambda x: np.exp(-x * x), 0.0, 9.0,
                       QuadSpec(abs_tol=1e-13, rel_tol=1e-12))
    assert res.value == pytest.approx(np.sqrt(np.pi) / 2.0, abs=1e-10)


def test_bessel_weight_integral():
    spec = QuadSpec(abs_tol=1e-10, rel_tol=1e-8, max_subdivisions=4000)
    res = integrate_1d(lambda u: bessel_j2(u) ** 2 / u**2, 1e-12, 50.0, spec)
    assert res.converged
    assert np.real(res.value) == pytest.approx(J2_PARTIAL, abs=1e-8)
    assert np.real(res.value) == pytest.approx(4.0 / (15.0 * np.pi), abs=1e-4)


def test_box_3d():
    res = integrate_nd(lambda x, y, z: np.ones_like(z), [(-1, 1)] * 3)
    assert np.real(res.value) == pytest.approx(8.0, rel=1e-12)


def test_separable_gaussian_3d():
    spec = QuadSpec(abs_tol=1e-12, rel_tol=1e-10)
    res = integrate_nd(lambda x, y, z: np.exp(-(x * x + y * y + z * z)),
                       [(-6.5, 6.5)] * 3, spec)
    assert np.real(res.value) == pytest.approx(np.pi**1.5, abs=1e-8)


def test_plane_wave_gaussian_2d_forty_oscillations():
    # 40 oscillations per axis across the box; the analytic value
    # pi exp(-k^2/2) is ~1e-107, so this checks cancellation quality
    k = 2.0 * np.pi * 40.0 / 8.0
    spec = QuadSpec(abs_tol=1e-9, rel_tol=1e-7, max_subdivisions=4000)
    res = integrate_nd(lambda x, y: np.exp(1j * k * (x + y) - x * x - y * y),
                       [(-4.0, 4.0)] * 2, spec)
    exact = np.pi * np.exp(-k * k / 2.0)
    assert abs(res.value - exact) <= 1e-6


def test_plane_wave_gaussian_3d_mild():
    k = 4.4
    spec = QuadSpec(abs_tol=1e-10, rel_tol=1e-8)
    res = integrate_nd(lambda x, y, z: np.exp(1j * k * x) * np.exp(-(x * x + y * y + z * z)),
                       [(-5.0, 5.0)] * 3, spec)
    exact = np.pi**1.5 * np.exp(-k * k / 4.0)
    assert res.value == pytest.approx(exact, rel=1e-6)


def test_oscillation_nodes():
    spec = QuadSpec()
    assert oscillation_nodes(0.0, spec) == 8
    assert oscillation_nodes(2.0 * np.pi, spec) == 8
    assert oscillation_nodes(20.0 * np.pi, spec) == 80
    with pytest.raises(ValueError):
        oscillation_nodes(-1.0, spec)


def test_quadspec_invariants():
    with pytest.raises(ValueError):
        QuadSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadSpec(rel_tol=-1.0)
    with pytest.raises(ValueError):
        QuadSpec(min_nodes_per_oscillation=3)


def test_linearity_property():
    rng = np.random.default_rng(7)
    spec = QuadSpec(abs_tol=1e-12, rel_tol=1e-10)
    for _ in range(4):
        a, b = sorted(rng.uniform(-2, 2, 2))
        if b - a < 0.1:
            b = a + 0.5
        c1, c2 = rng.uniform(0.2, 3.0, 2)
        alpha, beta = rng.uniform(-2, 2, 2)

        def f(x, c1=c1):
            return np.exp(-c1 * x * x)

        def g(x, c2=c2):
            return np.cos(c2 * x)

        lhs = integrate_1d(lambda x: alpha * f(x) + beta * g(x), a, b, spec).value
        rhs = alpha * integrate_1d(f, a, b, spec).value \
            + beta * integrate_1d(g, a, b, spec).value
        assert lhs == pytest.approx(rhs, abs=2e-10)


def test_refinement_monotonicity():
    # tightening rel_tol never worsens the error on the analytic set
    cases = [
        (lambda x: np.exp(-x * x), 0.0, 6.0, np.sqrt(np.pi) / 2.0),
        (lambda x: np.cos(13.0 * x), 0.0, 2.0, np.sin(26.0) / 13.0),
        (lambda x: 1.0 / (1.0 + x * x), 0.0, 1.0, np.pi / 4.0),
    ]
    for f, a, b, exact in cases:
        errs = []
        for rel in (1e-4, 1e-5, 1e-6, 1e-7, 1e-8):
            res = integrate_1d(f, a, b, QuadSpec(abs_tol=1e-15, rel_tol=rel,
                                                 max_subdivisions=4000))
            errs.append(abs(res.value - exact))
        assert all(e2 <= e1 + 1e-15 for e1, e2 in zip(errs, errs[1:]))


def test_determinism():
    def f(x):
        return np.sin(37.0 * x) * np.exp(-0.1 * x)

    r1 = integrate_1d(f, 0.0, 11.0, QuadSpec(rel_tol=1e-10, abs_tol=1e-13))
    r2 = integrate_1d(f, 0.0, 11.0, QuadSpec(rel_tol=1e-10, abs_tol=1e-13))
    assert r1.value == r2.value
    assert r1.err_estimate == r2.err_estimate
    assert r1.evaluations == r2.evaluations


def test_nonconvergence_flagged():
    spec = QuadSpec(abs_tol=1e-16, rel_tol=1e-15, max_subdivisions=3)
    res = integrate_1d(lambda x: np.cos(200.0 * x), 0.0, 10.0, spec)
    assert not res.converged
    assert res.err_estimate > 0


def test_composite_grid_basics():
    grid = CompositeGrid(np.array([0.0, 0.5, 2.0]))
    fx = grid.x**3
    assert grid.integrate(fx) == pytest.approx(4.0, rel=1e-13)
    assert grid.error(fx) < 1e-12
    with pytest.raises(ValueError):
        CompositeGrid(np.array([0.0, 0.0, 1.0]))


def test_grid_for_phase_density():
    spec = QuadSpec()
    grid = grid_for_phase(0.0, 1.0, 40.0 * np.pi, spec, breakpoints=[0.37])
    # >= 8 nodes per 2 pi of phase and the breakpoint present among edges
    assert len(grid.x) >= 8 * 20
    assert np.any(np.isclose(grid.edges, 0.37))
