import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from specdisk import potentials as pt
from specdisk.errors import DomainError, TailError
from specdisk.potentials import PeriodicPotential


def trapezoid_coefficients(f, T, ks, n):
    """Composite trapezoid rule for (1/T) * int_0^T f(x) exp(-2 pi i k x / T) dx."""
    x = np.linspace(0.0, T, n + 1)
    fx = f(x)
    out = []
    for k in ks:
        g = fx * np.exp(-2j * np.pi * k * x / T)
        out.append((0.5 * (g[0] + g[-1]) + g[1:-1].sum()) / n)
    return np.array(out)


def cn2_fourier(m, K, n):
    """Cosine coefficient of cos(n pi u / K) in cn^2(u, m), n >= 1, via the nome."""
    q = math.exp(-math.pi * special.ellipk(1.0 - m) / K)
    return 2.0 * math.pi**2 / (m * K * K) * n * q**n / (1.0 - q ** (2 * n))


def cn2_mean(m, K):
    return (special.ellipe(m) / K - (1.0 - m)) / m


# --- mKdV ---------------------------------------------------------------------


def test_mkdv_constants():
    pot, c_eff = pt.build_potential(pt.MKdVCnoidal(A=1.0, m=0.5), M=32)
    assert 1.36 <= abs(c_eff) <= 1.38
    assert 1.61 <= pot.l1_no_mean <= 1.65
    assert pot.mean == 0.0
    assert pot.period == pytest.approx(7.416, abs=5e-4)


@pytest.mark.parametrize("A,m", [(1.0, 0.5), (1.3, 0.8), (0.7, 0.2)])
def test_mkdv_against_cn2_series(A, m):
    # Q = -3 phi^2 = -6 m A^2 cn^2(A x); only even modes of the 4K/A period occur
    params = pt.MKdVCnoidal(A=A, m=m)
    pot, c_eff = pt.build_potential(params, M=48)
    K = special.ellipk(m)
    assert c_eff == pytest.approx((2 * m - 1) * A**2 - 6 * m * A**2 * cn2_mean(m, K), abs=1e-12)
    for n in range(1, 12):
        expect = -6 * m * A**2 * 0.5 * cn2_fourier(m, K, n)
        assert pot.coefficient(2 * n) == pytest.approx(expect, abs=1e-12)
        assert abs(pot.coefficient(2 * n - 1)) < 1e-13


# --- BBM ----------------------------------------------------------------------


def test_bbm_constants():
    pot, c = pt.build_potential(pt.BBMCnoidal(m=0.75))
    assert abs(pot.period - 6.0996) < 1e-3
    assert pot.period == pytest.approx(2 * math.sqrt(2) * special.ellipk(0.75), rel=1e-14)
    assert abs(pot.l1_with_mean - 9.0) < 1e-6
    assert c == 2.0


def test_bbm_single_sign():
    pot, _ = pt.build_potential(pt.BBMCnoidal(m=0.75))
    c = pot.coefficients.real
    big = np.abs(c) > 1e-14
    assert np.all(c[big] < 0)
    # all coefficients share a sign, so the l1 norm is |Q| at the crest
    assert pot.l1_with_mean == pytest.approx(abs(pot.evaluate(0.0)), rel=1e-12)


@pytest.mark.parametrize("m", [0.5, 0.3, 1.0, 1.2])
def test_bbm_domain(m):
    with pytest.raises(DomainError):
        pt.BBMCnoidal(m=m)


# --- quadrature oracle for every family ---------------------------------------


FAMILY_PARAMS = [
    pt.MKdVCnoidal(1.0, 0.5),
    pt.BBMCnoidal(0.75),
    pt.KawaharaCnQuartic(2.0, 0.25, 0.6185, 0.659, 2.306, -2.51),
]


@pytest.mark.parametrize("params", FAMILY_PARAMS, ids=lambda p: p.family_name)
def test_coefficients_match_trapezoid(params):
    pot, _ = pt.build_potential(params)
    ks = np.arange(-pot.M, pot.M + 1)
    oracle = trapezoid_coefficients(params.potential_function, params.period, ks, 10 * 8 * pot.M)
    got = pot.coefficients.copy()
    if isinstance(params, pt.MKdVCnoidal):
        got[pot.M] += oracle[pot.M]  # the mean was moved into c
    assert np.max(np.abs(got - oracle)) <= 1e-8


# --- Benjamin-Ono -------------------------------------------------------------


BO_CASES = [(2.0, 2 * math.pi * 1.1), (5.0, 3.0), (10.0, 2.0)]


def bo_series(c, T, tol=1e-18):
    total = pt.bo_fourier_coefficient(c, T, 0)
    k = 1
    while True:
        term = pt.bo_fourier_coefficient(c, T, k)
        total += 2 * term
        if term < tol * total:
            return total
        k += 1


@pytest.mark.parametrize("c,T", BO_CASES)
def test_bo_norm_equals_series(c, T):
    assert abs(pt.bo_l1_norm(c, T) - bo_series(c, T)) <= 1e-10 * bo_series(c, T)


def test_bo_norm_large_cT():
    c, T = 100.0 / (2 * math.pi), 2 * math.pi  # c T = 100
    assert pt.bo_l1_norm(c, T) == pytest.approx(bo_series(c, T), rel=1e-10)


def test_bo_norm_near_boundary():
    c, T = 1.0 + 1e-6, 2 * math.pi
    val = pt.bo_l1_norm(c, T)
    assert np.isfinite(val) and val > 1.0
    assert val == pytest.approx(bo_series(c, T), rel=1e-6)


@pytest.mark.parametrize("c,T", BO_CASES)
def test_bo_coefficients_match_quadrature(c, T):
    p = pt.BORational(c, T)
    for k in range(0, 21):
        f = lambda x: p.profile(x) * math.cos(2 * math.pi * k * x / T)
        quad = integrate.quad(f, 0.0, T, epsabs=1e-13, epsrel=1e-12, limit=400)[0] / T
        assert pt.bo_fourier_coefficient(c, T, k) == pytest.approx(quad, abs=1e-10)


@given(st.floats(1.05, 20.0), st.floats(1.0, 20.0), st.integers(0, 30))
def test_bo_even_and_geometric(ratio, T, k):
    c = ratio * 2 * math.pi / T
    B = math.sqrt(1 - 4 * math.pi**2 / (T**2 * c**2))
    q = (1 - math.sqrt(1 - B * B)) / B
    a = pt.bo_fourier_coefficient(c, T, k)
    assert a == pt.bo_fourier_coefficient(c, T, -k)
    nxt = pt.bo_fourier_coefficient(c, T, k + 1)
    if a > 1e-250:
        assert nxt / a == pytest.approx(q, rel=1e-9)


@pytest.mark.parametrize("c,T", [(1.0, 2 * math.pi), (1.0, 1.0), (-1.0, 10.0)])
def test_bo_domain(c, T):
    with pytest.raises(DomainError):
        pt.bo_fourier_coefficient(c, T, 0)
    with pytest.raises(DomainError):
        pt.bo_l1_norm(c, T)


def test_bo_potential_is_minus_phi():
    pot, c = pt.build_potential(pt.BORational(2.0, 2 * math.pi * 1.1))
    assert c == 2.0
    assert pot.coefficient(3) == pytest.approx(-pt.bo_fourier_coefficient(2.0, 2 * math.pi * 1.1, 3))


# --- truncation control -------------------------------------------------------


def test_tail_error_when_truncated_too_early():
    with pytest.raises(TailError):
        pt.build_potential(pt.BORational(2.0, 2 * math.pi * 1.1), M=16)


def test_minimum_order():
    with pytest.raises(ValueError):
        pt.build_potential(pt.MKdVCnoidal(), M=8)


def test_auto_order_converges():
    pot, _ = pt.build_potential(pt.BORational(2.0, 2 * math.pi * 1.1))
    assert pot.M >= 32
    assert abs(pot.coefficients[0]) <= 1e-10 * np.abs(pot.coefficients).max()


def test_exact_polynomial_skips_tail_check():
    with pytest.raises(TailError):
        PeriodicPotential(1.0, [1.0, 0.0, 1.0])
    assert PeriodicPotential(1.0, [1.0, 0.0, 1.0], exact=True).l1_with_mean == 2.0


# --- invariants ----------------------------------------------------------------


ALL_PARAMS = FAMILY_PARAMS + [pt.BORational(2.0, 2 * math.pi * 1.1)]


@pytest.mark.parametrize("params", ALL_PARAMS, ids=lambda p: p.family_name)
def test_reality_and_symmetry(params):
    pot, _ = pt.build_potential(params)
    c = pot.coefficients
    assert np.array_equal(c[::-1], np.conj(c))
    x = np.linspace(0, pot.period, 301)
    assert np.max(np.abs(pot.evaluate(x).imag)) <= 1e-10
    assert pot.l1_no_mean == pytest.approx(pot.l1_with_mean - abs(pot.mean), abs=1e-14)


@pytest.mark.parametrize("params", ALL_PARAMS, ids=lambda p: p.family_name)
def test_parseval(params):
    pot, _ = pt.build_potential(params)
    n = 16 * pot.M
    x = np.arange(n) * pot.period / n
    q = pot.evaluate(x).real
    assert np.sum(np.abs(pot.coefficients) ** 2) == pytest.approx(np.mean(q * q), rel=1e-8)


@given(st.floats(0.05, 0.95), st.floats(0.3, 2.0))
def test_mkdv_family_properties(m, A):
    pot, _ = pt.build_potential(pt.MKdVCnoidal(A=A, m=m))
    assert pot.mean == 0.0
    assert np.max(np.abs(pot.coefficients.imag)) < 1e-12 * pot.l1_with_mean
    tail = max(abs(pot.coefficients[0]), abs(pot.coefficients[1]))
    assert tail <= 1e-10 * np.abs(pot.coefficients).max()


def test_from_samples_needs_enough_points():
    with pytest.raises(ValueError):
        PeriodicPotential.from_samples(np.ones(10), 1.0, 16)


# --- Kawahara -----------------------------------------------------------------


def test_residual_trivial_profiles():
    zero = pt.KawaharaCnQuartic(2.0, 0.3, 0.5, 0.0, 0.0, 0.0)
    const = pt.KawaharaCnQuartic(2.0, 0.3, 0.5, 3.0, 0.0, 0.0)
    assert pt.stationary_residual(zero) == 0.0
    assert pt.stationary_residual(const) <= 1e-12


def test_residual_grid_minimum():
    with pytest.raises(ValueError):
        pt.stationary_residual(FAMILY_PARAMS[2], grid_n=128)


def test_fitted_sigma_small_residual():
    amps = pt.KAWAHARA_EXAMPLE_AMPLITUDES
    fit = pt.fit_kawahara_sigma(**amps)
    u = fit.profile(np.linspace(0, fit.period, 2048))
    assert pt.stationary_residual(fit) < 1e-2 * np.max(np.abs(u))
    # brute-force scan of the residual brackets the fitted sigma
    grid = np.linspace(0.2, 0.3, 1001)
    res = [pt.stationary_residual(pt.KawaharaCnQuartic(sigma=s, **amps)) for s in grid]
    assert abs(grid[int(np.argmin(res))] - fit.sigma) <= 2e-4


def test_alpha_over_sigma_squared_constraint(kawahara_params):
    assert abs(kawahara_params.alpha / kawahara_params.sigma**2) < 52


def test_polished_profile_is_stationary(kawahara_params):
    assert pt.stationary_residual(kawahara_params) < 1e-6
    amps = pt.KAWAHARA_EXAMPLE_AMPLITUDES
    assert kawahara_params.A1 == pytest.approx(amps["A1"], abs=5e-3)
    assert kawahara_params.A2 == pytest.approx(amps["A2"], abs=5e-3)
    assert kawahara_params.A3 == pytest.approx(amps["A3"], abs=5e-3)


def test_residual_rejects_other_families():
    with pytest.raises(TypeError):
        pt.stationary_residual(pt.MKdVCnoidal())


def test_make_problem_modes(mkdv, bbm, kawahara, bo):
    assert mkdv.mean_mode.value == "absorbed"
    assert bbm.mean_mode.value == "radius"
    assert kawahara.mean_mode.value == "diagonal"
    assert bo.mean_mode.value == "radius"
