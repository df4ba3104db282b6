"""Periodic potentials of the traveling-wave families and their Fourier data.

Coefficients are obtained by sampling the physical potential on a uniform
grid and taking a discrete Fourier transform (spectrally accurate for the
analytic profiles used here).  The Benjamin-Ono potential uses its closed
form instead.

Sign conventions map each linearization in its usual form onto the canonical
problem of :mod:`specdisk.dispersion`:

* mKdV ``-lambda v = v_xxx - c v_x + (3 phi^2 v)_x`` becomes
  ``omega = kappa^3``, ``Q = -3 phi^2`` (mean removed) and
  ``c_eff = (2m-1) A^2 - mean(3 phi^2)``.
* BBM ``lambda v = c v_x + (1 - d_xx)^{-1} (Q v)_x`` is already canonical
  with ``c = 2`` (the normalized wave speed) and ``Q = u``.
* Kawahara ``lambda v = v_xxxxx + alpha v_xxx + (Q v)_x`` has
  ``omega = kappa^5 - alpha kappa^3``, ``c = 0`` and ``Q = u``.
* Benjamin-Ono ``lambda v = c v_x - Hv_xx - (Q v)_x`` (Hilbert symbol
  ``i sgn k``) has ``omega = kappa |kappa|`` and potential ``-phi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import optimize

from .dispersion import DispersionRelation, Family, MeanMode, SpectralProblem
from .elliptic import elliptic_K, jacobi_cn
from .errors import DomainError, TailError

TAIL_RTOL = 1e-10
MIN_ORDER = 16
MAX_AUTO_ORDER = 4096


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PeriodicPotential:
    """Truncated Fourier series ``Q(x) = sum_{|k|<=M} Q_k exp(2 pi i k x / T)``.

    ``coefficients[j]`` holds ``Q_{j-M}``.  Construction symmetrizes the
    coefficients so that ``Q_{-k} = conj(Q_k)`` holds exactly and refuses
    series whose tail has not decayed (:class:`TailError`), unless ``exact``
    declares the series an exact trigonometric polynomial.
    """

    period: float
    coefficients: np.ndarray
    exact: bool = False
    mean: float = field(init=False)
    l1_no_mean: float = field(init=False)
    l1_with_mean: float = field(init=False)

    def __post_init__(self):
        if not self.period > 0:
            raise DomainError("period must be positive")
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise ValueError("coefficients must be a 1-d array of odd length 2M+1")
        with np.errstate(over="ignore", invalid="ignore"):
            c = 0.5 * (c + np.conj(c[::-1]))
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite (and below overflow once symmetrized)")
        object.__setattr__(self, "coefficients", _readonly(c))
        M = self.M
        mean = float(c[M].real)
        l1 = float(np.abs(c).sum())
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "l1_with_mean", l1)
        object.__setattr__(self, "l1_no_mean", l1 - abs(mean))
        if not self.exact:
            self._check_tail()

    def _check_tail(self):
        c = np.abs(self.coefficients)
        scale = c.max(initial=0.0)
        M = self.M
        # even potentials on a doubled period have vanishing odd modes,
        # so the last two coefficients are checked together
        tail = max(c[0], c[-1], c[1] if M >= 1 else 0.0, c[-2] if M >= 1 else 0.0)
        if scale > 0 and tail > TAIL_RTOL * scale:
            raise TailError(
                f"|Q_M|/max|Q_k| = {tail / scale:.2e} exceeds {TAIL_RTOL:g} at M={M}; "
                "increase the truncation order"
            )

    @property
    def M(self) -> int:
        return (self.coefficients.size - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    def coefficient(self, k: int) -> complex:
        if abs(k) > self.M:
            return 0j
        return complex(self.coefficients[k + self.M])

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        phase = np.exp(2j * np.pi * np.multiply.outer(x, self.indices) / self.period)
        return phase @ self.coefficients

    def without_mean(self) -> "PeriodicPotential":
        c = np.array(self.coefficients)
        c[self.M] = 0.0
        return PeriodicPotential(self.period, c, self.exact)

    @classmethod
    def zero(cls, period: float, M: int = MIN_ORDER) -> "PeriodicPotential":
        return cls(period, np.zeros(2 * M + 1, dtype=complex), exact=True)

    @classmethod
    def from_samples(cls, values, period: float, M: int) -> "PeriodicPotential":
        """Coefficients |k| <= M from samples on ``x_j = j T / n``."""
        values = np.asarray(values)
        n = values.size
        if n < 4 * M:
            raise ValueError(f"need at least 4M={4 * M} samples, got {n}")
        F = np.fft.fft(values) / n
        k = np.arange(-M, M + 1)
        return cls(period, F[k % n])

    @classmethod
    def from_function(
        cls, f: Callable[[np.ndarray], np.ndarray], period: float, M: int
    ) -> "PeriodicPotential":
        n = 8 * M
        x = np.arange(n) * (period / n)
        return cls.from_samples(f(x), period, M)


# --- traveling-wave families -------------------------------------------------


@dataclass(frozen=True)
class MKdVCnoidal:
    """Cnoidal wave ``phi = sqrt(2m) A cn(A x, m)`` of ``u_t = u_xxx + (u^3)_x``."""

    A: float = 1.0
    m: float = 0.5
    family_name = "mkdv_cnoidal"

    def __post_init__(self):
        if not 0.0 < self.m < 1.0:
            raise DomainError("mKdV cnoidal wave needs 0 < m < 1")
        if not self.A > 0:
            raise DomainError("amplitude A must be positive")

    @property
    def period(self) -> float:
        # the wave period 4K/A; the potential itself has period 2K/A
        return 4.0 * elliptic_K(self.m) / self.A

    @property
    def wave_speed(self) -> float:
        return (2.0 * self.m - 1.0) * self.A**2

    def profile(self, x):
        return math.sqrt(2.0 * self.m) * self.A * jacobi_cn(self.A * np.asarray(x), self.m)

    def potential_function(self, x):
        return -3.0 * self.profile(x) ** 2


@dataclass(frozen=True)
class BBMCnoidal:
    """``u = -6m/(2m-1) cn^2(x / (2 sqrt(2m-1)), m)``, wave speed 2."""

    m: float = 0.75
    family_name = "bbm_cnoidal"

    def __post_init__(self):
        # m = 1 is the solitary-wave limit, which has no finite period
        if not 0.5 < self.m < 1.0:
            raise DomainError("BBM cnoidal wave needs 1/2 < m < 1")

    @property
    def scale(self) -> float:
        return 2.0 * math.sqrt(2.0 * self.m - 1.0)

    @property
    def period(self) -> float:
        return 2.0 * self.scale * elliptic_K(self.m)

    @property
    def wave_speed(self) -> float:
        return 2.0

    def profile(self, x):
        amp = -6.0 * self.m / (2.0 * self.m - 1.0)
        return amp * jacobi_cn(np.asarray(x) / self.scale, self.m) ** 2

    potential_function = profile


@dataclass(frozen=True)
class KawaharaCnQuartic:
    """Stationary ``u = A1 + A2 cn^2(sigma x, m) + A3 cn^4(sigma x, m)``."""

    alpha: float
    sigma: float
    m: float
    A1: float
    A2: float
    A3: float
    family_name = "kawahara_cn_quartic"

    def __post_init__(self):
        if not 0.0 < self.m < 1.0:
            raise DomainError("Kawahara cn^2 + cn^4 wave needs 0 < m < 1")
        if self.sigma == 0:
            raise DomainError("sigma must be nonzero")

    @property
    def period(self) -> float:
        return 2.0 * elliptic_K(self.m) / abs(self.sigma)

    @property
    def wave_speed(self) -> float:
        return 0.0

    def profile(self, x):
        w = jacobi_cn(self.sigma * np.asarray(x), self.m) ** 2
        return self.A1 + self.A2 * w + self.A3 * w * w

    potential_function = profile


@dataclass(frozen=True)
class BORational:
    """Benjamin-Ono wave ``phi = A / (1 - B cos(2 pi x / T))``."""

    c: float
    T: float
    family_name = "bo_rational"

    def __post_init__(self):
        _check_bo(self.c, self.T)

    @property
    def period(self) -> float:
        return float(self.T)

    @property
    def wave_speed(self) -> float:
        return float(self.c)

    @property
    def amplitude(self) -> float:
        return 8.0 * math.pi**2 / (self.c * self.T**2)

    @property
    def B(self) -> float:
        return math.sqrt(1.0 - 4.0 * math.pi**2 / (self.T**2 * self.c**2))

    def profile(self, x):
        return self.amplitude / (1.0 - self.B * np.cos(2.0 * np.pi * np.asarray(x) / self.T))

    def potential_function(self, x):
        return -self.profile(x)


@dataclass(frozen=True)
class ZeroPotential:
    """Q = 0 for a chosen dispersion family; the unperturbed problem."""

    equation: str = "gkdv"
    T: float = 2.0 * math.pi
    c: float = 0.0
    alpha: float = 0.0
    family_name = "zero"

    def __post_init__(self):
        Family(self.equation)
        if not self.T > 0:
            raise DomainError("period must be positive")

    @property
    def period(self) -> float:
        return float(self.T)

    @property
    def wave_speed(self) -> float:
        return float(self.c)

    def potential_function(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


WaveFamilyParams = Union[MKdVCnoidal, BBMCnoidal, KawaharaCnQuartic, BORational, ZeroPotential]

FAMILIES = {
    cls.family_name: cls
    for cls in (MKdVCnoidal, BBMCnoidal, KawaharaCnQuartic, BORational, ZeroPotential)
}


# --- Benjamin-Ono closed forms -----------------------------------------------


def _check_bo(c: float, T: float) -> float:
    """Return x = 2 pi / (c T) after checking 2 pi < c T and c > 0."""
    if not c > 0:
        raise DomainError("Benjamin-Ono wave needs c > 0")
    if not 2.0 * math.pi < c * T:
        raise DomainError(f"Benjamin-Ono wave needs 2*pi < c*T (got c*T={c * T})")
    return 2.0 * math.pi / (c * T)


def bo_fourier_coefficient(c: float, T: float, k: int) -> float:
    """Closed-form Fourier coefficient of ``A / (1 - B cos(2 pi x / T))``.

    Equals ``A / sqrt(1-B^2) * ((1 - sqrt(1-B^2)) / B)^|k|`` with
    ``A = 8 pi^2 / (c T^2)`` and ``B = sqrt(1 - 4 pi^2 / (T^2 c^2))``.
    """
    x = _check_bo(c, T)  # x = sqrt(1 - B^2)
    A = 8.0 * math.pi**2 / (c * T**2)
    # (1 - x)/B rewritten without cancellation as B -> 0
    ratio = math.sqrt((1.0 - x) / (1.0 + x))
    return A / x * ratio ** abs(int(k))


def bo_l1_norm(c: float, T: float) -> float:
    """``sum_k |Q_k|`` for the Benjamin-Ono wave, ``A / (1 - B)``."""
    x = _check_bo(c, T)
    A = 8.0 * math.pi**2 / (c * T**2)
    B = math.sqrt((1.0 - x) * (1.0 + x))
    # 1 - B = x^2 / (1 + B) avoids cancellation for large cT
    return A * (1.0 + B) / (x * x)


# --- construction ------------------------------------------------------------


def _build_at_order(params: WaveFamilyParams, M: int):
    if isinstance(params, BORational):
        ks = np.arange(-M, M + 1)
        coeffs = [-bo_fourier_coefficient(params.c, params.T, k) for k in ks]
        return PeriodicPotential(params.T, coeffs), params.c
    if isinstance(params, ZeroPotential):
        return PeriodicPotential.zero(params.T, M), params.c

    pot = PeriodicPotential.from_function(params.potential_function, params.period, M)
    c_eff = params.wave_speed
    if isinstance(params, MKdVCnoidal):
        c_eff += pot.mean
        pot = pot.without_mean()
    return pot, c_eff


def build_potential(params: WaveFamilyParams, M: int | None = None):
    """Return ``(PeriodicPotential, c_eff)`` for a traveling-wave family.

    With ``M=None`` the truncation order is doubled from 16 until the
    coefficient tail has decayed.
    """
    if M is not None:
        if M < MIN_ORDER:
            raise ValueError(f"truncation order M must be >= {MIN_ORDER}")
        return _build_at_order(params, int(M))
    M = MIN_ORDER
    while True:
        try:
            return _build_at_order(params, M)
        except TailError:
            if 2 * M > MAX_AUTO_ORDER:
                raise
            M *= 2


_FAMILY_SETUP = {
    MKdVCnoidal: (lambda p: DispersionRelation.gkdv(), MeanMode.ABSORBED),
    BBMCnoidal: (lambda p: DispersionRelation.bbm(), MeanMode.RADIUS),
    KawaharaCnQuartic: (lambda p: DispersionRelation.kawahara(p.alpha), MeanMode.DIAGONAL),
    BORational: (lambda p: DispersionRelation.benjamin_ono(), MeanMode.RADIUS),
}


def make_problem(params: WaveFamilyParams, M: int | None = None, mean_mode=None) -> SpectralProblem:
    """Canonical spectral problem for ``params`` (see module docstring)."""
    pot, c_eff = build_potential(params, M)
    if isinstance(params, ZeroPotential):
        disp = DispersionRelation(Family(params.equation), params.alpha)
        default_mode = MeanMode.ABSORBED
    else:
        make_disp, default_mode = _FAMILY_SETUP[type(params)]
        disp = make_disp(params)
    mode = MeanMode(mean_mode) if mean_mode is not None else default_mode
    return SpectralProblem(disp, c_eff, pot, mode, label=params.family_name, params=params)


# --- Kawahara stationary profiles --------------------------------------------


def stationary_residual(params: KawaharaCnQuartic, grid_n: int = 512) -> float:
    """max |r - mean(r)| for ``r = u'''' + alpha u'' + u^2/2`` on one period.

    The integrated stationary Kawahara equation says r is constant, so a
    small value certifies the parameter tuple.
    """
    if not isinstance(params, KawaharaCnQuartic):
        raise TypeError("stationary_residual applies to KawaharaCnQuartic only")
    if grid_n < 256:
        raise ValueError("grid_n must be >= 256")
    T = params.period
    x = np.arange(grid_n) * (T / grid_n)
    u = params.profile(x)
    k = 2.0 * np.pi * np.fft.fftfreq(grid_n, d=T / grid_n)
    U = np.fft.fft(u)
    r = np.fft.ifft((k**4 - params.alpha * k**2) * U).real + 0.5 * u * u
    return float(np.max(np.abs(r - r.mean())))


def fit_kawahara_sigma(alpha, m, A1, A2, A3, bounds=(0.05, 2.0), grid_n=512) -> KawaharaCnQuartic:
    """Pick sigma minimizing :func:`stationary_residual` for fixed amplitudes."""

    def resid(s):
        return stationary_residual(KawaharaCnQuartic(alpha, s, m, A1, A2, A3), grid_n)

    # coarse scan first; the residual grows like sigma^4 away from the minimum
    grid = np.linspace(*bounds, 200)
    vals = [resid(s) for s in grid]
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(resid, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-12})
    return KawaharaCnQuartic(alpha, float(res.x), m, A1, A2, A3)


def _d2(f, sigma, m):
    """Second x-derivative of f(w), w = cn^2(sigma x, m), as a polynomial in w."""
    # (w')^2 = 4 sigma^2 w (1 - w)(1 - m + m w)
    p = 4.0 * sigma**2 * np.array([0.0, 1.0 - m, 2.0 * m - 1.0, -m])
    fw = P.polyder(f)
    return P.polyadd(P.polymul(P.polyder(f, 2), p), 0.5 * P.polymul(fw, P.polyder(p)))


def _profile_equations(z, alpha, m):
    sigma, A1, A2, A3, b = z
    u = np.array([A1, A2, A3])
    r = P.polyadd(P.polyadd(_d2(_d2(u, sigma, m), sigma, m), alpha * _d2(u, sigma, m)),
                  0.5 * P.polymul(u, u))
    r = P.polysub(r, [b])
    out = np.zeros(5)
    out[: min(5, r.size)] = r[:5]
    return out


def polish_kawahara_profile(params: KawaharaCnQuartic) -> KawaharaCnQuartic:
    """Refine (sigma, A1, A2, A3) to an exact stationary solution for fixed (alpha, m).

    Matching powers of cn^2 gives five polynomial equations in
    (sigma, A1, A2, A3, integration constant); Newton's method is seeded
    with ``params``, so amplitudes rounded to a few digits converge to the nearby
    exact wave.
    """
    x0 = [params.sigma, params.A1, params.A2, params.A3, 0.0]
    # seed the integration constant from the constant term
    x0[4] = _profile_equations(x0, params.alpha, params.m)[0]
    sol = optimize.root(_profile_equations, x0, args=(params.alpha, params.m),
                        method="hybr", tol=1e-13)
    if not sol.success or np.max(np.abs(sol.fun)) > 1e-9:
        raise DomainError(f"Kawahara profile did not converge: {sol.message}")
    sigma, A1, A2, A3, _ = sol.x
    return KawaharaCnQuartic(params.alpha, float(sigma), params.m, float(A1), float(A2), float(A3))


#: The stationary Kawahara example, amplitudes rounded to three digits; sigma
#: is not given with them and must be fitted (see :func:`fit_kawahara_sigma`).
KAWAHARA_EXAMPLE_AMPLITUDES = dict(alpha=2.0, m=0.6185, A1=0.659, A2=2.306, A3=-2.51)


def kawahara_example(polish: bool = True) -> KawaharaCnQuartic:
    """Fitted (and optionally polished) parameters of the alpha=2, m=.6185 wave."""
    params = fit_kawahara_sigma(**KAWAHARA_EXAMPLE_AMPLITUDES)
    return polish_kawahara_profile(params) if polish else params
