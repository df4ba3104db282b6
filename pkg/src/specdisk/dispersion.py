"""Dispersion relations, symplectic weights and the canonical spectral problem.

Every supported equation is brought into the canonical form

    lambda v = i omega(-i d/dx) v + c v_x + W(-i d/dx) (Q v)_x

on a period T with Floquet boundary condition v(T) = exp(2 pi i mu) v(0).
In Fourier space the constant-coefficient part acts diagonally with
symbol ``i*omega(kappa) + i*c*kappa``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from .errors import DomainError

if TYPE_CHECKING:
    from .potentials import PeriodicPotential


class Family(str, enum.Enum):
    GKDV = "gkdv"
    KAWAHARA = "kawahara"
    BENJAMIN_ONO = "benjamin_ono"
    BBM = "bbm"


_DEGREE = {
    Family.GKDV: 3.0,
    Family.KAWAHARA: 5.0,
    Family.BENJAMIN_ONO: 2.0,
    Family.BBM: 1.0,
}


@dataclass(frozen=True)
class DispersionRelation:
    """The symbol omega(kappa) of one equation family.

    ``alpha`` is only used by the Kawahara family, where
    ``omega(kappa) = kappa**5 - alpha*kappa**3``.
    """

    family: Family
    alpha: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))

    @property
    def degree(self) -> float:
        return _DEGREE[self.family]

    @classmethod
    def gkdv(cls) -> "DispersionRelation":
        return cls(Family.GKDV)

    @classmethod
    def kawahara(cls, alpha: float) -> "DispersionRelation":
        return cls(Family.KAWAHARA, float(alpha))

    @classmethod
    def benjamin_ono(cls) -> "DispersionRelation":
        return cls(Family.BENJAMIN_ONO)

    @classmethod
    def bbm(cls) -> "DispersionRelation":
        return cls(Family.BBM)


def omega(disp: DispersionRelation, kappa):
    """Frequency omega(kappa); accepts scalars or arrays."""
    k = np.asarray(kappa, dtype=float)
    f = disp.family
    if f is Family.GKDV:
        out = k**3
    elif f is Family.KAWAHARA:
        out = k**5 - disp.alpha * k**3
    elif f is Family.BENJAMIN_ONO:
        out = k * np.abs(k)
    else:
        # BBM's transport lives entirely in c
        out = np.zeros_like(k)
    return out if out.ndim else float(out)


def omega_prime(disp: DispersionRelation, kappa):
    """Analytic derivative of :func:`omega`.

    Raises DomainError at kappa = 0 for Benjamin-Ono: the symbol
    kappa*|kappa| is not smooth there, so callers must use one-sided limits.
    """
    k = np.asarray(kappa, dtype=float)
    f = disp.family
    if f is Family.GKDV:
        out = 3.0 * k**2
    elif f is Family.KAWAHARA:
        out = 5.0 * k**4 - 3.0 * disp.alpha * k**2
    elif f is Family.BENJAMIN_ONO:
        if np.any(k == 0.0):
            raise DomainError("omega_prime is undefined at kappa=0 for Benjamin-Ono")
        out = 2.0 * np.abs(k)
    else:
        out = np.zeros_like(k)
    return out if out.ndim else float(out)


def weight(disp: DispersionRelation, kappa):
    """Symplectic weight W(kappa): 1/(1+kappa^2) for BBM, 1 otherwise."""
    k = np.asarray(kappa, dtype=float)
    if disp.family is Family.BBM:
        out = 1.0 / (1.0 + k**2)
    else:
        out = np.ones_like(k)
    return out if out.ndim else float(out)


def omega_over_kappa(disp: DispersionRelation, kappa):
    """omega(kappa)/kappa, continuously extended to kappa = 0."""
    k = np.asarray(kappa, dtype=float)
    f = disp.family
    if f is Family.GKDV:
        out = k**2
    elif f is Family.KAWAHARA:
        out = k**4 - disp.alpha * k**2
    elif f is Family.BENJAMIN_ONO:
        out = np.abs(k)
    else:
        out = np.zeros_like(k)
    return out if out.ndim else float(out)


class MeanMode(str, enum.Enum):
    """Where the mean Q_0 of the potential enters the disk formulas.

    ABSORBED: Q has zero mean, the mean already sits in ``c``.
    DIAGONAL: i*kappa*W*Q_0 shifts the disk centers; the radius uses the
        l1 norm without the mean.
    RADIUS: centers are unperturbed; |Q_0| counts towards the radius.
    The Hill matrix always carries Q_0 on its diagonal; the mode only
    decides how the Gershgorin bound treats it and whether the tau
    homotopy scales it.
    """

    ABSORBED = "absorbed"
    DIAGONAL = "diagonal"
    RADIUS = "radius"


@dataclass(frozen=True)
class SpectralProblem:
    dispersion: DispersionRelation
    c: float
    potential: "PeriodicPotential"
    mean_mode: MeanMode = MeanMode.ABSORBED
    label: str = ""
    params: Any = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mean_mode", MeanMode(self.mean_mode))
        if not self.potential.period > 0:
            raise DomainError("potential period must be positive")
        if self.mean_mode is MeanMode.ABSORBED and abs(self.potential.mean) >= 1e-12:
            raise DomainError(
                "mean_mode='absorbed' needs a zero-mean potential "
                f"(got mean {self.potential.mean:.3e})"
            )

    @property
    def period(self) -> float:
        return self.potential.period

    @property
    def mean_in_diagonal(self) -> bool:
        return self.mean_mode is MeanMode.DIAGONAL

    @property
    def radius_norm(self) -> float:
        """The l1 norm that multiplies the disk radii."""
        if self.mean_mode is MeanMode.RADIUS:
            return self.potential.l1_with_mean
        return self.potential.l1_no_mean

    @property
    def center_mean(self) -> float:
        """Q_0 as it enters the disk centers (zero unless DIAGONAL)."""
        return self.potential.mean.real if self.mean_mode is MeanMode.DIAGONAL else 0.0

    def wavenumbers(self, ks, mu: float):
        return 2.0 * np.pi * (np.asarray(ks, dtype=float) + mu) / self.period

    def with_potential(self, potential: "PeriodicPotential") -> "SpectralProblem":
        return SpectralProblem(
            self.dispersion, self.c, potential, self.mean_mode, self.label, self.params
        )


def check_mu(mu: float) -> float:
    mu = float(mu)
    if not (-0.5 < mu <= 0.5):
        raise DomainError(f"Floquet exponent {mu} outside (-1/2, 1/2]")
    return mu
