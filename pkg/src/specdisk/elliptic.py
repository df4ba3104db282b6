"""Complete elliptic integrals and Jacobi elliptic functions.

Both are computed from the arithmetic-geometric mean; the Jacobi functions
use the descending Landen (AGM) scheme of DLMF 22.20(ii).  Parameters follow
the ``m = k**2`` convention.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

_AGM_TOL = 1e-16
_AGM_MAXITER = 64


def _check_m(m: float) -> float:
    m = float(m)
    if not (0.0 <= m < 1.0):
        raise DomainError(f"elliptic parameter m={m} outside [0, 1)")
    return m


def _agm_sequence(m: float):
    a, b, c = 1.0, math.sqrt(1.0 - m), math.sqrt(m)
    seq = [(a, b, c)]
    for _ in range(_AGM_MAXITER):
        if abs(c) <= _AGM_TOL * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        seq.append((a, b, c))
    return seq


def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind, K(m) = pi / (2 AGM(1, sqrt(1-m)))."""
    m = _check_m(m)
    a = _agm_sequence(m)[-1][0]
    return math.pi / (2.0 * a)


def elliptic_E(m: float) -> float:
    """Complete elliptic integral of the second kind via the AGM c_n sums."""
    m = _check_m(m)
    seq = _agm_sequence(m)
    s = sum(2.0 ** (n - 1) * c * c for n, (_, _, c) in enumerate(seq))
    return elliptic_K(m) * (1.0 - s)


def jacobi_sn_cn_dn(x, m: float):
    """Return (sn, cn, dn) at ``x`` (scalar or array) for parameter ``m``."""
    m = _check_m(m)
    x = np.asarray(x, dtype=float)
    if m == 0.0:
        return np.sin(x), np.cos(x), np.ones_like(x)

    # reduce to one period so 2**N * a_N * x stays small
    period = 4.0 * elliptic_K(m)
    xr = x - period * np.round(x / period)

    seq = _agm_sequence(m)
    n = len(seq) - 1
    a_n = seq[-1][0]
    phi = (2.0**n) * a_n * xr
    phis = [phi]
    for j in range(n, 0, -1):
        a_j, _, c_j = seq[j]
        phi = 0.5 * (phi + np.arcsin(np.clip(c_j / a_j * np.sin(phi), -1.0, 1.0)))
        phis.append(phi)
    phi0 = phis[-1]
    sn = np.sin(phi0)
    cn = np.cos(phi0)
    if n >= 1:
        dn = cn / np.cos(phis[-2] - phi0)
    else:
        dn = np.sqrt(1.0 - m * sn * sn)
    return sn, cn, dn


def jacobi_cn(x, m: float):
    """Jacobi elliptic function cn(x, m)."""
    cn = jacobi_sn_cn_dn(x, m)[1]
    return cn if cn.ndim else float(cn)
