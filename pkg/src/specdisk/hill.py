"""Hill's method: Fourier truncation of the Floquet problem and its eigenvalues.

For Floquet exponent mu the Fourier modes k = -N..N of v obey

    lambda v_k = i(omega(kappa_k) + c kappa_k) v_k + i kappa_k W(kappa_k) sum_l Q_{k-l} v_l,

so the truncated operator is the dense matrix M = J L with
J = diag(i kappa W) and L = diag((omega/kappa + c)/W) + Toeplitz(Q), the
latter Hermitian because Q is real.  The default eigensolver exploits that
factorization; ``method="dense"`` runs the plain LAPACK nonsymmetric solver
(balancing, Hessenberg reduction, shifted QR) on M itself.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .dispersion import MeanMode, SpectralProblem, check_mu, weight
from .disks import diagonal_symbol
from .errors import ConvergenceError, DimensionError

MATCH_RTOL = 1e-6
# spread allowed inside a near-defective cluster (a perturbed Jordan block)
CLUSTER_SPREAD_RTOL = 1e-4


@dataclass(frozen=True, eq=False)
class HillMatrix:
    N: int
    mu: float
    entries: np.ndarray
    kappa: np.ndarray = field(repr=False)
    jdiag: np.ndarray = field(repr=False)  # kappa*W; the factor J is i*jdiag
    L: np.ndarray = field(repr=False)  # valid on rows with jdiag != 0
    tau: float = 1.0

    @property
    def size(self) -> int:
        return 2 * self.N + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)


def _toeplitz(coeffs: np.ndarray, M: int, N: int) -> np.ndarray:
    n = 2 * N + 1
    col = np.zeros(n, dtype=complex)  # Q_{k-l} for k-l = 0, 1, ..
    row = np.zeros(n, dtype=complex)  # Q_{k-l} for k-l = 0, -1, ..
    m = min(M, n - 1)
    col[: m + 1] = coeffs[M: M + m + 1]
    row[: m + 1] = coeffs[M - m: M + 1][::-1]
    return sla.toeplitz(col, row)


def assemble(problem: SpectralProblem, mu: float, N: int, tau: float = 1.0) -> HillMatrix:
    """Truncated Hill matrix on modes -N..N.

    ``tau`` scales the potential: every off-diagonal term, and the mean
    Q_0 whenever the disks do not place it in their centers, so that at
    tau = 0 the eigenvalues are exactly the disk centers.
    """
    mu = check_mu(mu)
    pot = problem.potential
    N = int(N)
    if N < pot.M:
        raise DimensionError(f"truncation N={N} is below the potential order M={pot.M}")
    tau = float(tau)
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")

    ks = np.arange(-N, N + 1)
    kappa = problem.wavenumbers(ks, mu)
    w = weight(problem.dispersion, kappa)
    jd = kappa * w

    q0 = pot.mean.real
    if problem.mean_mode is MeanMode.RADIUS:
        q0 = tau * q0
    elif problem.mean_mode is MeanMode.ABSORBED:
        q0 = 0.0  # below 1e-12 by contract; already carried by c
    diag = diagonal_symbol(problem, kappa, q0)

    T = tau * _toeplitz(pot.coefficients, pot.M, N)
    np.fill_diagonal(T, 0.0)
    # L's diagonal holds the full symbol divided by kappa*W
    safe = np.where(jd != 0.0, jd, 1.0)
    L = T.copy()
    L[np.diag_indices_from(L)] = np.where(jd != 0.0, diag / safe, 0.0)

    entries = 1j * jd[:, None] * T
    entries[np.diag_indices_from(entries)] = 1j * diag
    return HillMatrix(N, mu, entries, kappa, jd, L, tau)


@dataclass
class SpectrumResult:
    mu: float
    N: int
    eigenvalues: np.ndarray
    trusted_band: float = float("inf")
    converged: bool = True
    method: str = ""
    error: str | None = None

    @property
    def trusted(self) -> np.ndarray:
        """Mask of eigenvalues inside the trusted band."""
        return np.abs(self.eigenvalues.imag) <= self.trusted_band

    @property
    def trusted_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[self.trusted]


def _sort(ev: np.ndarray) -> np.ndarray:
    return ev[np.lexsort((ev.real, ev.imag))]


def _dense(entries: np.ndarray) -> np.ndarray:
    return sla.eigvals(entries, check_finite=False)


def _structured(mat: HillMatrix) -> np.ndarray:
    # rows with kappa*W = 0 vanish identically: each is an exact zero eigenvalue
    keep = mat.jdiag != 0.0
    n_zero = int((~keep).sum())
    L = mat.L[np.ix_(keep, keep)]
    kw = mat.jdiag[keep]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        # congruence d L d with d^2 = |kappa W| / (1 + |symbol|) bounds both
        # pencil matrices by one, even where kappa*W is tiny but nonzero
        sym = np.abs(np.diag(L).real * kw)
        d = np.sqrt(np.abs(kw) / (1.0 + sym))
        A = d[:, None] * L * d[None, :]
        B = np.diag(np.sign(kw) / (1.0 + sym))
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
            return np.full(mat.entries.shape[0], np.nan, dtype=complex)
        if np.max(np.abs(A.imag), initial=0.0) <= 1e-14 * np.max(np.abs(A), initial=1.0):
            # real pencil: nu comes in conjugate pairs, so lambda = i nu is
            # exactly symmetric under lambda -> -conj(lambda)
            nu = sla.eigvals(A.real, B, check_finite=False, homogeneous_eigvals=False)
        else:
            nu = sla.eigvals(A, B, check_finite=False)
        return np.concatenate([1j * nu, np.zeros(n_zero, dtype=complex)])


def eigenvalues(matrix, method: str = "auto") -> SpectrumResult:
    """All eigenvalues of a Hill matrix (or any square array), sorted by (Im, Re).

    ``method`` is "structured" (Hill matrices only), "dense", or "auto",
    which picks structured for Hill matrices.  Raises ConvergenceError if
    LAPACK reports failure or returns non-finite values.
    """
    if isinstance(matrix, HillMatrix):
        entries, mu, N = matrix.entries, matrix.mu, matrix.N
    else:
        entries = np.asarray(matrix, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("eigenvalues needs a square matrix")
        mu, N = float("nan"), (entries.shape[0] - 1) // 2
    if not np.all(np.isfinite(entries)):
        raise ValueError("matrix has non-finite entries")
    if method == "auto":
        method = "structured" if isinstance(matrix, HillMatrix) else "dense"
    if method == "structured" and not isinstance(matrix, HillMatrix):
        raise ValueError("the structured solver needs a HillMatrix")

    off = entries - np.diag(np.diag(entries))
    if not off.any():
        # already triangular (diagonal): the eigenvalues are the entries
        ev, method = np.diag(entries).copy(), "diagonal"
    else:
        try:
            ev = _structured(matrix) if method == "structured" else _dense(entries)
            if method == "structured" and not np.all(np.isfinite(ev)):
                ev, method = _dense(entries), "dense-fallback"
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise ConvergenceError(f"eigensolver failed: {exc}") from exc
        if not np.all(np.isfinite(ev)):
            bad = ev
            raise ConvergenceError("eigensolver returned non-finite values", partial=bad)
    return SpectrumResult(mu, N, _sort(np.asarray(ev, dtype=complex)), method=method)


def solve(problem: SpectralProblem, mu: float, N: int, tau: float = 1.0,
          method: str = "auto", band: bool = False) -> SpectrumResult:
    """Assemble and solve at one mu; optionally attach the trusted band."""
    res = eigenvalues(assemble(problem, mu, N, tau), method)
    if band:
        res.trusted_band = _band(res.eigenvalues, solve(problem, mu, 2 * N, tau, method).eigenvalues)
    return res


def match_nearest(a, b, rtol: float = MATCH_RTOL):
    """Greedy nearest-neighbour pairing of ``a`` into ``b``, in ascending |Im a|.

    Returns an index array into ``b`` (-1 where no partner lies within
    ``rtol*(1+|a_i|)``).  Each entry of ``b`` is used at most once.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    used = np.zeros(b.size, dtype=bool)
    out = np.full(a.size, -1, dtype=int)
    for i in np.lexsort((np.abs(a), np.abs(a.imag))):
        d = np.abs(b - a[i])
        d[used] = np.inf
        if d.size == 0:
            break
        j = int(np.argmin(d))
        if d[j] <= rtol * (1.0 + abs(a[i])):
            out[i] = j
            used[j] = True
    return out


def _match_clusters(a, b, match):
    """Accept unmatched groups of ``a`` that reappear as groups in ``b``.

    A multiple eigenvalue splits by O(eps^(1/m)), differently at N and 2N,
    so its members need not pair one by one; their count and centroid do
    reproduce.
    """
    match = match.copy()
    free_b = np.ones(b.size, dtype=bool)
    free_b[match[match >= 0]] = False
    for i in np.nonzero(match < 0)[0]:
        if match[i] >= 0:
            continue
        rad = CLUSTER_SPREAD_RTOL * (1.0 + abs(a[i]))
        ga = np.nonzero((match < 0) & (np.abs(a - a[i]) <= rad))[0]
        if ga.size < 2:
            continue
        ca = a[ga].mean()
        gb = np.nonzero(free_b & (np.abs(b - ca) <= 2.0 * rad))[0]
        if gb.size == ga.size and abs(b[gb].mean() - ca) <= MATCH_RTOL * (1.0 + abs(ca)):
            match[ga] = gb
            free_b[gb] = False
    return match


def _band(ev: np.ndarray, ev_fine: np.ndarray) -> float:
    match = match_nearest(ev, ev_fine)
    if np.any(match < 0):
        match = _match_clusters(ev, ev_fine, match)
    im = np.abs(ev.imag)
    if np.all(match >= 0):
        return float(im.max(initial=0.0))
    first_bad = im[match < 0].min()
    below = im[(match >= 0) & (im < first_bad)]
    return float(below.max()) if below.size else 0.0


def trusted_band(problem: SpectralProblem, mu: float, N: int, method: str = "auto") -> float:
    """Largest B with every |Im lambda| <= B eigenvalue at size N reproduced at 2N.

    Meaningful when N >= 2M, so that doubling resolves the same potential.
    """
    coarse = solve(problem, mu, N, method=method).eigenvalues
    fine = solve(problem, mu, 2 * N, method=method).eigenvalues
    return _band(coarse, fine)


def _thread_count(n_jobs: int, threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("SPECDISK_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(int(threads), n_jobs))


def sweep(problem: SpectralProblem, mu_grid, N: int, tau: float = 1.0, method: str = "auto",
          band: bool = False, threads: int | None = None) -> list[SpectrumResult]:
    """Independent solves over ``mu_grid``, returned in grid order.

    A failing mu does not abort the sweep: its result carries
    ``converged=False`` and the error message.  Parallelism is capped by
    ``threads`` or the SPECDISK_THREADS environment variable.
    """
    mus = [float(m) for m in mu_grid]

    def one(mu):
        try:
            return solve(problem, mu, N, tau, method, band)
        except Exception as exc:  # recorded per mu, never raised
            partial = getattr(exc, "partial", None)
            ev = np.asarray(partial if partial is not None else [], dtype=complex)
            return SpectrumResult(mu, int(N), ev, 0.0, False, method, f"{type(exc).__name__}: {exc}")

    n = _thread_count(len(mus), threads)
    if n == 1:
        return [one(mu) for mu in mus]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(one, mus))
