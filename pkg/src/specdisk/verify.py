"""Numerical checks of the Gershgorin containment, counting and symmetry claims.

Every check returns a margin: the worst signed amount by which it holds
(<= 0) or is violated (> 0).  Symmetry is checked first; containment,
counting, homotopy and certification depend on it and are skipped when it
fails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import disks as dk
from . import hill
from .dispersion import SpectralProblem, check_mu
from .errors import NotApplicableError

SYMMETRY_RTOL = 1e-6
CONTAIN_RTOL = 1e-8
AXIS_RTOL = 1e-8
CLUSTER_RTOL = 1e-6
ZERO_ATOL = 1e-6


@dataclass
class Check:
    name: str
    passed: bool
    margin: float
    details: dict = field(default_factory=dict)
    depends_on: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "margin": float(self.margin),
            "depends_on": list(self.depends_on),
            "details": self.details,
        }


@dataclass
class VerificationReport:
    mu: float
    N: int
    window: int
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "N": self.N,
            "window": self.window,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


# --- eigenvalue clustering ---------------------------------------------------


def cluster_labels(ev, rtol: float = CLUSTER_RTOL) -> np.ndarray:
    """Single-linkage clusters of eigenvalues closer than rtol*(1+|lambda|)."""
    ev = np.asarray(ev, dtype=complex)
    if ev.size == 0:
        return np.zeros(0, dtype=int)
    d = np.abs(ev[:, None] - ev[None, :])
    scale = 1.0 + np.maximum(np.abs(ev)[:, None], np.abs(ev)[None, :])
    _, labels = connected_components(csr_matrix(d <= rtol * scale), directed=False)
    return labels


def off_axis_mask(ev, rtol: float = AXIS_RTOL) -> np.ndarray:
    """Eigenvalues whose cluster mean sits off the imaginary axis.

    Averaging over a cluster first removes the O(sqrt(eps)) splitting that
    floating point inflicts on defective (Jordan) eigenvalues.
    """
    ev = np.asarray(ev, dtype=complex)
    labels = cluster_labels(ev)
    out = np.zeros(ev.size, dtype=bool)
    for lab in np.unique(labels):
        sel = labels == lab
        m = ev[sel].mean()
        out[sel] = abs(m.real) > rtol * (1.0 + abs(m))
    return out


def off_axis_count(ev) -> int:
    return int(off_axis_mask(ev).sum())


# --- geometry helpers --------------------------------------------------------


def _disk_arrays(problem, mu, ks):
    centers, radii = dk.disk_table(problem, mu, ks)
    return centers, radii


def distance_to_union(z, centers, radii) -> np.ndarray:
    """Signed distance of each z to the union of disks (i*center, radius)."""
    z = np.asarray(z, dtype=complex)
    if z.size == 0:
        return np.zeros(0)
    d = np.abs(z[:, None] - 1j * np.asarray(centers)[None, :]) - np.asarray(radii)[None, :]
    return d.min(axis=1)


def _default_window(problem: SpectralProblem, N: int) -> int:
    try:
        tb = dk.tail_index_bound(problem)
    except NotApplicableError:
        return int(N)
    return int(min(N, max(tb.k_star + 4, 8)))


def _spectrum_for(problem, mu, N):
    return hill.solve(problem, mu, N, band=True)


# --- individual checks -------------------------------------------------------


def check_symmetry(spectrum: hill.SpectrumResult, rtol: float = SYMMETRY_RTOL) -> Check:
    """Hausdorff distance between the trusted spectrum and its image under -conj."""
    ev = spectrum.trusted_eigenvalues
    if ev.size == 0:
        return Check("symmetry", True, 0.0, {"n": 0})
    ref = -np.conj(ev)
    d = np.abs(ev[:, None] - ref[None, :])
    haus = float(max(d.min(axis=0).max(), d.min(axis=1).max()))
    tol = rtol * (1.0 + float(np.abs(ev).max()))
    return Check("symmetry", haus <= tol, haus - tol, {"hausdorff": haus, "tolerance": tol, "n": int(ev.size)})


def check_containment(spectrum: hill.SpectrumResult, problem: SpectralProblem, window_N: int) -> Check:
    """Every trusted nonzero eigenvalue lies in the union of the disks.

    The union runs over |k| <= max(window_N, 2N), ample for every
    eigenvalue of the size-N truncation.
    """
    ev = spectrum.trusted_eigenvalues
    ev = ev[np.abs(ev) > ZERO_ATOL]
    K = max(int(window_N), 2 * int(spectrum.N))
    centers, radii = _disk_arrays(problem, spectrum.mu, np.arange(-K, K + 1))
    if ev.size == 0:
        return Check("containment", True, 0.0, {"n": 0}, ("symmetry",))
    dist = distance_to_union(ev, centers, radii)
    excess = dist - CONTAIN_RTOL * (1.0 + np.abs(ev))
    worst = int(np.argmax(excess))
    margin = float(excess[worst])
    return Check("containment", margin <= 0.0, margin, {
        "n": int(ev.size),
        "max_distance": float(dist.max()),
        "worst_eigenvalue": [float(ev[worst].real), float(ev[worst].imag)],
    }, ("symmetry",))


def _assign(ev, report: dk.ComponentReport):
    """Nearest-component assignment with an ambiguity flag."""
    ks = np.arange(-report.window, report.window + 1)
    pos = {int(k): i for i, k in enumerate(ks)}
    n_c = len(report.components)
    dist = np.full((ev.size, n_c), np.inf)
    for j, comp in enumerate(report.components):
        idx = [pos[k] for k in comp.indices]
        dist[:, j] = distance_to_union(ev, report.centers[idx], report.radii[idx])
    tol = CONTAIN_RTOL * (1.0 + np.abs(ev))
    inside = dist <= tol[:, None]
    nearest = np.argmin(dist, axis=1) if n_c else np.zeros(ev.size, dtype=int)
    member = inside.any(axis=1)
    ambiguous = inside.sum(axis=1) > 1
    return nearest, member, ambiguous


def _checkable(report: dk.ComponentReport, N: int, band: float):
    ok = []
    for comp in report.components:
        ok.append(max(abs(k) for k in comp.indices) <= N
                  and max(abs(comp.im_min), abs(comp.im_max)) <= band)
    return np.asarray(ok, dtype=bool)


def _component_counts(ev, report, checkable):
    nearest, member, ambiguous = _assign(ev, report)
    counts = np.bincount(nearest[member], minlength=len(report.components))
    sizes = np.array([c.size for c in report.components])
    miss = np.abs(counts - sizes)[checkable]
    return counts, sizes, miss, int(ambiguous.sum())


def check_counts(problem: SpectralProblem, mu: float, N: int, window_N: int,
                 spectrum: hill.SpectrumResult | None = None) -> Check:
    """Each connected component of n disks holds exactly n eigenvalues."""
    spectrum = spectrum if spectrum is not None else _spectrum_for(problem, mu, N)
    report = dk.components(problem, mu, window_N)
    ev = spectrum.trusted_eigenvalues
    checkable = _checkable(report, spectrum.N, spectrum.trusted_band)
    counts, sizes, miss, n_amb = _component_counts(ev, report, checkable)
    margin = float(miss.max(initial=0))
    bad = [list(report.components[j].indices) for j in np.nonzero(checkable & (counts != sizes))[0]]
    return Check("counts", margin == 0.0, margin, {
        "components": int(len(report.components)),
        "checked": int(checkable.sum()),
        "largest": int(max(sizes)) if sizes.size else 0,
        "largest_count": int(counts[int(np.argmax(sizes))]) if sizes.size else 0,
        "ambiguous": n_amb,
        "mismatched": bad,
    }, ("symmetry",))


def homotopy_trace(problem: SpectralProblem, mu: float, N: int, steps: int = 20,
                   window_N: int | None = None) -> Check:
    """Component counts stay constant along tau = j/steps, j = 0..steps.

    Components are those of the full (tau = 1) disks, which contain the
    disks of every smaller tau.  At tau = 0 the eigenvalues must coincide
    with the disk centers, one per disk.
    """
    if steps < 10:
        raise ValueError("homotopy_trace needs steps >= 10")
    mu = check_mu(mu)
    window_N = _default_window(problem, N) if window_N is None else int(window_N)
    report = dk.components(problem, mu, window_N)
    checkable = _checkable(report, N, math.inf)
    base = None
    first_change = None
    worst = 0
    for j in range(steps + 1):
        tau = j / steps
        ev = hill.solve(problem, mu, N, tau=tau).eigenvalues
        counts, sizes, miss, _ = _component_counts(ev, report, checkable)
        if base is None:
            base = counts
        worst = max(worst, int(miss.max(initial=0)))
        if first_change is None and (miss.max(initial=0) > 0 or np.any(counts[checkable] != base[checkable])):
            first_change = tau
    ev0 = hill.solve(problem, mu, N, tau=0.0).eigenvalues
    ks = np.arange(-N, N + 1)
    centers, _ = _disk_arrays(problem, mu, ks)
    center_err = float(np.max(np.abs(np.sort(ev0.imag) - np.sort(centers)))) + float(np.abs(ev0.real).max())
    margin = float(max(worst, center_err))
    return Check("homotopy", first_change is None and center_err == 0.0, margin, {
        "steps": int(steps),
        "first_change_tau": first_change,
        "tau0_center_error": center_err,
        "largest_component": int(max(c.size for c in report.components)),
    }, ("symmetry",))


def certify_imaginary(spectrum: hill.SpectrumResult, problem: SpectralProblem, window_N: int) -> Check:
    """Isolated disks hold purely imaginary eigenvalues; off-axis count is bounded.

    The count must not exceed the component bound of the disks nor
    2*k_star when a tail bound exists.
    """
    report = dk.components(problem, spectrum.mu, window_N)
    ev = spectrum.trusted_eigenvalues
    nearest, member, _ = _assign(ev, report)
    singleton = np.array([c.size == 1 for c in report.components], dtype=bool)
    in_single = member & singleton[nearest] if len(report.components) else member & False
    tol = AXIS_RTOL * (1.0 + np.abs(ev))
    lone_excess = np.abs(ev.real) - tol
    lone_margin = float(lone_excess[in_single].max(initial=-np.inf))
    n_off = off_axis_count(ev)
    margins = {"singleton_real_part": lone_margin, "component_bound": float(n_off - report.unstable_bound)}
    tail = report.tail
    if tail is not None:
        margins["tail_bound"] = float(n_off - 2 * tail.k_star)
    margin = max(margins.values())
    if not np.isfinite(margin):
        margin = 0.0 if n_off == 0 else float(n_off)
    return Check("imaginary", margin <= 0.0, margin, {
        "off_axis": n_off,
        "unstable_bound": int(report.unstable_bound),
        "two_k_star": None if tail is None else 2 * tail.k_star,
        "singletons_checked": int(in_single.sum()),
        "margins": margins,
    }, ("symmetry",))


# --- orchestration -----------------------------------------------------------


def _skipped(name: str, why: str) -> Check:
    return Check(name, False, math.inf, {"skipped": why}, ("symmetry",))


def verify(problem: SpectralProblem, mu: float, N: int, window_N: int | None = None,
           steps: int = 20, homotopy: bool = True) -> VerificationReport:
    """Run all checks at one mu, symmetry first."""
    mu = check_mu(mu)
    window_N = _default_window(problem, N) if window_N is None else int(window_N)
    spectrum = _spectrum_for(problem, mu, N)
    sym = check_symmetry(spectrum)
    checks = [sym]
    names = ["containment", "counts"] + (["homotopy"] if homotopy else []) + ["imaginary"]
    if not sym.passed:
        checks += [_skipped(n, "symmetry failed") for n in names]
    else:
        checks.append(check_containment(spectrum, problem, window_N))
        checks.append(check_counts(problem, mu, N, window_N, spectrum))
        if homotopy:
            checks.append(homotopy_trace(problem, mu, N, steps, window_N))
        checks.append(certify_imaginary(spectrum, problem, window_N))
    return VerificationReport(mu, int(N), window_N, checks)


def off_axis_counts(problem: SpectralProblem, mu_grid, N: int, threads: int | None = None) -> list[int]:
    return [off_axis_count(r.eigenvalues) if r.converged else -1
            for r in hill.sweep(problem, mu_grid, N, threads=threads)]


def bisect_transition(problem: SpectralProblem, lo: float, hi: float, N: int, tol: float = 1e-4,
                      samples: int = 11) -> float:
    """Locate the last mu in (lo, hi] where the off-axis count changes.

    A coarse grid of ``samples`` points brackets the change nearest ``hi``
    (isolated counts at degenerate points such as mu = 0 are skipped over),
    then bisection narrows the bracket to ``tol``.
    """
    count = lambda mu: off_axis_count(hill.solve(problem, mu, N).eigenvalues)
    grid = np.linspace(lo, hi, samples)
    counts = [count(m) for m in grid]
    diff = [i for i in range(samples - 1) if counts[i] != counts[-1]]
    if not diff:
        raise ValueError("off-axis count is constant over the bracket")
    i = diff[-1]
    lo, hi = float(grid[i]), float(grid[i + 1])
    c_hi = counts[-1]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if count(mid) == c_hi:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
