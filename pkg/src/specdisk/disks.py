"""Gershgorin disks D_k(mu), their disjointness and connected components."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .dispersion import Family, MeanMode, SpectralProblem, check_mu, omega, weight
from .errors import NotApplicableError, WindowError

#: Distance (in units of k + mu) over which a disjointness condition must
#: hold without interruption before a scan accepts the tail as disjoint.
SCAN_HORIZON = 50.0
SCAN_STEP = 1.0 / 64.0


@dataclass(frozen=True)
class GershgorinDisk:
    k: int
    mu: float
    center: complex
    radius: float

    def contains(self, z, tol=0.0):
        return np.abs(np.asarray(z) - self.center) <= self.radius + tol


def diagonal_symbol(problem: SpectralProblem, kappa, q0: float = 0.0):
    """Imaginary part of the unperturbed symbol, omega + c*kappa + kappa*W*q0.

    Shared with the Hill assembly so that unperturbed eigenvalues and disk
    centers agree bit for bit.
    """
    kappa = np.asarray(kappa, dtype=float)
    out = omega(problem.dispersion, kappa) + problem.c * kappa
    if q0:
        out = out + kappa * weight(problem.dispersion, kappa) * q0
    return out


def _center_im(problem: SpectralProblem, s):
    kappa = 2.0 * np.pi * np.asarray(s, dtype=float) / problem.period
    return diagonal_symbol(problem, kappa, problem.center_mean)


def _radius(problem: SpectralProblem, s):
    s = np.asarray(s, dtype=float)
    kappa = 2.0 * np.pi * s / problem.period
    return (2.0 * np.pi / problem.period) * np.abs(s) * weight(problem.dispersion, kappa) * problem.radius_norm


def disk_table(problem: SpectralProblem, mu: float, ks):
    """Vectorized centers (imaginary parts) and radii for indices ``ks``."""
    s = np.asarray(ks, dtype=float) + check_mu(mu)
    return _center_im(problem, s), _radius(problem, s)


def disk(problem: SpectralProblem, k: int, mu: float) -> GershgorinDisk:
    """The k-th Gershgorin disk at Floquet exponent ``mu``."""
    center, radius = disk_table(problem, mu, [k])
    return GershgorinDisk(int(k), float(mu), complex(0.0, center[0]), float(radius[0]))


def disks(problem: SpectralProblem, mu: float, window_N: int) -> list[GershgorinDisk]:
    ks = np.arange(-window_N, window_N + 1)
    centers, radii = disk_table(problem, mu, ks)
    return [GershgorinDisk(int(k), float(mu), complex(0.0, c), float(r))
            for k, c, r in zip(ks, centers, radii)]


def adjacent_gap(problem: SpectralProblem, s):
    """Center distance minus radius sum for the pair at ``k+mu = s`` and ``s+1``.

    Positive means the two disks are disjoint.
    """
    s = np.asarray(s, dtype=float)
    dist = np.abs(_center_im(problem, s + 1.0) - _center_im(problem, s))
    return dist - _radius(problem, s) - _radius(problem, s + 1.0)


def adjacent_disjoint(problem: SpectralProblem, k: int, mu: float) -> bool:
    """True iff D_k(mu) and D_{k+1}(mu) are disjoint (touching counts as intersecting)."""
    return bool(adjacent_gap(problem, k + check_mu(mu)) > 0.0)


def isolation_gap(problem: SpectralProblem, s, reach: int | None = None):
    """Smallest gap between the disk at ``k+mu = s`` and any disk at ``s + j``, j != 0.

    ``reach`` bounds |j|; by default it covers the mirror image -s of s,
    which non-monotone centers can bring close.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if reach is None:
        reach = int(2.0 * np.max(np.abs(s))) + 8
    j = np.concatenate([np.arange(-reach, 0), np.arange(1, reach + 1)]).astype(float)
    c0, r0 = _center_im(problem, s), _radius(problem, s)
    t = s[:, None] + j[None, :]
    gap = np.abs(_center_im(problem, t) - c0[:, None]) - _radius(problem, t) - r0[:, None]
    return gap.min(axis=1)


def _last_failure(problem, start, direction, gap=adjacent_gap):
    """Extreme s (beyond ``start`` in ``direction``) where ``gap`` is <= 0.

    Returns None if the condition holds everywhere on the scanned side.
    """
    last = None
    s = start
    good_run = 0.0
    f = lambda t: float(np.min(gap(problem, t)))
    while good_run < SCAN_HORIZON:
        chunk = s + direction * SCAN_STEP * np.arange(1024)
        g = gap(problem, chunk)
        bad = np.nonzero(g <= 0.0)[0]
        if bad.size:
            j = bad[-1]
            last = chunk[j]
            if j + 1 < chunk.size:
                lo, hi = chunk[j], chunk[j + 1]
                if f(lo) < 0.0 < f(hi):
                    last = optimize.brentq(f, lo, hi, xtol=1e-13)
                good_run = abs(chunk[-1] - chunk[j + 1])
            else:
                good_run = 0.0
        else:
            good_run += abs(chunk[-1] - chunk[0]) + SCAN_STEP
        s = chunk[-1] + direction * SCAN_STEP
        if abs(s) > 1e7:
            raise NotApplicableError("disks never separate within the scan range")
    return last


def adjacent_threshold(problem: SpectralProblem, side: int = +1) -> float:
    """Sharp threshold on ``s = k + mu`` beyond which adjacent disks are disjoint.

    For ``side=+1`` returns sup{s >= -1/2 : pair (s, s+1) intersects};
    for ``side=-1`` the infimum over s <= -1/2.  ``nan`` if no pair on
    that side intersects.
    """
    last = _last_failure(problem, -0.5, +1 if side > 0 else -1)
    return float("nan") if last is None else float(last)


@dataclass(frozen=True)
class TailBound:
    """Indices beyond which every disk is disjoint from all others.

    Disks with ``k > k_upper`` or ``k < k_lower`` are isolated for every mu.
    ``*_value`` carries the fractional threshold the integer was derived
    from (for ``method="scan"``, the last s = k + mu where a disk still
    meets some other disk).  ``*_sharp`` and ``s_*`` come from an exact
    scan of the adjacent-pair condition.
    """

    k_upper: int
    k_lower: int
    k_upper_value: float
    k_lower_value: float
    method: str
    k_upper_sharp: int
    k_lower_sharp: int
    s_upper: float
    s_lower: float

    def __iter__(self):
        # unpacks as (k_star, k_lower)
        return iter((self.k_upper, self.k_lower))

    @property
    def k_star(self) -> int:
        return max(self.k_upper, -self.k_lower)

    @property
    def unstable_bound(self) -> int:
        """Max off-axis eigenvalues: non-isolated disks, rounded down to even."""
        n = self.k_upper - self.k_lower + 1
        return n - (n % 2)


def _isolated_upper(s_fail):
    # disk k is isolated on the right once k - 3/2 >= s_fail
    return 0 if math.isnan(s_fail) else max(0, math.ceil(s_fail + 1.5) - 1)


def _isolated_lower(s_fail):
    # disk k is isolated on the left once k + 1/2 < s_fail
    return 0 if math.isnan(s_fail) else min(0, math.ceil(s_fail - 0.5))


def midpoint_k_star(T: float, l1: float, c: float, d: float) -> float:
    """Jensen-midpoint tail index for omega ~ kappa^d with d > 2."""
    if d <= 2:
        raise NotApplicableError("the midpoint bound needs growth degree d > 2")
    num = 2.0 * l1 - c if c < 0 else 2.0 * l1
    return (T / (2.0 * np.pi)) ** ((d - 1.0) / (d - 2.0)) * (num / d) ** (1.0 / (d - 2.0))


def bbm_threshold(problem: SpectralProblem) -> float:
    """``T^2 ||Q||_1 / (2 pi^2 |c|)``: adjacent BBM disks separate once k + mu exceeds it."""
    return problem.period**2 * problem.radius_norm / (2.0 * np.pi**2 * abs(problem.c))


def all_disjoint_sufficient(problem: SpectralProblem) -> bool:
    """Closed-form sufficient condition for all disks to be pairwise disjoint.

    gKdV: ``||Q||_1^2 < 3 c (2 pi/T)^2`` together with ``c > ||Q||_1``; the
    second inequality covers the pair straddling k + mu = -1/2, which the
    discriminant argument alone does not reach.
    BBM: ``2 pi |c| / T > ||Q||_1``.
    """
    fam = problem.dispersion.family
    a = 2.0 * np.pi / problem.period
    L = problem.radius_norm
    if fam is Family.GKDV and problem.center_mean == 0.0:
        return bool(problem.c > 0 and L * L < 3.0 * problem.c * a * a and problem.c > L)
    if fam is Family.BBM and problem.mean_mode is not MeanMode.DIAGONAL:
        return bool(a * abs(problem.c) > L)
    raise NotApplicableError(f"no closed-form all-disjoint condition for {fam.value}")


def tail_index_bound(problem: SpectralProblem) -> TailBound:
    """Analytic tail indices (k_upper, k_lower) for the problem's family.

    gKdV uses the midpoint bound with d = 3, BBM its monotone-radius
    bound, Kawahara a scan of the exact adjacency condition.  Benjamin-Ono
    raises :class:`NotApplicableError`: its disks never separate.
    """
    fam = problem.dispersion.family
    if fam is Family.BENJAMIN_ONO:
        raise NotApplicableError(
            "Benjamin-Ono disks overlap asymptotically; no tail bound exists"
        )
    s_up = adjacent_threshold(problem, +1)
    s_lo = adjacent_threshold(problem, -1)
    sharp_up, sharp_lo = _isolated_upper(s_up), _isolated_lower(s_lo)

    if fam is Family.GKDV and problem.center_mean == 0.0 and all_disjoint_sufficient(problem):
        return TailBound(0, 0, 0.0, 0.0, "all-disjoint", sharp_up, sharp_lo, s_up, s_lo)
    if fam is Family.GKDV and problem.center_mean == 0.0:
        value = midpoint_k_star(problem.period, problem.radius_norm, problem.c, 3.0)
        k = math.ceil(value)
        return TailBound(k, -k, value, -value, "midpoint", sharp_up, sharp_lo, s_up, s_lo)
    if fam is Family.BBM and problem.mean_mode is not MeanMode.DIAGONAL and problem.c != 0:
        if all_disjoint_sufficient(problem):
            return TailBound(0, 0, 0.0, 0.0, "all-disjoint", sharp_up, sharp_lo, s_up, s_lo)
        value = bbm_threshold(problem)
        k_up = _isolated_upper(value)
        k_lo = _isolated_lower(-value - 1.0)
        return TailBound(k_up, k_lo, value, -value, "monotone-radius", sharp_up, sharp_lo, s_up, s_lo)
    # generic case: non-monotone centers can entangle non-neighbours, so
    # scan the gap to every other disk, not only the adjacent one
    iso_up = _last_failure(problem, -0.5, +1, isolation_gap)
    iso_lo = _last_failure(problem, -0.5, -1, isolation_gap)
    k_up = 0 if iso_up is None else max(0, math.ceil(iso_up + 0.5) - 1)
    k_lo = 0 if iso_lo is None else min(0, math.ceil(iso_lo - 0.5))
    v_up = float("nan") if iso_up is None else float(iso_up)
    v_lo = float("nan") if iso_lo is None else float(iso_lo)
    return TailBound(k_up, k_lo, v_up, v_lo, "scan", sharp_up, sharp_lo, s_up, s_lo)


# --- connected components ----------------------------------------------------


class UnionFind:
    """Disjoint-set forest with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class Component:
    indices: tuple[int, ...]
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    @property
    def size(self) -> int:
        return len(self.indices)


@dataclass
class ComponentReport:
    mu: float
    window: int
    components: list[Component]
    k_star: int | None
    k_lower: int | None
    unstable_bound: int
    tail: TailBound | None = None
    centers: np.ndarray = field(default=None, repr=False)
    radii: np.ndarray = field(default=None, repr=False)

    @property
    def largest(self) -> Component:
        return max(self.components, key=lambda c: (c.size, -abs(c.indices[0])))

    def component_of(self, k: int) -> Component:
        for comp in self.components:
            if k in comp.indices:
                return comp
        raise KeyError(k)


def intersection_pairs(centers, radii):
    """All index pairs (i < j) whose closed disks on the imaginary axis meet."""
    centers = np.asarray(centers, dtype=float)
    radii = np.asarray(radii, dtype=float)
    d = np.abs(centers[:, None] - centers[None, :])
    hit = d <= radii[:, None] + radii[None, :]
    i, j = np.nonzero(np.triu(hit, 1))
    return list(zip(i.tolist(), j.tolist()))


def components(problem: SpectralProblem, mu: float, window_N: int, tail: TailBound | None = None):
    """Connected components of the disks with |k| <= window_N.

    The window must reach past the analytic tail bound so that every
    intersection is captured; Benjamin-Ono, which has none, is accepted
    as is.
    """
    mu = check_mu(mu)
    if tail is None:
        try:
            tail = tail_index_bound(problem)
        except NotApplicableError:
            tail = None
    if tail is not None and window_N < tail.k_star:
        raise WindowError(f"window_N={window_N} is below the tail bound k*={tail.k_star}")

    ks = np.arange(-window_N, window_N + 1)
    centers, radii = disk_table(problem, mu, ks)
    uf = UnionFind(ks.size)
    for i, j in intersection_pairs(centers, radii):
        uf.union(i, j)

    comps = []
    for g in uf.groups():
        g = np.asarray(g)
        comps.append(Component(
            indices=tuple(int(k) for k in ks[g]),
            re_min=float(-radii[g].max()),
            re_max=float(radii[g].max()),
            im_min=float((centers[g] - radii[g]).min()),
            im_max=float((centers[g] + radii[g]).max()),
        ))
    unstable = sum(c.size for c in comps if c.size > 1)
    return ComponentReport(
        mu=mu,
        window=int(window_N),
        components=comps,
        k_star=None if tail is None else tail.k_upper,
        k_lower=None if tail is None else tail.k_lower,
        unstable_bound=int(unstable),
        tail=tail,
        centers=centers,
        radii=radii,
    )
