import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specdisk import disks as dk
from specdisk import hill
from specdisk import verify as vf

from conftest import zero_problem

FAMILIES = ["mkdv", "bbm", "kawahara", "bo"]


def shifted(res, shift):
    return hill.SpectrumResult(res.mu, res.N, res.eigenvalues + shift, res.trusted_band)


# --- clustering ----------------------------------------------------------------


def test_cluster_labels_single_linkage():
    ev = np.array([0.0, 1e-7, 2e-7, 1.0, 1.0 + 5e-7, 3j])
    lab = vf.cluster_labels(ev)
    assert len(set(lab[:3])) == 1 and len(set(lab[3:5])) == 1
    assert len(set(lab)) == 3


def test_off_axis_uses_cluster_mean():
    # a Jordan-split zero: symmetric O(sqrt eps) real parts cancel in the mean
    ev = np.array([-3e-8, 3e-8, 1e-3 + 1j, -1e-3 + 1j, 2j])
    assert vf.off_axis_count(ev) == 2
    assert vf.off_axis_count(np.array([], dtype=complex)) == 0


def test_distance_to_union():
    d = vf.distance_to_union(np.array([0.0, 3j, 1.0]), [0.0, 3.0], [0.5, 0.0])
    np.testing.assert_allclose(d, [-0.5, 0.0, 0.5])


# --- reference cases -------------------------------------------------------------


def test_zero_potential_passes_exactly():
    p = zero_problem(c=0.4)
    rep = vf.verify(p, 0.3, 16, window_N=16)
    assert rep.passed
    assert rep["containment"].margin < 0
    assert rep["imaginary"].details["off_axis"] == 0
    assert rep["counts"].details["largest"] == 1
    assert rep["homotopy"].details["tau0_center_error"] == 0.0


def test_mkdv_zero(mkdv):
    rep = vf.verify(mkdv, 0.0, 64)
    assert rep.passed
    assert rep["counts"].details["largest"] == 5
    assert rep["counts"].details["largest_count"] == 5
    assert rep["homotopy"].details["largest_component"] == 5
    d = rep["containment"].details
    assert d["max_distance"] <= 0


def test_kawahara_seven(kawahara):
    chk = vf.check_counts(kawahara, 0.0, 96, vf._default_window(kawahara, 96))
    assert chk.passed
    assert chk.details["largest"] == 7 and chk.details["largest_count"] == 7


def test_mkdv_at_most_four(mkdv):
    s = hill.solve(mkdv, 0.4, 64, band=True)
    chk = vf.certify_imaginary(s, mkdv, vf._default_window(mkdv, 64))
    assert chk.passed and chk.details["off_axis"] <= 4


@pytest.mark.parametrize("mu", [-0.4, 0.0, 0.2, 0.5])
def test_bbm_stays_on_axis(bbm, mu):
    s = hill.solve(bbm, mu, 64, band=True)
    chk = vf.certify_imaginary(s, bbm, vf._default_window(bbm, 64))
    assert chk.passed and chk.details["off_axis"] == 0


def test_disjoint_homotopy_all_singletons(bbm):
    # BBM disks are pairwise disjoint beyond the tail, but not all disjoint;
    # a nearly-zero potential is all-disjoint, so all counts are one
    p = zero_problem("gkdv", c=3.0)
    assert dk.all_disjoint_sufficient(p)
    chk = vf.homotopy_trace(p, 0.2, 16, steps=10, window_N=8)
    assert chk.passed and chk.details["largest_component"] == 1


def test_report_structure(bbm):
    rep = vf.verify(bbm, 0.1, 32)
    names = [c.name for c in rep.checks]
    assert names == ["symmetry", "containment", "counts", "homotopy", "imaginary"]
    for c in rep.checks[1:]:
        assert c.depends_on == ("symmetry",)
    d = rep.to_dict()
    assert all(isinstance(c["margin"], float) for c in d["checks"])
    with pytest.raises(KeyError):
        rep["nope"]


def test_homotopy_steps_minimum(mkdv):
    with pytest.raises(ValueError):
        vf.homotopy_trace(mkdv, 0.0, 32, steps=9)


def test_bisect_transition(mkdv):
    mu_c = vf.bisect_transition(mkdv, 0.0, 0.5, 64, tol=1e-3)
    assert 0.22 <= mu_c <= 0.26
    with pytest.raises(ValueError):
        vf.bisect_transition(mkdv, 0.05, 0.15, 64)


# --- negative controls --------------------------------------------------------------


def test_shift_zero_potential_margin_one():
    p = zero_problem(c=0.4)
    s = hill.solve(p, 0.2, 16, band=True)
    chk = vf.check_containment(shifted(s, 1.0), p, 16)
    assert not chk.passed
    assert chk.margin == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("name", FAMILIES)
def test_shift_breaks_symmetry(four_families, name):
    p = four_families[name]
    s = hill.solve(p, 0.1, 32, band=True)
    chk = vf.check_symmetry(shifted(s, 1.0))
    assert not chk.passed and chk.margin > 0


@pytest.mark.parametrize("name", FAMILIES)
def test_shift_past_radii_breaks_containment(four_families, name):
    p = four_families[name]
    s = hill.solve(p, 0.1, 32, band=True)
    K = 64
    _, radii = dk.disk_table(p, 0.1, np.arange(-K, K + 1))
    chk = vf.check_containment(shifted(s, radii.max() + 1.0), p, K)
    assert not chk.passed and chk.margin > 0


def test_verify_skips_after_symmetry_failure(mkdv, monkeypatch):
    real = vf._spectrum_for
    monkeypatch.setattr(vf, "_spectrum_for", lambda *a: shifted(real(*a), 1.0))
    rep = vf.verify(mkdv, 0.0, 32)
    assert not rep["symmetry"].passed
    for name in ("containment", "counts", "homotopy", "imaginary"):
        assert not rep[name].passed and rep[name].margin == math.inf
        assert "skipped" in rep[name].details


def test_inflated_radius_breaks_counts(mkdv, monkeypatch):
    window = vf._default_window(mkdv, 64)
    s = hill.solve(mkdv, 0.0, 64, band=True)
    assert vf.check_counts(mkdv, 0.0, 64, window, s).passed
    real = dk.components

    def inflated(problem, mu, window_N, tail=None):
        rep = real(problem, mu, window_N, tail)
        ks = np.arange(-window_N, window_N + 1)
        i = int(np.nonzero(ks == 5)[0][0])  # a singleton next to singletons
        radii = rep.radii.copy()
        radii[i] = 3.0 * abs(rep.centers[i + 1] - rep.centers[i])
        return dataclasses.replace(rep, radii=radii)

    monkeypatch.setattr(vf.dk, "components", inflated)
    chk = vf.check_counts(mkdv, 0.0, 64, window, s)
    assert not chk.passed and chk.margin > 0
    assert chk.details["ambiguous"] > 0


def test_dropped_eigenvalue_breaks_counts(mkdv):
    s = hill.solve(mkdv, 0.0, 64, band=True)
    ev = s.eigenvalues
    keep = np.abs(ev - 2.438j) > 0.05
    bad = hill.SpectrumResult(s.mu, s.N, ev[keep], s.trusted_band)
    chk = vf.check_counts(mkdv, 0.0, 64, vf._default_window(mkdv, 64), bad)
    assert not chk.passed and chk.margin == 1.0


def test_off_axis_singleton_breaks_certify(bbm):
    s = hill.solve(bbm, 0.1, 32, band=True)
    ev = s.eigenvalues.copy()
    rep = dk.components(bbm, 0.1, 16)
    k = next(c.indices[0] for c in rep.components if c.size == 1 and abs(c.indices[0]) > 10)
    center = rep.centers[k + 16]
    j = int(np.argmin(np.abs(ev - 1j * center)))
    ev[j] += 1e-3
    chk = vf.certify_imaginary(hill.SpectrumResult(s.mu, s.N, ev, s.trusted_band), bbm, 16)
    assert not chk.passed and chk.margin > 0


def test_perturbed_tau0_breaks_homotopy(mkdv, monkeypatch):
    real = hill.solve

    def solve(problem, mu, N, tau=1.0, *a, **k):
        res = real(problem, mu, N, tau, *a, **k)
        if tau == 0.0:
            res = shifted(res, 1e-12)
        return res

    monkeypatch.setattr(vf.hill, "solve", solve)
    chk = vf.homotopy_trace(mkdv, 0.0, 32, steps=10)
    assert not chk.passed and chk.margin > 0


# --- properties -----------------------------------------------------------------------


@given(st.floats(-0.45, 0.5), st.sampled_from(FAMILIES))
def test_off_axis_within_component_bound(four_families, mu, name):
    p = four_families[name]
    window = vf._default_window(p, 32)
    ev = hill.solve(p, mu, 32, band=True).trusted_eigenvalues
    rep = dk.components(p, mu, window)
    assert vf.off_axis_count(ev) <= rep.unstable_bound
