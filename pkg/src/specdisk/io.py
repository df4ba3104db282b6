"""CSV and JSON serialization of potentials, disks, spectra and reports.

Floats are written with ``repr`` (shortest round-trip form), so reading a
file back reproduces the in-memory values bit for bit.  JSON output is
sorted and indented for stable diffs.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .disks import ComponentReport, GershgorinDisk, TailBound
from .hill import SpectrumResult
from .potentials import PeriodicPotential


def _f(x) -> str:
    return repr(float(x))


def _json_float(x):
    x = float(x)
    return None if math.isinf(x) else x


def _unjson_float(x):
    return math.inf if x is None else float(x)


def clean(obj):
    """Plain-JSON copy: numpy scalars unwrapped, non-finite floats as null."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def _csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# --- potentials --------------------------------------------------------------


def potential_csv(pot: PeriodicPotential) -> str:
    rows = [(int(k), _f(q.real), _f(q.imag)) for k, q in zip(pot.indices, pot.coefficients)]
    return _csv_text(("k", "re", "im"), rows)


def read_potential_csv(path, period: float, exact: bool = False) -> PeriodicPotential:
    """The CSV holds only coefficients; the period must be supplied."""
    rows = _read_csv(path)
    rows.sort(key=lambda r: int(r["k"]))
    coeffs = [complex(float(r["re"]), float(r["im"])) for r in rows]
    return PeriodicPotential(float(period), coeffs, exact)


def potential_dict(pot: PeriodicPotential, c_eff: float | None = None) -> dict:
    out = {
        "period": float(pot.period),
        "M": int(pot.M),
        "exact": bool(pot.exact),
        "mean": float(pot.mean),
        "l1_no_mean": float(pot.l1_no_mean),
        "l1_with_mean": float(pot.l1_with_mean),
        "coefficients": [
            {"k": int(k), "re": float(q.real), "im": float(q.imag)}
            for k, q in zip(pot.indices, pot.coefficients)
        ],
    }
    if c_eff is not None:
        out["c_eff"] = float(c_eff)
    return out


def potential_from_dict(d: dict) -> PeriodicPotential:
    rows = sorted(d["coefficients"], key=lambda r: r["k"])
    coeffs = [complex(r["re"], r["im"]) for r in rows]
    return PeriodicPotential(float(d["period"]), coeffs, bool(d.get("exact", False)))


# --- disks and components ----------------------------------------------------


def disks_csv(disks) -> str:
    rows = [(d.k, _f(d.mu), _f(d.center.imag), _f(d.radius)) for d in disks]
    return _csv_text(("k", "mu", "center_im", "radius"), rows)


def read_disks_csv(path) -> list[GershgorinDisk]:
    return [
        GershgorinDisk(int(r["k"]), float(r["mu"]), complex(0.0, float(r["center_im"])), float(r["radius"]))
        for r in _read_csv(path)
    ]


def tail_dict(tb: TailBound | None):
    if tb is None:
        return None
    return {
        "k_upper": tb.k_upper,
        "k_lower": tb.k_lower,
        "k_upper_value": float(tb.k_upper_value),
        "k_lower_value": float(tb.k_lower_value),
        "k_upper_sharp": tb.k_upper_sharp,
        "k_lower_sharp": tb.k_lower_sharp,
        "s_upper": _nan_to_none(tb.s_upper),
        "s_lower": _nan_to_none(tb.s_lower),
        "method": tb.method,
    }


def _nan_to_none(x):
    x = float(x)
    return None if math.isnan(x) else x


def component_report_dict(rep: ComponentReport) -> dict:
    return {
        "mu": float(rep.mu),
        "window": int(rep.window),
        "k_star": rep.k_star,
        "k_lower": rep.k_lower,
        "unstable_bound": int(rep.unstable_bound),
        "largest_component": int(rep.largest.size),
        "components": [
            {
                "indices": list(c.indices),
                "size": c.size,
                "bbox": [c.re_min, c.re_max, c.im_min, c.im_max],
            }
            for c in rep.components
        ],
    }


# --- spectra -----------------------------------------------------------------


def spectra_csv(results) -> str:
    rows = []
    for r in results:
        trusted = r.trusted
        for lam, t in zip(r.eigenvalues, trusted):
            rows.append((_f(r.mu), _f(lam.real), _f(lam.imag), "true" if t else "false"))
    return _csv_text(("mu", "re_lambda", "im_lambda", "trusted"), rows)


def read_spectra_csv(path) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """Return ``(mu, eigenvalues, trusted_mask)`` per mu, in file order."""
    groups: dict[float, list] = {}
    for r in _read_csv(path):
        groups.setdefault(float(r["mu"]), []).append(r)
    out = []
    for mu, rows in groups.items():
        ev = np.array([complex(float(r["re_lambda"]), float(r["im_lambda"])) for r in rows])
        mask = np.array([r["trusted"] == "true" for r in rows], dtype=bool)
        out.append((mu, ev, mask))
    return out


def spectrum_dict(r: SpectrumResult) -> dict:
    return {
        "mu": float(r.mu),
        "N": int(r.N),
        "trusted_band": _json_float(r.trusted_band),
        "converged": bool(r.converged),
        "method": r.method,
        "error": r.error,
        "eigenvalues": [[float(z.real), float(z.imag)] for z in r.eigenvalues],
    }


def spectrum_from_dict(d: dict) -> SpectrumResult:
    ev = np.array([complex(a, b) for a, b in d["eigenvalues"]], dtype=complex)
    return SpectrumResult(float(d["mu"]), int(d["N"]), ev, _unjson_float(d["trusted_band"]),
                          bool(d["converged"]), d["method"], d["error"])


def write_text(path, text: str) -> Path:
    return _write(path, text)


def write_json(path, obj) -> Path:
    return _write(path, dumps(obj))


def read_json(path):
    with open(path) as fh:
        return json.load(fh)
