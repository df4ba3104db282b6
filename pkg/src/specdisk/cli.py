"""Command-line front end: ``specdisk <command> --config run.json``.

Exit status: 0 on success, 1 when a verification check fails, 2 on a
usage or configuration error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import disks as dk
from . import hill
from . import io as sio
from . import potentials as pt
from . import svg
from . import verify as vf
from .dispersion import check_mu
from .errors import ConfigError, DomainError, NotApplicableError, SpecdiskError

SCHEMA_VERSION = 1
DEFAULT_MU_COUNT = 201
COMMANDS = ("potential", "disks", "spectrum", "verify", "figure")


def load_schema() -> dict:
    text = resources.files("specdisk").joinpath("run_config.schema.json").read_text()
    return json.loads(text)


def default_mu_grid(count: int = DEFAULT_MU_COUNT) -> list[float]:
    """``count`` equispaced points on (-1/2, 1/2], right end included."""
    return [float(m) for m in np.linspace(-0.5, 0.5, count + 1)[1:]]


@dataclass
class RunConfig:
    family: str
    params: dict = field(default_factory=dict)
    M: int | None = None
    mu_grid: list[float] = field(default_factory=default_mu_grid)
    N: int = 64
    window_N: int | None = None
    output_dir: str = "specdisk_out"
    formats: tuple[str, ...] = ("csv", "json", "svg")
    plot_eigenvalues: bool = True
    homotopy_steps: int = 20
    threads: int | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        try:
            jsonschema.validate(d, load_schema())
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"invalid config at {path}: {exc.message}") from None
        grid = d.get("mu_grid")
        if grid is None:
            mus = default_mu_grid()
        elif isinstance(grid, dict):
            mus = [float(m) for m in np.linspace(grid["start"], grid["stop"], grid["count"])]
        else:
            mus = [float(m) for m in grid]
        for mu in mus:
            try:
                check_mu(mu)
            except DomainError as exc:
                raise ConfigError(str(exc)) from None
        eq = d["equation"]
        return cls(
            family=eq["family"],
            params=dict(eq.get("params", {})),
            M=d.get("M"),
            mu_grid=mus,
            N=d.get("N", 64),
            window_N=d.get("window_N"),
            output_dir=d.get("output_dir", "specdisk_out"),
            formats=tuple(d.get("formats", ("csv", "json", "svg"))),
            plot_eigenvalues=d.get("plot_eigenvalues", True),
            homotopy_steps=d.get("homotopy_steps", 20),
            threads=d.get("threads"),
        )

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(data)

    def wave_params(self):
        """Instantiate the wave-family parameters named in the config."""
        cls = pt.FAMILIES[self.family]
        p = dict(self.params)
        try:
            if cls is pt.KawaharaCnQuartic:
                polish = bool(p.pop("polish", True))
                for key, val in pt.KAWAHARA_EXAMPLE_AMPLITUDES.items():
                    p.setdefault(key, val)
                if "sigma" in p:
                    wave = cls(**p)
                else:
                    wave = pt.fit_kawahara_sigma(**p)
                return pt.polish_kawahara_profile(wave) if polish else wave
            return cls(**p)
        except TypeError as exc:
            raise ConfigError(f"bad parameters for {self.family}: {exc}") from None

    def problem(self):
        return pt.make_problem(self.wave_params(), self.M)


def _window(cfg: RunConfig, problem) -> int:
    return cfg.window_N if cfg.window_N is not None else vf._default_window(problem, cfg.N)


def _threads(cfg: RunConfig, n: int) -> int:
    return hill._thread_count(n, cfg.threads)


def _out(cfg: RunConfig, name: str) -> Path:
    return Path(cfg.output_dir) / name


# --- commands ----------------------------------------------------------------


def cmd_potential(cfg: RunConfig) -> tuple[int, dict]:
    wave = cfg.wave_params()
    pot, c_eff = pt.build_potential(wave, cfg.M)
    data = sio.potential_dict(pot, c_eff)
    data["family"] = cfg.family
    data["params"] = dataclasses.asdict(wave)
    if "csv" in cfg.formats:
        sio.write_text(_out(cfg, "potential.csv"), sio.potential_csv(pot))
    if "json" in cfg.formats:
        sio.write_json(_out(cfg, "potential.json"), data)
    summary = {k: data[k] for k in ("family", "period", "M", "mean", "l1_no_mean", "l1_with_mean", "c_eff")}
    return 0, summary


def _tail_summary(problem):
    try:
        tb = dk.tail_index_bound(problem)
        err = None
    except NotApplicableError as exc:
        tb, err = None, str(exc)
    try:
        alldis = dk.all_disjoint_sufficient(problem)
    except NotApplicableError:
        alldis = None
    return tb, err, alldis


def cmd_disks(cfg: RunConfig) -> tuple[int, dict]:
    problem = cfg.problem()
    window = _window(cfg, problem)
    tb, err, alldis = _tail_summary(problem)
    reports, table = [], []
    for mu in cfg.mu_grid:
        rep = dk.components(problem, mu, window, tail=tb)
        reports.append(sio.component_report_dict(rep))
        table.extend(dk.disks(problem, mu, window))
    data = {
        "family": cfg.family,
        "window": window,
        "tail": sio.tail_dict(tb),
        "tail_error": err,
        "all_disjoint_sufficient": alldis,
        "reports": reports,
    }
    if "csv" in cfg.formats:
        sio.write_text(_out(cfg, "disks.csv"), sio.disks_csv(table))
    if "json" in cfg.formats:
        sio.write_json(_out(cfg, "components.json"), data)
    summary = {
        "family": cfg.family,
        "n_mu": len(cfg.mu_grid),
        "tail": data["tail"],
        "largest_component": max(r["largest_component"] for r in reports),
        "max_unstable_bound": max(r["unstable_bound"] for r in reports),
    }
    return 0, summary


def cmd_spectrum(cfg: RunConfig) -> tuple[int, dict]:
    problem = cfg.problem()
    results = hill.sweep(problem, cfg.mu_grid, cfg.N, band=True,
                         threads=_threads(cfg, len(cfg.mu_grid)))
    if "csv" in cfg.formats:
        sio.write_text(_out(cfg, "spectrum.csv"), sio.spectra_csv(results))
    if "json" in cfg.formats:
        sio.write_json(_out(cfg, "spectrum.json"), [sio.spectrum_dict(r) for r in results])
    failed = [r.mu for r in results if not r.converged]
    counts = [vf.off_axis_count(r.trusted_eigenvalues) for r in results if r.converged]
    summary = {
        "family": cfg.family,
        "n_mu": len(results),
        "N": cfg.N,
        "failed_mu": failed,
        "max_off_axis": max(counts) if counts else None,
    }
    return 0, summary


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    problem = cfg.problem()
    window = _window(cfg, problem)

    def one(mu):
        return vf.verify(problem, mu, cfg.N, window, steps=cfg.homotopy_steps)

    n = _threads(cfg, len(cfg.mu_grid))
    if n == 1:
        reports = [one(mu) for mu in cfg.mu_grid]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            reports = list(pool.map(one, cfg.mu_grid))
    passed = all(r.passed for r in reports)
    failed = sorted({c.name for r in reports for c in r.checks if not c.passed})
    off = [r["imaginary"].details.get("off_axis", 0) for r in reports if "skipped" not in r["imaginary"].details]
    summary = {
        "family": cfg.family,
        "passed": passed,
        "n_mu": len(reports),
        "failed_checks": failed,
        "max_off_axis": max(off) if off else None,
        "worst_margin": {
            name: max(r[name].margin for r in reports) for name in (c.name for c in reports[0].checks)
        },
    }
    if "json" in cfg.formats:
        sio.write_json(_out(cfg, "verification.json"),
                       {"summary": summary, "reports": [r.to_dict() for r in reports]})
    return (0 if passed else 1), summary


def cmd_figure(cfg: RunConfig) -> tuple[int, dict]:
    problem = cfg.problem()
    window = _window(cfg, problem)
    files = []
    if cfg.plot_eigenvalues:
        spectra = hill.sweep(problem, cfg.mu_grid, cfg.N, threads=_threads(cfg, len(cfg.mu_grid)))
    else:
        spectra = [None] * len(cfg.mu_grid)
    for i, (mu, spec) in enumerate(zip(cfg.mu_grid, spectra)):
        centers, radii = dk.disk_table(problem, mu, np.arange(-window, window + 1))
        ev = ()
        if spec is not None and spec.converged:
            lo, hi = (centers - radii).min(), (centers + radii).max()
            sel = (spec.eigenvalues.imag >= lo) & (spec.eigenvalues.imag <= hi)
            ev = spec.eigenvalues[sel]
        text = svg.figure(centers, radii, ev, title=f"{cfg.family}  mu = {mu:.4g}")
        path = _out(cfg, f"figure_{i:03d}.svg")
        sio.write_text(path, text)
        files.append(str(path))
    return 0, {"family": cfg.family, "figures": files}


HANDLERS = {
    "potential": cmd_potential,
    "disks": cmd_disks,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "figure": cmd_figure,
}


def run(command: str, cfg: RunConfig) -> tuple[int, dict]:
    return HANDLERS[command](cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specdisk",
        description="Gershgorin-disk bounds and Hill spectra for periodic waves",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "potential": "Fourier coefficients and norms of the potential",
        "disks": "disk tables, connected components and tail bounds",
        "spectrum": "Hill's-method spectra over the mu grid",
        "verify": "containment, counting, homotopy and symmetry checks",
        "figure": "SVG of disks (blue) and eigenvalues (red)",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, help="run configuration (JSON)")
        p.add_argument("--mu", type=float, help="run at this single Floquet exponent")
        p.add_argument("--n", type=int, help="override the Hill truncation N")
        p.add_argument("--out", help="override the output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args.config)
        if args.mu is not None:
            try:
                cfg.mu_grid = [check_mu(args.mu)]
            except DomainError as exc:
                raise ConfigError(str(exc)) from None
        if args.n is not None:
            if args.n < 16:
                raise ConfigError("--n must be >= 16")
            cfg.N = args.n
        if args.out is not None:
            cfg.output_dir = args.out
        status, summary = run(args.command, cfg)
    except (SpecdiskError, ValueError) as exc:
        print(f"specdisk: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(sio.dumps(summary))
    return status


if __name__ == "__main__":
    sys.exit(main())
