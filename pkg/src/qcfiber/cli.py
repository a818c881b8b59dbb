"""Batch experiment runner.

Experiments (sew, schiffer-sweep, fiber-roundtrip, section-check,
holomorphy, bounds-suite) read a JSON config or command-line flags, write
results.csv + summary.json (+ plots/*.svg) into the output directory, and
exit 0 only when every assertion passes (1 assertion failure, 2 parse
failure, 3 solver failure).  Fixed seed and config give byte-identical
CSV output; parameter grids fan out to a process pool with --jobs.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

import numpy as np

from .beltrami import ConvergenceError, DilatationError
from .fibration import (bordered_point_from_rigging, perturbed_rigging,
                        recover_rigging, schiffer_section, sewing_map,
                        standard_rigging)
from .circle import CircleMap
from .mobius import INF
from .oqc import (coords_on_line, disk_schwarz_check, embed_coords,
                  geometric_series, named_disk_function, point_evaluation,
                  pointwise_schwarz_margin, reconstruct, seeded_disk_corpus)
from .schiffer import (SchifferCell, SchifferParams, SchifferError,
                       cross_ratio, holomorphy_residual, schiffer_variation)
from .surfaces import (BorderedSphereData, PuncturedSphere, RiggingError,
                       SewingError, SewOptions, scene_from_json, scene_to_json,
                       sew_caps_with_report)

EXPERIMENTS = ("sew", "schiffer-sweep", "fiber-roundtrip", "section-check",
               "holomorphy", "bounds-suite")

EXIT_OK, EXIT_ASSERTION, EXIT_PARSE, EXIT_SOLVER = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    scene: str = "builtin:four"
    resolution: int = 256
    tol: float = 1e-8
    h_list: tuple = (1e-2, 1e-3)
    out_dir: str = "out"
    seed: int = 0
    jobs: int = 1
    params: dict = dataclass_field(default_factory=dict)
    thresholds: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.resolution < 8 or self.resolution & (self.resolution - 1):
            raise ConfigError("resolution must be a power of two >= 8")
        if not 1e-12 < self.tol < 1e-2:
            raise ConfigError("tol must lie in (1e-12, 1e-2)")
        self.h_list = tuple(float(h) for h in self.h_list)

    def threshold(self, name: str, default: float) -> float:
        return float(self.thresholds.get(name, default))


def load_config(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    known = {"experiment", "scene", "resolution", "tol", "h_list", "out_dir",
             "seed", "jobs", "params", "thresholds"}
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    return ExperimentConfig(**obj)


# ---------------------------------------------------------------------------
# scenes
# ---------------------------------------------------------------------------

def builtin_scene(name: str) -> dict:
    if name == "builtin:four":
        sphere = PuncturedSphere((0, 1, INF, 2 + 1j))
        rig = standard_rigging(sphere, 0.15)
        from .surfaces import bordered_from_rigging
        return scene_to_json(bordered_from_rigging(rig))
    raise ConfigError(f"unknown builtin scene {name!r}")


def load_scene(spec: str) -> BorderedSphereData:
    if spec.startswith("builtin:"):
        return scene_from_json(builtin_scene(spec))
    try:
        with open(spec, encoding="utf-8") as fh:
            return scene_from_json(json.load(fh))
    except (KeyError, ValueError, RiggingError) as exc:
        raise ConfigError(f"invalid scene {spec!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def write_csv(path: Path, header: list, rows: list) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class Assertion:
    name: str
    measured: float
    threshold: float
    ok: bool

    @staticmethod
    def at_most(name: str, measured: float, threshold: float) -> "Assertion":
        return Assertion(name, float(measured), float(threshold),
                         bool(measured <= threshold))

    @staticmethod
    def at_least(name: str, measured: float, threshold: float) -> "Assertion":
        return Assertion(name, float(measured), float(threshold),
                         bool(measured >= threshold))


def write_summary(path: Path, experiment: str, assertions: list,
                  extra: dict | None = None) -> bool:
    ok = all(a.ok for a in assertions)
    payload = {
        "experiment": experiment,
        "pass": ok,
        "assertions": [{"name": a.name, "measured": a.measured,
                        "threshold": a.threshold, "pass": a.ok}
                       for a in assertions],
    }
    if extra:
        payload["extra"] = extra
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return ok


def write_svg_plot(path: Path, title: str, xlabel: str, ylabel: str,
                   series: list, loglog: bool = True) -> None:
    """Minimal SVG polyline plot; series = [(label, xs, ys), ...]."""
    width, height, pad = 640, 420, 60
    xs_all = np.concatenate([np.asarray(s[1], float) for s in series])
    ys_all = np.concatenate([np.asarray(s[2], float) for s in series])
    if loglog:
        xs_all = np.log10(np.maximum(xs_all, 1e-300))
        ys_all = np.log10(np.maximum(ys_all, 1e-300))
        xlabel, ylabel = f"log10 {xlabel}", f"log10 {ylabel}"
    x0, x1 = float(xs_all.min()), float(xs_all.max())
    y0, y1 = float(ys_all.min()), float(ys_all.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(v): return pad + (v - x0) / (x1 - x0) * (width - 2 * pad)
    def sy(v): return height - pad - (v - y0) / (y1 - y0) * (height - 2 * pad)

    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<text x="{width/2:.0f}" y="24" text-anchor="middle" '
             f'font-size="15">{title}</text>',
             f'<text x="{width/2:.0f}" y="{height-12}" text-anchor="middle" '
             f'font-size="12">{xlabel}</text>',
             f'<text x="16" y="{height/2:.0f}" font-size="12" '
             f'transform="rotate(-90 16 {height/2:.0f})" '
             f'text-anchor="middle">{ylabel}</text>',
             f'<rect x="{pad}" y="{pad}" width="{width-2*pad}" '
             f'height="{height-2*pad}" fill="none" stroke="#888"/>']
    for i, (label, xs, ys) in enumerate(series):
        xs = np.asarray(xs, float)
        ys = np.asarray(ys, float)
        if loglog:
            xs = np.log10(np.maximum(xs, 1e-300))
            ys = np.log10(np.maximum(ys, 1e-300))
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(xs, ys))
        color = colors[i % len(colors)]
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        for a, b in zip(xs, ys):
            parts.append(f'<circle cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="3" '
                         f'fill="{color}"/>')
        parts.append(f'<text x="{width-pad+4}" y="{pad+14*(i+1)}" '
                     f'font-size="11" fill="{color}">{label}</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")


def _map_tasks(fn, tasks: list, jobs: int) -> list:
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


# ---------------------------------------------------------------------------
# experiment bodies
# ---------------------------------------------------------------------------

def _run_sew(cfg: ExperimentConfig, out: Path) -> list:
    scene = load_scene(cfg.scene)
    options = SewOptions(grid_n=cfg.resolution, tol=cfg.tol)
    sewn, report = sew_caps_with_report(scene, options)
    rows = []
    for i in range(scene.n):
        rows.append([i, report.neg_mode_mass[i], report.boundary_fit_errors[i],
                     report.center_shifts[i]])
    write_csv(out / "results.csv",
              ["cap", "neg_mode_mass", "boundary_fit_error", "center_shift"],
              rows)
    (out / "sewn_scene.json").write_text(
        json.dumps(scene_to_json(_resew_data(sewn)), indent=2, sort_keys=True),
        encoding="utf-8")
    assertions = [
        Assertion.at_most("max_neg_mode_mass", max(report.neg_mode_mass),
                          cfg.threshold("neg_mode_mass", 1e-3)),
        Assertion.at_most("max_boundary_fit_error",
                          max(report.boundary_fit_errors),
                          cfg.threshold("boundary_fit_error", 1e-3)),
    ]
    if scene.n == 4 and all(t.analytic for t in scene.taus):
        drift = abs(cross_ratio(sewn.base) - cross_ratio(scene.ambient))
        assertions.append(Assertion.at_most(
            "identity_cross_ratio_drift", drift,
            cfg.threshold("cross_ratio_drift", 1e-6)))
    return assertions


def _resew_data(sewn) -> BorderedSphereData:
    from .surfaces import bordered_from_rigging
    return bordered_from_rigging(sewn)


def _sweep_cells(cfg: ExperimentConfig) -> tuple:
    spec = cfg.params.get("cells", [{"center": [4.0, 0.0], "radius": 0.5}])
    cells = tuple(SchifferCell(complex(*c["center"]), float(c["radius"]),
                               float(c.get("rotation", 0.0))) for c in spec)
    return cells


def _eps_grid(cfg: ExperimentConfig) -> list:
    radius = float(cfg.params.get("eps_radius", 0.1))
    side = int(cfg.params.get("eps_side", 5))
    ax = np.linspace(-radius, radius, side)
    return [complex(a, b) for b in ax for a in ax]


_WORKER_STATE: dict = {}


def _sweep_task(args) -> list:
    scene_obj, cells_spec, eps_re, eps_im, n, tol, h = args
    scene = scene_from_json(scene_obj)
    cells = tuple(SchifferCell(complex(*c[:2]), c[2], c[3]) for c in cells_spec)
    eps = complex(eps_re, eps_im)

    def lam(e: complex) -> complex:
        params = SchifferParams(cells, (e,) * len(cells))
        sphere, _ = schiffer_variation(scene.ambient, params, grid_n=n, tol=tol)
        return cross_ratio(sphere)

    val = lam(eps)
    resid = holomorphy_residual(lam, eps, h) if abs(eps) > 2 * h else np.nan
    return [eps_re, eps_im, val.real, val.imag, resid]


def _run_schiffer_sweep(cfg: ExperimentConfig, out: Path) -> list:
    scene = load_scene(cfg.scene)
    scene.ambient.require_normalized()
    cells = _sweep_cells(cfg)
    if len(cells) != scene.n - 3:
        raise SchifferError("cell count must be n - 3")
    cells_spec = [(c.center.real, c.center.imag, c.radius, c.rotation)
                  for c in cells]
    scene_obj = scene_to_json(scene)
    h_fine = min(cfg.h_list)
    tasks = [(scene_obj, cells_spec, e.real, e.imag, cfg.resolution, cfg.tol,
              h_fine) for e in _eps_grid(cfg)]
    rows = _map_tasks(_sweep_task, tasks, cfg.jobs)
    write_csv(out / "results.csv",
              ["eps_re", "eps_im", "lambda_re", "lambda_im",
               f"cr_residual_h_{h_fine:g}"], rows)

    lam_vals = np.array([complex(r[2], r[3]) for r in rows])
    spread = float(np.abs(lam_vals - lam_vals[0]).max())
    resids = [r[4] for r in rows if np.isfinite(r[4])]

    base = complex(cfg.params.get("residual_at", [0.05, 0.0])[0],
                   cfg.params.get("residual_at", [0.05, 0.0])[1])

    def lam_local(e: complex) -> complex:
        params = SchifferParams(cells, (e,) * len(cells))
        sphere, _ = schiffer_variation(scene.ambient, params,
                                       grid_n=cfg.resolution, tol=cfg.tol)
        return cross_ratio(sphere)

    curve = [holomorphy_residual(lam_local, base, h) for h in cfg.h_list]
    plots = out / "plots"
    plots.mkdir(exist_ok=True)
    write_svg_plot(plots / "residual_vs_h.svg",
                   "Cauchy-Riemann residual of the variation coordinate",
                   "stencil h", "residual",
                   [("cr-residual", list(cfg.h_list), curve)])
    return [
        Assertion.at_least("cross_ratio_spread", spread,
                           cfg.threshold("min_spread", 1e-4)),
        Assertion.at_most("max_cr_residual", max(resids) if resids else 0.0,
                          cfg.threshold("cr_residual", 2e-2)),
    ]


def _run_fiber_roundtrip(cfg: ExperimentConfig, out: Path) -> list:
    scene = load_scene(cfg.scene)
    count = int(cfg.params.get("count", 10))
    twist_amp = float(cfg.params.get("twist_amplitude", 0.1))
    samples = 512
    rows = []
    analytic_errs, twisted_errs = [], []
    for idx in range(count):
        twisted = idx % 2 == 1
        rig = perturbed_rigging(scene.ambient, seed=cfg.seed + idx)
        premaps = None
        if twisted:
            premaps = [None] * scene.n
            premaps[-1] = CircleMap.twist(twist_amp)
        options = SewOptions(grid_n=cfg.resolution, tol=cfg.tol)
        b = bordered_point_from_rigging(rig, premaps, options=options)
        fid = sewing_map(b)
        recovered = recover_rigging(b, fid)
        err = _rigging_boundary_error(b, recovered, samples)
        rows.append([idx, "twisted" if twisted else "analytic", err])
        (twisted_errs if twisted else analytic_errs).append(err)
    write_csv(out / "results.csv", ["rigging", "kind", "boundary_sup_error"],
              rows)
    return [
        Assertion.at_most("analytic_roundtrip", max(analytic_errs),
                          cfg.threshold("analytic", 1e-6)),
        Assertion.at_most("twisted_roundtrip",
                          max(twisted_errs) if twisted_errs else 0.0,
                          cfg.threshold("twisted", 1e-3)),
    ]


def _rigging_boundary_error(b, recovered, samples: int = 512) -> float:
    """Sup distance between recovered cap boundaries and the input boundary
    data transported to the sewn sphere (identity transport for analytic
    welds; compared in the 1/z chart where the trace is large)."""
    sewn, report = sew_caps_with_report(b.bordered, b.options)
    norm = report.normalization
    weld = report.weld
    worst = 0.0
    th = np.exp(2j * np.pi * np.arange(samples) / samples)
    for tau, cap in zip(b.bordered.taus, recovered):
        target = tau.samples
        if weld is not None:
            target = weld.evaluate(target)
        target = norm(target)
        got = cap.evaluate(th)
        fin = np.isfinite(got.real) & np.isfinite(target.real)
        big = np.abs(target[fin]) > 1e3
        diff = np.where(big,
                        np.abs(1 / got[fin] - 1 / target[fin]),
                        np.abs(got[fin] - target[fin]))
        worst = max(worst, float(diff.max()))
    return worst


def _run_section_check(cfg: ExperimentConfig, out: Path) -> list:
    scene = load_scene(cfg.scene)
    scene.ambient.require_normalized()
    cells = _sweep_cells(cfg)
    rig = scene_rigging(scene)
    params_at = lambda e: SchifferParams(cells, (e,) * len(cells))  # noqa: E731
    eta = schiffer_section(rig, params_at, grid_n=cfg.resolution, tol=cfg.tol)
    rows = []
    diffs = []
    for eps in _eps_grid(cfg):
        sphere, _ = schiffer_variation(scene.ambient, params_at(eps),
                                       grid_n=cfg.resolution, tol=cfg.tol,
                                       rigging=rig)
        lam_s = cross_ratio(sphere)
        lam_eta = cross_ratio(sewing_map(eta(eps)).sphere)
        diff = abs(lam_eta - lam_s)
        diffs.append(diff)
        rows.append([eps.real, eps.imag, lam_s.real, lam_s.imag,
                     lam_eta.real, lam_eta.imag, diff])
    write_csv(out / "results.csv",
              ["eps_re", "eps_im", "lambda_S_re", "lambda_S_im",
               "lambda_section_re", "lambda_section_im", "difference"], rows)
    return [Assertion.at_most("section_identity", max(diffs),
                              cfg.threshold("section", 1e-6))]


def scene_rigging(scene: BorderedSphereData):
    from .surfaces import RiggedSphere
    return RiggedSphere(scene.ambient, scene.caps)


def _run_holomorphy(cfg: ExperimentConfig, out: Path) -> list:
    scene = load_scene(cfg.scene)
    target = cfg.params.get("target", "schiffer-lambda")
    resolutions = sorted(int(n) for n in cfg.params.get("resolutions",
                                                        [cfg.resolution]))
    h_desc = sorted(cfg.h_list, reverse=True)
    e0 = complex(*cfg.params.get("at", [0.1, 0.0]))
    rows = []
    series = []
    table = {}
    for n in resolutions:
        fn = _holomorphy_target(target, scene, n, cfg.tol)
        curve = []
        for h in h_desc:
            r = holomorphy_residual(fn, e0, h)
            rows.append([target, n, h, r])
            table[(n, h)] = r
            curve.append(r)
        series.append((f"N={n}", list(h_desc), curve))
    write_csv(out / "results.csv", ["target", "resolution", "h", "residual"],
              rows)
    plots = out / "plots"
    plots.mkdir(exist_ok=True)
    write_svg_plot(plots / "holomorphy.svg",
                   f"CR residual of {target}", "stencil h", "residual", series)
    calibration = holomorphy_residual(np.conj, e0, min(h_desc))
    finest = table[(max(resolutions), min(h_desc))]
    coarsest = table[(min(resolutions), max(h_desc))]
    assertions = [
        Assertion.at_most("finest_residual", finest,
                          cfg.threshold("residual_factor", 1e-2) * calibration),
        Assertion.at_most("refinement_monotone", finest, coarsest),
    ]
    return assertions


def _holomorphy_target(tag: str, scene: BorderedSphereData, n: int, tol: float):
    if tag == "calibration":
        return np.conj
    if tag == "schiffer-lambda":
        cells = (SchifferCell(4.0 + 0j, 0.5),)

        def fn(e: complex) -> complex:
            params = SchifferParams(cells, (e,))
            sphere, _ = schiffer_variation(scene.ambient, params, grid_n=n,
                                           tol=tol)
            return cross_ratio(sphere)
        return fn
    if tag == "point-eval":
        base = embed_coords(named_disk_function("koebe"))
        direction = geometric_series(1.0, 38)

        def fn(t: complex) -> complex:
            coords = coords_on_line(base, direction, 0.0, t)
            return point_evaluation(reconstruct(coords), 0.3)
        return fn
    if tag in ("lambda-boundary", "lambda-coords"):
        rig = scene_rigging(scene)
        base_psi = rig.caps[-1].psi
        base = embed_coords(base_psi)
        direction = geometric_series(0.5, base_psi.truncation - 2)

        def fn(t: complex):
            caps = list(rig.caps)
            from .surfaces import ChartedCap, RiggedSphere
            psi_t = reconstruct(coords_on_line(base, direction, 0.0, t),
                                truncation=base_psi.truncation)
            caps[-1] = ChartedCap(caps[-1].chart, psi_t)
            moved = RiggedSphere(rig.base, tuple(caps))
            b = bordered_point_from_rigging(moved,
                                            options=SewOptions(grid_n=n, tol=tol))
            rec = recover_rigging(b, sewing_map(b))
            if tag == "lambda-boundary":
                return rec[-1].evaluate(np.exp(0.7j))
            coords = embed_coords(rec[-1].psi)
            return np.array([coords.v(0.31 + 0.2j), coords.c])
        return fn
    raise ConfigError(f"unknown holomorphy target {tag!r}")


def _run_bounds_suite(cfg: ExperimentConfig, out: Path) -> list:
    count = int(cfg.params.get("count", 50))
    corpus = seeded_disk_corpus(cfg.seed, count)
    rows = []
    derivs, norms, margins = [], [], []
    for i, psi in enumerate(corpus):
        d, nrm = disk_schwarz_check(psi)
        margin = pointwise_schwarz_margin(psi)
        rows.append([i, d, nrm, margin])
        derivs.append(d)
        norms.append(nrm)
        margins.append(margin)
    write_csv(out / "results.csv",
              ["psi", "deriv_at_zero", "pre_schwarzian_norm",
               "pointwise_margin"], rows)
    return [
        Assertion.at_most("max_deriv_at_zero", max(derivs),
                          1.0 + cfg.threshold("deriv_slack", 1e-9)),
        Assertion.at_most("max_pre_schwarzian_norm", max(norms),
                          6.0 + cfg.threshold("norm_slack", 1e-3)),
        Assertion.at_most("max_pointwise_margin", max(margins),
                          4.0 + cfg.threshold("pointwise_slack", 1e-3)),
    ]


_RUNNERS = {
    "sew": _run_sew,
    "schiffer-sweep": _run_schiffer_sweep,
    "fiber-roundtrip": _run_fiber_roundtrip,
    "section-check": _run_section_check,
    "holomorphy": _run_holomorphy,
    "bounds-suite": _run_bounds_suite,
}


def run_experiment(cfg: ExperimentConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        assertions = _RUNNERS[cfg.experiment](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConvergenceError, SewingError, DilatationError, SchifferError,
            RiggingError) as exc:
        (out / "summary.json").write_text(
            json.dumps({"experiment": cfg.experiment, "pass": False,
                        "error": str(exc)}, indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    ok = write_summary(out / "summary.json", cfg.experiment, assertions)
    for a in assertions:
        status = "pass" if a.ok else "FAIL"
        print(f"[{status}] {a.name}: {a.measured:.3e} vs {a.threshold:.3e}")
    return EXIT_OK if ok else EXIT_ASSERTION


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcfiber",
        description="numerical sewing and moduli experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment from a JSON config")
    run.add_argument("--config", required=True)
    _shared_flags(run)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--scene", default="builtin:four")
        _shared_flags(p)
    return parser


def _shared_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config)
        else:
            cfg = ExperimentConfig(experiment=args.command, scene=args.scene)
        for name, attr in (("jobs", "jobs"), ("out", "out_dir"),
                           ("seed", "seed"), ("resolution", "resolution"),
                           ("tol", "tol")):
            value = getattr(args, name, None)
            if value is not None:
                setattr(cfg, attr, value)
        cfg.__post_init__()
    except (ConfigError, OSError, json.JSONDecodeError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return run_experiment(cfg)


if __name__ == "__main__":
    sys.exit(main())
