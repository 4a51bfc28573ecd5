"""End-to-end experiment pipeline and on-disk artifacts.

A run works through fixed stages: build the physical objects, check the
stability criterion and margin per mode, solve the mode system, optionally
evolve the independent phase-space solver for cross-validation, fit decay
rates, and certify the decay-bound constants when the equilibrium passed the
criterion. Every product is written with deterministic bytes: CSV numbers in
17-significant-digit scientific notation, JSON with sorted keys, no
timestamps, and iteration order fixed by the configured mode list, so a
rerun of the same configuration reproduces the output files exactly.

If a stage fails the exception propagates, but the manifest is still written
with a failure marker naming the stage, so partial outputs remain usable.
"""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._version import __version__
from .config import ExperimentConfig
from .equilibria import check_quasi_neutrality
from .kernels import combined_kernel, fit_decay_bound
from .penrose import penrose_report
from .volterra import (make_forcing, solve_mode, fit_forcing_bounds,
                       TheoremConstants, theorem_bound, export_rows)
from .oracle import from_perturbations, evolve
from .analysis import fit_exponential_envelope, compare_trajectories
from .errors import InsufficientDataError


def _jsonify(obj):
    """Recursively convert to plain JSON-safe values.

    Non-finite floats become strings so the files stay standard JSON.
    """
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonify(float(obj.real)), "im": _jsonify(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if np.isfinite(x) else str(x)
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    return obj


def _write_json(path: Path, payload) -> None:
    text = json.dumps(_jsonify(payload), sort_keys=True, indent=2)
    path.write_text(text + "\n", encoding="utf-8")


def _write_csv(path: Path, header, columns: np.ndarray) -> None:
    lines = [",".join(header)]
    for row in np.atleast_2d(columns):
        lines.append(",".join("%.17e" % v for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class ExperimentReport:
    """In-memory results of one run; files are listed relative to out_dir."""

    out_dir: str
    stable: bool = False
    penrose: dict = field(default_factory=dict)
    margins: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    forcings: dict = field(default_factory=dict)
    kernels: dict = field(default_factory=dict)
    conservation: dict = field(default_factory=dict)
    oracle: object = None
    comparisons: dict = field(default_factory=dict)
    fits: dict = field(default_factory=dict)
    energy_fit: object = None
    theorem: dict = field(default_factory=dict)
    theorem_skipped: str | None = None
    files: list = field(default_factory=list)
    manifest: dict = field(default_factory=dict)


def _oracle_modes(modes) -> tuple:
    ks = set()
    for k in modes:
        ks.add(int(k))
        ks.add(-int(k))
    return tuple(sorted(ks))


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> ExperimentReport:
    """Execute the full pipeline, writing artifacts under the output directory.

    Explicit out_dir wins over the LANDAU2S_OUTPUT environment variable,
    which wins over the configured directory.
    """
    target = out_dir or os.environ.get("LANDAU2S_OUTPUT") or cfg.out_dir
    out = Path(target)
    out.mkdir(parents=True, exist_ok=True)
    rep = ExperimentReport(out_dir=str(out))
    manifest = {
        "version": __version__,
        "config": cfg.to_manifest_dict(),
        "results": {},
        "failure": None,
    }
    rep.manifest = manifest
    csv_on = "csv" in cfg.out_formats
    json_on = "json" in cfg.out_formats
    stage = "setup"
    try:
        sp = cfg.species()
        profile = cfg.profile()
        potential = cfg.potential()
        pert_e, pert_i = cfg.perturbations()
        # both species share the profile, so neutrality is structural; the
        # check still runs so a future asymmetric builder cannot skip it
        check_quasi_neutrality(profile, profile)

        stage = "penrose"
        pen_json = {}
        for k in cfg.modes:
            report, scan = penrose_report(
                k, profile, potential, sp, cfg.Lambda,
                re_steps=cfg.re_steps, om_range=cfg.om_range(),
                om_steps=cfg.om_steps, kern_tmax=cfg.kern_t_max)
            rep.penrose[k] = report
            rep.margins[k] = scan
            entry = report.to_json_dict()
            entry["margin"] = {
                "factor": scan.factor,
                "re_steps": len(scan.re_grid),
                "om_steps": len(scan.om_grid),
                "om_range": [float(scan.om_grid[0]), float(scan.om_grid[-1])],
            }
            pen_json[str(k)] = entry
        rep.stable = all(r.stable for r in rep.penrose.values())
        if json_on:
            _write_json(out / "penrose.json", pen_json)
            rep.files.append("penrose.json")

        stage = "volterra"
        for k in cfg.modes:
            kern = combined_kernel(k, profile, potential, sp)
            forcing = make_forcing(k, pert_e, pert_i)
            series = solve_mode(k, forcing, kern, sp, cfg.T, cfg.dt)
            rep.kernels[k] = kern
            rep.forcings[k] = forcing
            rep.series[k] = series
            t = series.times
            expected = sp.mass_ratio * forcing.a_e(t) + forcing.a_i(t)
            defect = np.max(np.abs(series.weighted_sum(sp) - expected))
            scale = max(float(np.max(np.abs(expected))), 1e-300)
            rep.conservation[k] = float(defect) / scale
            if csv_on:
                name = f"mode_k{k}.csv"
                _write_csv(out / name, *export_rows(series, sp))
                rep.files.append(name)

        if cfg.oracle:
            stage = "oracle"
            state = from_perturbations(pert_e, pert_i,
                                       _oracle_modes(cfg.modes),
                                       eta_max=cfg.eta_max, d_eta=cfg.d_eta)
            traj, _ = evolve(state, (profile, profile), potential, sp,
                             cfg.T, cfg.dt)
            rep.oracle = traj
            for k in cfg.modes:
                rep.comparisons[k] = compare_trajectories(
                    rep.series[k], traj, k=k, norm="sup")
            if csv_on:
                header = ["t"]
                cols = [traj.times]
                for k in cfg.modes:
                    j = traj.column(k)
                    header += [f"abs_rho_e_k{k}", f"abs_rho_i_k{k}",
                               f"abs_diff_k{k}"]
                    cols += [np.abs(traj.rho_e[:, j]),
                             np.abs(traj.rho_i[:, j]),
                             np.abs(traj.rho_diff[:, j])]
                header.append("energy")
                cols.append(traj.energy)
                _write_csv(out / "oracle.csv", header, np.column_stack(cols))
                rep.files.append("oracle.csv")

        stage = "fit"
        fit_json = {}
        window = cfg.fit_window()
        for k in cfg.modes:
            series = rep.series[k]
            try:
                fit = fit_exponential_envelope(series.times,
                                               series.difference, window)
                rep.fits[k] = fit
                fit_json[str(k)] = fit.to_json_dict()
            except InsufficientDataError as exc:
                rep.fits[k] = None
                fit_json[str(k)] = {"skipped": str(exc)}
        if cfg.oracle:
            try:
                rep.energy_fit = fit_exponential_envelope(
                    rep.oracle.times, rep.oracle.energy, window)
                fit_json["energy"] = rep.energy_fit.to_json_dict()
            except InsufficientDataError as exc:
                fit_json["energy"] = {"skipped": str(exc)}
        if json_on:
            _write_json(out / "fit.json", fit_json)
            rep.files.append("fit.json")

        stage = "theorem"
        theorem_json = {}
        if not rep.stable:
            rep.theorem_skipped = "criterion failed"
            theorem_json = {"skipped": rep.theorem_skipped}
        else:
            for k in cfg.modes:
                bound = fit_decay_bound(rep.kernels[k],
                                        t_max=cfg.kern_t_max)
                fb = fit_forcing_bounds(rep.forcings[k], sp, t_max=cfg.T)
                scan = rep.margins[k]
                cap = min(fb.lambda_plus, fb.lambda_minus, cfg.Lambda,
                          bound.lambda0)
                consts = TheoremConstants(
                    C0=bound.C0, lambda0=bound.lambda0,
                    alpha_plus=fb.alpha_plus, lambda_plus=fb.lambda_plus,
                    alpha_minus=fb.alpha_minus, lambda_minus=fb.lambda_minus,
                    kappa=scan.kappa, Lambda=scan.Lambda,
                    lambda_prime=0.9 * cap)
                check = theorem_bound(rep.series[k], consts, sp)
                rep.theorem[k] = (consts, check)
                theorem_json[str(k)] = {
                    "constants": consts.to_json_dict(),
                    "check": check.to_json_dict(),
                }
        if json_on:
            _write_json(out / "theorem.json", theorem_json)
            rep.files.append("theorem.json")

        stage = "manifest"
        manifest["results"] = {
            "stable": rep.stable,
            "kappa": {str(k): s.kappa for k, s in rep.margins.items()},
            "conservation_defect": {str(k): v
                                    for k, v in rep.conservation.items()},
            "oracle_sup_gap": {str(k): v for k, v in rep.comparisons.items()},
            "fitted_rates": {str(k): (f.rate if f is not None else None)
                             for k, f in rep.fits.items()},
            "energy_rate": (rep.energy_fit.rate
                            if rep.energy_fit is not None else None),
            "theorem_holds": ({str(k): c.holds
                               for k, (_, c) in rep.theorem.items()}
                              if rep.theorem_skipped is None
                              else rep.theorem_skipped),
            "files": sorted(rep.files),
        }
    except Exception as exc:
        manifest["failure"] = {"stage": stage,
                               "error": f"{type(exc).__name__}: {exc}"}
        _write_json(out / "manifest.json", manifest)
        raise
    _write_json(out / "manifest.json", manifest)
    rep.files.append("manifest.json")
    return rep
