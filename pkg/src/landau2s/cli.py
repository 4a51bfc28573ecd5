"""Command-line surface.

Subcommands:
  run <config>            full pipeline; writes artifacts to the output dir
  penrose <config>        stability criterion + margin, JSON on stdout
  dispersion <config>     root of the mode dispersion relation, JSON on stdout
  fit <csv>               decay fit of one column of an exported series CSV
  export-kernel <config>  memory-kernel samples as CSV, for debugging

Exit codes: 0 success, 2 configuration or parameter error, 3 numerical
failure, 4 equilibrium failed the stability criterion under run
--require-stable.
"""

import argparse
import json
import sys

import numpy as np

from ._version import __version__
from .config import load_config
from .kernels import combined_kernel
from .penrose import penrose_report
from .analysis import (fit_exponential_envelope, dispersion_root,
                       suggest_root_guess)
from .runner import run_experiment, _jsonify
from .errors import ConfigError


def _print_json(payload) -> None:
    print(json.dumps(_jsonify(payload), sort_keys=True, indent=2))


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    report = run_experiment(cfg, out_dir=args.out)
    res = report.manifest["results"]
    print(f"stable: {res['stable']}")
    for k in cfg.modes:
        rate = res["fitted_rates"].get(str(k))
        shown = "n/a" if rate is None else f"{rate:.6g}"
        print(f"mode {k}: kappa={res['kappa'][str(k)]:.6g} rate={shown}")
    print(f"wrote {len(res['files']) + 1} files to {report.out_dir}")
    if args.require_stable and not report.stable:
        print("equilibrium failed the stability criterion", file=sys.stderr)
        return 4
    return 0


def _cmd_penrose(args) -> int:
    cfg = load_config(args.config)
    sp, profile, potential = cfg.species(), cfg.profile(), cfg.potential()
    out = {}
    for k in cfg.modes:
        report, _ = penrose_report(k, profile, potential, sp, cfg.Lambda,
                                   re_steps=cfg.re_steps,
                                   om_range=cfg.om_range(),
                                   om_steps=cfg.om_steps,
                                   kern_tmax=cfg.kern_t_max)
        out[str(k)] = report.to_json_dict()
    _print_json(out)
    return 0


def _parse_complex(text: str) -> complex:
    re, _, im = text.partition(",")
    try:
        return complex(float(re), float(im or "0"))
    except ValueError:
        raise ValueError(f"expected RE,IM pair, got {text!r}") from None


def _cmd_dispersion(args) -> int:
    cfg = load_config(args.config)
    sp, profile, potential = cfg.species(), cfg.profile(), cfg.potential()
    k = args.k
    if args.guess is not None:
        guess = _parse_complex(args.guess)
    else:
        guess = suggest_root_guess(k, profile, potential, sp)
    xi = dispersion_root(k, profile, potential, sp, guess)
    _print_json({"k": k, "xi": xi, "decay_rate": xi.real,
                 "oscillation": xi.imag})
    return 0


def _read_csv(path: str):
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != len(header):
        raise ValueError("CSV width does not match its header")
    return header, data


def _cmd_fit(args) -> int:
    header, data = _read_csv(args.csv)
    cols = {name: data[:, j] for j, name in enumerate(header)}
    if "t" not in cols:
        raise ValueError('CSV has no "t" column')
    name = args.column
    if name in cols:
        values = cols[name]
    elif f"re_{name}" in cols and f"im_{name}" in cols:
        values = cols[f"re_{name}"] + 1j * cols[f"im_{name}"]
    else:
        raise ValueError(f"column {name!r} not found; have {header}")
    window = None
    if args.window_start is not None or args.window_end is not None:
        t = cols["t"]
        window = (args.window_start if args.window_start is not None
                  else float(t[0]),
                  args.window_end if args.window_end is not None
                  else float(t[-1]))
    fit = fit_exponential_envelope(cols["t"], values, window)
    _print_json(fit.to_json_dict())
    return 0


def _cmd_export_kernel(args) -> int:
    cfg = load_config(args.config)
    sp, profile, potential = cfg.species(), cfg.profile(), cfg.potential()
    kern = combined_kernel(args.k, profile, potential, sp)
    t = np.linspace(0.0, args.t_max, args.samples)
    vals = np.asarray(kern(t), dtype=complex)
    lines = ["t,re_kernel,im_kernel"]
    lines += ["%.17e,%.17e,%.17e" % (ti, vi.real, vi.imag)
              for ti, vi in zip(t, vals)]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="landau2s",
        description="Two-species linear Landau damping toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full pipeline")
    run.add_argument("config")
    run.add_argument("--out", default=None,
                     help="output directory (overrides config and "
                          "LANDAU2S_OUTPUT)")
    run.add_argument("--require-stable", action="store_true",
                     help="exit 4 if the equilibrium fails the criterion")
    run.set_defaults(func=_cmd_run)

    pen = sub.add_parser("penrose", help="stability criterion and margin")
    pen.add_argument("config")
    pen.set_defaults(func=_cmd_penrose)

    disp = sub.add_parser("dispersion", help="solve the mode dispersion "
                                             "relation")
    disp.add_argument("config")
    disp.add_argument("--k", type=int, required=True)
    disp.add_argument("--guess", default=None, metavar="RE,IM")
    disp.set_defaults(func=_cmd_dispersion)

    fit = sub.add_parser("fit", help="decay fit of a series CSV column")
    fit.add_argument("csv")
    fit.add_argument("--column", required=True)
    fit.add_argument("--window-start", type=float, default=None)
    fit.add_argument("--window-end", type=float, default=None)
    fit.set_defaults(func=_cmd_fit)

    exp = sub.add_parser("export-kernel", help="sample the memory kernel")
    exp.add_argument("config")
    exp.add_argument("--k", type=int, required=True)
    exp.add_argument("--t-max", type=float, default=4.0)
    exp.add_argument("--samples", type=int, default=513)
    exp.add_argument("--out", default=None)
    exp.set_defaults(func=_cmd_export_kernel)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for line in exc.violations:
            print(f"config error: {line}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
