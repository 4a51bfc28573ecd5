"""Line-oriented experiment configuration.

Format: `[section]` headers, `key = value` lines, `#` or `;` comments, and
comma-separated lists. Every key has a documented default, so the empty
string is a valid configuration. The parser never stops at the first
problem: it collects every unknown key, malformed value, and invariant
violation (each tagged with its line number where one applies) and raises a
single ConfigError carrying the whole list.

Sections and keys, with defaults:

  [equilibrium] family=maxwellian (maxwellian|two_stream|bump_on_tail),
      sigma=1.0, drift=0.0, separation=2.0,
      bump_weight=0.1, bump_center=3.0, bump_sigma=0.5
  [potential]   family=coulomb (coulomb|screened), alpha=1.0, k_max=8
  [species]     m_e=1.0, m_i=1836.0, e=1.0
  [perturbation] family=cosine (cosine|zero), amplitude=0.001, mode=1,
      target=electron (electron|ion|both), sigma=1.0, drift=0.0
  [run]         T=20.0, dt=0.015625, modes=1, oracle=true,
      eta_max=40.0, d_eta=0.05
  [penrose]     Lambda=0.5, re_steps=6, om_steps=201, om_min=, om_max=,
      kern_t_max=4.0
  [fit]         window_start=, window_end=   (blank: first 10% dropped)
  [output]      directory=out, formats=csv,json
"""

from dataclasses import dataclass, fields

from .equilibria import (SpeciesParams, make_maxwellian, make_two_stream,
                         make_bump_on_tail)
from .potential import coulomb_potential, screened_potential
from .perturbations import CosinePerturbation, ZeroPerturbation
from .errors import ConfigError


def _float(s: str) -> float:
    return float(s)


def _opt_float(s: str):
    return None if s == "" else float(s)


def _int(s: str) -> int:
    v = float(s)
    if v != int(v):
        raise ValueError("not an integer")
    return int(v)


def _bool(s: str) -> bool:
    low = s.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError("not a boolean")


def _int_list(s: str) -> tuple:
    parts = [p.strip() for p in s.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return tuple(_int(p) for p in parts)


def _str_list(s: str) -> tuple:
    return tuple(p.strip() for p in s.split(",") if p.strip())


def _enum(*allowed):
    def parse(s: str) -> str:
        if s not in allowed:
            raise ValueError(f"must be one of {', '.join(allowed)}")
        return s
    return parse


# (section, key) -> (attribute, parser, default)
_SCHEMA = {
    ("equilibrium", "family"): ("eq_family",
                                _enum("maxwellian", "two_stream",
                                      "bump_on_tail"), "maxwellian"),
    ("equilibrium", "sigma"): ("eq_sigma", _float, 1.0),
    ("equilibrium", "drift"): ("eq_drift", _float, 0.0),
    ("equilibrium", "separation"): ("eq_separation", _float, 2.0),
    ("equilibrium", "bump_weight"): ("eq_bump_weight", _float, 0.1),
    ("equilibrium", "bump_center"): ("eq_bump_center", _float, 3.0),
    ("equilibrium", "bump_sigma"): ("eq_bump_sigma", _float, 0.5),
    ("potential", "family"): ("pot_family", _enum("coulomb", "screened"),
                              "coulomb"),
    ("potential", "alpha"): ("pot_alpha", _float, 1.0),
    ("potential", "k_max"): ("pot_k_max", _int, 8),
    ("species", "m_e"): ("m_e", _float, 1.0),
    ("species", "m_i"): ("m_i", _float, 1836.0),
    ("species", "e"): ("e_charge", _float, 1.0),
    ("perturbation", "family"): ("pert_family", _enum("cosine", "zero"),
                                 "cosine"),
    ("perturbation", "amplitude"): ("pert_amplitude", _float, 1e-3),
    ("perturbation", "mode"): ("pert_mode", _int, 1),
    ("perturbation", "target"): ("pert_target",
                                 _enum("electron", "ion", "both"),
                                 "electron"),
    ("perturbation", "sigma"): ("pert_sigma", _float, 1.0),
    ("perturbation", "drift"): ("pert_drift", _float, 0.0),
    ("run", "T"): ("T", _float, 20.0),
    ("run", "dt"): ("dt", _float, 0.015625),
    ("run", "modes"): ("modes", _int_list, (1,)),
    ("run", "oracle"): ("oracle", _bool, True),
    ("run", "eta_max"): ("eta_max", _float, 40.0),
    ("run", "d_eta"): ("d_eta", _float, 0.05),
    ("penrose", "Lambda"): ("Lambda", _float, 0.5),
    ("penrose", "re_steps"): ("re_steps", _int, 6),
    ("penrose", "om_steps"): ("om_steps", _int, 201),
    ("penrose", "om_min"): ("om_min", _opt_float, None),
    ("penrose", "om_max"): ("om_max", _opt_float, None),
    ("penrose", "kern_t_max"): ("kern_t_max", _float, 4.0),
    ("fit", "window_start"): ("fit_window_start", _opt_float, None),
    ("fit", "window_end"): ("fit_window_end", _opt_float, None),
    ("output", "directory"): ("out_dir", str, "out"),
    ("output", "formats"): ("out_formats", _str_list, ("csv", "json")),
}

_SECTIONS = {sec for sec, _ in _SCHEMA}


@dataclass(frozen=True)
class ExperimentConfig:
    eq_family: str
    eq_sigma: float
    eq_drift: float
    eq_separation: float
    eq_bump_weight: float
    eq_bump_center: float
    eq_bump_sigma: float
    pot_family: str
    pot_alpha: float
    pot_k_max: int
    m_e: float
    m_i: float
    e_charge: float
    pert_family: str
    pert_amplitude: float
    pert_mode: int
    pert_target: str
    pert_sigma: float
    pert_drift: float
    T: float
    dt: float
    modes: tuple
    oracle: bool
    eta_max: float
    d_eta: float
    Lambda: float
    re_steps: int
    om_steps: int
    om_min: float | None
    om_max: float | None
    kern_t_max: float
    fit_window_start: float | None
    fit_window_end: float | None
    out_dir: str
    out_formats: tuple

    # builders for the objects the pipeline consumes

    def species(self) -> SpeciesParams:
        return SpeciesParams(m_e=self.m_e, m_i=self.m_i,
                             e_charge=self.e_charge)

    def profile(self):
        if self.eq_family == "maxwellian":
            return make_maxwellian(self.eq_sigma, drift=self.eq_drift)
        if self.eq_family == "two_stream":
            return make_two_stream(self.eq_separation, self.eq_sigma)
        return make_bump_on_tail(sigma=self.eq_sigma, drift=self.eq_drift,
                                 bump_weight=self.eq_bump_weight,
                                 bump_center=self.eq_bump_center,
                                 bump_sigma=self.eq_bump_sigma)

    def potential(self):
        if self.pot_family == "coulomb":
            return coulomb_potential(k_max=self.pot_k_max)
        return screened_potential(self.pot_alpha, k_max=self.pot_k_max)

    def perturbations(self):
        """(electron, ion) disturbance pair per the configured target."""
        if self.pert_family == "zero":
            return ZeroPerturbation(), ZeroPerturbation()
        shape = make_maxwellian(self.pert_sigma, drift=self.pert_drift)
        bump = CosinePerturbation(self.pert_amplitude, self.pert_mode, shape)
        pert_e = bump if self.pert_target in ("electron", "both") \
            else ZeroPerturbation()
        pert_i = bump if self.pert_target in ("ion", "both") \
            else ZeroPerturbation()
        return pert_e, pert_i

    def fit_window(self) -> tuple:
        lo = self.fit_window_start
        hi = self.fit_window_end
        return (0.1 * self.T if lo is None else lo,
                self.T if hi is None else hi)

    def om_range(self):
        if self.om_min is None or self.om_max is None:
            return None
        return (self.om_min, self.om_max)

    def to_manifest_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out


def _validate(cfg: ExperimentConfig) -> list:
    bad = []
    if cfg.eq_sigma <= 0:
        bad.append("equilibrium.sigma: must be positive")
    if cfg.eq_family == "two_stream" and cfg.eq_separation <= 0:
        bad.append("equilibrium.separation: must be positive")
    if cfg.eq_family == "bump_on_tail":
        if not 0 < cfg.eq_bump_weight < 1:
            bad.append("equilibrium.bump_weight: must lie in (0, 1)")
        if cfg.eq_bump_sigma <= 0:
            bad.append("equilibrium.bump_sigma: must be positive")
    if cfg.pot_family == "screened" and cfg.pot_alpha <= 0:
        bad.append("potential.alpha: must be positive for screening")
    if cfg.pot_k_max < 1:
        bad.append("potential.k_max: must be at least 1")
    if cfg.m_e <= 0:
        bad.append("species.m_e: must be positive")
    if cfg.m_i <= 0:
        bad.append("species.m_i: must be positive")
    elif cfg.m_e > 0 and cfg.m_i < cfg.m_e:
        bad.append("species.m_i: ions must be at least as heavy as electrons")
    if cfg.e_charge <= 0:
        bad.append("species.e: must be positive")
    if cfg.pert_family == "cosine":
        if cfg.pert_amplitude <= 0:
            bad.append("perturbation.amplitude: must be positive")
        if cfg.pert_mode == 0:
            bad.append("perturbation.mode: must be nonzero")
        elif abs(cfg.pert_mode) > cfg.pot_k_max:
            bad.append("perturbation.mode: exceeds potential.k_max")
        if cfg.pert_sigma <= 0:
            bad.append("perturbation.sigma: must be positive")
    if cfg.T <= 0:
        bad.append("run.T: must be positive")
    if cfg.dt <= 0:
        bad.append("run.dt: must be positive")
    elif cfg.T > 0 and cfg.dt > cfg.T:
        bad.append("run.dt: exceeds the horizon T")
    if any(k == 0 for k in cfg.modes):
        bad.append("run.modes: mode 0 is excluded")
    elif any(abs(k) > cfg.pot_k_max for k in cfg.modes):
        bad.append("run.modes: a mode exceeds potential.k_max")
    if len(set(cfg.modes)) != len(cfg.modes):
        bad.append("run.modes: duplicate modes")
    if cfg.eta_max <= 0:
        bad.append("run.eta_max: must be positive")
    if cfg.d_eta <= 0:
        bad.append("run.d_eta: must be positive")
    if cfg.Lambda <= 0:
        bad.append("penrose.Lambda: must be positive")
    if cfg.re_steps < 2:
        bad.append("penrose.re_steps: must be at least 2")
    if cfg.om_steps < 2:
        bad.append("penrose.om_steps: must be at least 2")
    if (cfg.om_min is None) != (cfg.om_max is None):
        bad.append("penrose.om_min/om_max: set both or neither")
    elif cfg.om_min is not None and cfg.om_min >= cfg.om_max:
        bad.append("penrose.om_min: must be below om_max")
    if cfg.kern_t_max <= 0:
        bad.append("penrose.kern_t_max: must be positive")
    ws, we = cfg.fit_window_start, cfg.fit_window_end
    if ws is not None and not 0 <= ws < cfg.T:
        bad.append("fit.window_start: must lie in [0, T)")
    if we is not None and not 0 < we <= cfg.T:
        bad.append("fit.window_end: must lie in (0, T]")
    if ws is not None and we is not None and ws >= we:
        bad.append("fit.window_start: must be below window_end")
    if not cfg.out_dir:
        bad.append("output.directory: must be non-empty")
    for fmt in cfg.out_formats:
        if fmt not in ("csv", "json"):
            bad.append(f"output.formats: unknown format '{fmt}'")
    return bad


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate, reporting every violation at once."""
    values = {}
    seen = {}
    violations = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                violations.append(f"line {lineno}: unknown section "
                                  f"[{section}]")
                section = None
            continue
        if "=" not in line:
            violations.append(f"line {lineno}: expected key = value")
            continue
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if section is None:
            violations.append(f"line {lineno}: key '{key}' outside any "
                              "known section")
            continue
        entry = _SCHEMA.get((section, key))
        if entry is None:
            violations.append(f"line {lineno}: unknown key '{key}' in "
                              f"[{section}]")
            continue
        attr, parser, _ = entry
        if attr in seen:
            violations.append(f"line {lineno}: duplicate key '{key}' "
                              f"(first set on line {seen[attr]})")
            continue
        seen[attr] = lineno
        try:
            values[attr] = parser(val)
        except ValueError as exc:
            reason = str(exc) or "malformed value"
            violations.append(f"line {lineno}: {section}.{key}: {reason}")

    for attr, parser, default in _SCHEMA.values():
        values.setdefault(attr, default)
    cfg = ExperimentConfig(**values)
    violations.extend(_validate(cfg))
    if violations:
        raise ConfigError(violations)
    return cfg


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
