"""Experiment configuration: JSON ingestion, defaults, validation, echo.

A config document is plain JSON.  ``flux`` is either a builtin name
("burgers", "convex-quartic") or a list of ascending polynomial
coefficients.  Every field has a documented default so a minimal config
like {"flux": "burgers", "u_minus": 1, "u_plus": -1, "dimension": 2}
expands to a full experiment.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field

from .errors import ConfigParseError, ConfigValidationError, EqualStatesError
from .flux import (FluxSpec, burgers_flux, convex_quartic_flux, make_shock,
                   polynomial_flux)

log = logging.getLogger("shocklab")

PERTURBATION_KINDS = ("none", "gaussian-bump", "odd-bump", "random-nonzero-mode")


@dataclass
class GridSpec:
    half_length: float
    n1: int = 1024
    nprime: int = 16


@dataclass
class StepperSpec:
    t_final: float = 50.0
    dt_out: float = 0.5
    cfl_safety: float = 0.8
    frame: str = "moving"
    llf: bool = False


@dataclass
class PerturbationSpec:
    kind: str = "gaussian-bump"
    amplitude: float = 0.02
    width: float = 2.0
    seed: int = 12345


@dataclass
class ExperimentConfig:
    flux: object = "burgers"            # name or coefficient list
    u_minus: float = 1.0
    u_plus: float = -1.0
    dimension: int = 2
    grid: GridSpec = None
    stepper: StepperSpec = field(default_factory=StepperSpec)
    perturbation: PerturbationSpec = None
    p_list: list = field(default_factory=lambda: [2.0, 4.0, 6.0])
    out_dir: str = "shocklab-out"
    fit_window: tuple | None = None
    snapshots: bool = False
    profile_step: float = 1e-3

    @property
    def strength(self) -> float:
        return abs(self.u_minus - self.u_plus)


def default_half_length(strength: float) -> float:
    """Domain half-length rule: tails scale like exp(-c * strength * |x1|),
    so the box must grow as the shock weakens."""
    if strength <= 0.0:
        return 30.0
    return max(30.0 / strength, 30.0)


def _fill_defaults(cfg: ExperimentConfig) -> ExperimentConfig:
    d = cfg.strength
    if cfg.grid is None:
        cfg.grid = GridSpec(half_length=default_half_length(d))
    if cfg.perturbation is None:
        cfg.perturbation = PerturbationSpec(amplitude=0.01 * d if d > 0 else 0.01)
    return cfg


def build_flux(cfg: ExperimentConfig) -> FluxSpec:
    """FluxSpec for the config, on a validity range wide enough for the run.

    The range covers [min(u_pm) - 1, max(u_pm) + 1] expanded by the
    perturbation amplitude.
    """
    amp = cfg.perturbation.amplitude if cfg.perturbation is not None else 0.0
    lo = min(cfg.u_minus, cfg.u_plus) - 1.0 - amp
    hi = max(cfg.u_minus, cfg.u_plus) + 1.0 + amp
    if isinstance(cfg.flux, str):
        if cfg.flux == "burgers":
            return burgers_flux(cfg.dimension, lo, hi)
        if cfg.flux == "convex-quartic":
            return convex_quartic_flux(cfg.dimension, lo, hi)
        raise ValueError(f"unknown flux name {cfg.flux!r}")
    return polynomial_flux(cfg.flux, cfg.dimension, u_lo=lo, u_hi=hi)


def validate_config(cfg: ExperimentConfig) -> list[str]:
    """Aggregate validation; raises ConfigValidationError listing every issue.

    Returns a list of non-fatal warnings (currently only the perturbation
    amplitude knob exceeding a tenth of the shock strength).
    """
    issues: list[tuple[str, str]] = []
    warnings: list[str] = []

    flux = None
    if isinstance(cfg.flux, str):
        if cfg.flux not in ("burgers", "convex-quartic"):
            issues.append(("flux", f"unknown flux name {cfg.flux!r}"))
    elif isinstance(cfg.flux, (list, tuple)):
        try:
            polynomial_flux(cfg.flux)
        except ValueError as exc:
            issues.append(("flux", str(exc)))
    else:
        issues.append(("flux", "must be a builtin name or a coefficient list"))

    if cfg.dimension not in (1, 2, 3):
        issues.append(("dimension", "must be 1, 2, or 3"))
    if cfg.u_minus == cfg.u_plus:
        issues.append(("u_plus", "end states must differ (degenerate shock)"))

    if not issues:
        flux = build_flux(cfg)
        try:
            shock = make_shock(flux, cfg.u_minus, cfg.u_plus)
            if not shock.admissible:
                issues.append(("u_minus",
                               "ordering is not Lax-admissible for this flux "
                               "(need f1'(u_minus) > s > f1'(u_plus))"))
        except EqualStatesError:
            pass

    g = cfg.grid
    if g.half_length <= 0.0:
        issues.append(("grid.half_length", "must be positive"))
    if g.n1 < 16:
        issues.append(("grid.n1", "need at least 16 points"))
    if cfg.dimension >= 2 and g.nprime < 4:
        issues.append(("grid.nprime", "need at least 4 points"))

    st = cfg.stepper
    if not 0.0 < st.cfl_safety <= 1.0:
        issues.append(("stepper.cfl_safety", "must lie in (0, 1]"))
    if st.t_final <= 0.0:
        issues.append(("stepper.t_final", "must be positive"))
    if not 0.0 < st.dt_out <= st.t_final:
        issues.append(("stepper.dt_out", "must lie in (0, t_final]"))
    if st.frame not in ("moving", "lab"):
        issues.append(("stepper.frame", "must be 'moving' or 'lab'"))

    pert = cfg.perturbation
    if pert.kind not in PERTURBATION_KINDS:
        issues.append(("perturbation.kind", f"must be one of {PERTURBATION_KINDS}"))
    elif pert.kind == "random-nonzero-mode" and cfg.dimension == 1:
        issues.append(("perturbation.kind",
                       "random-nonzero-mode needs a transverse direction"))
    if pert.amplitude < 0.0:
        issues.append(("perturbation.amplitude", "must be nonnegative"))
    if pert.width <= 0.0:
        issues.append(("perturbation.width", "must be positive"))
    if pert.amplitude > 0.1 * cfg.strength > 0.0:
        warnings.append(
            f"perturbation amplitude {pert.amplitude:g} exceeds a tenth of the "
            f"shock strength {cfg.strength:g}; the small-perturbation regime "
            "is not guaranteed")

    if not cfg.p_list or any(not p >= 1.0 for p in cfg.p_list):
        issues.append(("p_list", "need a non-empty list of exponents >= 1"))
    if cfg.fit_window is not None:
        t_a, t_b = cfg.fit_window
        if not t_a < t_b:
            issues.append(("fit_window", "must satisfy t_a < t_b"))
    if cfg.profile_step <= 0.0:
        issues.append(("profile_step", "must be positive"))

    if issues:
        raise ConfigValidationError(issues)
    return warnings


_TOP_KEYS = {"flux", "u_minus", "u_plus", "dimension", "grid", "stepper",
             "perturbation", "p_list", "out_dir", "fit_window", "snapshots",
             "profile_step"}


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build a config from a JSON document, filling documented defaults."""
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigValidationError(
            [(key, "unknown config key") for key in sorted(unknown)])
    cfg = ExperimentConfig()
    for key in ("flux", "u_minus", "u_plus", "dimension", "out_dir",
                "snapshots", "profile_step"):
        if key in doc:
            setattr(cfg, key, doc[key])
    cfg.u_minus = float(cfg.u_minus)
    cfg.u_plus = float(cfg.u_plus)
    if "p_list" in doc:
        cfg.p_list = [float(p) for p in doc["p_list"]]
    if "fit_window" in doc and doc["fit_window"] is not None:
        cfg.fit_window = (float(doc["fit_window"][0]), float(doc["fit_window"][1]))
    if "grid" in doc:
        cfg.grid = GridSpec(
            half_length=float(doc["grid"].get("half_length",
                                              default_half_length(cfg.strength))),
            n1=int(doc["grid"].get("n1", 1024)),
            nprime=int(doc["grid"].get("nprime", 16)))
    if "stepper" in doc:
        base = StepperSpec()
        cfg.stepper = StepperSpec(
            t_final=float(doc["stepper"].get("t_final", base.t_final)),
            dt_out=float(doc["stepper"].get("dt_out", base.dt_out)),
            cfl_safety=float(doc["stepper"].get("cfl_safety", base.cfl_safety)),
            frame=doc["stepper"].get("frame", base.frame),
            llf=bool(doc["stepper"].get("llf", base.llf)))
    if "perturbation" in doc:
        p = doc["perturbation"]
        cfg.perturbation = PerturbationSpec(
            kind=p.get("kind", "gaussian-bump"),
            amplitude=float(p.get("amplitude", 0.01 * cfg.strength)),
            width=float(p.get("width", 2.0)),
            seed=int(p.get("seed", 12345)))
    return _fill_defaults(cfg)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    doc = asdict(cfg)
    doc["flux"] = cfg.flux if isinstance(cfg.flux, str) else list(cfg.flux)
    doc["fit_window"] = list(cfg.fit_window) if cfg.fit_window is not None else None
    return doc


def parse_config(path) -> ExperimentConfig:
    """Load, default-fill, and validate a JSON config file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path} is not well-formed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigParseError(f"{path} must hold a JSON object")
    cfg = config_from_dict(doc)
    for warning in validate_config(cfg):
        log.warning("%s", warning)
    return cfg


def emit_config(cfg: ExperimentConfig, path) -> None:
    """Echo the fully resolved config; parse(emit(cfg)) == cfg bit-exactly."""
    with open(path, "w") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")
