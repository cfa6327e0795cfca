"""Scenario configuration and reproducible experiment runners.

A scenario is one JSON document: source squeezing, an optional degradation
(pump rotation or a lossy channel on mode B), the NLA gain (single value or
sweep), efficiencies, cutoff, model selection and sampling controls.
Runners turn a scenario into a gain-sweep table, a quadrature-sample file,
or an equivalent-state report.  Identical configurations (seed included)
produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .channels import (
    ChannelParams,
    HeraldingImpossibleError,
    loss_channel,
    nla_catalysis,
    pump_rotation_degrade,
    tmsv_state,
)
from .equivalent import solve_equivalent
from .fock import DensityMatrix, HilbertConfig
from .models import (
    beta_from_gain,
    sp_model_covariance,
    sp_model_herald_probability,
)
from .quadratures import (
    apply_detection_efficiency,
    covariance_summary,
    duan_inseparability,
    sample_quadratures,
)

MODELS = ("ideal", "single_photon", "full_numeric")
DEGRADE_MODES = ("none", "pump_rotation", "loss")

CSV_HEADER = "g,beta,v_diff,v_sum,duan_I,duan_a_star,herald_p,model"

# Radius of the shot-noise reference circle for scatter plots: one vacuum
# standard deviation, sqrt(1/2), in these units.
SHOT_NOISE_RADIUS = float(np.sqrt(0.5))


class ConfigError(ValueError):
    """Scenario validation failure with a field-level message."""

    def __init__(self, fld: str, message: str):
        self.field = fld
        super().__init__(f"{fld}: {message}")


@dataclass(frozen=True)
class GainSpec:
    """Single gain g, or a sweep {g_min, g_max, steps, log_spacing}."""

    g: float | None = None
    g_min: float | None = None
    g_max: float | None = None
    steps: int = 2
    log_spacing: bool = False

    def validate(self) -> None:
        if self.g is not None:
            if self.g < 1.0:
                raise ConfigError("gain.g", f"gain must be >= 1, got {self.g}")
            return
        if self.g_min is None or self.g_max is None:
            raise ConfigError("gain", "provide either g or both g_min and g_max")
        if self.g_min < 1.0:
            raise ConfigError("gain.g_min", f"must be >= 1, got {self.g_min}")
        if self.g_max < self.g_min:
            raise ConfigError("gain.g_max", f"must be >= g_min, got {self.g_max}")
        if self.steps < 2:
            raise ConfigError("gain.steps", f"sweep needs >= 2 steps, got {self.steps}")

    @property
    def is_sweep(self) -> bool:
        return self.g is None

    def values(self) -> np.ndarray:
        self.validate()
        if not self.is_sweep:
            return np.array([self.g])
        if self.log_spacing:
            return np.geomspace(self.g_min, self.g_max, self.steps)
        return np.linspace(self.g_min, self.g_max, self.steps)


@dataclass(frozen=True)
class ScenarioConfig:
    gamma: float = 0.135
    degrade_mode: str = "none"
    theta_deg: float | None = None
    tau2: float | None = None
    gain: GainSpec = field(default_factory=GainSpec)
    eta_ancilla: float = 1.0
    eta_a: float = 1.0
    eta_b: float = 1.0
    n_max: int = 3
    model: str = "full_numeric"
    sample_count: int = 10000
    seed: int = 0

    def validate(self) -> None:
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError("gamma", f"must be in [0, 1), got {self.gamma}")
        if self.degrade_mode not in DEGRADE_MODES:
            raise ConfigError("degrade.mode", f"must be one of {DEGRADE_MODES}")
        if self.degrade_mode == "pump_rotation":
            if self.theta_deg is None or not 0.0 <= self.theta_deg <= 90.0:
                raise ConfigError(
                    "degrade.theta_deg", f"must be in [0, 90], got {self.theta_deg}"
                )
        if self.degrade_mode == "loss":
            if self.tau2 is None or not 0.0 < self.tau2 <= 1.0:
                raise ConfigError("degrade.tau2", f"must be in (0, 1], got {self.tau2}")
        self.gain.validate()
        for name in ("eta_ancilla", "eta_a", "eta_b"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(name, f"must be in [0, 1], got {value}")
        if not 1 <= self.n_max <= 6:
            raise ConfigError("n_max", f"must be in 1..6, got {self.n_max}")
        if self.model not in MODELS:
            raise ConfigError("model", f"must be one of {MODELS}")
        if self.sample_count < 1:
            raise ConfigError("sample_count", f"must be >= 1, got {self.sample_count}")
        if self.seed < 0:
            raise ConfigError("seed", f"must be >= 0, got {self.seed}")

    @property
    def effective_gamma(self) -> float:
        if self.degrade_mode == "pump_rotation":
            return pump_rotation_degrade(self.gamma, self.theta_deg)
        return self.gamma

    @property
    def tau(self) -> float:
        """Amplitude transmissivity of the degradation channel (1 if none)."""
        if self.degrade_mode == "loss":
            return float(np.sqrt(self.tau2))
        return 1.0

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        degrade = data.pop("degrade", {"mode": "none"})
        if not isinstance(degrade, dict) or "mode" not in degrade:
            raise ConfigError("degrade", "expected an object with a 'mode' key")
        gain_data = data.pop("gain", {})
        if not isinstance(gain_data, dict):
            raise ConfigError("gain", "expected an object")
        known_gain = {"g", "g_min", "g_max", "steps", "log_spacing"}
        unknown = set(gain_data) - known_gain
        if unknown:
            raise ConfigError("gain", f"unknown keys {sorted(unknown)}")
        gain = GainSpec(**gain_data)
        known = {
            "gamma", "eta_ancilla", "eta_a", "eta_b",
            "n_max", "model", "sample_count", "seed",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError("config", f"unknown keys {sorted(unknown)}")
        config = cls(
            degrade_mode=degrade.get("mode", "none"),
            theta_deg=degrade.get("theta_deg"),
            tau2=degrade.get("tau2"),
            gain=gain,
            **data,
        )
        config.validate()
        return config

    def to_dict(self) -> dict:
        degrade: dict = {"mode": self.degrade_mode}
        if self.degrade_mode == "pump_rotation":
            degrade["theta_deg"] = self.theta_deg
        if self.degrade_mode == "loss":
            degrade["tau2"] = self.tau2
        gain = {k: v for k, v in asdict(self.gain).items() if v is not None}
        if self.gain.g is not None:
            gain = {"g": self.gain.g}
        return {
            "gamma": self.gamma,
            "degrade": degrade,
            "gain": gain,
            "eta_ancilla": self.eta_ancilla,
            "eta_a": self.eta_a,
            "eta_b": self.eta_b,
            "n_max": self.n_max,
            "model": self.model,
            "sample_count": self.sample_count,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SweepRow:
    g: float
    beta: float
    v_diff: float
    v_sum: float
    duan_i: float
    duan_a_star: float
    herald_p: float
    model: str


@dataclass
class SweepResult:
    """Per-gain rows, ordered by g, plus any skipped (infeasible) gains."""

    config: ScenarioConfig
    rows: list[SweepRow]
    skipped: list[tuple[float, str]] = field(default_factory=list)

    def to_csv_text(self) -> str:
        lines = [CSV_HEADER]
        for row in self.rows:
            lines.append(
                ",".join(
                    [
                        _fmt(row.g), _fmt(row.beta), _fmt(row.v_diff), _fmt(row.v_sum),
                        _fmt(row.duan_i), _fmt(row.duan_a_star), _fmt(row.herald_p),
                        row.model,
                    ]
                )
            )
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(self.to_csv_text())


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _round12(value: float) -> float:
    return float(_fmt(value))


def build_distilled_state(config: ScenarioConfig, g: float) -> tuple[DensityMatrix, float]:
    """Source -> degrade -> catalysis; returns the distilled state and p."""
    space = HilbertConfig(config.n_max, 2)
    state = tmsv_state(config.effective_gamma, space)
    if config.degrade_mode == "loss":
        state = loss_channel(state, 1, config.tau)
    params = ChannelParams(
        tau=config.tau, r=1.0 / g, eta_ancilla=config.eta_ancilla
    )
    return nla_catalysis(state, params)


def evaluate_gain_point(config: ScenarioConfig, g: float) -> SweepRow:
    """Evaluate the configured model at a single gain value.

    The covariance pipeline is uniform across models: model-specific second
    moments, then detector efficiencies, then the inseparability minimum.
    Analytic models report the single-photon-level heralding probability.
    """
    gamma_eff = config.effective_gamma
    tau = config.tau
    if config.model == "full_numeric":
        distilled, herald_p = build_distilled_state(config, g)
        cov = covariance_summary(distilled)
    else:
        eta = 1.0 if config.model == "ideal" else config.eta_ancilla
        cov = sp_model_covariance(gamma_eff, tau, g, eta)
        herald_p = sp_model_herald_probability(gamma_eff, tau, g, eta)
    cov = apply_detection_efficiency(cov, config.eta_a, config.eta_b)
    duan = duan_inseparability(cov)
    return SweepRow(
        g=g,
        beta=beta_from_gain(g, gamma_eff, tau),
        v_diff=cov.v_diff,
        v_sum=cov.v_sum,
        duan_i=duan.value,
        duan_a_star=duan.a_star,
        herald_p=herald_p,
        model=config.model,
    )


def run_scenario(config: ScenarioConfig) -> SweepResult:
    """Evaluate the scenario over its gain grid, rows emitted in g order.

    Rows are independent of each other (pure functions throughout), so they
    could be evaluated concurrently; output order is by ascending g either
    way.  Gains whose heralding probability vanishes are reported in
    `skipped` rather than aborting the sweep.
    """
    config.validate()
    rows: list[SweepRow] = []
    skipped: list[tuple[float, str]] = []
    for g in sorted(config.gain.values()):
        try:
            rows.append(evaluate_gain_point(config, float(g)))
        except HeraldingImpossibleError as exc:
            skipped.append((float(g), str(exc)))
    return SweepResult(config, rows, skipped)


def run_sampling(config: ScenarioConfig) -> dict:
    """Draw quadrature samples of the distilled state at the configured gain.

    Requires the full numeric model and a single-valued gain.  Detector
    efficiencies are applied as loss channels before sampling so the samples
    match what the homodyne detectors would record.  The report echoes the
    full configuration and carries the shot-noise reference radius.
    """
    config.validate()
    if config.model != "full_numeric":
        raise ConfigError("model", "sampling requires the full_numeric model")
    if config.gain.is_sweep:
        raise ConfigError("gain", "sampling requires a single gain g, not a sweep")
    g = config.gain.g
    distilled, herald_p = build_distilled_state(config, g)
    detected = loss_channel(distilled, 0, float(np.sqrt(config.eta_a)))
    detected = loss_channel(detected, 1, float(np.sqrt(config.eta_b)))
    cov = covariance_summary(detected)
    samples = sample_quadratures(detected, config.sample_count, config.seed)
    return {
        "config": config.to_dict(),
        "metadata": {
            "gain": _round12(g),
            "beta": _round12(beta_from_gain(g, config.effective_gamma, config.tau)),
            "herald_probability": _round12(herald_p),
            "shot_noise_radius": _round12(SHOT_NOISE_RADIUS),
            "model_v_diff": _round12(cov.v_diff),
            "model_v_sum": _round12(cov.v_sum),
        },
        "samples": [[_round12(xa), _round12(xb)] for xa, xb in samples],
    }


def run_equivalence(
    config: ScenarioConfig, variances: tuple[float, float] | None = None
) -> dict:
    """Equivalent-state table: solve (gamma_eq, eta_b_eq) per sweep row.

    The equivalent source efficiency of mode A is fixed to the configured
    detector efficiency eta_a.  With explicit `variances` = (v_diff, v_sum)
    a single externally supplied point is solved instead of running the
    sweep.  Infeasible rows are flagged, never NaN-filled.
    """
    config.validate()
    entries = []
    if variances is not None:
        v_diff, v_sum = variances
        entries.append({"g": None, "beta": None, "v_diff": v_diff, "v_sum": v_sum})
    else:
        sweep = run_scenario(config)
        for row in sweep.rows:
            entries.append(
                {"g": row.g, "beta": row.beta, "v_diff": row.v_diff, "v_sum": row.v_sum}
            )
    table = []
    for entry in entries:
        solved = solve_equivalent(entry["v_diff"], entry["v_sum"], config.eta_a)
        record = {
            "g": None if entry["g"] is None else _round12(entry["g"]),
            "beta": None if entry["beta"] is None else _round12(entry["beta"]),
            "v_diff": _round12(entry["v_diff"]),
            "v_sum": _round12(entry["v_sum"]),
            "status": solved.status,
            "gamma_eq": None,
            "eta_b_eq": None,
        }
        if solved.ok:
            record["gamma_eq"] = _round12(solved.state.gamma_eq)
            record["eta_b_eq"] = _round12(solved.state.eta_b_eq)
        else:
            record["reason"] = solved.reason
        table.append(record)
    return {
        "config": config.to_dict(),
        "eta_a_eq": _round12(config.eta_a),
        "rows": table,
    }


def write_json_report(report: dict, path) -> None:
    """Write a report with LF endings; floats carry 12 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(report, handle, indent=2)
        handle.write("\n")
