"""Experiment orchestration: seeded suites, CSV persistence, replay.

Runs are deterministic functions of their configuration: every trial draws
from a stream derived from (master seed, trial index), rows are assembled
in trial order regardless of worker count, and floats are serialized with
17 significant digits so a replay can compare artifacts byte for byte.

Hard assertions (inequalities proven for all states: the commutator lower
bound, the pointwise decoherence bound and its time-averaged consequence,
pointer diagonal invariance, closed-form agreement) make the run fail;
Monte-Carlo bounds only warn beyond their three-standard-error slack.
"""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bipartite import BipartiteSystem, partial_trace_B
from .bounds import (
    lemma1_lower_bound,
    projector_witness,
    theorem1_check,
    theorem2_check,
    theorem3_check,
    theorem4_along_records,
)
from .dynamics import (
    default_horizon,
    dephase,
    offdiag_pairs,
    sample_trajectory,
    time_average,
)
from .ensembles import gue, haar_state, random_bipartite, random_density, trial_seed
from .errors import ConfigInvalid, ManifestMissing, VersionMismatchWarning
from .linalg import HermitianOperator, eigh
from .pointer import contrast_experiment

EXPERIMENTS = (
    "verify_lemma1",
    "verify_thm1",
    "verify_thm2",
    "verify_thm3",
    "verify_thm4",
    "pointer_contrast",
    "coupling_sweep",
)

DEFAULT_TOLERANCES = {
    "lemma1": 1e-10,
    "theorem4_pointwise": 1e-9,
    "diag_invariance": 1e-12,
    "closed_form_agreement": 1e-10,
    "witness": 1e-10,
    "stat_sigma": 3.0,
}

_SEED_MASK = (1 << 64) - 1


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """An independent stream for auxiliary draws (never collides with the
    XOR-derived per-trial streams)."""
    ss = np.random.SeedSequence(entropy=int(seed) & _SEED_MASK, spawn_key=tuple(key))
    return np.random.default_rng(ss)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    d_S: int = 2
    d_B: int = 32
    d_R: int = 32
    coupling_scales: tuple[float, ...] = (0.01,)
    trials: int = 20
    n_samples: int = 200
    horizon_factor: float = 1e3
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    output_path: str | None = None
    max_composite_dim: int = 4096

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigInvalid(f"unknown experiment {self.experiment!r}")
        if self.trials < 1:
            raise ConfigInvalid("trials must be at least 1")
        if self.n_samples < 2:
            raise ConfigInvalid("n_samples must be at least 2")
        if self.d_S < 1 or self.d_B < 1:
            raise ConfigInvalid("dimensions must be at least 1")
        if self.d_S * self.d_B > self.max_composite_dim:
            raise ConfigInvalid(
                f"composite dim {self.d_S * self.d_B} exceeds limit "
                f"{self.max_composite_dim}"
            )
        if not self.coupling_scales:
            raise ConfigInvalid("coupling_scales must be non-empty")
        if any(s < 0 for s in self.coupling_scales):
            raise ConfigInvalid("coupling scales must be nonnegative")
        if self.horizon_factor <= 0:
            raise ConfigInvalid("horizon_factor must be positive")
        if self.experiment == "verify_thm2" and not (
            1 <= self.d_R <= self.d_S * self.d_B
        ):
            raise ConfigInvalid(
                f"d_R must lie in [1, {self.d_S * self.d_B}], got {self.d_R}"
            )
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigInvalid(f"unknown tolerance overrides: {sorted(unknown)}")

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coupling_scales"] = list(self.coupling_scales)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigInvalid(f"unknown config fields: {sorted(unknown)}")
        if "experiment" not in data:
            raise ConfigInvalid("config is missing the experiment field")
        data = dict(data)
        if "coupling_scales" in data:
            data["coupling_scales"] = tuple(float(s) for s in data["coupling_scales"])
        return cls(**data)


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    """Per-suite defaults sized for desk-scale runs."""
    presets = {
        "verify_lemma1": dict(trials=500),
        "verify_thm1": dict(trials=100, d_S=2, d_B=32),
        "verify_thm2": dict(trials=1000, d_S=2, d_B=32, d_R=32),
        "verify_thm3": dict(trials=100, d_S=2, d_B=32),
        "verify_thm4": dict(trials=2, d_S=2, d_B=16, coupling_scales=(1.0, 0.1, 0.01)),
        "pointer_contrast": dict(trials=3, d_S=2, d_B=32),
        "coupling_sweep": dict(
            trials=3, d_S=2, d_B=64, coupling_scales=(1.0, 0.3, 0.1, 0.03, 0.01)
        ),
    }
    base = dict(experiment=experiment)
    base.update(presets.get(experiment, {}))
    base.update(overrides)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------------------
# Tables and serialization


@dataclass
class ExperimentTables:
    columns: list[str]
    rows: list[dict]
    trajectories: dict[str, tuple[list[str], list[dict]]]
    summary: dict
    hard_failures: int


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def serialize_table(columns: list[str], rows: list[dict]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def _map_trials(fn, n: int, workers: int) -> list:
    """Evaluate fn(0..n-1); output order is by index for any worker count."""
    if workers <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n)))


def _trajectory_columns(d_S: int, extra: tuple[str, ...] = ()) -> list[str]:
    pairs = offdiag_pairs(d_S)
    return (
        ["time", "speed", "distance"]
        + [f"offdiag_{k}_{l}" for k, l in pairs]
        + list(extra)
    )


def _trajectory_rows(d_S: int, records) -> list[dict]:
    pairs = offdiag_pairs(d_S)
    rows = []
    for r in records:
        row = {"time": r.time, "speed": r.speed, "distance": r.distance_to_omega_S}
        for (k, l), val in zip(pairs, r.offdiag):
            row[f"offdiag_{k}_{l}"] = float(val)
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Suites


def _run_lemma1(config: ExperimentConfig, workers: int) -> ExperimentTables:
    tol = config.tol("lemma1")
    wtol = config.tol("witness")

    def one(i: int) -> dict:
        s = trial_seed(config.seed, i)
        rng = np.random.default_rng(s)
        dim = int(rng.integers(2, 9))
        rho = random_density(dim, rng)
        a_sd = eigh(gue(dim, rng))
        report = lemma1_lower_bound(rho, a_sd, tol=tol)
        pairing = report.context["pairing"]
        witness = projector_witness(rho, a_sd, pairing)
        witness_ok = (
            witness <= report.lhs + wtol and witness >= report.rhs - wtol
        )
        ordered_ok = report.rhs >= report.context["rhs_single_pair"] - 1e-12
        return {
            "trial": i,
            "seed": s,
            "dim": dim,
            "lhs": report.lhs,
            "rhs_pairing": report.rhs,
            "rhs_single": report.context["rhs_single_pair"],
            "witness": witness,
            "slack": report.slack,
            "satisfied": bool(report.satisfied and ordered_ok and witness_ok),
        }

    rows = _map_trials(one, config.trials, workers)
    failures = sum(1 for r in rows if not r["satisfied"])
    columns = [
        "trial", "seed", "dim", "lhs", "rhs_pairing", "rhs_single",
        "witness", "slack", "satisfied",
    ]
    summary = {
        "trials": config.trials,
        "satisfied": config.trials - failures,
        "min_slack": min(r["slack"] for r in rows),
    }
    return ExperimentTables(columns, rows, {}, summary, failures)


def _instance_for_trial(config: ExperimentConfig, scale: float, key: int):
    """Deterministic (system, pure initial state, records) for one trial."""
    rng = np.random.default_rng(trial_seed(config.seed, key))
    sys = random_bipartite(config.d_S, config.d_B, scale, rng)
    rho0 = haar_state(sys.dim, sys.dim, seed=rng)
    horizon = default_horizon(sys, config.horizon_factor)
    records = sample_trajectory(sys, rho0, horizon, config.n_samples, seed=rng)
    return sys, rho0, horizon, records


def _run_thm1(config: ExperimentConfig, workers: int) -> ExperimentTables:
    scale = config.coupling_scales[0]
    sigma = config.tol("stat_sigma")

    def one(i: int):
        sys, rho0, horizon, records = _instance_for_trial(config, scale, i)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = theorem1_check(sys, rho0, records=records, stat_sigma=sigma)
        est = report.context["estimate"]
        row = {
            "trial": i,
            "seed": trial_seed(config.seed, i),
            "d_S": config.d_S,
            "d_B": config.d_B,
            "coupling_scale": scale,
            "mean_distance": report.lhs,
            "std_error": est.std_error,
            "n_samples": est.sample_count,
            "horizon": horizon,
            "rhs_bath": report.rhs,
            "rhs_full": report.context["rhs_full"],
            "d_eff_omega": report.context["d_eff_omega"],
            "d_eff_omega_B": report.context["d_eff_omega_B"],
            "bounds_ordered": report.context["bounds_ordered"],
            "satisfied": report.satisfied,
        }
        return row, (str(i), records)

    out = _map_trials(one, config.trials, workers)
    rows = [r for r, _ in out]
    traj_cols = _trajectory_columns(config.d_S)
    trajectories = {
        key: (traj_cols, _trajectory_rows(config.d_S, recs)) for _, (key, recs) in out
    }
    n_sat = sum(1 for r in rows if r["satisfied"])
    summary = {
        "trials": config.trials,
        "satisfied": n_sat,
        "all_bounds_ordered": all(r["bounds_ordered"] for r in rows),
    }
    if n_sat < config.trials:
        warnings.warn(
            f"{config.trials - n_sat} trials exceeded the equilibration bound "
            "beyond the statistical slack"
        )
    return ExperimentTables(_thm1_columns(), rows, trajectories, summary, 0)


def _thm1_columns() -> list[str]:
    return [
        "trial", "seed", "d_S", "d_B", "coupling_scale", "mean_distance",
        "std_error", "n_samples", "horizon", "rhs_bath", "rhs_full",
        "d_eff_omega", "d_eff_omega_B", "bounds_ordered", "satisfied",
    ]


def _run_thm2(config: ExperimentConfig, workers: int) -> ExperimentTables:
    dim = config.d_S * config.d_B
    h_sd = eigh(gue(dim, derived_rng(config.seed, 1)))
    report = theorem2_check(
        config.d_R, h_sd, config.trials, seed=config.seed,
        stat_sigma=config.tol("stat_sigma"),
    )
    rows = [
        {
            "trial": i,
            "seed": trial_seed(config.seed, i),
            "d_R": config.d_R,
            "d_eff": float(report.d_eff_samples[i]),
            "below_quarter": bool(report.d_eff_samples[i] < config.d_R / 4.0),
        }
        for i in range(config.trials)
    ]
    summary = {
        "d_R": report.d_R,
        "n_trials": report.n_trials,
        "mean_deff": report.mean_deff,
        "mean_std_error": report.mean_std_error,
        "frac_below_quarter": report.frac_below_quarter,
        "bound_prob": report.bound_prob,
        "tail_constant": report.tail_constant,
        "tail_bound_vacuous": report.tail_bound_vacuous,
        "satisfied_mean": report.satisfied_mean,
        "satisfied_tail": report.satisfied_tail,
    }
    if not (report.satisfied_mean and report.satisfied_tail):
        warnings.warn("effective-dimension statistics exceeded the expected bounds")
    columns = ["trial", "seed", "d_R", "d_eff", "below_quarter"]
    return ExperimentTables(columns, rows, {}, summary, 0)


def _run_thm3(config: ExperimentConfig, workers: int) -> ExperimentTables:
    scale = config.coupling_scales[0]
    sigma = config.tol("stat_sigma")

    def one(i: int):
        sys, rho0, horizon, records = _instance_for_trial(config, scale, i)
        report = theorem3_check(sys, rho0, records=records, stat_sigma=sigma)
        est = report.context["estimate"]
        row = {
            "trial": i,
            "seed": trial_seed(config.seed, i),
            "d_S": config.d_S,
            "d_B": config.d_B,
            "coupling_scale": scale,
            "mean_speed": report.lhs,
            "std_error": est.std_error,
            "n_samples": est.sample_count,
            "horizon": horizon,
            "prefactor": report.context["prefactor"],
            "rhs": report.rhs,
            "d_eff_omega": report.context["d_eff_omega"],
            "satisfied": report.satisfied,
        }
        return row, (str(i), records)

    out = _map_trials(one, config.trials, workers)
    rows = [r for r, _ in out]
    traj_cols = _trajectory_columns(config.d_S)
    trajectories = {
        key: (traj_cols, _trajectory_rows(config.d_S, recs)) for _, (key, recs) in out
    }
    n_sat = sum(1 for r in rows if r["satisfied"])
    if n_sat < config.trials:
        warnings.warn(
            f"{config.trials - n_sat} trials exceeded the speed bound beyond "
            "the statistical slack"
        )
    columns = [
        "trial", "seed", "d_S", "d_B", "coupling_scale", "mean_speed",
        "std_error", "n_samples", "horizon", "prefactor", "rhs",
        "d_eff_omega", "satisfied",
    ]
    summary = {"trials": config.trials, "satisfied": n_sat}
    return ExperimentTables(columns, rows, trajectories, summary, 0)


def _run_thm4(config: ExperimentConfig, workers: int) -> ExperimentTables:
    tol = config.tol("theorem4_pointwise")
    jobs = [
        (scale_idx, scale, trial)
        for scale_idx, scale in enumerate(config.coupling_scales)
        for trial in range(config.trials)
    ]

    def one(j: int):
        scale_idx, scale, trial = jobs[j]
        key = scale_idx * config.trials + trial
        sys, rho0, horizon, records = _instance_for_trial(config, scale, key)
        reports = theorem4_along_records(sys, records, tol=tol)
        rows = [
            {
                "scale": scale,
                "trial": trial,
                "seed": trial_seed(config.seed, key),
                "time": rec.time,
                "lhs": rep.lhs,
                "rhs": rep.rhs,
                "slack": rep.slack,
                "satisfied": rep.satisfied,
            }
            for rec, rep in zip(records, reports)
        ]
        return rows, (str(key), records)

    out = _map_trials(one, len(jobs), workers)
    rows = [row for chunk, _ in out for row in chunk]
    traj_cols = _trajectory_columns(config.d_S)
    trajectories = {
        key: (traj_cols, _trajectory_rows(config.d_S, recs)) for _, (key, recs) in out
    }
    failures = sum(1 for r in rows if not r["satisfied"])
    columns = ["scale", "trial", "seed", "time", "lhs", "rhs", "slack", "satisfied"]
    summary = {
        "points": len(rows),
        "violations": failures,
        "min_slack": min(r["slack"] for r in rows),
    }
    return ExperimentTables(columns, rows, trajectories, summary, failures)


def _run_pointer_contrast(config: ExperimentConfig, workers: int) -> ExperimentTables:
    scale = config.coupling_scales[0]
    diag_tol = config.tol("diag_invariance")
    agree_tol = config.tol("closed_form_agreement")
    sigma = config.tol("stat_sigma")
    pairs = offdiag_pairs(config.d_S)

    def one(i: int):
        report = contrast_experiment(
            config.d_S, config.d_B, trial_seed(config.seed, i),
            coupling_scale=scale, n_samples=config.n_samples,
            horizon_factor=config.horizon_factor,
        )
        rows = []
        hard = 0
        diag_ok = report.pointer_diag_drift_max <= diag_tol
        agree_ok = report.closed_vs_generic_max <= agree_tol
        if not (diag_ok and agree_ok):
            hard += 1
        for idx, (k, l) in enumerate(pairs):
            rows.append(
                {
                    "trial": i,
                    "seed": trial_seed(config.seed, i),
                    "model": "pointer",
                    "pair_k": k,
                    "pair_l": l,
                    "gap": float("nan"),
                    "mean_offdiag": float(report.pointer_offdiag_mean[idx]),
                    "offdiag_std_error": float(report.pointer_offdiag_std_error[idx]),
                    "diag_drift_max": report.pointer_diag_drift_max,
                    "closed_vs_generic_max": report.closed_vs_generic_max,
                    "ceiling": float("nan"),
                    "satisfied": bool(diag_ok and agree_ok),
                }
            )
        coupling = report.generic_sys.interaction_norm
        for idx, (k, l) in enumerate(pairs):
            gap = float(report.generic_gaps[idx])
            mean_off = float(report.generic_offdiag_mean[idx])
            ceiling = (
                (coupling + report.generic_speed_mean
                 + sigma * report.generic_speed_std_error) / gap
                if gap > 0 else float("inf")
            )
            ok = mean_off <= ceiling + 1e-12
            if not ok:
                hard += 1
            rows.append(
                {
                    "trial": i,
                    "seed": trial_seed(config.seed, i),
                    "model": "generic",
                    "pair_k": k,
                    "pair_l": l,
                    "gap": gap,
                    "mean_offdiag": mean_off,
                    "offdiag_std_error": float(report.generic_offdiag_std_error[idx]),
                    "diag_drift_max": float("nan"),
                    "closed_vs_generic_max": float("nan"),
                    "ceiling": ceiling,
                    "satisfied": ok,
                }
            )
        trajes = {
            f"{i}_pointer": (
                _trajectory_columns(config.d_S, ("diag_drift", "closed_vs_generic")),
                [
                    dict(base, diag_drift=r.diag_drift, closed_vs_generic=r.closed_vs_generic)
                    for base, r in zip(
                        _trajectory_rows(config.d_S, report.pointer_records),
                        report.pointer_records,
                    )
                ],
            ),
            f"{i}_generic": (
                _trajectory_columns(config.d_S),
                _trajectory_rows(config.d_S, report.generic_records),
            ),
        }
        return rows, trajes, hard

    out = _map_trials(one, config.trials, workers)
    rows = [row for chunk, _, _ in out for row in chunk]
    trajectories = {}
    for _, trajes, _ in out:
        trajectories.update(trajes)
    failures = sum(h for _, _, h in out)
    columns = [
        "trial", "seed", "model", "pair_k", "pair_l", "gap", "mean_offdiag",
        "offdiag_std_error", "diag_drift_max", "closed_vs_generic_max",
        "ceiling", "satisfied",
    ]
    summary = {
        "trials": config.trials,
        "hard_failures": failures,
        "max_diag_drift": max(
            r["diag_drift_max"] for r in rows if r["model"] == "pointer"
        ),
    }
    return ExperimentTables(columns, rows, trajectories, summary, failures)


def _unit_gap_system(sys: BipartiteSystem) -> BipartiteSystem:
    """Rescale H_S so its smallest eigenvalue gap is exactly one."""
    energies = np.linalg.eigvalsh(sys.H_S.matrix)
    diffs = np.diff(energies)
    gap = float(np.min(diffs[diffs > 0]))
    return BipartiteSystem(
        d_S=sys.d_S,
        d_B=sys.d_B,
        h0_coeff=sys.h0_coeff,
        H_S=HermitianOperator(sys.H_S.matrix / gap),
        H_B=sys.H_B,
        H_SB=sys.H_SB,
    )


def _run_coupling_sweep(config: ExperimentConfig, workers: int) -> ExperimentTables:
    sigma = config.tol("stat_sigma")
    pairs = offdiag_pairs(config.d_S)
    jobs = [
        (scale_idx, scale, trial)
        for scale_idx, scale in enumerate(config.coupling_scales)
        for trial in range(config.trials)
    ]

    def one(j: int):
        scale_idx, scale, trial = jobs[j]
        # the same trial seed across scales: only the interaction strength moves
        s = trial_seed(config.seed, trial)
        sys = _unit_gap_system(
            random_bipartite(config.d_S, config.d_B, scale, np.random.default_rng(s))
        )
        rho0 = haar_state(sys.dim, sys.dim, seed=derived_rng(config.seed, 2, trial))
        records = sample_trajectory(
            sys, rho0, default_horizon(sys, config.horizon_factor),
            config.n_samples, seed=derived_rng(config.seed, 3, scale_idx, trial),
        )
        speed_est = time_average(records, "speed")
        coupling = sys.interaction_norm
        energies = sys.hs_sd.eigenvalues
        basis = sys.hs_sd.eigenvectors
        omega_S = partial_trace_B(
            dephase(sys.assembled_sd, rho0), sys.d_S, sys.d_B
        )
        omega_in_basis = basis.conj().T @ omega_S @ basis
        rows = []
        hard = 0
        for idx, (k, l) in enumerate(pairs):
            gap = float(abs(energies[k] - energies[l]))
            est = time_average(records, lambda r: r.offdiag[idx])
            ceiling = (
                (coupling + speed_est.mean + sigma * speed_est.std_error) / gap
                if gap > 0 else float("inf")
            )
            ok = est.mean <= ceiling + 1e-12
            if not ok:
                hard += 1
            rows.append(
                {
                    "scale": scale,
                    "trial": trial,
                    "seed": s,
                    "pair_k": k,
                    "pair_l": l,
                    "gap": gap,
                    "mean_offdiag": est.mean,
                    "offdiag_std_error": est.std_error,
                    "omega_offdiag": float(abs(omega_in_basis[k, l])),
                    "mean_speed": speed_est.mean,
                    "speed_std_error": speed_est.std_error,
                    "coupling_norm": coupling,
                    "ceiling": ceiling,
                    "satisfied": ok,
                }
            )
        key = str(scale_idx * config.trials + trial)
        return rows, (key, records), hard

    out = _map_trials(one, len(jobs), workers)
    rows = [row for chunk, _, _ in out for row in chunk]
    traj_cols = _trajectory_columns(config.d_S)
    trajectories = {
        key: (traj_cols, _trajectory_rows(config.d_S, recs))
        for _, (key, recs), _ in out
    }
    failures = sum(h for _, _, h in out)

    # Monotonicity of the largest-gap columns across the sweep (reported,
    # not asserted).  The pointwise average |rho_kl| sits on a coupling-
    # independent fluctuation floor ~ 1/sqrt(d_eff); the equilibrium
    # off-diagonal |omega_kl| is the clean monotone einselection signal.
    def scale_profile(column: str) -> dict[float, float]:
        best: dict[tuple[float, int], tuple[float, float]] = {}
        for r in rows:
            key = (r["scale"], r["trial"])
            cur = best.get(key)
            if cur is None or r["gap"] > cur[0]:
                best[key] = (r["gap"], r[column])
        per_scale: dict[float, list[float]] = {}
        for (s, _), (_, val) in best.items():
            per_scale.setdefault(s, []).append(val)
        return {s: float(np.mean(v)) for s, v in per_scale.items()}

    def is_decreasing(profile: dict[float, float]) -> bool:
        ordered = [profile[s] for s in sorted(profile, reverse=True)]
        return all(a >= b for a, b in zip(ordered, ordered[1:]))

    mean_profile = scale_profile("mean_offdiag")
    omega_profile = scale_profile("omega_offdiag")

    columns = [
        "scale", "trial", "seed", "pair_k", "pair_l", "gap", "mean_offdiag",
        "offdiag_std_error", "omega_offdiag", "mean_speed", "speed_std_error",
        "coupling_norm", "ceiling", "satisfied",
    ]
    summary = {
        "scales": list(config.coupling_scales),
        "trials_per_scale": config.trials,
        "hard_failures": failures,
        "largest_gap_mean_offdiag_by_scale": {
            format_value(s): mean_profile[s] for s in sorted(mean_profile, reverse=True)
        },
        "largest_gap_omega_offdiag_by_scale": {
            format_value(s): omega_profile[s] for s in sorted(omega_profile, reverse=True)
        },
        "monotone_decreasing": is_decreasing(mean_profile),
        "omega_monotone_decreasing": is_decreasing(omega_profile),
    }
    return ExperimentTables(columns, rows, trajectories, summary, failures)


_RUNNERS = {
    "verify_lemma1": _run_lemma1,
    "verify_thm1": _run_thm1,
    "verify_thm2": _run_thm2,
    "verify_thm3": _run_thm3,
    "verify_thm4": _run_thm4,
    "pointer_contrast": _run_pointer_contrast,
    "coupling_sweep": _run_coupling_sweep,
}


# ---------------------------------------------------------------------------
# Run, persist, replay


@dataclass(frozen=True)
class RunResult:
    exit_code: int
    out_dir: Path
    hard_failures: int
    summary: dict
    manifest: dict


def _compute(config: ExperimentConfig, workers: int) -> tuple[ExperimentTables, dict]:
    config.validate()
    tables = _RUNNERS[config.experiment](config, workers)
    artifacts = {"results.csv": serialize_table(tables.columns, tables.rows)}
    for key, (cols, rows) in sorted(tables.trajectories.items()):
        artifacts[f"trajectory_{key}.csv"] = serialize_table(cols, rows)
    return tables, artifacts


def _n_trial_keys(config: ExperimentConfig) -> int:
    if config.experiment in ("verify_thm4", "coupling_sweep"):
        return config.trials * len(config.coupling_scales)
    return config.trials


def _build_manifest(config: ExperimentConfig, tables: ExperimentTables, artifacts) -> dict:
    return {
        "version": __version__,
        "config": config.to_dict(),
        "resolved_seeds": {
            "master": config.seed,
            "per_trial": [
                trial_seed(config.seed, i) for i in range(_n_trial_keys(config))
            ],
        },
        "columns": {
            "results.csv": tables.columns,
            **{
                name: cols
                for name, (cols, _) in (
                    (f"trajectory_{k}.csv", v) for k, v in sorted(tables.trajectories.items())
                )
            },
        },
        "artifacts": sorted(artifacts),
        "summary": tables.summary,
        "hard_failures": tables.hard_failures,
    }


def run(config: ExperimentConfig, out_dir=None, workers: int = 1) -> RunResult:
    """Execute a suite and persist manifest.json plus the result tables."""
    tables, artifacts = _compute(config, workers)
    manifest = _build_manifest(config, tables, artifacts)

    target = Path(out_dir) if out_dir is not None else Path(
        config.output_path or f"runs/{config.experiment}"
    )
    target.mkdir(parents=True, exist_ok=True)
    for name, text in artifacts.items():
        (target / name).write_bytes(text.encode())
    (target / "manifest.json").write_bytes(
        (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode()
    )
    return RunResult(
        exit_code=1 if tables.hard_failures else 0,
        out_dir=target,
        hard_failures=tables.hard_failures,
        summary=tables.summary,
        manifest=manifest,
    )


@dataclass(frozen=True)
class ReplayResult:
    identical: bool
    mismatched: list[str]
    hard_failures: int

    @property
    def exit_code(self) -> int:
        return 0 if self.identical and not self.hard_failures else 1


def replay(manifest_path, workers: int = 1) -> ReplayResult:
    """Recompute a persisted run and compare every CSV byte for byte."""
    path = Path(manifest_path)
    if not path.is_file():
        raise ManifestMissing(f"no manifest at {path}")
    manifest = json.loads(path.read_text())
    if manifest.get("version") != __version__:
        warnings.warn(
            f"manifest version {manifest.get('version')!r} != current {__version__!r}",
            VersionMismatchWarning,
            stacklevel=2,
        )
    config = ExperimentConfig.from_dict(manifest["config"])
    tables, artifacts = _compute(config, workers)

    mismatched = []
    for name in manifest.get("artifacts", sorted(artifacts)):
        recomputed = artifacts.get(name)
        on_disk = path.parent / name
        if recomputed is None or not on_disk.is_file():
            mismatched.append(name)
            continue
        if on_disk.read_bytes() != recomputed.encode():
            mismatched.append(name)
    return ReplayResult(
        identical=not mismatched,
        mismatched=mismatched,
        hard_failures=tables.hard_failures,
    )
