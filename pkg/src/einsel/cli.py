"""Command-line front door: einsel verify | sweep | replay.

Configuration precedence is flags > config file > per-suite defaults.
Exit codes: 0 success, 1 hard-assertion failure (or replay mismatch),
2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigInvalid, ManifestMissing
from .experiments import ExperimentConfig, default_config, replay, run

_SUITES = {
    "lemma1": "verify_lemma1",
    "thm1": "verify_thm1",
    "thm2": "verify_thm2",
    "thm3": "verify_thm3",
    "thm4": "verify_thm4",
    "pointer_contrast": "pointer_contrast",
}


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--d-s", type=int, default=None, help="subsystem dimension")
    p.add_argument("--d-b", type=int, default=None, help="bath dimension")
    p.add_argument("--d-r", type=int, default=None, help="random-subspace dimension")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--n-samples", type=int, default=None, help="sampled times per trial")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument(
        "--scale", type=float, action="append", default=None,
        help="coupling scale (repeat for a list)",
    )
    p.add_argument("--horizon-factor", type=float, default=None)
    p.add_argument("--config", type=Path, default=None, help="JSON config file")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--workers", type=int, default=1)


def _resolve_config(args, experiment: str) -> ExperimentConfig:
    data = default_config(experiment).to_dict()
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigInvalid("config file must hold a JSON object")
        loaded.setdefault("experiment", experiment)
        if loaded["experiment"] != experiment:
            raise ConfigInvalid(
                f"config file is for {loaded['experiment']!r}, expected {experiment!r}"
            )
        data.update(loaded)
    flag_map = {
        "d_S": args.d_s,
        "d_B": args.d_b,
        "d_R": args.d_r,
        "trials": args.trials,
        "n_samples": args.n_samples,
        "seed": args.seed,
        "coupling_scales": args.scale,
        "horizon_factor": args.horizon_factor,
    }
    for key, value in flag_map.items():
        if value is not None:
            data[key] = value
    config = ExperimentConfig.from_dict(data)
    config.validate()
    return config


def _print_summary(result):
    print(f"experiment: {result.manifest['config']['experiment']}")
    print(f"output:     {result.out_dir}")
    for key, value in sorted(result.summary.items()):
        print(f"  {key}: {value}")
    if result.hard_failures:
        print(f"HARD FAILURES: {result.hard_failures}", file=sys.stderr)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="einsel",
        description="Exact bipartite dynamics with certified equilibration "
        "and einselection bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=sorted(_SUITES))
    _add_config_flags(p_verify)

    p_sweep = sub.add_parser("sweep", help="coupling-strength sweep")
    _add_config_flags(p_sweep)

    p_replay = sub.add_parser("replay", help="recompute a run and compare bytes")
    p_replay.add_argument("manifest", type=Path)
    p_replay.add_argument("--workers", type=int, default=1)

    args = parser.parse_args(argv)

    try:
        if args.command == "replay":
            result = replay(args.manifest, workers=args.workers)
            if result.identical:
                print("replay: byte-identical")
            else:
                print(f"replay: MISMATCH in {result.mismatched}", file=sys.stderr)
            return result.exit_code

        experiment = (
            "coupling_sweep" if args.command == "sweep" else _SUITES[args.suite]
        )
        config = _resolve_config(args, experiment)
        result = run(config, out_dir=args.out, workers=args.workers)
        _print_summary(result)
        return result.exit_code
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ManifestMissing as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
