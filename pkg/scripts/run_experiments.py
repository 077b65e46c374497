#!/usr/bin/env python3
"""Run the three sieve-ratio experiment families over a parameter sweep.

Each experiment draws randomized +-1 coefficient sequences, evaluates the
sieve quantity against its target bound (epsilon = 0.1, implied constant
1), and keeps the worst trial.  Results are written as one CSV per family
plus a combined JSON summary; reruns with identical arguments produce
byte-identical files.

Usage:
    python3 scripts/run_experiments.py --out-dir results
    python3 scripts/run_experiments.py --trials 40 --force
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from gisieve.gauss import GaussianInt
from gisieve.sievelab import (
    ExperimentReport,
    eisenstein_experiment,
    hybrid_experiment,
    quad_form_experiment,
)

ONE = GaussianInt(1, 0)

#: (d, theta, gamma, C, M, N) sweeps for the bilinear-form experiment.
QUAD_SWEEP = [
    (ONE, 1.0, 0.0, 5.0, 5.0, 5.0),
    (ONE, 1.0, 0.0, 10.0, 5.0, 5.0),
    (ONE, 1.0, 0.5, 5.0, 5.0, 5.0),
    (ONE, 0.5 + 0.5j, 0.0, 5.0, 10.0, 10.0),
    (GaussianInt(1, 1), 1.0, -0.5, 5.0, 5.0, 5.0),
]

#: (C, T, N) sweeps for the hybrid character sieve.
HYBRID_SWEEP = [
    (4.0, 2.0, 20.0),
    (8.0, 2.0, 20.0),
    (4.0, 4.0, 40.0),
    (8.0, 4.0, 40.0),
]

#: (T, P, N) sweeps for the spectral-average sieve.
EISENSTEIN_SWEEP = [
    (2.0, 1.0, 30.0),
    (2.0, 2.0, 30.0),
    (4.0, 1.0, 50.0),
    (4.0, 4.0, 50.0),
]


def sweep_reports(args: argparse.Namespace) -> dict[str, list[ExperimentReport]]:
    overrides: dict[str, object] = {"force": args.force}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    return {
        "quad_form": [
            quad_form_experiment(d, theta, gamma, C, M, N, **overrides)
            for d, theta, gamma, C, M, N in QUAD_SWEEP
        ],
        "hybrid": [
            hybrid_experiment(C, T, N, **overrides) for C, T, N in HYBRID_SWEEP
        ],
        "eisenstein": [
            eisenstein_experiment(T, P, N, **overrides)
            for T, P, N in EISENSTEIN_SWEEP
        ],
    }


def write_outputs(
    out_dir: Path, families: dict[str, list[ExperimentReport]]
) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for family, reports in families.items():
        path = out_dir / f"{family}.csv"
        lines = [reports[0].csv_header()] + [rep.csv_row() for rep in reports]
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    summary = out_dir / "experiments.json"
    payload = {
        family: [rep.to_json_dict() for rep in reports]
        for family, reports in families.items()
    }
    summary.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    written.append(summary)
    return written


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument(
        "--trials", type=int, default=None, help="override per-family trial counts"
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="override per-family base seeds"
    )
    parser.add_argument(
        "--force", action="store_true", help="bypass the desk-scale caps"
    )
    args = parser.parse_args(argv)

    families = sweep_reports(args)
    print(f"{'experiment':<12} {'parameters':<44} {'trials':>6} {'ratio':>12}")
    for reports in families.values():
        for rep in reports:
            params = ", ".join(f"{k}={v}" for k, v in rep.parameters)
            print(f"{rep.experiment:<12} {params:<44} {rep.trials:>6} {rep.ratio:>12.6f}")
    for path in write_outputs(args.out_dir, families):
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
