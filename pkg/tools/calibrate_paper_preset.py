#!/usr/bin/env python3
"""Grid search that produced the `paper-2015` preset.

Scans a coarse grid of readout contrast (lambda_bright, lambda_dark) and
initialization error around a hand-estimated working point, holding pulse
noise, nuclear flip probability, and charge acceptance fixed. Each
candidate is scored by how close the across-seed mean of the modified
inequality value, its combined standard error, and the violation
significance land to the targets (2.117, 0.015, 7.8).

Usage:
    python tools/calibrate_paper_preset.py            # scan + report
    python tools/calibrate_paper_preset.py --verify   # 10-seed check of the shipped preset

The chosen parameters are frozen in src/kcbsim/presets/paper-2015.yaml.
"""

from __future__ import annotations

import argparse
import itertools
import statistics

from kcbsim.config import build_run_config, load_preset
from kcbsim.experiment import NoiseModel, RunConfig, run_protocol

TARGET_VALUE = 2.117
TARGET_STDERR = 0.015
TARGET_SIGMA = 7.8

FIXED = dict(
    pulse_angle_error_std=0.02,
    readout_threshold=4,
    init_threshold=2,
    nuclear_flip_prob=0.01,
    charge_good_prob=0.9,
    bright_state_is_one=True,
)

GRID = dict(
    lambda_bright=(10.0, 10.5, 11.0),
    lambda_dark=(1.35, 1.45, 1.55),
    init_error_prob=(0.015, 0.020, 0.025),
)


def evaluate(noise: NoiseModel, shots: int, seeds) -> dict:
    values, stderrs, sigmas = [], [], []
    for seed in seeds:
        res = run_protocol(RunConfig(seed=seed, shots_per_term=shots, noise=noise))
        values.append(res.inequality_value)
        stderrs.append(res.inequality_stderr)
        sigmas.append(res.violation_sigma)
    return {
        "value": statistics.mean(values),
        "value_spread": statistics.pstdev(values),
        "stderr": statistics.mean(stderrs),
        "sigma": statistics.mean(sigmas),
        "per_seed_values": values,
    }


def score(summary: dict) -> float:
    # value accuracy dominates; stderr and sigma act as soft penalties
    s = abs(summary["value"] - TARGET_VALUE)
    s += 0.5 * abs(summary["stderr"] - TARGET_STDERR)
    s += 0.002 * abs(summary["sigma"] - TARGET_SIGMA)
    return s


def scan(shots: int, seeds) -> None:
    rows = []
    keys = sorted(GRID)
    for combo in itertools.product(*(GRID[k] for k in keys)):
        params = dict(zip(keys, combo))
        noise = NoiseModel(**FIXED, **params)
        summary = evaluate(noise, shots, seeds)
        rows.append((score(summary), params, summary))
        print(
            f"{params}  value={summary['value']:.4f} "
            f"stderr={summary['stderr']:.4f} sigma={summary['sigma']:.2f}",
            flush=True,
        )
    rows.sort(key=lambda r: r[0])
    print("\n=== top candidates ===")
    for s, params, summary in rows[:5]:
        print(f"score={s:.4f} {params} -> value={summary['value']:.4f} "
              f"stderr={summary['stderr']:.4f} sigma={summary['sigma']:.2f}")
    best = rows[0][1]
    print("\n=== preset noise block (best candidate) ===")
    for k, v in FIXED.items():
        print(f"  {k}: {v}")
    for k in sorted(best):
        print(f"  {k}: {best[k]}")


def verify(shots: int | None) -> None:
    data = load_preset("paper-2015")
    seeds = range(1, 11)
    print("seed  value    stderr   sigma")
    values, stderrs, sigmas = [], [], []
    for seed in seeds:
        config = build_run_config(data, seed=seed, shots=shots)
        res = run_protocol(config)
        values.append(res.inequality_value)
        stderrs.append(res.inequality_stderr)
        sigmas.append(res.violation_sigma)
        print(f"{seed:4d}  {res.inequality_value:.4f}  {res.inequality_stderr:.4f}  "
              f"{res.violation_sigma:.2f}")
    print(f"\nmean value  = {statistics.mean(values):.4f}  (target {TARGET_VALUE})")
    print(f"mean stderr = {statistics.mean(stderrs):.4f}  (target {TARGET_STDERR})")
    print(f"mean sigma  = {statistics.mean(sigmas):.2f}  (target {TARGET_SIGMA})")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shots", type=int, default=8000)
    parser.add_argument("--seeds", type=int, default=6, help="seeds per candidate in the scan")
    parser.add_argument("--verify", action="store_true",
                        help="run the shipped preset across seeds 1..10 instead of scanning")
    args = parser.parse_args()
    if args.verify:
        verify(None if args.shots == 8000 else args.shots)
    else:
        scan(args.shots, range(1, args.seeds + 1))


if __name__ == "__main__":
    main()
