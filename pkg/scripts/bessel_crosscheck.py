#!/usr/bin/env python3
"""Cross-check the three representations of the kernel transform.

For a grid of arguments z and test-function parameters (T, P) this
evaluates the spectral-series form, the differentiated-kernel integral,
and the weighted integral, and reports the worst pairwise relative
deviation.  It then prints quadrature-refinement errors at a reference
point and the small-argument ratio |H(z)| / |z|^2 over four decades.

Usage:
    python3 scripts/bessel_crosscheck.py
    python3 scripts/bessel_crosscheck.py --full --out table.csv
"""

from __future__ import annotations

import argparse
import cmath
import csv
import math
import sys
import time
from pathlib import Path

from gisieve.archimedean import (
    DEFAULT_QUADRATURE,
    TestFunction,
    bessel_integral_deriv,
    bessel_integral_spectral,
    bessel_integral_weighted,
    small_z_bound_constant,
    with_refinement_error,
)

REPRESENTATIONS = (
    ("spectral", bessel_integral_spectral),
    ("deriv", bessel_integral_deriv),
    ("weighted", bessel_integral_weighted),
)


def grid(full: bool):
    zabs_list = (0.5, 1.0, 2.0, 4.0) if full else (0.5, 2.0)
    tp_list = (
        [(T, P) for T in (1.0, 2.0, 4.0) for P in (1.0, 2.0, 4.0)]
        if full
        else [(1.0, 1.0), (2.0, 2.0)]
    )
    for zabs in zabs_list:
        for argz in (0.0, math.pi / 4, math.pi / 2):
            for T, P in tp_list:
                yield zabs * cmath.exp(1j * argz), T, P


def run_grid(full: bool, writer) -> float:
    worst = 0.0
    header = f"{'z':>24} {'T':>3} {'P':>3}" + "".join(
        f" {name:>14}" for name, _ in REPRESENTATIONS
    )
    print(header + f" {'rel dev':>10}")
    for z, T, P in grid(full):
        tf = TestFunction(T, P)
        vals = [fn(z, tf, DEFAULT_QUADRATURE) for _, fn in REPRESENTATIONS]
        scale = max(1e-12, max(abs(v) for v in vals))
        dev = max(abs(a - b) for a in vals for b in vals) / scale
        worst = max(worst, dev)
        cells = "".join(f" {v:>14.8f}" for v in vals)
        print(f"{format(z, '.4f'):>24} {T:>3.0f} {P:>3.0f}{cells} {dev:>10.2e}")
        if writer is not None:
            writer.writerow([repr(z), T, P, *(repr(v) for v in vals), repr(dev)])
    return worst


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--full", action="store_true", help="run the 108-point grid instead of 12"
    )
    parser.add_argument("--out", type=Path, default=None, help="also write CSV")
    args = parser.parse_args(argv)

    started = time.monotonic()
    if args.out is not None:
        with args.out.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                ["z", "T", "P", *(name for name, _ in REPRESENTATIONS), "rel_dev"]
            )
            worst = run_grid(args.full, writer)
        print(f"wrote {args.out}")
    else:
        worst = run_grid(args.full, None)
    print(f"worst pairwise relative deviation: {worst:.3e} "
          f"({time.monotonic() - started:.1f}s)")

    tf = TestFunction(1.0, 1.0)
    print("\nquadrature refinement at z = 1, T = P = 1:")
    for name, fn in REPRESENTATIONS:
        value, err = with_refinement_error(
            lambda cfg, fn=fn: fn(1.0 + 0.0j, tf, cfg), DEFAULT_QUADRATURE
        )
        print(f"  {name:>9}: {value:.12f}  refinement error {err:.2e}")

    bound = small_z_bound_constant(tf)
    print(f"\nsmall-argument check, T = P = 1 (bound constant {bound:.4f}):")
    for zabs in (1e-1, 1e-2, 1e-3, 1e-4):
        value = bessel_integral_weighted(complex(zabs), tf, DEFAULT_QUADRATURE)
        print(f"  |z| = {zabs:.0e}: |H(z)|/|z|^2 = {abs(value) / zabs**2:.6f}")
    return 1 if worst > 1e-6 else 0


if __name__ == "__main__":
    sys.exit(main())
