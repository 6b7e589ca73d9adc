#!/usr/bin/env python3
"""Scan presets for negative residual contangles and print the worst points.

Squared log-negativity is only a surrogate for the convex-roof contangle, so
mixed steady states can dip below zero; this lists where and by how much.
"""

import argparse

from magnomol import preset, run_sweep
from magnomol.measures import PARTITIONS
from magnomol.presets import PRESET_NAMES


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", default=[n for n in PRESET_NAMES if n != "fig2"])
    ap.add_argument("--threshold", type=float, default=-1e-9)
    ap.add_argument("--top", type=int, default=5)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    labels = [f"{r}|{s}{t}" for r, (s, t) in PARTITIONS]
    for name in args.names:
        result = run_sweep(preset(name).with_workers(args.workers))
        bad = []
        for row in result.rows:
            rep = row.report
            if rep.stable and rep.r_parts and min(rep.r_parts) < args.threshold:
                k = min(range(3), key=lambda i: rep.r_parts[i])
                bad.append((rep.r_parts[k], labels[k], row))
        bad.sort(key=lambda b: b[0])
        print(f"{name}: {len(bad)} of {len(result.rows)} rows below {args.threshold:g}")
        for value, label, row in bad[: args.top]:
            where = ", ".join(f"{n}={v:.6g}" for n, v in zip(result.axis_names, row.values))
            print(f"  R[{label}] = {value:.3e} at {where}, delta_b={row.delta_b:+g}")


if __name__ == "__main__":
    main()
