#!/usr/bin/env python3
"""Write every figure preset to ``<outdir>/<name>.csv`` and print its summary.

    python scripts/run_presets.py data/ --workers 4 fig3 fig7
"""

import argparse
import time
from pathlib import Path

from magnomol import preset, run_sweep
from magnomol.output import write_result
from magnomol.presets import PRESET_NAMES
from magnomol.sweep import summarize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", type=Path)
    ap.add_argument("names", nargs="*", default=list(PRESET_NAMES), metavar="NAME")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    for name in args.names or PRESET_NAMES:
        t0 = time.perf_counter()
        result = run_sweep(preset(name).with_workers(args.workers))
        write_result(result, args.outdir / f"{name}.{args.format}", args.format)
        print(f"[{time.perf_counter() - t0:6.1f} s] {summarize(result)}")


if __name__ == "__main__":
    main()
