"""Run the full numerical chain for Delta and write report + manifest.

    python3 scripts/reproduce_appendix_a.py [--prime-bound 100000] [--out runs/appendix_a]
"""

import argparse
from pathlib import Path

from deltaperiod.cli import reproduce_appendix_a

ap = argparse.ArgumentParser()
ap.add_argument("--prime-bound", type=int, default=100_000)
ap.add_argument("--out", type=Path, default=Path("runs/appendix_a"))
args = ap.parse_args()

report, manifest = reproduce_appendix_a(args.prime_bound, args.out)
print(report)
print("timing (s):", {k: round(v, 3) for k, v in manifest.timing.items()})
print("wrote:", *manifest.outputs, args.out / "manifest.json")
