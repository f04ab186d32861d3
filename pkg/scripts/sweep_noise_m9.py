#!/usr/bin/env python3
"""Additive-noise (environment localisation) m=9 error-bound curves.

Same sweep as the pure-loss script but for thermal background/target noise
0.02/0.01, where disjoint probes collapse and mutual probing recovers the
advantage.
"""

import argparse
import pathlib
import sys

from multiprobe.cli import main as cli_main

SPACES = {"cpf1": "cpf:1", "cpf3": "cpf:3", "full": "full"}
PROBES = ("classical", "full-ghz", "tmsv-disjoint", "nn", "idler-full")


def run(outdir: pathlib.Path, steps: int) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    for space_tag, space in SPACES.items():
        for probe in PROBES:
            out = outdir / f"noise_m9_{space_tag}_{probe}.csv"
            code = cli_main(
                [
                    "bounds",
                    "--family", "additive-noise",
                    "--m", "9",
                    "--nu-b", "0.02",
                    "--nu-t", "0.01",
                    "--ns", "20",
                    "--space", space,
                    "--probe", probe,
                    "--grid", f"mbar=log:10:5000:{steps}",
                    "--against-classical",
                    "--out", str(out),
                ]
            )
            if code:
                return code
            print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results", type=pathlib.Path)
    ap.add_argument("--steps", default=50, type=int)
    args = ap.parse_args()
    sys.exit(run(args.outdir, args.steps))
