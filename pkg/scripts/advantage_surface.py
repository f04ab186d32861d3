#!/usr/bin/env python3
"""Guaranteed-advantage surfaces for nearest-neighbour and idler probes.

Panel A: pure loss, perfect target channel (eta_t = 1), fixed average
channel use 100, swept over background transmissivity and signal energy.
Panel B: additive noise, target noise 0.01, average channel use 500,
swept over background noise and signal energy.
"""

import argparse
import pathlib
import sys

from multiprobe.cli import main as cli_main


def run(outdir: pathlib.Path, steps: int) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    for probe in ("nn", "idler-full"):
        out = outdir / f"advantage_loss_cpf1_{probe}.csv"
        code = cli_main(
            [
                "bounds",
                "--family", "pure-loss",
                "--m", "9",
                "--eta-t", "1.0",
                "--space", "cpf:1",
                "--probe", probe,
                "--mbar", "100",
                "--grid", f"eta-b=0.95:0.999:{steps}",
                "--grid", f"ns=log:1:50:{steps}",
                "--against-classical",
                "--out", str(out),
            ]
        )
        if code:
            return code
        print(f"wrote {out}")

        out = outdir / f"advantage_noise_cpf1_{probe}.csv"
        code = cli_main(
            [
                "bounds",
                "--family", "additive-noise",
                "--m", "9",
                "--nu-t", "0.01",
                "--space", "cpf:1",
                "--probe", probe,
                "--mbar", "500",
                "--grid", f"nu-b=0.012:0.1:{steps}",
                "--grid", f"ns=log:1:50:{steps}",
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
    ap.add_argument("--steps", default=25, type=int)
    args = ap.parse_args()
    sys.exit(run(args.outdir, args.steps))
