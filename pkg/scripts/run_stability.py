#!/usr/bin/env python3
"""Large-time-step sweep: dt = k*h on a fixed 128^2 mesh, smooth case.

Every multiplier must finish with finite errors (the implicit diffusion
step has no CFL limit); accuracy degrades as k grows, which the CSV
makes visible. Runs in seconds.
"""

import argparse
import sys

from gsfv.cli import main as gsfv_main


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nx", default="128")
    ap.add_argument("--multipliers", default="1,2,4,16,32,64")
    ap.add_argument("--t-end", default="1")
    ap.add_argument("--out", default="results/stability")
    args = ap.parse_args(argv)

    return gsfv_main(["mms", "stability", "--case", "trig",
                      "--nx", args.nx, "--multipliers", args.multipliers,
                      "--t-end", args.t_end, "--out", args.out])


if __name__ == "__main__":
    sys.exit(main())
