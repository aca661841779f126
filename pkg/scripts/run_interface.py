#!/usr/bin/env python3
"""Front-width sensitivity sweep: halving eps on a fixed discretization.

Fixes the 128^2 mesh and dt = 1/256, then shrinks the tanh front width
through 0.2, 0.1, 0.05, 0.025. Errors grow roughly like 1/eps^2; the CSV
order row reports the slope versus 1/eps. Sampling only at whole periods
of the front motion (integer t) isolates that growth from the first-order
time-lag term, which cancels over complete periods; the default T = 1
with its single sample at t = 1 is the cleanest window. Runs in seconds.
"""

import argparse
import sys

from gsfv.cli import main as gsfv_main


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps-list", default="0.2,0.1,0.05,0.025")
    ap.add_argument("--nx", default="128")
    ap.add_argument("--dt", default=str(1.0 / 256.0))
    ap.add_argument("--t-end", default="1")
    ap.add_argument("--sample-times", default="1")
    ap.add_argument("--variant", default="centered",
                    choices=("centered", "halfwave"))
    ap.add_argument("--out", default="results/interface")
    args = ap.parse_args(argv)

    return gsfv_main(["mms", "interface", "--eps-list", args.eps_list,
                      "--nx", args.nx, "--dt", args.dt,
                      "--t-end", args.t_end,
                      "--sample-times", args.sample_times,
                      "--variant", args.variant, "--out", args.out])


if __name__ == "__main__":
    sys.exit(main())
