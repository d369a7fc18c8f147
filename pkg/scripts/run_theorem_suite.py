"""Run the seeded theorem suite over several seeds and summarize.

Writes one JSON report per seed when --out is given.  Exit status is 1 if any
seed reports a failure.
"""

import argparse
import io
import sys
from pathlib import Path

from nonadd.cli import main as cli


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    parser.add_argument("--count", type=int, default=20)
    parser.add_argument("--profile", action="append")
    parser.add_argument("--out", type=Path, help="directory for report-<seed>.json")
    args = parser.parse_args(argv)

    worst = 0
    for seed in args.seeds:
        cmd = ["verify", "--seed", str(seed), "--count", str(args.count)]
        for p in args.profile or ():
            cmd += ["--profile", p]
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            cmd += ["--report", str(args.out / f"report-{seed}.json")]
        buf = io.StringIO()
        code = cli(cmd, out=buf)
        worst = max(worst, code)
        print(f"seed {seed}: {buf.getvalue().splitlines()[-1]}")
    return worst


if __name__ == "__main__":
    sys.exit(main())
