"""Integrate f = 1 against the finite/infinite measure with all three engines.

The measure gives 1 to infinite sets and 0 to finite ones.  The Riemann-Lebesgue
and Birkhoff simple integrals are 0; the Gould net diverges, and the printed
chain shows sigma growing by one with every refinement.
"""

import argparse
import sys

from nonadd import FuncSpec, OMEGA, birkhoff_simple, example_measure, gould_integrate, replay_certificate, rl_integrate


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    f, m = FuncSpec.constant(OMEGA, 1), example_measure()
    rl, bs = rl_integrate(f, m), birkhoff_simple(f, m)
    gd = gould_integrate(f, m, seed=args.seed)
    print(f"rl    {rl.status} {rl.value[0]}")
    print(f"bs    {bs.status} {bs.value[0]}")
    print(f"gould {gd.status}")
    for i, step in enumerate(gd.certificate):
        blocks = ", ".join(b.literal() for b in step.partition.blocks)
        print(f"  {i:2d} sigma={step.sigma[0]}  blocks: {blocks}")
    ok = replay_certificate(f, m, gd)
    print(f"certificate replays: {ok}")
    return 0 if ok and rl.value == (0,) and bs.value == (0,) else 1


if __name__ == "__main__":
    sys.exit(main())
