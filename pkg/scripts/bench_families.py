"""Print size tables for the benchmark families under both backends."""

import argparse

from epikc.families import FAMILIES, bench, fit_affine
from epikc.prop import DNF, TERM


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--stop", type=int, default=12)
    args = ap.parse_args(argv)
    for family in sorted(FAMILIES):
        stop = min(args.stop, 6) if family == "prop42" else args.stop
        ns = list(range(1 if family == "prop42" else 0, stop + 1))
        for l0 in (TERM, DNF):
            rows = bench(family, ns, l0)
            print(f"{family} l0={l0}")
            print(f"{'n':>3} {'stes':>6} {'size':>8} {'dag':>6} {'ms':>8}")
            for r in rows:
                print(f"{r.n:>3} {r.stes:>6} {r.size:>8} {r.dag_size:>6} {1000 * r.seconds:>8.2f}")
            for name in ("size", "dag_size"):
                slope, icpt, r2 = fit_affine(ns, [getattr(r, name) for r in rows])
                print(f"  affine fit {name}: {slope:.3f}n + {icpt:.3f}, R2={r2:.5f}")
            print()


if __name__ == "__main__":
    main()
