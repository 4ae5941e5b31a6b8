"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_backends.py [--sizes 20 40 80] [--families graphic transversal partition]
"""
import argparse

from matroidswap import _backend
from matroidswap.bench import FAMILIES, compare_backends


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80], help="n = m values")
    parser.add_argument("--families", nargs="+", default=["partition", "transversal", "graphic"], choices=FAMILIES)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)

    names = _backend.available()
    if len(names) < 2:
        print("compiled kernels are not built; only the Python fallback is available")
    print(f"{'family':>12} {'n=m':>5} " + " ".join(f"{n:>10}" for n in names) + "   speedup")
    for family in args.families:
        for size in args.sizes:
            result = compare_backends(family, size, size, args.seed, args.repeats)
            t = result["wall_time_ns"]
            cells = " ".join(f"{t[n] / 1e6:>8.1f}ms" for n in names)
            speedup = t["python"] / t[names[-1]] if len(names) > 1 else 1.0
            print(f"{family:>12} {size:>5} {cells}   x{speedup:.1f}")


if __name__ == "__main__":
    main()
