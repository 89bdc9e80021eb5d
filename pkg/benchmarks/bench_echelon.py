"""Time the compiled echelon kernel against the pure-Python reference.

Two workloads: small random matrices, and the matrices the library itself
reduces while classifying a few groups (captured by wrapping ``linalg.echelon``).

    python3 benchmarks/bench_echelon.py [--sizes 6 10 14] [--repeat 3] [--seed 0]
"""

import argparse
import random
import timeit

from equitor import _pycore, linalg


def random_matrix(rng, rows, cols, bound=2, density=0.3):
    # sparse with small entries, like the coboundary matrices the library reduces
    return [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(cols)]
            for _ in range(rows)]


def captured_workload():
    from equitor import catalogue
    from equitor.classifier import classify
    from equitor.obstruction import k9_family_group, reproduce_k9_family

    seen = []
    real = linalg.echelon

    def spy(a, transform=True):
        if a and a[0]:
            seen.append(([list(r) for r in a], transform))
        return real(a, transform)

    linalg.echelon = spy
    try:
        reproduce_k9_family("Q", 4)
        classify(k9_family_group("D", 3)[0])
        classify(catalogue.get("Syl2C").group())
    finally:
        linalg.echelon = real
    return seen


def fits(core, m, transform=True):
    try:
        core.echelon(m, transform)
        return True
    except OverflowError:
        return False


def bench(fn, jobs, repeat):
    return min(timeit.repeat(lambda: [fn(m, t) for m, t in jobs], number=1, repeat=repeat))


def compare(label, core, jobs, repeat):
    if core is not None:
        # inputs that overflow int64 take the Python path in linalg.echelon anyway
        kept = [(m, t) for m, t in jobs if fits(core, m, t)]
        dropped = len(jobs) - len(kept)
        jobs = kept
    py = bench(_pycore.echelon, jobs, repeat)
    if core is None:
        print(f"{label:>16} {len(jobs):>6} {py:>12.4f} {'n/a':>13} {'n/a':>8}")
        return
    for m, t in jobs:
        assert tuple(core.echelon(m, t)) == tuple(_pycore.echelon(m, t))
    cy = bench(core.echelon, jobs, repeat)
    note = f"  ({dropped} overflowed)" if dropped else ""
    print(f"{label:>16} {len(jobs):>6} {py:>12.4f} {cy:>13.4f} {py / cy:>7.1f}x{note}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[6, 10, 14])
    p.add_argument("--batch", type=int, default=50, help="random matrices per size")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-workload", action="store_true", help="skip the captured workload")
    args = p.parse_args(argv)

    rng = random.Random(args.seed)
    core = linalg._core
    print(f"{'workload':>16} {'count':>6} {'python (s)':>12} {'compiled (s)':>13} {'speedup':>8}")
    for n in args.sizes:
        jobs = [(random_matrix(rng, n, n + 2), True) for _ in range(args.batch)]
        compare(f"random {n}x{n + 2}", core, jobs, args.repeat)
    if not args.no_workload:
        compare("library", core, captured_workload(), args.repeat)
    if core is None:
        print("compiled backend not built; run `pip install -e . --no-build-isolation`")


if __name__ == "__main__":
    main()
