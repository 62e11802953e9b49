"""Time the compiled kernels against the pure-Python twins.

Run from the repository root after an editable install:

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import random
import timeit

from starsel import _pykernels

try:
    from starsel import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def workloads(seed=0):
    rng = random.Random(seed)
    fams = [frozenset(rng.sample(range(1, 1 << 8), 12)) for _ in range(64)]
    sweep_items = [[rng.getrandbits(60) for _ in range(rng.randint(6, 12))] for _ in range(64)]
    return {
        "star": lambda k: [k.star(rng_a, f) for f in fams for rng_a in (1, 3, 17, 128)],
        "union_closure": lambda k: [k.union_closure(list(f)[:10]) for f in fams],
        "intersection_closure": lambda k: [k.intersection_closure(list(f)[:10]) for f in fams],
        "refines": lambda k: [k.refines(tuple(a), tuple(b)) for a, b in zip(fams, fams[1:])],
        "sweep_or": lambda k: [k.sweep_or(items) for items in sweep_items],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=20)
    args = parser.parse_args()
    impls = {"python": _pykernels}
    if _ckernels is not None:
        impls["cython"] = _ckernels
    else:
        print("compiled kernels unavailable; timing the Python twins only")
    print(f"{'kernel':<22}" + "".join(f"{name:>12}" for name in impls) + "     speedup")
    for name, work in workloads().items():
        times = {}
        for impl, mod in impls.items():
            times[impl] = min(timeit.repeat(lambda: work(mod), number=args.number,
                                            repeat=args.repeat)) / args.number
        row = f"{name:<22}" + "".join(f"{times[i] * 1e3:>10.3f}ms" for i in impls)
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
