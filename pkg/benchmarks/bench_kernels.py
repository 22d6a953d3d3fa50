"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --repeat 5
"""
import argparse
import timeit

import numpy as np

from puedetect import _kernels_py as py

try:
    from puedetect import _kernels as cy
except ImportError:
    cy = None


def cases(rng, n_trials, n_crs):
    d = rng.uniform(1, 1000, (n_trials, n_crs))
    dfc = rng.uniform(1, 500, (n_trials, n_crs))
    pr = rng.normal(-40, 10, (n_trials, n_crs))
    xy = rng.uniform(-500, 500, (n_trials, n_crs, 2))
    c = np.full(n_trials, 111.76)
    g = np.full(n_trials, 31.8)
    x = rng.uniform(-1, 1, (n_trials, 3))
    y = np.zeros((n_trials, 2))
    y[np.arange(n_trials), rng.integers(0, 2, n_trials)] = 1.0
    order = rng.permutation(n_trials).astype(np.intp)
    w = [rng.uniform(-.5, .5, s) for s in ((4, 3), (4,), (2, 4), (2,))]

    def sgd(mod):
        return lambda: mod.sgd_epoch(*[a.copy() for a in w], x, y, order, 0.5, False)

    return {
        "interval_flags": lambda mod: (lambda: mod.interval_flags(d, dfc, 1e-9)),
        "group_dhat": lambda mod: (lambda: mod.group_dhat(pr, xy, 50.0, 80.0, c, g)),
        "sgd_epoch": sgd,
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=20_000)
    p.add_argument("--n-crs", type=int, default=6)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, make in cases(rng, args.trials, args.n_crs).items():
        t_py = min(timeit.repeat(make(py), number=1, repeat=args.repeat))
        if cy is None:
            print(f"{name:<16}{t_py:>12.4f}{'n/a':>12}{'':>10}")
            continue
        t_cy = min(timeit.repeat(make(cy), number=1, repeat=args.repeat))
        print(f"{name:<16}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
