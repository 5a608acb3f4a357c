"""Time the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--sizes 256 512 2048] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from dp3 import _kernels_py

try:
    from dp3 import _kernels_cy
except ImportError:
    _kernels_cy = None


def cases(n, rng):
    f = [rng.standard_normal(n) for _ in range(6)]
    rho2 = rng.uniform(0.0, 1.0, n)
    x = np.linspace(-10.0, 10.0, n, endpoint=False)
    k = np.arange(n // 2 + 1, dtype=float) * 2.0 * np.pi / 20.0
    re, im = rng.standard_normal(k.size), rng.standard_normal(k.size)
    xq = rng.uniform(-10.0, 10.0, 64)
    w = 1.0 + np.abs(x)
    return {
        "nonlocal_source": lambda m: m.nonlocal_source(*f, rho2, 1.0),
        "flux_source": lambda m: m.flux_source(f[0], f[1], f[2], f[3], rho2, 1.0),
        "trig_eval": lambda m: m.trig_eval(re, im, k, xq),
        "omega_profile": lambda m: m.omega_profile(w, x, 20.0),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 2048])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    if _kernels_cy is None:
        print("compiled backend not built; timing the fallback only")
    print(f"{'kernel':<16}{'n':>6}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}{'max diff':>12}")
    for n in args.sizes:
        for name, call in cases(n, rng).items():
            number = 3 if name == "omega_profile" else 50
            t_py = min(timeit.repeat(lambda: call(_kernels_py), number=number, repeat=args.repeat)) / number
            if _kernels_cy is None:
                print(f"{name:<16}{n:>6}{1e3 * t_py:>14.4f}{'-':>14}{'-':>10}{'-':>12}")
                continue
            t_cy = min(timeit.repeat(lambda: call(_kernels_cy), number=number, repeat=args.repeat)) / number
            diff = float(np.max(np.abs(np.asarray(call(_kernels_py)) - np.asarray(call(_kernels_cy)))))
            print(f"{name:<16}{n:>6}{1e3 * t_py:>14.4f}{1e3 * t_cy:>14.4f}{t_py / t_cy:>10.2f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
