"""Time the compiled kernels against their pure-Python fallbacks.

Run ``python benchmarks/bench_kernels.py`` after building the extension
(``pip install -e . --no-build-isolation``).
"""
import argparse
import timeit

import numpy as np

from gpsbox import _lobatto_py, _numerov_py

try:
    from gpsbox import _lobatto, _numerov
except ImportError:
    _lobatto = _numerov = None


def _numerov_case(points):
    r = np.linspace(1e-6, 10.0, points + 1)
    veff = np.ascontiguousarray(-1.0 / r)
    h = r[1] - r[0]
    return veff, -0.12, h, r[0], r[1]


def _time(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=20000, help="Numerov mesh intervals")
    parser.add_argument("--order", type=int, default=201, help="Legendre degree")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    x = np.ascontiguousarray(np.linspace(-1.0, 1.0, 2001))
    cases = [
        ("numerov shoot", _numerov_py.shoot, _numerov and _numerov.shoot, _numerov_case(args.points)),
        ("legendre array", _lobatto_py.legendre_with_derivative,
         _lobatto and _lobatto.legendre_with_derivative, (args.order, x)),
        # node bracketing evaluates one point at a time
        ("legendre scalar", _lobatto_py.legendre_with_derivative,
         _lobatto and _lobatto.legendre_with_derivative, (args.order, np.array([0.3]))),
    ]
    print(f"{'kernel':<16}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for name, py_fn, cy_fn, fn_args in cases:
        t_py = _time(py_fn, fn_args, args.repeat)
        if cy_fn is None:
            print(f"{name:<16}{t_py * 1e3:14.3f}{'n/a':>14}{'':>10}")
            continue
        ref, got = py_fn(*fn_args), cy_fn(*fn_args)
        t_cy = _time(cy_fn, fn_args, args.repeat)
        agree = all(np.allclose(a, b, rtol=1e-12, atol=0) for a, b in zip(ref, got))
        print(f"{name:<16}{t_py * 1e3:14.3f}{t_cy * 1e3:14.3f}{t_py / t_cy:9.1f}x"
              + ("" if agree else "  MISMATCH"))


if __name__ == "__main__":
    main()
