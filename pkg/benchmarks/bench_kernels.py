"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload runs once per backend; the best of N wall-clock times is
reported together with the speedup.
"""

import argparse
import random
import time
from fractions import Fraction

from msr import kernels
from msr.dsl import builtin, run
from msr.groebner import Ideal
from msr.polyalg import Chart, Poly


def _random_poly(chart, rng, nterms, deg):
    terms = {}
    for _ in range(nterms):
        e = [0] * chart.dim
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(chart.dim)] += 1
        terms[tuple(e)] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 4))
    return Poly(chart, terms)


def wl_multiply():
    rng = random.Random(1)
    ch = Chart("A", ("a", "b", "c", "d"))
    ps = [_random_poly(ch, rng, 25, 5) for _ in range(12)]

    def go():
        acc = ch.one()
        for p in ps[:5]:
            acc = acc * p
        return acc
    return go


def wl_groebner():
    ch = Chart("B", ("x", "y", "z", "w"))
    x, y, z, w = ch.gens()
    gens = [x**2 * y - z**2 + w, x * y * z - w**2, y**3 - x * z + 1, z * w - x * y]

    def go():
        return Ideal(ch, gens).groebner_basis("grevlex")
    return go


def wl_scenario(name):
    src = name

    def go():
        return run(builtin(src))
    return go


WORKLOADS = {
    "poly multiply": wl_multiply,
    "groebner basis": wl_groebner,
    "scenario cross2d": lambda: wl_scenario("cross2d"),
    "scenario scalarfield2d": lambda: wl_scenario("scalarfield2d"),
}


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    names = sorted(kernels.backends())
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'workload':<26}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, make in WORKLOADS.items():
        times = {}
        for n in names:
            with kernels.use_backend(n):
                times[n] = best_time(make(), args.repeat)
        row = f"{label:<26}" + "".join(f"{times[n] * 1000:>10.1f}ms" for n in names)
        if "compiled" in times:
            row += f"{times['python'] / times['compiled']:>11.2f}x"
        print(row)


if __name__ == "__main__":
    main()
