"""Compare the compiled kernels with the numpy fallback.

Run with ``python benchmarks/bench_kernels.py``. Each kernel is timed on
the same inputs for every available backend and the results are checked
for equality before the timings are printed.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from kronhalton._kernels import available_backends
from kronhalton.laurent import Gap2Series
from kronhalton.poly import Poly
from kronhalton.sequences import HybridSpec, generate


def star_inputs(N: int, s: int):
    if s == 1:
        spec = HybridSpec(bases=(Poly.x(2),))
    elif s == 2:
        spec = HybridSpec(series=(Gap2Series(),), bases=(Poly.x(2),))
    else:
        spec = HybridSpec(series=(Gap2Series(),), bases=(Poly.x(2), Poly([1, 1], 2)))
    pts = generate(spec, N)
    return pts.numerators().astype(np.int64), 2 ** pts.precision


def rank_inputs(n: int, p: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    return rng.integers(0, p, size=(n, n), dtype=np.int64)


def best_of(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--sizes", default="256,1024,4096", help="N values for s=2")
    parser.add_argument("--sizes3", default="64,256", help="N values for s=3 (cubic cost)")
    args = parser.parse_args(argv)
    backends = available_backends()
    names = sorted(backends)
    print(f"backends: {', '.join(names)}")
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is timed")

    header = f"{'kernel':<28}" + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)

    cases = []
    for s, sizes in ((2, args.sizes), (3, args.sizes3)):
        for N in (int(x) for x in sizes.split(",")):
            coords, P = star_inputs(N, s)
            cases.append((f"star_corner_max N={N} s={s}",
                          lambda k, c=coords, P=P: k.star_corner_max(c, P)))
    for n, p in ((64, 2), (256, 2), (256, 3)):
        mat = rank_inputs(n, p)
        cases.append((f"rank_mod_p {n}x{n} p={p}", lambda k, m=mat, p=p: k.rank_mod_p(m.copy(), p)))

    for label, run in cases:
        results = [run(backends[n]) for n in names]
        first = results[0]
        for r in results[1:]:
            if isinstance(first, tuple):
                same = int(r[0]) == int(first[0])
            else:
                same = int(r) == int(first)
            if not same:
                raise SystemExit(f"{label}: backends disagree")
        times = [best_of(lambda k=backends[n]: run(k), args.repeat) for n in names]
        row = f"{label:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(names) == 2:
            row += f"{times[1] / times[0]:>9.1f}x" if names[0] == "cython" else ""
        print(row, flush=True)


if __name__ == "__main__":
    main()
