"""Compare the compiled kernels with the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Each workload is timed in
both backends on identical inputs, outputs are checked for equality, and an
end-to-end Verlinde evaluation is timed in a subprocess per backend.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from doper import _kernels_py

try:
    from doper import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def workloads(rng: random.Random):
    p = 65521
    a = [rng.randrange(p) for _ in range(200)]
    b = [rng.randrange(p) for _ in range(120)]
    big = [rng.randrange(-(10**40), 10**40) for _ in range(13)]
    big2 = [rng.randrange(-(10**40), 10**40) for _ in range(13)]
    return [
        ("poly_mul deg 199 x 119", lambda k: k.poly_mul(a, b, p)),
        ("poly_divmod deg 199 / 119", lambda k: k.poly_divmod(a, b, p)),
        ("cyclic_mul p=13, 40-digit", lambda k: k.cyclic_mul(big, big2)),
        ("involution_scan p=17", lambda k: k.involution_scan(17)),
        ("necklace_scan p=17", lambda k: k.necklace_scan(17)),
    ]


def best_of(fn, repeat: int) -> float:
    number = 1
    while True:
        t = timeit.timeit(fn, number=number)
        if t > 0.2 or number >= 10_000:
            break
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def end_to_end(pure: bool, p: int, n: int, g: int) -> float:
    env = dict(os.environ)
    if pure:
        env["DOPER_PURE_PYTHON"] = "1"
    else:
        env.pop("DOPER_PURE_PYTHON", None)
    code = (
        "import time; from doper.verlinde import verlinde_degree; "
        f"t = time.perf_counter(); verlinde_degree({p}, {n}, {g}); print(time.perf_counter() - t)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True, capture_output=True, text=True)
    return float(out.stdout.strip())


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if _compiled is None:
        sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")

    rows = []
    for name, fn in workloads(random.Random(args.seed)):
        if fn(_compiled) != fn(_kernels_py):
            sys.exit(f"backends disagree on {name}")
        t_py = best_of(lambda: fn(_kernels_py), args.repeat)
        t_cy = best_of(lambda: fn(_compiled), args.repeat)
        rows.append((name, t_py, t_cy))
    for case in [(13, 5, 2), (11, 3, 4)]:
        t_py = end_to_end(True, *case)
        t_cy = end_to_end(False, *case)
        rows.append((f"verlinde_degree{case}", t_py, t_cy))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'python':>12}  {'cython':>12}  {'speedup':>8}")
    for name, t_py, t_cy in rows:
        print(f"{name:<{width}}  {t_py * 1e3:>10.3f}ms  {t_cy * 1e3:>10.3f}ms  {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
