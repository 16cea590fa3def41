"""Compare the pure-Python and compiled kernels.

Usage::

    python3 benchmarks/bench_kernel.py [--repeat N]

Times polynomial multiplication, left derivatives, normal ordering of
operator products and one full verification suite under each backend.
Each backend runs in a fresh interpreter so that module caches are not
shared.
"""

import argparse
import json
import os
import subprocess
import sys

_WORKER = r"""
import json, random, sys, timeit
from koszul import kernel
from koszul.superalgebra import declare_chart
from koszul.generators import random_operator, random_polynomial
from koszul.suites import run_suite

repeat = int(sys.argv[1])
C = declare_chart([("x1", 0), ("x2", 0), ("x3", 0), ("t1", 1), ("t2", 1), ("t3", 1)])
rng = random.Random(7)
A = [random_polynomial(C, rng, terms=12, max_exp=3) for _ in range(6)]
ops = [random_operator(C, rng, terms=4, max_momenta=3, max_coord=3) for _ in range(6)]
odd = C.odd

def mul():
    for a in A:
        for b in A:
            kernel.poly_mul(a.terms, b.terms, odd)

def deriv():
    for a in A:
        for i in range(C.nvars):
            kernel.left_derivative(a.terms, i, odd)

def compose():
    for a in ops:
        for b in ops:
            a * b

def suite():
    run_suite("thmdp")

out = {"backend": kernel.BACKEND}
for name, fn in [("poly_mul", mul), ("left_derivative", deriv), ("compose", compose), ("suite_thmdp", suite)]:
    fn()
    out[name] = min(timeit.repeat(fn, number=1, repeat=repeat)) * 1000
print(json.dumps(out))
"""


def run(pure, repeat):
    env = dict(os.environ)
    env.pop("KOSZUL_PURE", None)
    if pure:
        env["KOSZUL_PURE"] = "1"
    res = subprocess.run([sys.executable, "-c", _WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    py = run(True, args.repeat)
    cy = run(False, args.repeat)
    if cy["backend"] != "cython":
        print("compiled kernel not available; only the pure-Python timings are meaningful")
    print(f"{'benchmark':<18}{'python ms':>12}{cy['backend'] + ' ms':>12}{'speedup':>10}")
    for key in ("poly_mul", "left_derivative", "compose", "suite_thmdp"):
        print(f"{key:<18}{py[key]:>12.2f}{cy[key]:>12.2f}{py[key] / cy[key]:>9.2f}x")


if __name__ == "__main__":
    main()
