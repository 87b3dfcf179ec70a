"""Compare the compiled kernels with the pure-Python fallback.

Each backend runs in its own interpreter because the choice is made at
import time (``PENTACHAIN_PURE=1`` forces the fallback)::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, sys, timeit
from pentachain import kernels
from pentachain.coords import random_coordinates
from pentachain.invariants import verify_pentagon_matrix

rng = random.Random(0)
big = [[rng.randint(-10**6, 10**6) for _ in range(12)] for _ in range(12)]
wide = [[rng.randint(-50, 50) for _ in range(16)] for _ in range(8)]
x = {rng.getrandbits(24): rng.randint(1, 9) for _ in range(300)}
y = {rng.getrandbits(24): rng.randint(1, 9) for _ in range(300)}
z2 = random_coordinates(range(1, 6), 2, 7)

cases = {
    "det_int 12x12": lambda: kernels.det_int(big),
    "minor_dets 8x16": lambda: kernels.minor_dets(wide, 16, 8),
    "gmul 300x300 terms": lambda: kernels.gmul(x, y),
    "matrix pentagon n=2": lambda: verify_pentagon_matrix(z2),
}
repeat = int(sys.argv[1])
out = {"backend": kernels.BACKEND}
for name, fn in cases.items():
    fn()
    out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
print(json.dumps(out))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("PENTACHAIN_PURE", None)
    if pure:
        env["PENTACHAIN_PURE"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    fast, slow = run(False, args.repeat), run(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled extension not available; both runs use the pure-Python kernels", file=sys.stderr)
    rows = [(k, slow[k], fast[k]) for k in slow if k != "backend"]
    if args.json:
        print(json.dumps({"python": slow, fast["backend"]: fast}, indent=2))
        return
    print(f"{'workload':<22} {'python [ms]':>12} {fast['backend'] + ' [ms]':>12} {'speedup':>8}")
    for name, a, b in rows:
        print(f"{name:<22} {a * 1e3:12.2f} {b * 1e3:12.2f} {a / b:8.2f}x")


if __name__ == "__main__":
    main()
