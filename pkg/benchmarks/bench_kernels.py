"""Compiled vs pure-Python kernels.

Times the unit-disk adjacency scan and the resource hash on both backends,
then a full scenario run under each backend (the pure one is forced through
VANET_MAGENT_PURE in a child process).

    python3 benchmarks/bench_kernels.py [--nodes 400] [--repeat 5]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from vanet_magent import _kernels_py

try:
    from vanet_magent import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

SCENARIO = """
import json, time
from vanet_magent import KERNEL_BACKEND
from vanet_magent.config import config_from_dict
from vanet_magent.scenario import run_scenario
cfg = config_from_dict({"seed": 5, "duration_ms": 30000, "vehicles": {"count": 60}})
t = time.perf_counter()
m = run_scenario(cfg).metrics
print(json.dumps({"backend": KERNEL_BACKEND, "seconds": time.perf_counter() - t,
                  "paths": m.paths_recorded}))
"""


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(nodes, repeat):
    rng = random.Random(1)
    xs = [rng.uniform(0, 1000) for _ in range(nodes)]
    ys = [rng.uniform(0, 1000) for _ in range(nodes)]
    keys = [rng.getrandbits(32) for _ in range(20_000)]
    rows = []
    for name, mod in (("python", _kernels_py), ("cython", _kernels_c)):
        if mod is None:
            continue
        disk = best(lambda: mod.unit_disk_pairs(xs, ys, 250.0), repeat)
        hashing = best(lambda: [mod.hash4(7, 2, k, 1000) for k in keys], repeat)
        rows.append((name, disk, hashing))
    if len(rows) == 2:
        assert _kernels_py.unit_disk_pairs(xs, ys, 250.0) == _kernels_c.unit_disk_pairs(xs, ys, 250.0)
    return rows


def scenario_row(pure):
    env = dict(os.environ)
    env.pop("VANET_MAGENT_PURE", None)
    if pure:
        env["VANET_MAGENT_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", SCENARIO], env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-scenario", action="store_true")
    args = ap.parse_args()

    rows = kernel_rows(args.nodes, args.repeat)
    print(f"unit_disk_pairs over {args.nodes} nodes, hash4 x 20000 (best of {args.repeat})")
    print(f"{'backend':<8} {'unit_disk ms':>13} {'hash4 ms':>10}")
    for name, disk, hashing in rows:
        print(f"{name:<8} {disk * 1e3:13.2f} {hashing * 1e3:10.2f}")
    if len(rows) == 2:
        print(f"speedup  {rows[0][1] / rows[1][1]:12.1f}x {rows[0][2] / rows[1][2]:9.1f}x")
    else:
        print("compiled extension not built; only the fallback was timed")

    if not args.skip_scenario:
        print("\nend-to-end scenario (30 s simulated, 60 vehicles)")
        for pure in (True, False):
            r = scenario_row(pure)
            print(f"{r['backend']:<8} {r['seconds']:8.2f} s  paths={r['paths']}")


if __name__ == "__main__":
    main()
