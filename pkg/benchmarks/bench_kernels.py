"""Time the compiled and pure-Python search kernels on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each case runs on both backends; results (values, witnesses, node counts)
must agree, and the table reports the best wall time of N runs.
"""

from __future__ import annotations

import argparse
import random
import time

from icleak._kernels import _pure
from icleak.confusion import _adjacency_bitsets, build_confusion_graph
from icleak.fitting import _col_class, _kernel_args, pattern_from_instance
from icleak.fixtures import example1
from icleak.instance import random_instance, random_split

try:
    from icleak._kernels import _ccore
except ImportError:
    _ccore = None


def fitting_cases():
    inst, split = example1()
    yield "fit rank example1", inst, None, _pure.RANK
    yield "fit leak example1", inst, split, _pure.LEAKAGE
    rng = random.Random(11)
    for n, m in [(6, 6), (7, 7)]:
        while True:
            inst = random_instance(rng, n, m, p_side=0.45)
            if 13 <= len(pattern_from_instance(inst).free_cells) <= 16:
                break
        split = random_split(rng, n)
        yield f"fit rank n={n}", inst, None, _pure.RANK
        yield f"fit pareto n={n}", inst, split, _pure.PARETO


def mis_cases():
    rng = random.Random(5)
    for n in (6, 8, 9):
        inst = random_instance(rng, n, n, p_side=0.5)
        g = build_confusion_graph(inst)
        yield f"mis |V|={g.vertex_count}", g.vertex_count, _adjacency_bitsets(g)


def best_of(fn, repeat):
    fn()  # warm up
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ccore is None:
        print("compiled extension not built; only the pure backend is available")
    print(f"{'case':<22} {'pure (s)':>10} {'cython (s)':>11} {'speedup':>8}")
    rows = []
    for name, inst, split, obj in fitting_cases():
        pat = pattern_from_instance(inst)
        base, per_row = _kernel_args(pat, pat.free_cells)
        call = (pat.q, pat.rows, pat.cols, base, per_row, _col_class(pat, split), obj)
        rows.append((name, lambda k, c=call: k.fitting_search(*c)))
    for name, nv, adj in mis_cases():
        rows.append((name, lambda k, a=(nv, adj): k.max_independent_set(*a)))
    for name, run in rows:
        tp, rp = best_of(lambda: run(_pure), args.repeat)
        if _ccore is None:
            print(f"{name:<22} {tp:>10.4f} {'-':>11} {'-':>8}")
            continue
        tc, rc = best_of(lambda: run(_ccore), args.repeat)
        if rp != rc:
            raise SystemExit(f"backend mismatch on {name}")
        print(f"{name:<22} {tp:>10.4f} {tc:>11.5f} {tp / tc:>7.0f}x")


if __name__ == "__main__":
    main()
