"""Compare the compiled fault sweep with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--limit 2000]

Times ``logical_error_count`` over the first ``--limit`` candidates of a few
candidate sets, once per backend, and checks the classifications agree.
"""

import argparse
import time

import numpy as np

from stabexp import kernels
from stabexp.codes import build_code, logical_rep, multi_block_context
from stabexp.construct import iter_candidates
from stabexp.faults import logical_error_count
from stabexp.presets import PRESETS, load_preset, preset_context

CASES = [
    ("qedc:4 Y1 n_a=1", "qedc:4", "Y1", 1, "XYZ"),
    ("qedc:8 Z^6 n_a=1", "qedc:8", "Z1Z2Z3Z4Z5Z6", 1, "Z"),
    ("qedc:10 Z^8 n_a=1", "qedc:10", "Z1Z2Z3Z4Z5Z6Z7Z8", 1, "Z"),
    ("hamming Z1", "hamming", "Z1", 0, "Z"),
]


def _time(circuits, ctx, method, repeat):
    best = float("inf")
    classes = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = [logical_error_count(c, ctx, method=method, with_sites=False).classes for c in circuits]
        best = min(best, time.perf_counter() - t0)
        classes = out
    return best, classes


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--limit", type=int, default=2000)
    args = ap.parse_args()
    if not kernels.HAVE_COMPILED:
        raise SystemExit("compiled kernel not available; build the package first")

    rows = []
    for label, code, target, n_a, bases in CASES:
        cd = build_code(code)
        ctx = multi_block_context(cd)
        circuits = []
        for c in iter_candidates(logical_rep(cd, target), n_a, bases):
            circuits.append(c)
            if len(circuits) >= args.limit:
                break
        rows.append((label, circuits, ctx))
    for name in ("steane_w3", "five_1_3_w5"):
        rows.append((f"preset {name}", [load_preset(name)] * 50, preset_context(PRESETS[name])))

    print(f"{'case':<22}{'circuits':>9}{'compiled (ms)':>15}{'python (ms)':>13}{'speedup':>9}")
    for label, circuits, ctx in rows:
        tc, a = _time(circuits, ctx, "sweep", args.repeat)
        tp, b = _time(circuits, ctx, "python", args.repeat)
        if not all(np.array_equal(x, y) for x, y in zip(a, b)):
            raise SystemExit(f"{label}: backends disagree")
        print(f"{label:<22}{len(circuits):>9}{1e3 * tc:>15.1f}{1e3 * tp:>13.1f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
