"""Best-circuit search over candidate sets, optionally across worker processes.

Work is split by base circuit (round robin), and results are merged by
candidate position, so the output does not depend on the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .codes import DetectionContext
from .construct import iter_indexed_candidates
from .faults import SearchResult, _count_only
from .pauli import PauliOperator

__all__ = ["search", "default_workers", "WORKERS_ENV"]

WORKERS_ENV = "STABEXP_WORKERS"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    return 1


def _run_shard(target, n_a, bases, ctx, shard):
    hist: dict[int, int] = {}
    best: list = []
    min_l = None
    n = 0
    for pos, c in iter_indexed_candidates(target, n_a, bases, shard):
        n += 1
        l = _count_only(c, ctx)
        hist[l] = hist.get(l, 0) + 1
        if min_l is None or l < min_l:
            min_l, best = l, [(pos, c)]
        elif l == min_l:
            best.append((pos, c))
    return n, hist, min_l, best


def search(
    target: PauliOperator,
    n_a: int,
    bases: str,
    ctx: DetectionContext,
    workers: int | None = None,
) -> SearchResult:
    """Minimum ``l`` over the candidate set and all winners in enumeration order."""
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1:
        parts = [_run_shard(target, n_a, bases, ctx, None)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_run_shard, target, n_a, bases, ctx, (i, workers)) for i in range(workers)]
            parts = [f.result() for f in futs]
    total = sum(p[0] for p in parts)
    if total == 0:
        raise ValueError("empty candidate set")
    hist: dict[int, int] = {}
    for _, h, _, _ in parts:
        for l, k in h.items():
            hist[l] = hist.get(l, 0) + k
    min_l = min(p[2] for p in parts if p[2] is not None)
    winners = sorted((w for p in parts if p[2] == min_l for w in p[3]), key=lambda w: w[0])
    return SearchResult(min_l, [c for _, c in winners], total, dict(sorted(hist.items())))
