"""End-to-end acceptance checks, one per criterion.

Each check records a one-line PASS/FAIL verdict; the lines are printed at
the end of the pytest run (and by running this file directly).  A check
whose verdict is FAIL only because of a documented inconsistency in the
reference data still lets its test pass, so the verdict line is the place
to read the outcome.
"""

import math
import random
import time
from functools import lru_cache

import pytest

from stabexp.analytics import NoiseParams, emit_table
from stabexp.codes import build_code, logical_rep, multi_block_context
from stabexp.construct import candidate_count, iter_candidates
from stabexp.faults import fault_sites, logical_error_count
from stabexp.oracle import DEFAULT_CAP, monte_carlo_rates, verify_all_faults, verify_logical_action
from stabexp.presets import PRESETS, load_preset, preset_context
from stabexp.search import search

from reference_tables import COLUMNS, INCONSISTENT, REFERENCE

VERDICTS: dict[int, str] = {}


def _record(n, ok, detail, t0):
    VERDICTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail}; {time.perf_counter() - t0:.1f}s)"


def _zs(t):
    return "".join(f"Z{j}" for j in range(1, t + 1))


@lru_cache(maxsize=None)
def _search(code, label, n_a, bases):
    cd = build_code(code)
    return search(logical_rep(cd, label), n_a, bases, multi_block_context(cd))


COUNT_CASES = [
    ("qedc:4", "X1", 0, "XYZ", 4), ("qedc:4", "X1", 1, "XYZ", 30),
    ("qedc:4", "Z1", 0, "XYZ", 4), ("qedc:4", "Z1", 1, "XYZ", 30),
    ("qedc:4", "Y1", 0, "XYZ", 10), ("qedc:4", "Y1", 1, "XYZ", 144),
    ("qedc:6", _zs(4), 0, "Z", 6), ("qedc:6", _zs(4), 1, "Z", 120),
    ("qedc:8", _zs(6), 0, "Z", 120), ("qedc:8", _zs(6), 1, "Z", 5040),
    ("qedc:10", _zs(8), 0, "Z", 5040), ("qedc:10", _zs(8), 1, "Z", 362880),
    ("five_1_3", "Z1", 0, "XYZ", 10), ("steane", "Z1", 0, "XYZ", 10),
    ("hamming", "Z1", 0, "Z", 24),
]


def test_criterion_1_candidate_counts():
    t0 = time.perf_counter()
    bad = []
    for code, label, n_a, bases, want in COUNT_CASES:
        target = logical_rep(build_code(code), label)
        closed = candidate_count(target.weight, n_a, bases)
        enumerated = sum(1 for _ in iter_candidates(target, n_a, bases))
        if not closed == enumerated == want:
            bad.append(f"{code} {label} n_a={n_a}: {closed}/{enumerated} != {want}")
    _record(1, not bad, "; ".join(bad) or f"{len(COUNT_CASES)} candidate sets enumerated exactly", t0)
    assert not bad


def test_criterion_2_minimum_l():
    t0 = time.perf_counter()
    bad = []

    def expect(name, got, want):
        if got != want:
            bad.append(f"{name}: {got} != {want}")

    for label in ("X1", "Z1"):
        expect(f"qedc {label} n_a=0", _search("qedc:4", label, 0, "XYZ").min_l, 6)
        r = _search("qedc:4", label, 1, "XYZ")
        expect(f"qedc {label} n_a=1", (r.min_l, len(r.best)), (2, 10))
    expect("qedc Y1 n_a=0", _search("qedc:4", "Y1", 0, "XYZ").min_l, 12)
    r = _search("qedc:4", "Y1", 1, "XYZ")
    expect("qedc Y1 n_a=1", (r.min_l, len(r.best)), (4, 14))
    for t, ls in ((4, (18, 6)), (6, (30, 10)), (8, (42, 14))):
        got = tuple(_search(f"qedc:{t + 2}", _zs(t), n_a, "Z").min_l for n_a in (0, 1))
        expect(f"qedc Z^{t}", got, ls)
    for code in ("five_1_3", "steane"):
        for letter in "XYZ":
            r = _search(code, f"{letter}1", 0, "XYZ")
            expect(f"{code} {letter}1", r.l_histogram, {2: r.n_candidates})
    r = _search("hamming", "Z1", 0, "Z")
    expect("hamming Z1", r.l_histogram, {2: 24})
    for name in [n for n, s in PRESETS.items() if s.family in ("hamming_multi", "d3_multi")]:
        rep = logical_error_count(load_preset(name), preset_context(PRESETS[name]), with_sites=False)
        expect(name, rep.l, 2)
    _record(2, not bad, "; ".join(bad) or "all searched minima, winner counts and l=2 constructions match", t0)
    assert not bad


def test_criterion_3_tables():
    t0 = time.perf_counter()
    mismatches = []
    total = 0
    for (table, q), rows in REFERENCE.items():
        t = emit_table(table, NoiseParams(1e-3, q))
        for r, row in enumerate(rows):
            for col, want in zip(COLUMNS[table], row):
                total += 1
                got = t.cell(r, col)
                if got != want:
                    mismatches.append((table, q, r, col, want, got))
    elapsed = time.perf_counter() - t0
    detail = f"{total - len(mismatches)}/{total} cells equal"
    if mismatches:
        detail += "; differing: " + ", ".join(
            f"{tb} q={q:g} row {r} '{c}' printed {w} computed {g}" for tb, q, r, c, w, g in mismatches)
    _record(3, not mismatches and elapsed < 1.0, detail, t0)
    unexplained = [m for m in mismatches if m[:4] not in INCONSISTENT or INCONSISTENT[m[:4]] != m[5]]
    assert not unexplained
    assert elapsed < 1.0


LOWER_BOUND_SETS = [c[:4] for c in COUNT_CASES if c[4] <= 5040] + [
    ("qedc:4", "Z1Z2", 1, "XYZ"), ("qedc:6", "X1Y2", 1, "XYZ"), ("five_1_3", "X1", 0, "XYZ"),
    ("five_1_3", "Y1", 0, "XYZ"), ("steane", "X1", 0, "XYZ"), ("steane", "Y1", 0, "XYZ"),
]


def test_criterion_4_lower_bound():
    t0 = time.perf_counter()
    seen = 0
    low = []
    for code, label, n_a, bases in LOWER_BOUND_SETS:
        cd = build_code(code)
        ctx = multi_block_context(cd)
        for c in iter_candidates(logical_rep(cd, label), n_a, bases):
            seen += 1
            l = logical_error_count(c, ctx, with_sites=False).l
            if l < 2:
                low.append(f"{code} {label} n_a={n_a}: l={l}")
    # The largest set is covered through the full search histogram.
    r = _search("qedc:10", _zs(8), 1, "Z")
    seen += r.n_candidates
    if min(r.l_histogram) < 2:
        low.append("qedc Z^8 n_a=1")
    _record(4, not low, "; ".join(low) or f"{seen} candidates, none below l=2", t0)
    assert not low


THETAS = (0.37, 1.1, -0.83)


def test_criterion_5_oracle_equivalence():
    t0 = time.perf_counter()
    bad = []
    full = sampled = skipped = 0
    rng = random.Random(0)
    for name in sorted(PRESETS):
        spec = PRESETS[name]
        c = load_preset(name)
        if c.n_qubits > DEFAULT_CAP:
            skipped += 1
            continue
        ctx = preset_context(spec)
        rep = verify_logical_action(c, ctx, spec.target, THETAS)
        if rep.max_deviation >= 1e-9:
            bad.append(f"{name} deviation {rep.max_deviation:.2e}")
        all_sites = fault_sites(c)
        if c.n_qubits <= 12 or len(all_sites) <= 200:
            sites = None
            full += 1
        else:
            sites = rng.sample(all_sites, 200)
            sampled += 1
        disagree = [ch.site for ch in verify_all_faults(c, ctx, spec.target, sites=sites) if not ch.agrees]
        if disagree:
            bad.append(f"{name}: {len(disagree)} sites disagree")
    detail = (f"{full} presets checked on all sites, {sampled} on 200 sampled sites, "
              f"{skipped} above the {DEFAULT_CAP}-qubit cap not simulated")
    _record(5, not bad, "; ".join(bad) or detail, t0)
    assert not bad


MC_PRESETS = ("qedc_z4_na0", "qedc_z4_na1", "five_1_3_w3")


def test_criterion_6_monte_carlo():
    t0 = time.perf_counter()
    p, shots = 1e-3, 10 ** 6
    bad, parts = [], []
    for i, name in enumerate(MC_PRESETS):
        spec = PRESETS[name]
        c = load_preset(name)
        ctx = preset_context(spec)
        rep = logical_error_count(c, ctx, with_sites=False)
        est = monte_carlo_rates(c, ctx, spec.target, p, 0.0, shots, seed=100 + i)
        pl, rej = rep.l / 15 * p, c.cnot_count * p - rep.l / 15 * p
        z_l = (est.p_L_hat - pl) / math.sqrt(pl * (1 - pl) / shots)
        z_r = (est.rejection_hat - rej) / math.sqrt(rej * (1 - rej) / shots)
        parts.append(f"{name} z_L={z_l:+.2f} z_rej={z_r:+.2f}")
        if abs(z_l) > 3 or abs(z_r) > 3:
            bad.append(parts[-1])
        again = monte_carlo_rates(c, ctx, spec.target, p, 0.0, 50000, seed=7)
        if again.to_dict() != monte_carlo_rates(c, ctx, spec.target, p, 0.0, 50000, seed=7).to_dict():
            bad.append(f"{name} not deterministic")
    _record(6, not bad, ", ".join(parts), t0)
    assert not bad


def test_criterion_7_coefficients_and_claims():
    t0 = time.perf_counter()
    bad = []
    fig = emit_table("fig4")
    ls = {4: (18, 6), 6: (30, 10), 8: (42, 14)}
    for i, w in enumerate(range(3, 9)):
        t = w + w % 2
        if fig.records[i]["unencoded"] != 2 * (w - 1):
            bad.append(f"w={w} unencoded")
        if fig.records[i]["encoded"] != [l / 15 for l in ls[t]]:
            bad.append(f"w={w} encoded")

    def ratios(table, q, col):
        tb = emit_table(table, NoiseParams(1e-3, q))
        return [r[col] for r in tb.records]

    qedc1 = [r["ratio"] for r in emit_table("iceberg_rates", NoiseParams(1e-3, 1e-3)).records if r["n_a"] == 1]
    qedc4 = [r["ratio"] for r in emit_table("iceberg_rates", NoiseParams(1e-3, 1e-4)).records if r["n_a"] == 1]
    d3_4 = ratios("d3_rates", 1e-4, "ratio")
    lo, hi = math.floor(min(qedc1)), math.floor(max(qedc1))
    if (lo, hi) != (4, 7):
        bad.append(f"q=1e-3 improvement {lo}-{hi}x")
    lo4, hi4 = math.floor(min(qedc4)), math.floor(max(qedc4))
    if (lo4, hi4) != (12, 13):
        bad.append(f"q=1e-4 improvement {lo4}-{hi4}x")
    if round(max(d3_4), 2) != 33.75:
        bad.append(f"d3 best {max(d3_4):.2f}x")
    acc = [r["p_S"] for q in (1e-3, 1e-4) for tb in ("iceberg_rates", "d3_rates", "hamming_rates")
           for r in emit_table(tb, NoiseParams(1e-3, q)).records]
    if min(acc) < 0.97:
        bad.append(f"lowest acceptance {min(acc):.4f}")
    detail = (f"coefficients match for w=3..8; improvement {min(qedc1):.2f}-{max(qedc1):.2f}x at q=1e-3, "
              f"{min(qedc4):.2f}-{max(qedc4):.2f}x at q=1e-4, [[5,1,3]] up to {max(d3_4):.2f}x, "
              f"min acceptance {100 * min(acc):.2f}%")
    _record(7, not bad, "; ".join(bad) or detail, t0)
    assert not bad


if __name__ == "__main__":
    for n, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            pass
    for n in sorted(VERDICTS):
        print(VERDICTS[n])
