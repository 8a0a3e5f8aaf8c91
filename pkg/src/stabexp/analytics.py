"""First-order rate model and table emitters.

Rates for an encoded circuit with ``G`` CNOTs of which ``l`` (CNOT, Pauli)
fault sites survive postselection as logical errors:

* logical rate (not conditioned on acceptance): ``q + (l/15) p``
* unencoded weight-``w`` rotation: ``2(w-1) p + q``
* acceptance bound: ``1 - (G p + q) + p_L = 1 - G p + (l/15) p``
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

from .codes import build_code, logical_rep, multi_block_context
from .faults import logical_error_count
from .presets import PRESETS, load_preset, preset_context
from .search import search

__all__ = [
    "NoiseParams",
    "RateRow",
    "Table",
    "TABLES",
    "logical_rate",
    "unencoded_rate",
    "acceptance_bound",
    "exact_acceptance",
    "rate_row",
    "round_half_up",
    "emit_table",
    "UnknownTableError",
]


class UnknownTableError(KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


@dataclass(frozen=True)
class NoiseParams:
    p: float
    q: float = 0.0

    def __post_init__(self):
        for name, v in (("p", self.p), ("q", self.q)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    @property
    def sigma(self) -> float:
        return self.q ** 0.5


def logical_rate(l: int, noise: NoiseParams) -> float:
    if l < 0:
        raise ValueError("l must be non-negative")
    return noise.q + l / 15 * noise.p


def unencoded_rate(w: int, noise: NoiseParams) -> float:
    if w < 1:
        raise ValueError("weight must be at least 1")
    return 2 * (w - 1) * noise.p + noise.q


def acceptance_bound(G: int, l: int, noise: NoiseParams) -> float:
    if G < 0:
        raise ValueError("CNOT count must be non-negative")
    return 1 - G * noise.p + l / 15 * noise.p


def exact_acceptance(n_detected: int, noise: NoiseParams) -> float:
    """First-order acceptance counting only the fault sites that are actually flagged."""
    return 1 - n_detected / 15 * noise.p


@dataclass
class RateRow:
    label: str
    w: int
    t: int
    n_a: int
    G: int
    l: int
    p_U: float
    p_S: float
    p_L_over_pS: float
    ratio: float
    p_S_exact: float | None = None

    def __post_init__(self):
        for v in (self.p_U, self.p_S, self.p_L_over_pS):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"rate {v} outside [0, 1] in row {self.label}")


def rate_row(label: str, w: int, t: int, n_a: int, G: int, l: int, noise: NoiseParams,
             n_detected: int | None = None) -> RateRow:
    p_L = logical_rate(l, noise)
    p_S = acceptance_bound(G, l, noise)
    p_U = unencoded_rate(w, noise)
    cond = p_L / p_S
    ratio = p_U / cond if cond > 0 else float("inf")
    exact = exact_acceptance(n_detected, noise) if n_detected is not None else None
    return RateRow(label, w, t, n_a, G, l, p_U, p_S, cond, ratio, exact)


def round_half_up(x: float, digits: int) -> str:
    return str(Decimal(repr(x)).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP))


def _minimal(x: float, digits: int = 2) -> str:
    s = round_half_up(x, digits)
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


@dataclass
class Table:
    name: str
    title: str
    columns: list[str]
    rows: list[list[str]]
    records: list[dict] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [f"**{self.title}**", "", "| " + " | ".join(self.columns) + " |",
                 "|" + "|".join("---" for _ in self.columns) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {"table": self.name, "title": self.title, "columns": self.columns,
               "rows": self.rows, "records": self.records}
        return json.dumps(doc, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "md":
            return self.to_markdown()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")

    def cell(self, row: int, column: str) -> str:
        return self.rows[row][self.columns.index(column)]


def _preset_stats(name: str) -> tuple[int, int, int]:
    c = load_preset(name)
    rep = logical_error_count(c, preset_context(PRESETS[name]), with_sites=False)
    return c.cnot_count, rep.l, rep.n_detected


def _pct(x: float) -> str:
    return round_half_up(100 * x, 2)


def _milli(x: float, digits: int = 2) -> str:
    return round_half_up(1000 * x, digits)


def _iceberg_rates(noise: NoiseParams) -> Table:
    cols = ["w", "t", "p_U (1e-3)", "p_S (%) n_a=0", "p_S (%) n_a=1",
            "p_L/p_S (1e-3) n_a=0", "p_L/p_S (1e-3) n_a=1", "ratio n_a=0", "ratio n_a=1",
            "p_S exact (%) n_a=0", "p_S exact (%) n_a=1"]
    rows, records = [], []
    for t in (4, 6, 8):
        per = []
        for n_a in (0, 1):
            G, l, nd = _preset_stats(f"qedc_z{t}_na{n_a}")
            per.append(rate_row(f"Z^{t}", t, t, n_a, G, l, noise, nd))
        rows.append([str(t), str(t), _minimal(1000 * per[0].p_U)]
                    + [_pct(r.p_S) for r in per]
                    + [_milli(r.p_L_over_pS) for r in per]
                    + [round_half_up(r.ratio, 2) for r in per]
                    + [_pct(r.p_S_exact) for r in per])
        records += [asdict(r) for r in per]
    return Table("iceberg_rates", f"[[n,n-2,2]] Z^w rotation rates, p={noise.p:g}, q={noise.q:g}",
                 cols, rows, records)


def _d3_rates(noise: NoiseParams, pl_digits: int | None) -> Table:
    # Three decimals once p_L/p_S falls below 1e-3 for every row.
    digits = pl_digits if pl_digits is not None else (3 if noise.q < noise.p else 2)
    cols = ["w", "p_U (1e-3)", "p_S (%)", "p_L/p_S (1e-3)", "ratio", "p_S exact (%)", "codes"]
    rows, records = [], []
    for w in range(2, 6):
        stats = {code: _preset_stats(f"{code}_w{w}") for code in ("five_1_3", "steane")}
        if len({s[:2] for s in stats.values()}) != 1:
            raise RuntimeError(f"five_1_3 and steane disagree at w={w}: {stats}")
        G, l, nd = stats["five_1_3"]
        r = rate_row(f"Z^{w}", w, 3 * w, 0, G, l, noise, nd)
        rows.append([str(w), _minimal(1000 * r.p_U), _pct(r.p_S), _milli(r.p_L_over_pS, digits),
                     round_half_up(r.ratio, 2), _pct(r.p_S_exact), "five_1_3, steane"])
        records.append(asdict(r))
    return Table("d3_rates", f"Distance-3 transversal Z^w rotation rates, p={noise.p:g}, q={noise.q:g}",
                 cols, rows, records)


_HAMMING_ROWS = ("hamming_z4567", "hamming_z12", "hamming_z567", "hamming_z2345",
                 "hamming_z12345", "hamming_z123567", "hamming_z123", "hamming_z1234")


def _hamming_rates(noise: NoiseParams) -> Table:
    cols = ["logical", "w", "t", "p_U (1e-3)", "p_S (%)", "p_L/p_S (1e-3)", "ratio", "p_S exact (%)"]
    rows, records = [], []
    for name in _HAMMING_ROWS:
        spec = PRESETS[name]
        w = spec.target.count("Z")
        t = logical_rep(build_code(spec.code), spec.target).weight
        G, l, nd = _preset_stats(name)
        r = rate_row(spec.target, w, t, 0, G, l, noise, nd)
        rows.append([spec.target, str(w), str(t), _minimal(1000 * r.p_U), _pct(r.p_S),
                     _milli(r.p_L_over_pS), round_half_up(r.ratio, 2), _pct(r.p_S_exact)])
        records.append(asdict(r))
    return Table("hamming_rates", f"[[15,7,3]] logical Z rotation rates, p={noise.p:g}, q={noise.q:g}",
                 cols, rows, records)


def _iceberg_search(workers: int = 1) -> Table:
    cols = ["w", "operator", "candidates n_a=0", "candidates n_a=1", "l n_a=0", "l n_a=1"]
    rows, records = [], []
    for t in (4, 6, 8):
        code = build_code(f"qedc:{t + 2}")
        target = logical_rep(code, "".join(f"Z{j}" for j in range(1, t + 1)))
        ctx = multi_block_context(code)
        res = [search(target, n_a, "Z", ctx, workers=workers) for n_a in (0, 1)]
        rows.append([f"{t - 1},{t}", f"Z^{t}", str(res[0].n_candidates), str(res[1].n_candidates),
                     str(res[0].min_l), str(res[1].min_l)])
        records.append({"t": t, "n_candidates": [r.n_candidates for r in res],
                        "min_l": [r.min_l for r in res], "winners": [len(r.best) for r in res]})
    return Table("iceberg_search", "Near-optimal [[n,n-2,2]] Z^t search", cols, rows, records)


def _fig4_data() -> Table:
    cols = ["w", "t", "unencoded 2(w-1)", "l n_a=0", "l n_a=1", "encoded l/15 n_a=0", "encoded l/15 n_a=1"]
    rows, records = [], []
    for w in range(3, 9):
        t = w + (w % 2)
        ls = [_preset_stats(f"qedc_z{t}_na{n_a}")[1] for n_a in (0, 1)]
        coeffs = [Fraction(l, 15) for l in ls]
        rows.append([str(w), str(t), str(2 * (w - 1)), str(ls[0]), str(ls[1]),
                     round_half_up(float(coeffs[0]), 4), round_half_up(float(coeffs[1]), 4)])
        records.append({"w": w, "t": t, "unencoded": 2 * (w - 1), "l": ls,
                        "encoded": [float(c) for c in coeffs]})
    return Table("fig4_data", "Coefficient of p in the leading-order error rate", cols, rows, records)


TABLES = ("iceberg_search", "iceberg_rates", "d3_rates", "hamming_rates", "fig4_data")
_ALIASES = {"fig4": "fig4_data", "table1": "iceberg_search"}


def emit_table(which: str, noise: NoiseParams | None = None, *, workers: int = 1,
               pl_digits: int | None = None) -> Table:
    """Regenerate a rate or search table.  ``pl_digits`` overrides the
    ``p_L/p_S`` precision of ``d3_rates``."""
    key = _ALIASES.get(which, which)
    if key not in TABLES:
        raise UnknownTableError(f"unknown table {which!r}; choose from {', '.join(TABLES)}")
    if key == "iceberg_search":
        return _iceberg_search(workers)
    if key == "fig4_data":
        return _fig4_data()
    if noise is None:
        raise ValueError(f"{key} needs noise parameters")
    if key == "iceberg_rates":
        return _iceberg_rates(noise)
    if key == "d3_rates":
        return _d3_rates(noise, pl_digits)
    return _hamming_rates(noise)
