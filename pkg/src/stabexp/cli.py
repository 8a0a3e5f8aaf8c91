"""Command-line front end: ``stabexp {search,emit,report,verify,mc,presets}``.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 resource cap exceeded.  ``STABEXP_WORKERS`` sets the default worker count.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .analytics import TABLES, NoiseParams, UnknownTableError, emit_table
from .circuit import (
    CircuitParseError,
    CircuitValidationError,
    NotExponentialForm,
    parse_circuit,
    preserves_codespace,
    realized_pauli,
    write_circuit,
)
from .codes import CodeError, build_code, logical_rep, multi_block_context
from .construct import ConstructionError, iter_candidates, staircase, transversal_multiblock
from .faults import fault_sites, logical_error_count
from .oracle import DEFAULT_CAP, QubitCapExceeded, monte_carlo_rates, verify_all_faults, verify_logical_action
from .pauli import PauliParseError, pauli_from_string
from .presets import PRESETS, load_preset, preset_path, read_header
from .search import default_workers, search

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render_report(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = []
    for k, v in doc.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        lines.append(f"{k}: {v}" if fmt == "text" else f"| {k} | {v} |")
    if fmt == "md":
        lines = ["| field | value |", "|---|---|"] + lines
    elif fmt == "csv":
        lines = ["field,value"] + [f"{k},{json.dumps(v) if isinstance(v, (dict, list)) else v}"
                                   for k, v in doc.items()]
    return "\n".join(lines) + "\n"


def _resolve_target(code, target: str, physical: bool, blocks: int = 1):
    if physical:
        p = pauli_from_string(target)
        if p.n != code.n * blocks:
            raise UsageError(f"physical target has {p.n} qubits, code block(s) have {code.n * blocks}")
        return p
    if blocks != 1:
        raise UsageError("logical labels address a single block; use --physical for several")
    return logical_rep(code, target)


# -- commands ----------------------------------------------------------------

def cmd_search(a) -> int:
    code = build_code(a.code)
    target = _resolve_target(code, a.target, a.physical)
    ctx = multi_block_context(code)
    res = search(target, a.ancillas, a.bases, ctx, workers=a.workers)
    doc = {
        "code": code.name, "target": a.target, "physical_target": str(target),
        "ancillas": a.ancillas, "bases": a.bases, "candidates": res.n_candidates,
        "min_l": res.min_l, "winners": len(res.best),
        "l_histogram": {str(k): v for k, v in res.l_histogram.items()},
    }
    if a.write_winners:
        out = Path(a.write_winners)
        out.mkdir(parents=True, exist_ok=True)
        for i, c in enumerate(res.best):
            write_circuit(c, out / f"winner_{i:04d}.circ",
                          [f"code: {code.name}", "blocks: 1", f"target: {a.target}"
                           if not a.physical else f"physical: {target}", f"l: {res.min_l}"])
        doc["written"] = len(res.best)
    _emit(_render_report(doc, a.format), a.out)
    return EXIT_OK


def cmd_emit(a) -> int:
    code = build_code(a.code)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    if a.builder == "transversal":
        circuits = [transversal_multiblock(code, a.blocks)]
        header = [f"code: {code.name}", f"blocks: {a.blocks}",
                  "target: " + "".join(f"Z{j}" for j in range(1, a.blocks + 1))]
    else:
        target = _resolve_target(code, a.target, a.physical)
        label = f"target: {a.target}" if not a.physical else f"physical: {target}"
        header = [f"code: {code.name}", "blocks: 1", label]
        if a.builder == "staircase":
            circuits = [staircase(target)]
        else:
            circuits = iter_candidates(target, a.ancillas, a.bases)
    n = 0
    for n, c in enumerate(circuits, start=1):
        write_circuit(c, out / f"{a.builder}_{n - 1:06d}.circ", header)
    sys.stdout.write(f"wrote {n} circuit(s) to {out}\n")
    return EXIT_OK


def cmd_report(a) -> int:
    noise = None
    if a.p is not None:
        noise = NoiseParams(a.p, a.q)
    table = emit_table(a.table, noise, workers=a.workers, pl_digits=a.pl_digits)
    _emit(table.render(a.format), a.out)
    return EXIT_OK


def _load_circuit_arg(a):
    """Circuit plus (context, logical target) from a preset name or file + flags."""
    if a.circuit in PRESETS and not Path(a.circuit).exists():
        text = preset_path(a.circuit).read_text()
    else:
        path = Path(a.circuit)
        if not path.exists():
            raise UsageError(f"no circuit file or preset named {a.circuit!r}")
        text = path.read_text()
    c = parse_circuit(text)
    meta = read_header(text)
    code_name = a.code or meta.get("code")
    if not code_name:
        raise UsageError("circuit has no 'code:' header; pass --code")
    code = build_code(code_name)
    blocks = a.blocks or int(meta.get("blocks", "1"))
    ctx = multi_block_context(code, blocks)
    label = a.target or meta.get("target")
    if label is None:
        raise UsageError("no logical target; pass --target")
    return c, ctx, label


def cmd_verify(a) -> int:
    c, ctx, label = _load_circuit_arg(a)
    if c.n_qubits > a.cap:
        raise QubitCapExceeded(c.n_qubits, a.cap)
    checks = {}
    realized = realized_pauli(c)
    checks["realized_pauli"] = str(realized)
    checks["preserves_codespace"] = bool(preserves_codespace(c, ctx))
    report = logical_error_count(c, ctx, with_sites=False)
    checks["l"] = report.l
    checks["n_detected"] = report.n_detected
    checks["n_benign"] = report.n_benign
    checks["cnots"] = c.cnot_count
    thetas = a.theta or [0.3, 0.7, 1.1]
    act = verify_logical_action(c, ctx, label, thetas, cap=a.cap)
    checks["logical_action_max_deviation"] = act.max_deviation
    checks["logical_action_sign"] = act.sign
    sites = fault_sites(c)
    sample = a.sample
    if sample is None:
        sample = len(sites) if c.n_qubits <= 12 else 200
    if sample < len(sites):
        sites = random.Random(a.seed).sample(sites, sample)
    results = verify_all_faults(c, ctx, label, sites=sites, cap=a.cap, seed=a.seed)
    disagree = [f"{r.site.gate_index}:{r.site.error}" for r in results if not r.agrees]
    checks["sites_checked"] = len(results)
    checks["sites_disagreeing"] = disagree
    ok = checks["preserves_codespace"] and act.max_deviation < 1e-9 and not disagree
    if a.expect_l is not None:
        checks["expected_l"] = a.expect_l
        ok = ok and report.l == a.expect_l
    checks["passed"] = bool(ok)
    _emit(_render_report(checks, a.format), a.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_mc(a) -> int:
    c, ctx, label = _load_circuit_arg(a)
    if c.n_qubits > a.cap:
        raise QubitCapExceeded(c.n_qubits, a.cap)
    est = monte_carlo_rates(c, ctx, label, a.p, a.q, a.shots, a.seed, theta=a.theta_mc,
                            cap=a.cap, workers=a.workers)
    _emit(_render_report(est.to_dict(), a.format), a.out)
    return EXIT_OK


def cmd_presets(a) -> int:
    rows = ["name,family,code,blocks,target,qubits,cnots"]
    for name, spec in PRESETS.items():
        c = load_preset(name)
        rows.append(f"{name},{spec.family},{spec.code},{spec.blocks},{spec.target},{c.n_qubits},{c.cnot_count}")
    sys.stdout.write("\n".join(rows) + "\n")
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="stabexp", description="Encoded exp(-iθP) circuits: search, rates, verification.")
    ap.add_argument("--version", action="version", version=f"stabexp {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    workers = default_workers()

    s = sub.add_parser("search", help="minimum-l search over a candidate set")
    s.add_argument("--code", required=True)
    s.add_argument("--target", required=True, help="logical label like Z1Z2, or a physical string with --physical")
    s.add_argument("--physical", action="store_true")
    s.add_argument("--ancillas", type=int, default=0)
    s.add_argument("--bases", default="XYZ")
    s.add_argument("--workers", type=int, default=workers)
    s.add_argument("--write-winners", metavar="DIR")
    s.add_argument("--format", choices=("text", "json", "md", "csv"), default="text")
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("emit", help="write generated circuits as text files")
    e.add_argument("--code", required=True)
    e.add_argument("--builder", choices=("candidates", "staircase", "transversal"), default="candidates")
    e.add_argument("--target", default="Z1")
    e.add_argument("--physical", action="store_true")
    e.add_argument("--ancillas", type=int, default=0)
    e.add_argument("--bases", default="XYZ")
    e.add_argument("--blocks", type=int, default=2)
    e.add_argument("--out", required=True, metavar="DIR")
    e.set_defaults(func=cmd_emit)

    r = sub.add_parser("report", help="regenerate a rate or search table")
    r.add_argument("--table", required=True, help=", ".join(TABLES) + " (fig4 also accepted)")
    r.add_argument("--p", type=float)
    r.add_argument("--q", type=float, default=0.0)
    r.add_argument("--pl-digits", type=int)
    r.add_argument("--workers", type=int, default=workers)
    r.add_argument("--format", choices=("csv", "md", "json"), default="md")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)

    for name, func, helptext in (("verify", cmd_verify, "check a circuit against the statevector oracle"),
                                 ("mc", cmd_mc, "Monte Carlo estimate of acceptance and logical rates")):
        v = sub.add_parser(name, help=helptext)
        v.add_argument("circuit", help="circuit file or preset name")
        v.add_argument("--code")
        v.add_argument("--blocks", type=int)
        v.add_argument("--target")
        v.add_argument("--cap", type=int, default=DEFAULT_CAP)
        v.add_argument("--format", choices=("text", "json", "md", "csv"), default="text")
        v.add_argument("--out")
        v.set_defaults(func=func)
        if name == "verify":
            v.add_argument("--theta", type=float, action="append")
            v.add_argument("--sample", type=int, help="number of fault sites (default: all up to 12 qubits, else 200)")
            v.add_argument("--seed", type=int, default=0)
            v.add_argument("--expect-l", type=int)
        else:
            v.add_argument("--p", type=float, required=True)
            v.add_argument("--q", type=float, default=0.0)
            v.add_argument("--shots", type=int, required=True)
            v.add_argument("--seed", type=int, required=True)
            v.add_argument("--theta-mc", type=float, default=0.37)
            v.add_argument("--workers", type=int, default=workers)

    p = sub.add_parser("presets", help="list shipped preset circuits")
    p.set_defaults(func=cmd_presets)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        ap = build_parser()
    except ValueError as exc:  # bad STABEXP_WORKERS
        sys.stderr.write(f"stabexp: error: {exc}\n")
        return EXIT_USAGE
    a = ap.parse_args(argv)
    try:
        return a.func(a)
    except QubitCapExceeded as exc:
        sys.stderr.write(f"stabexp: refused: {exc} (raise --cap to override)\n")
        return EXIT_CAP
    except CircuitParseError as exc:
        sys.stderr.write(f"stabexp: parse error: {exc}\n")
        return EXIT_USAGE
    except (CircuitValidationError, NotExponentialForm) as exc:
        sys.stderr.write(f"stabexp: invalid circuit: {exc}\n")
        return EXIT_VERIFY
    except (UsageError, CodeError, PauliParseError, ConstructionError, UnknownTableError, ValueError) as exc:
        sys.stderr.write(f"stabexp: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
