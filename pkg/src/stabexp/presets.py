"""Named reference circuits shipped as text files under ``presets/``.

Each preset records how it was built, so ``build_preset`` can regenerate it
and the shipped file can be checked against the generator.  Searched presets
keep the first minimum-``l`` circuit in candidate enumeration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .circuit import Circuit, parse_circuit, serialize_circuit
from .codes import DetectionContext, build_code, logical_rep, multi_block_context
from .construct import iter_candidates, staircase, transversal_multiblock
from .faults import best_circuits

__all__ = ["PresetSpec", "PRESETS", "preset_names", "build_preset", "load_preset",
           "preset_context", "preset_path", "read_header"]


@dataclass(frozen=True)
class PresetSpec:
    name: str
    code: str
    target: str  # logical label; logical qubits are numbered across blocks
    builder: str  # "search", "staircase" or "transversal"
    blocks: int = 1
    n_a: int = 0
    bases: str = "XYZ"
    family: str = ""
    note: str = ""


def _z_label(w: int) -> str:
    return "".join(f"Z{j}" for j in range(1, w + 1))


def _specs():
    out = []
    for letter in "XZY":
        for n_a in (0, 1):
            out.append(PresetSpec(f"qedc4_{letter.lower()}1_na{n_a}", "qedc:4", f"{letter}1", "search",
                                  n_a=n_a, family="qedc_single"))
    for t in (4, 6, 8):
        for n_a in (0, 1):
            out.append(PresetSpec(f"qedc_z{t}_na{n_a}", f"qedc:{t + 2}", _z_label(t), "search",
                                  n_a=n_a, bases="Z", family="iceberg", note=f"t={t}"))
    out.append(PresetSpec("qedc4_staircase_z1z2", "qedc:4", "Z1Z2", "staircase", family="staircase"))
    for code in ("five_1_3", "steane"):
        for letter in "XYZ":
            out.append(PresetSpec(f"{code}_{letter.lower()}", code, f"{letter}1", "search", family="d3_single"))
        for w in range(2, 6):
            out.append(PresetSpec(f"{code}_w{w}", code, _z_label(w), "transversal", blocks=w, family="d3_multi"))
    out.append(PresetSpec("hamming_z1", "hamming", "Z1", "search", bases="Z", family="hamming_single"))
    for labels in ((4, 5, 6, 7), (1, 2), (5, 6, 7), (2, 3, 4, 5), (1, 2, 3, 4, 5),
                   (1, 2, 3, 5, 6, 7), (1, 2, 3), (1, 2, 3, 4)):
        tag = "".join(str(j) for j in labels)
        out.append(PresetSpec(f"hamming_z{tag}", "hamming", "".join(f"Z{j}" for j in labels),
                              "staircase", family="hamming_multi"))
    return {s.name: s for s in out}


PRESETS: dict[str, PresetSpec] = _specs()


def preset_names(family: str | None = None) -> list[str]:
    return [n for n, s in PRESETS.items() if family is None or s.family == family]


def preset_context(spec: PresetSpec) -> DetectionContext:
    return multi_block_context(build_code(spec.code), spec.blocks)


def build_preset(spec: PresetSpec | str) -> Circuit:
    """Regenerate a preset from its recipe (runs the search for searched ones)."""
    if isinstance(spec, str):
        spec = PRESETS[spec]
    code = build_code(spec.code)
    if spec.builder == "transversal":
        if spec.target != _z_label(spec.blocks):
            raise ValueError("transversal presets realize Z-bar on every block")
        return transversal_multiblock(code, spec.blocks)
    target = logical_rep(code, spec.target)
    if spec.builder == "staircase":
        return staircase(target)
    if spec.builder == "search":
        res = best_circuits(iter_candidates(target, spec.n_a, spec.bases), preset_context(spec))
        return res.best[0]
    raise ValueError(f"unknown builder {spec.builder!r}")


def header_lines(spec: PresetSpec) -> list[str]:
    lines = [f"preset: {spec.name}", f"code: {spec.code}", f"blocks: {spec.blocks}",
             f"target: {spec.target}", f"builder: {spec.builder}"]
    if spec.builder == "search":
        lines.append(f"search: n_a={spec.n_a} bases={spec.bases}")
    return lines


def preset_text(spec: PresetSpec | str) -> str:
    if isinstance(spec, str):
        spec = PRESETS[spec]
    return serialize_circuit(build_preset(spec), header_lines(spec))


def preset_path(name: str) -> Path:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}")
    return Path(str(resources.files("stabexp") / "presets" / f"{name}.circ"))


def load_preset(name: str) -> Circuit:
    return parse_circuit(preset_path(name).read_text())


def read_header(text: str) -> dict[str, str]:
    """``key: value`` pairs from leading comment lines of a circuit file."""
    meta = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if not line.startswith("#"):
            break
        body = line[1:].strip()
        if ":" in body:
            k, v = body.split(":", 1)
            meta[k.strip()] = v.strip()
    return meta
