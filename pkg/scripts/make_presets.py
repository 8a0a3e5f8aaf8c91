"""Regenerate the shipped preset circuit files."""

import sys
import time
from pathlib import Path

from stabexp.presets import PRESETS, preset_text

OUT = Path(__file__).resolve().parents[1] / "src" / "stabexp" / "presets"


def main(names):
    OUT.mkdir(exist_ok=True)
    for name in names or PRESETS:
        t0 = time.perf_counter()
        (OUT / f"{name}.circ").write_text(preset_text(name))
        print(f"{name:28s} {time.perf_counter() - t0:6.2f}s")


if __name__ == "__main__":
    main(sys.argv[1:])
