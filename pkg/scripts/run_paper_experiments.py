#!/usr/bin/env python3
"""Full-resolution anti-plane shear experiments (ell = 0.04, h_min = ell/5).

Reproduces the published experiment matrix:

  * single-slit comparison: isotropic AT-2 / Foc-4 quadratic / Foc-4 quartic,
    15 steps to u_bar = 1.5;
  * two-fold anisotropy on the single slit: tau in {0.2, 0.5, 0.8} at
    omega = pi/4, plus the isotropic reference;
  * four-fold anisotropy on the two-slit geometries (example2, example3):
    tau = 0.5, omega in {0, pi/4}, 20 steps to u_bar = 2.0.

These are hours-long runs at full resolution; pass a subset of case names
to run fewer, or --list to see them.
"""

import json
import math
import sys
import tempfile
from pathlib import Path

from fraktur.cli import load_config, run

ELL = 0.04


def cases() -> dict:
    out = {
        "single_at2": ("single_slit", {"family": "AT2", "ell": ELL}, 15),
        "single_foc4_quadratic": (
            "single_slit",
            {"family": "Foc4", "ell": ELL, "degradation": "quadratic"},
            15,
        ),
        "single_foc4_quartic": ("single_slit", {"family": "Foc4", "ell": ELL}, 15),
    }
    for tau in (0.2, 0.5, 0.8):
        out[f"single_foc2_tau{tau:3.1f}"] = (
            "single_slit",
            {"family": "Foc2", "ell": ELL, "tau": tau, "omega": math.pi / 4},
            15,
        )
    for preset in ("example2", "example3"):
        for name, omega in (("om0", 0.0), ("om45", math.pi / 4)):
            out[f"{preset}_foc4_{name}"] = (
                preset,
                {"family": "Foc4", "ell": ELL, "tau": 0.5, "omega": omega},
                20,
            )
    return out


def main(argv: list) -> int:
    table = cases()
    if "--list" in argv:
        print("\n".join(table))
        return 0
    selected = [a for a in argv if not a.startswith("-")] or list(table)
    with tempfile.TemporaryDirectory() as tmp:
        for name in selected:
            preset, model, n_steps = table[name]
            cfg = {
                "schema_version": 1,
                "geometry": {"preset": preset, "a": 1.0},
                "model": model,
                "load": {"delta_u": 0.1, "n_steps": n_steps},
                "output": {"dir": f"paper_out/{name}"},
            }
            path = Path(tmp) / f"{name}.json"
            path.write_text(json.dumps(cfg))
            print(f"== {name} ({preset}, {n_steps} steps)")
            hist = run(load_config(path))
            print(f"   converged steps: {sum(r.converged for r in hist.records)}/{len(hist.records)}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
