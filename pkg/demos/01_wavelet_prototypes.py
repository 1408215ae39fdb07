#!/usr/bin/env python3
"""Walk through the eight wavelet families and their prototypes.

Prints support, vanishing-moment and discretisation sanity numbers per
family, and saves a grid plot of all scaling/wavelet prototypes when
matplotlib is available.
"""

from pathlib import Path

import numpy as np

from sparsecg import FAMILIES, prototype_samples
from sparsecg.wavelets import scaling_prototype, wavelet_prototype

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

print("family   kind     support          samples@2^-8   sum       mean")
print("-" * 72)
for name in FAMILIES:
    for which in ("scaling", "wavelet"):
        proto = scaling_prototype(name) if which == "scaling" else wavelet_prototype(name)
        lo, hi = proto.support
        s = prototype_samples(name, which, 8)
        print(f"{name:8s} {which:8s} [{lo:+5.1f},{hi:+5.1f}]   {len(s):8d}   "
              f"{s.sum() * 2.0**-8:+8.4f}  {s.mean():+9.2e}")

print()
print("Scaling samples sum to ~1 after grid-step weighting (unit integral);")
print("wavelet sample means vanish (zeroth moment).")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the figure")
    raise SystemExit(0)

fig, axes = plt.subplots(4, 4, figsize=(14, 10))
for col, name in enumerate(FAMILIES):
    for row, which in enumerate(("scaling", "wavelet")):
        ax = axes[row + 2 * (col // 4)][col % 4]
        proto = scaling_prototype(name) if which == "scaling" else wavelet_prototype(name)
        lo, hi = proto.support
        s = prototype_samples(name, which, 8)
        x = np.linspace(lo, hi, len(s))
        ax.plot(x, s, lw=1.0)
        ax.set_title(f"{name} {which}", fontsize=9)
        ax.axhline(0, color="k", lw=0.3)
fig.tight_layout()
fig.savefig(OUT / "prototypes.png", dpi=110)
print(f"wrote {OUT / 'prototypes.png'}")
