#!/usr/bin/env python3
"""Approximate one segment step by step and watch the residual fall.

Runs the greedy pursuit on a single 500-sample piece of a synthetic ECG,
printing the selected atom, its provenance and the residual norm at each
step, then verifies the projection identity.
"""

from pathlib import Path

import numpy as np

from sparsecg import build_dictionary, synthetic_ecg
from sparsecg.dictionary import DictionaryConfig
from sparsecg.pursuit import oomp_extend, oomp_init, oomp_select, reconstruct_segment
from sparsecg.pursuit import approximate_segment

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

d = build_dictionary(DictionaryConfig(family="cdf97", n_b=500, l=2))
sig = synthetic_ecg(5000, seed=42)
f = sig[1000:1500]

st = oomp_init(f, d)
print(f"segment norm {np.linalg.norm(f):.1f}; constant atom removes the baseline:")
print(f"  step  1: atom     1  dct(n=1)            residual {np.linalg.norm(st.residual):9.2f}")
for step in range(2, 16):
    idx = oomp_select(st, d)
    oomp_extend(st, d, idx)
    p = d.provenance[idx - 1]
    tag = f"{p.kind}(j={p.scale}, k={p.shift})" if p.kind != "dct" else f"dct(n={p.shift})"
    print(f"  step {step:2d}: atom {idx:5d}  {tag:20s} residual {np.linalg.norm(st.residual):9.2f}")

a = approximate_segment(f, d, rho=0.005 * np.linalg.norm(f))
rec = reconstruct_segment(a, d)
prd = np.linalg.norm(f - rec) / np.linalg.norm(f) * 100
print(f"\nstopping at 0.5% residual: k = {len(a.indices)} atoms of 500 samples "
      f"(local sparsity {500 / len(a.indices):.1f})")
print(f"per-segment distortion {prd:.3f}%")
pyth = np.linalg.norm(f - rec) ** 2 + np.linalg.norm(rec) ** 2
print(f"projection identity |f-r|^2 + |r|^2 = |f|^2 holds to "
      f"{abs(pyth - np.linalg.norm(f) ** 2) / np.linalg.norm(f) ** 2:.1e} relative")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(10, 6), sharex=True)
    ax1.plot(f, lw=0.8, label="segment")
    ax1.plot(rec, lw=0.8, ls="--", label=f"{len(a.indices)}-atom model")
    ax1.legend()
    ax2.plot(f - rec, lw=0.6, color="tab:red")
    ax2.set_title("residual")
    fig.tight_layout()
    fig.savefig(OUT / "approximation.png", dpi=110)
    print(f"wrote {OUT / 'approximation.png'}")
except ImportError:
    pass
