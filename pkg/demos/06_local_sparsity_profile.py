#!/usr/bin/env python3
"""Use local sparsity as a nonstationarity detector.

A clean synthetic record gets a burst of wideband noise confined to one
segment. The codec spends a conspicuous number of atoms there, so the
inverse local sparsity profile spikes exactly at the corrupted segment
while the distortion metric barely moves.
"""

from pathlib import Path

import numpy as np

from sparsecg import Record, RunConfig, build_dictionary, compress_record
from sparsecg.metrics import profile_flags, sparsity_profile
from sparsecg.synthetic import synthetic_ecg, with_noise_burst

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

N_B = 500
BURST_AT = 23

sig = synthetic_ecg(N_B * 36, seed=21)          # 50 s of clean signal
sig = with_noise_burst(sig, N_B, BURST_AT, gain=10.0)
record = Record(sig, source="burst-demo")

cfg = RunConfig(prd0=0.5, delta=35.0)
res = compress_record(record, cfg, build_dictionary(cfg.dictionary))
inv = sparsity_profile(res.model)
flags = profile_flags(inv)

print(f"{res.model.q} segments; noise burst injected into segment {BURST_AT}")
print(f"inverse sparsity: median {np.median(inv):.3f}, "
      f"burst segment {inv[BURST_AT]:.3f}, argmax at {int(np.argmax(inv))}")
print(f"flagged segments (mean + 4 std rule): {np.flatnonzero(flags).tolist()}")
print(f"global PRD {res.report.prd:.3f}% -- elevated, but a single number; "
      f"the profile pinpoints the corrupted stretch")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(10, 6))
    ax1.plot(inv, lw=0.9)
    ax1.axhline(inv.mean() + 4 * inv.std(), color="tab:red", lw=0.7, ls="--",
                label="flag threshold")
    ax1.set_ylabel("1 / sr(q)")
    ax1.legend()
    lo = max(0, (BURST_AT - 1) * N_B)
    hi = min(len(sig), (BURST_AT + 2) * N_B)
    ax2.plot(np.arange(lo, hi), sig[lo:hi], lw=0.5)
    ax2.set_title(f"signal around segment {BURST_AT}")
    fig.tight_layout()
    fig.savefig(OUT / "profile.png", dpi=110)
    print(f"wrote {OUT / 'profile.png'}")
except ImportError:
    pass
