#!/usr/bin/env python3
"""Quantify how much the refined translation grid buys over the basis.

Same record, same per-segment distortion target, every family twice: once
with the basis translation grid (l=0) and once with quarter-step
translates (l=2). The dictionary needs far fewer atoms per segment.
"""

from sparsecg import FAMILIES, Record, RunConfig, build_dictionary, compress_record, synthetic_ecg
from sparsecg.dictionary import DictionaryConfig

record = Record(synthetic_ecg(25000, seed=13), source="demo")

print("family    SR basis  SR dict   gain    CR^Hf basis  CR^Hf dict")
print("-" * 62)
for name in FAMILIES:
    out = {}
    for l in (0, 2):
        cfg = RunConfig(dictionary=DictionaryConfig(family=name, n_b=500, l=l))
        out[l] = compress_record(record, cfg, build_dictionary(cfg.dictionary)).report
    gain = out[2].sr / out[0].sr
    print(f"{name:8s}  {out[0].sr:8.2f} {out[2].sr:8.2f}  {gain:5.2f}x "
          f"{out[0].cr_hf:12.2f} {out[2].cr_hf:11.2f}")

print("\nEvery family represents the record with substantially fewer atoms")
print("when its prototypes may sit on the refined grid; the compressed-size")
print("gain is smaller than the sparsity gain because dictionary indices")
print("spread over a larger alphabet and cost more bits to store.")
