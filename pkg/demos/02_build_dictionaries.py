#!/usr/bin/env python3
"""Build the redundant dictionary for every family and inspect its shape.

Shows atom counts per construction group, redundancy against the segment
length, the rank check, and what refining the translation grid does to
the atom count.
"""

import numpy as np

from sparsecg import FAMILIES, build_dictionary
from sparsecg.dictionary import DictionaryConfig

N_B = 500

print(f"segment length n_b = {N_B}; quarter-step translations (l = 2)\n")
print("family    M     M/n_b   dct  scaling  wavelet  rank")
print("-" * 56)
for name in FAMILIES:
    d = build_dictionary(DictionaryConfig(family=name, n_b=N_B, l=2))
    kinds = [p.kind for p in d.provenance]
    rank = np.linalg.matrix_rank(d.matrix)
    print(f"{name:8s} {d.size:5d}  {d.size / N_B:5.2f}  {kinds.count('dct'):4d}  "
          f"{kinds.count('scaling'):7d}  {kinds.count('wavelet'):7d}  {rank:4d}")

print("\nBasis grid vs refined grids (cdf97):")
print("l   step   scales   M     M/n_b")
for l in (0, 1, 2, 3):
    d = build_dictionary(DictionaryConfig(family="cdf97", n_b=N_B, l=l))
    c = d.config
    print(f"{l}   1/{2**l:<4d} {c.j_min}..{c.j_max}    {d.size:5d}  {d.size / N_B:.2f}")

print("\nEvery construction spans R^500; the refined grids hold roughly twice")
print("as many atoms as dimensions while the basis grid stays near one atom")
print("per dimension.")

d = build_dictionary(DictionaryConfig(family="cdf97", n_b=N_B, l=2))
g = np.abs(d.matrix @ d.matrix.T)
np.fill_diagonal(g, 0)
print(f"\ncdf97 l=2 coherence: max |<d_i, d_j>| = {g.max():.6f} (below the")
print("dedup threshold 0.999999). Neighbouring quarter-step translates are")
print("nearly parallel, which is exactly what lets the pursuit place an atom")
print("close to any waveform feature.")
