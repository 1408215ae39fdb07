import os
from pathlib import Path

import numpy as np
import pytest

from sparsecg.dictionary import Dictionary, DictionaryConfig, Provenance, build_dictionary


def random_dictionary(n_b, m, rng, constant_first=True):
    """Random unit-norm atom set for pursuit math tests (position 1 is the
    constant atom, as the pursuit contract requires)."""
    mat = rng.standard_normal((m, n_b))
    if constant_first:
        mat[0] = 1.0
    mat /= np.linalg.norm(mat, axis=1, keepdims=True)
    prov = [Provenance("dct", 0, i + 1) for i in range(m)]
    return Dictionary(mat, prov, DictionaryConfig(n_b=n_b))


@pytest.fixture(scope="session")
def dict_cdf97_small():
    """Real dictionary at a size small enough for fast tests."""
    return build_dictionary(DictionaryConfig(family="cdf97", n_b=128, l=2))


@pytest.fixture(scope="session")
def dict_cdf97_500():
    return build_dictionary(DictionaryConfig(family="cdf97", n_b=500, l=2))


def mitdb_dir():
    """Directory holding MIT-BIH .dat files, if the user provided one."""
    for cand in (os.environ.get("SPARSECG_MITDB"), "data/mitdb"):
        if cand and Path(cand).is_dir() and list(Path(cand).glob("*.dat")):
            return Path(cand)
    return None


def require_mitdb(*records):
    """Skip (with a clear notice) unless the named records are available."""
    d = mitdb_dir()
    if d is None:
        pytest.skip(
            "MIT-BIH records not present; set SPARSECG_MITDB to a directory "
            "of .dat files (freely downloadable) to run this criterion"
        )
    missing = [r for r in records if not (d / f"{r}.dat").exists()]
    if missing:
        pytest.skip(f"MIT-BIH records missing from {d}: {missing}")
    return d
