"""Distortion, sparsity and compression metrics.

PRD is the residual norm as a percentage of the signal norm; PRDN divides
by the mean-removed norm instead, which matters for records riding on a
large baseline.  SR counts samples per stored term, globally (``N/K``) and
per segment (``n_b/k_q``); its inverse profile localises segments that need
unusually many atoms.  CR compares the stored 11-bit source size against
the container size, and QS = CR / PRD summarises the trade-off.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .codec import QuantizedModel
from .errors import UndefinedMetricError

__all__ = [
    "MetricsReport",
    "prd",
    "prdn",
    "sparsity_metrics",
    "compression_ratio",
    "stored_size_bytes",
    "sparsity_profile",
    "profile_flags",
    "report_csv",
    "report_table",
]


def prd(f: np.ndarray, fr: np.ndarray) -> float:
    """Percentage root-of-squares distortion of ``fr`` against ``f``."""
    f = np.asarray(f, dtype=float)
    fr = np.asarray(fr, dtype=float)
    if f.shape != fr.shape:
        raise ValueError(f"length mismatch: {f.shape} vs {fr.shape}")
    denom = np.linalg.norm(f)
    if denom == 0.0:
        raise UndefinedMetricError("prd undefined for a zero-norm signal")
    return float(np.linalg.norm(f - fr) / denom * 100.0)


def prdn(f: np.ndarray, fr: np.ndarray) -> float:
    """PRD with the mean-removed signal norm in the denominator."""
    f = np.asarray(f, dtype=float)
    fr = np.asarray(fr, dtype=float)
    if f.shape != fr.shape:
        raise ValueError(f"length mismatch: {f.shape} vs {fr.shape}")
    denom = np.linalg.norm(f - f.mean())
    if denom == 0.0:
        raise UndefinedMetricError("prdn undefined for a constant signal")
    return float(np.linalg.norm(f - fr) / denom * 100.0)


def sparsity_metrics(model: QuantizedModel) -> tuple[float, np.ndarray]:
    """Global sparsity ratio ``N/K`` and per-segment ``n_b/k_q``.

    Segments whose terms all quantised away get ``inf`` as their local
    ratio.
    """
    k = model.term_count
    if k == 0:
        raise UndefinedMetricError("sparsity ratio undefined: model stores no terms")
    n = model.n_b * model.q
    kq = np.array([len(s.indices) for s in model.segments], dtype=float)
    with np.errstate(divide="ignore"):
        sr_q = np.where(kq > 0, model.n_b / np.maximum(kq, 1), np.inf)
    return n / k, sr_q


def stored_size_bytes(n_samples: int, bit_depth: int = 11) -> int:
    """Size of the uncompressed record at its native bit depth."""
    return math.ceil(bit_depth * n_samples / 8)


def compression_ratio(original_bytes: int, compressed_bytes: int) -> float:
    if original_bytes <= 0 or compressed_bytes <= 0:
        raise ValueError("sizes must be positive")
    return original_bytes / compressed_bytes


def sparsity_profile(model: QuantizedModel) -> np.ndarray:
    """Inverse local sparsity ``k_q / n_b`` per segment (0 for empty ones)."""
    kq = np.array([len(s.indices) for s in model.segments], dtype=float)
    return kq / model.n_b


def profile_flags(inv_sr: np.ndarray, sigmas: float = 4.0) -> np.ndarray:
    """Flag segments whose inverse sparsity exceeds mean + ``sigmas``*std.

    A flat profile (zero spread) flags nothing.
    """
    inv_sr = np.asarray(inv_sr, dtype=float)
    std = inv_sr.std()
    if std == 0.0:
        return np.zeros(len(inv_sr), dtype=bool)
    return inv_sr > inv_sr.mean() + sigmas * std


@dataclass
class MetricsReport:
    """Record-level metric bundle plus the per-segment vectors.

    ``qs`` divides the entropy-coded ratio (``cr_hf``, the headline column
    of the benchmark tables) by ``prd``.
    """

    rec: str
    prd: float
    prdn: float
    sr: float
    cr: float
    cr_hf: float
    qs: float
    prd_q: np.ndarray
    sr_q: np.ndarray

    @classmethod
    def build(cls, rec, f, fr, model, raw_bytes, hf_bytes, bit_depth=11):
        n = len(f)
        original = stored_size_bytes(n, bit_depth)
        sr, sr_q = sparsity_metrics(model)
        cr_hf = compression_ratio(original, hf_bytes)
        p = prd(f, fr)
        n_b = model.n_b
        prd_q = np.full(model.q, np.nan)
        for qi in range(model.q):
            seg = f[qi * n_b : (qi + 1) * n_b]
            rseg = fr[qi * n_b : (qi + 1) * n_b]
            nrm = np.linalg.norm(seg)
            if nrm > 0 and len(seg):
                prd_q[qi] = np.linalg.norm(seg - rseg) / nrm * 100.0
        return cls(
            rec=str(rec),
            prd=p,
            prdn=prdn(f, fr),
            sr=sr,
            cr=compression_ratio(original, raw_bytes),
            cr_hf=cr_hf,
            qs=cr_hf / p,
            prd_q=prd_q,
            sr_q=sr_q,
        )


_COLUMNS = ("rec", "prd", "sr", "cr", "cr_hf", "qs", "prdn")


def report_csv(reports, path, stats: bool | None = None) -> None:
    """Write per-record rows plus mean/std rows.

    ``stats=None`` appends the mean/std rows only when there are several
    records; pass ``True``/``False`` to force either way (a single-record
    benchmark still reports mean = that record, std = 0).
    """
    rows = [[r.rec, r.prd, r.sr, r.cr, r.cr_hf, r.qs, r.prdn] for r in reports]
    if stats is None:
        stats = len(rows) > 1
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_COLUMNS)
        for row in rows:
            w.writerow([row[0]] + [f"{v:.6g}" for v in row[1:]])
        if stats and rows:
            vals = np.array([row[1:] for row in rows], dtype=float)
            w.writerow(["mean"] + [f"{v:.6g}" for v in vals.mean(axis=0)])
            w.writerow(["std"] + [f"{v:.6g}" for v in vals.std(axis=0)])


def report_table(reports) -> str:
    """Fixed-width table with the benchmark column layout."""
    header = f"{'Rec':>8s} {'PRD':>8s} {'SR':>8s} {'CR^Hf':>8s} {'QS':>8s} {'PRDN':>8s}"
    lines = [header]
    for r in reports:
        lines.append(
            f"{r.rec:>8s} {r.prd:8.2f} {r.sr:8.2f} {r.cr_hf:8.2f} {r.qs:8.2f} {r.prdn:8.2f}"
        )
    if len(reports) > 1:
        vals = np.array([[r.prd, r.sr, r.cr_hf, r.qs, r.prdn] for r in reports])
        lines.append(
            f"{'mean':>8s} " + " ".join(f"{v:8.2f}" for v in vals.mean(axis=0))
        )
        lines.append(
            f"{'std':>8s} " + " ".join(f"{v:8.2f}" for v in vals.std(axis=0))
        )
    return "\n".join(lines)
