"""End-to-end record compression: segment, pursue, quantise, encode, score."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .codec import QuantizedModel, dequantize_reconstruct, encode, quantize
from .dictionary import Dictionary, build_dictionary
from .ingest import Record, RunConfig, segment
from .metrics import MetricsReport
from .pursuit import approximate_record

__all__ = ["CompressionResult", "compress_record", "reconstruct_model"]


@dataclass
class CompressionResult:
    model: QuantizedModel
    container: bytes           # encoded with the configured entropy setting
    raw_size: int              # container size without the entropy stage
    hf_size: int               # container size with it
    reconstruction: np.ndarray # cropped to the original length
    report: MetricsReport
    elapsed: float


def compress_record(
    record: Record, cfg: RunConfig, dictionary: Dictionary | None = None
) -> CompressionResult:
    """Run the full pipeline on one record.

    Both container sizes (with and without the entropy stage) are measured
    so the report carries CR and CR^Hf; the returned container uses
    ``cfg.huffman``.
    """
    cfg.validate()
    t0 = time.perf_counter()
    if dictionary is None:
        dictionary = build_dictionary(cfg.dictionary)
    segments, n_total = segment(record.samples, cfg.n_b)
    approxs = approximate_record(segments, dictionary, cfg.prd0)
    model = quantize(approxs, cfg.delta, cfg.n_b, n_total, dictionary.id)
    raw = encode(model, use_huffman=False)
    hf = encode(model, use_huffman=True)
    container = hf if cfg.huffman else raw
    recon = dequantize_reconstruct(model, dictionary)[:n_total]
    elapsed = time.perf_counter() - t0
    report = MetricsReport.build(
        record.source or "record",
        record.samples,
        recon,
        model,
        raw_bytes=len(raw),
        hf_bytes=len(hf),
        bit_depth=record.bit_depth,
    )
    return CompressionResult(model, container, len(raw), len(hf), recon, report, elapsed)


def reconstruct_model(model: QuantizedModel, dictionary: Dictionary | None = None) -> np.ndarray:
    """Decode-side reconstruction, cropped to the stored sample count."""
    if dictionary is None:
        from .dictionary import config_from_id

        dictionary = build_dictionary(config_from_id(model.dictionary_id))
    return dequantize_reconstruct(model, dictionary)[: model.n_total]
