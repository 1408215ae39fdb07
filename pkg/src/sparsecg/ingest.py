"""Record readers, segmentation and run configuration.

Supported layouts: the 212 packing used by the MIT-BIH arrhythmia files
(two 12-bit two's-complement samples per 3 bytes, two interleaved channels,
first channel extracted), little-endian 16-bit integers, and one sample per
line of text.  Samples are kept in raw ADC units; no baseline is removed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dictionary import DictionaryConfig
from .errors import ConfigurationError, IngestionError

__all__ = ["Record", "RunConfig", "read_record", "segment", "write_samples"]

FORMATS = ("mitdb212", "raw_i16", "csv")


@dataclass
class Record:
    samples: np.ndarray
    sample_rate: float = 360.0
    bit_depth: int = 11
    source: str = ""

    @property
    def n(self) -> int:
        return len(self.samples)


def decode_212_pairs(raw: bytes, path: str = "<bytes>") -> tuple[np.ndarray, np.ndarray]:
    """Unpack 3-byte chunks into the two interleaved 12-bit channels.

    Sample one is the low byte plus the low nibble of the middle byte;
    sample two the high nibble plus the third byte.  Values are 12-bit
    two's complement.
    """
    if len(raw) == 0:
        raise IngestionError(f"{path}: empty file", offset=0)
    if len(raw) % 3 != 0:
        raise IngestionError(
            f"{path}: length {len(raw)} is not a multiple of 3",
            offset=len(raw) - len(raw) % 3,
        )
    b = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
    s0 = b[:, 0] | ((b[:, 1] & 0x0F) << 8)
    s1 = b[:, 2] | ((b[:, 1] & 0xF0) << 4)
    s0 = np.where(s0 > 2047, s0 - 4096, s0)
    s1 = np.where(s1 > 2047, s1 - 4096, s1)
    return s0.astype(float), s1.astype(float)


def _decode_212(raw: bytes, path: str) -> np.ndarray:
    return decode_212_pairs(raw, path)[0]  # first channel (MLII where present)


def _decode_csv(text: str, path: str) -> np.ndarray:
    values = []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(float(line.split(",")[0]))
        except ValueError:
            raise IngestionError(f"{path}: unparseable line {ln}: {line!r}", offset=ln) from None
    if not values:
        raise IngestionError(f"{path}: no samples found", offset=0)
    return np.array(values)


def read_record(path, fmt: str, sample_rate: float = 360.0, bit_depth: int = 11) -> Record:
    """Read a record in one of the supported layouts."""
    path = Path(path)
    if fmt not in FORMATS:
        raise ConfigurationError(f"unknown record format {fmt!r}; choose from {FORMATS}")
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IngestionError(f"{path}: {exc}") from None
    if fmt == "mitdb212":
        samples = _decode_212(raw, str(path))
    elif fmt == "raw_i16":
        if len(raw) == 0:
            raise IngestionError(f"{path}: empty file", offset=0)
        if len(raw) % 2 != 0:
            raise IngestionError(f"{path}: odd byte count for 16-bit samples", offset=len(raw) - 1)
        samples = np.frombuffer(raw, dtype="<i2").astype(float)
    else:
        samples = _decode_csv(raw.decode("utf-8", errors="strict"), str(path))
    return Record(samples, sample_rate, bit_depth, source=path.stem)


def write_samples(path, samples: np.ndarray, fmt: str = "raw_i16") -> None:
    """Write samples back out (decompressor output)."""
    path = Path(path)
    if fmt == "raw_i16":
        path.write_bytes(np.round(samples).astype("<i2").tobytes())
    elif fmt == "csv":
        path.write_text("".join(f"{v:.6f}\n" for v in samples))
    else:
        raise ConfigurationError(f"unsupported output format {fmt!r}")


def segment(samples: np.ndarray, n_b: int) -> tuple[np.ndarray, int]:
    """Split into ``ceil(N / n_b)`` disjoint rows, zero-padding the last.

    Returns ``(segments, n_total)``; concatenating the rows and cropping to
    ``n_total`` reproduces the input exactly.
    """
    if n_b < 2:
        raise ConfigurationError("n_b must be at least 2")
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    q = -(-n // n_b)
    padded = np.zeros(q * n_b)
    padded[:n] = samples
    return padded.reshape(q, n_b), n


@dataclass(frozen=True)
class RunConfig:
    """End-to-end compression parameters.

    ``prd0`` is the per-segment distortion target in percent driving the
    pursuit stopping threshold; ``delta`` the coefficient quantisation
    step.
    """

    dictionary: DictionaryConfig = field(default_factory=DictionaryConfig)
    prd0: float = 0.485
    delta: float = 35.0
    huffman: bool = True

    def validate(self) -> None:
        if self.prd0 < 0:
            raise ConfigurationError("prd0 must be nonnegative")
        if self.delta <= 0:
            raise ConfigurationError("delta must be positive")
        self.dictionary.resolved()

    @property
    def n_b(self) -> int:
        return self.dictionary.n_b


_CONFIG_KEYS = {"family", "n_b", "refine", "j_min", "j_max", "m_dct", "prd0", "delta", "huffman"}


def load_run_config(path) -> RunConfig:
    """Load a JSON config file with the documented key set."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    dc = DictionaryConfig(
        family=data.get("family", "cdf97"),
        n_b=int(data.get("n_b", 500)),
        l=int(data.get("refine", 2)),
        j_min=data.get("j_min"),
        j_max=data.get("j_max"),
        m_dct=int(data.get("m_dct", 10)),
    )
    cfg = RunConfig(
        dictionary=dc,
        prd0=float(data.get("prd0", 0.485)),
        delta=float(data.get("delta", 35.0)),
        huffman=bool(data.get("huffman", True)),
    )
    cfg.validate()
    return cfg
