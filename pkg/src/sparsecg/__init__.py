"""sparsecg: sparse wavelet-dictionary compression and analysis of ECG records.

The library builds redundant wavelet + DCT dictionaries, computes per-segment
sparse models by optimised orthogonal matching pursuit, packs quantised models
into a bit-exact container with optional canonical Huffman coding, and scores
sparsity / compression / distortion.
"""

from .codec import (
    QuantizedModel,
    QuantizedSegment,
    decode,
    dequantize_reconstruct,
    encode,
    quantize,
    read_container,
    write_container,
)
from .dictionary import (
    Dictionary,
    DictionaryConfig,
    Provenance,
    build_dictionary,
    config_from_id,
    dump_dictionary,
    load_dictionary,
)
from .entropy import HuffmanTable, huffman_decode, huffman_encode
from .errors import (
    ConfigurationError,
    ConstructionError,
    CorruptContainerError,
    CorruptModelError,
    CorruptStreamError,
    DegenerateAtomError,
    DimensionError,
    IngestionError,
    SparsecgError,
    SpanExhaustedError,
    UndefinedMetricError,
)
from .ingest import Record, RunConfig, load_run_config, read_record, segment, write_samples
from .metrics import (
    MetricsReport,
    compression_ratio,
    prd,
    prdn,
    profile_flags,
    sparsity_metrics,
    sparsity_profile,
    stored_size_bytes,
)
from .pipeline import CompressionResult, compress_record, reconstruct_model
from .pursuit import (
    PursuitState,
    SegmentApproximation,
    approximate_record,
    approximate_segment,
    oomp_extend,
    oomp_init,
    oomp_select,
    reconstruct_segment,
)
from .synthetic import synthetic_ecg, with_noise_burst
from .wavelets import (
    FAMILIES,
    WaveletFamily,
    bspline_eval,
    get_family,
    prototype_samples,
)

__version__ = "0.1.0"
