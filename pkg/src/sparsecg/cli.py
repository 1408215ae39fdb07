"""Command-line front end.

Verbs: ``build-dict``, ``compress``, ``decompress``, ``metrics``,
``benchmark``, ``profile``.  Exit codes: 0 success, 2 configuration or
usage error, 3 ingestion error, 4 corrupt container or model, 1 anything
else.
"""

from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .codec import read_container
from .dictionary import DictionaryConfig, build_dictionary, dump_dictionary
from .errors import (
    ConfigurationError,
    CorruptContainerError,
    CorruptModelError,
    CorruptStreamError,
    IngestionError,
    SparsecgError,
)
from .ingest import RunConfig, load_run_config, read_record, write_samples
from .metrics import (
    MetricsReport,
    profile_flags,
    report_csv,
    report_table,
    sparsity_profile,
)
from .pipeline import compress_record, reconstruct_model

EXIT_OK, EXIT_OTHER, EXIT_CONFIG, EXIT_INGEST, EXIT_CORRUPT = 0, 1, 2, 3, 4

# (delta, prd0) pairs of the published rate-distortion operating points
SWEEP_SETTINGS = (
    (16.0, 0.275), (30.0, 0.435), (40.0, 0.645), (60.0, 0.740), (60.0, 0.750),
    (80.0, 0.805), (80.0, 0.850), (100.0, 0.900), (100.0, 0.930), (100.0, 0.940),
    (110.0, 1.020), (110.0, 1.070), (110.0, 1.220), (120.0, 1.430), (150.0, 1.660),
)


def _add_dict_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default=None, help="wavelet family (default cdf97)")
    p.add_argument("--nb", type=int, default=None, help="segment length in samples")
    p.add_argument("--refine", type=int, default=None,
                   help="translation refinement exponent; step = 2^-REFINE (0 = basis)")
    p.add_argument("--jmin", type=int, default=None, help="coarsest scale")
    p.add_argument("--jmax", type=int, default=None, help="finest scale")
    p.add_argument("--dct", type=int, default=None, help="number of low-frequency DCT atoms")


def _add_run_args(p: argparse.ArgumentParser) -> None:
    _add_dict_args(p)
    p.add_argument("--delta", type=float, default=None, help="quantisation step")
    p.add_argument("--prd0", type=float, default=None,
                   help="per-segment distortion target in percent")
    p.add_argument("--no-huffman", action="store_true", help="skip the entropy stage")
    p.add_argument("--config", default=None, help="JSON config file (flags override it)")


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", default="mitdb212", choices=("mitdb212", "raw_i16", "csv"))
    p.add_argument("--sample-rate", type=float, default=360.0)
    p.add_argument("--bit-depth", type=int, default=11)


def _run_config(args) -> RunConfig:
    base = load_run_config(args.config) if args.config else RunConfig()
    dc = base.dictionary
    dc = DictionaryConfig(
        family=args.family if args.family is not None else dc.family,
        n_b=args.nb if args.nb is not None else dc.n_b,
        l=args.refine if args.refine is not None else dc.l,
        j_min=args.jmin if args.jmin is not None else dc.j_min,
        j_max=args.jmax if args.jmax is not None else dc.j_max,
        m_dct=args.dct if args.dct is not None else dc.m_dct,
    )
    cfg = RunConfig(
        dictionary=dc,
        prd0=args.prd0 if args.prd0 is not None else base.prd0,
        delta=args.delta if args.delta is not None else base.delta,
        huffman=False if args.no_huffman else base.huffman,
    )
    cfg.validate()
    return cfg


def _cmd_build_dict(args) -> int:
    cfg = _run_config(args).dictionary
    d = build_dictionary(cfg)
    Path(args.dict_dump).write_bytes(dump_dictionary(d))
    print(f"{d.id}: M={d.size} atoms, redundancy {d.size / d.n_b:.2f}, wrote {args.dict_dump}")
    return EXIT_OK


def _summary_line(r) -> str:
    m = r.report
    return (
        f"PRD={m.prd:.3f} PRDN={m.prdn:.3f} SR={m.sr:.2f} CR={m.cr:.2f} "
        f"CR^Hf={m.cr_hf:.2f} QS={m.qs:.2f} time={r.elapsed:.1f}s"
    )


def _cmd_compress(args) -> int:
    cfg = _run_config(args)
    record = read_record(args.input, args.format, args.sample_rate, args.bit_depth)
    result = compress_record(record, cfg)
    Path(args.output).write_bytes(result.container)
    if args.dict_dump:
        Path(args.dict_dump).write_bytes(dump_dictionary(build_dictionary(cfg.dictionary)))
    print(f"{record.source}: {_summary_line(result)} -> {args.output}")
    return EXIT_OK


def _cmd_decompress(args) -> int:
    model = read_container(args.input)
    recon = reconstruct_model(model)
    write_samples(args.output, recon, args.format)
    print(f"decoded {model.n_total} samples (Q={model.q}, delta={model.delta}) -> {args.output}")
    return EXIT_OK


def _cmd_metrics(args) -> int:
    record = read_record(args.original, args.format, args.sample_rate, args.bit_depth)
    raw = Path(args.container).read_bytes()
    from .codec import decode

    model = decode(raw)
    recon = reconstruct_model(model)
    if len(recon) != record.n:
        raise CorruptModelError(
            f"container stores {len(recon)} samples, record has {record.n}"
        )
    from .metrics import stored_size_bytes

    original = stored_size_bytes(record.n, record.bit_depth)
    report = MetricsReport.build(
        record.source, record.samples, recon, model,
        raw_bytes=len(raw), hf_bytes=len(raw), bit_depth=record.bit_depth,
    )
    # CR columns both reflect the actual container on disk here
    print(report_table([report]))
    if args.csv:
        report_csv([report], args.csv)
    return EXIT_OK


def _bench_one(task):
    path, fmt, sample_rate, bit_depth, cfg, label = task
    try:
        record = read_record(path, fmt, sample_rate, bit_depth)
    except IngestionError as exc:
        return None, f"skipping {path}: {exc}"
    result = compress_record(record, cfg, _cached_dictionary(cfg.dictionary))
    r = result.report
    r.rec = label if label else r.rec
    return r, None


_DICT_CACHE: dict = {}


def _cached_dictionary(dcfg: DictionaryConfig):
    key = dcfg.id
    if key not in _DICT_CACHE:
        _DICT_CACHE[key] = build_dictionary(dcfg)
    return _DICT_CACHE[key]


def _cmd_benchmark(args) -> int:
    cfg = _run_config(args)
    paths = sorted(Path(args.dataset).glob(args.pattern))
    if not paths:
        print(f"no files matching {args.pattern} in {args.dataset}", file=sys.stderr)
        return EXIT_INGEST
    settings = SWEEP_SETTINGS if args.sweep else ((cfg.delta, cfg.prd0),)
    reports = []
    for delta, prd0 in settings:
        scfg = RunConfig(dictionary=cfg.dictionary, prd0=prd0, delta=delta, huffman=cfg.huffman)
        label = f"d{delta:g}p{prd0:g}" if args.sweep else ""
        tasks = [
            (str(p), args.format, args.sample_rate, args.bit_depth, scfg,
             f"{p.stem}:{label}" if label else p.stem)
            for p in paths
        ]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as ex:
                outcomes = list(ex.map(_bench_one, tasks))
        else:
            outcomes = [_bench_one(t) for t in tasks]
        batch = []
        for rep, warning in outcomes:
            if warning:
                print(warning, file=sys.stderr)
            else:
                batch.append(rep)
        if not batch:
            print("no records processed", file=sys.stderr)
            return EXIT_INGEST
        reports.extend(batch)
    print(report_table(reports))
    if args.output:
        report_csv(reports, args.output, stats=True)
        print(f"wrote {args.output}")
    return EXIT_OK


def _cmd_profile(args) -> int:
    cfg = _run_config(args)
    record = read_record(args.input, args.format, args.sample_rate, args.bit_depth)
    result = compress_record(record, cfg)
    inv_sr = sparsity_profile(result.model)
    flags = profile_flags(inv_sr)
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["q", "inv_sr", "prd_q", "flagged"])
        for qi in range(result.model.q):
            w.writerow([qi, f"{inv_sr[qi]:.6g}", f"{result.report.prd_q[qi]:.6g}", int(flags[qi])])
    n_flag = int(flags.sum())
    peak = int(np.argmax(inv_sr))
    print(f"{record.source}: {result.model.q} segments, {n_flag} flagged, "
          f"peak 1/sr at segment {peak} -> {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sparsecg",
                                 description="Sparse wavelet-dictionary ECG codec")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("build-dict", help="build a dictionary and dump it")
    _add_dict_args(p)
    p.add_argument("--config", default=None)
    p.add_argument("--delta", type=float, default=None, help=argparse.SUPPRESS)
    p.add_argument("--prd0", type=float, default=None, help=argparse.SUPPRESS)
    p.add_argument("--no-huffman", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--dict-dump", required=True, help="output path for the binary dump")
    p.set_defaults(func=_cmd_build_dict)

    p = sub.add_parser("compress", help="compress a record to a .secg container")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    _add_input_args(p)
    _add_run_args(p)
    p.add_argument("--dict-dump", default=None, help="also dump the dictionary blob")
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("decompress", help="reconstruct samples from a container")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--format", default="raw_i16", choices=("raw_i16", "csv"))
    p.set_defaults(func=_cmd_decompress)

    p = sub.add_parser("metrics", help="score a container against the original record")
    p.add_argument("original")
    p.add_argument("container")
    _add_input_args(p)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("benchmark", help="compress every record in a directory")
    p.add_argument("dataset")
    p.add_argument("--pattern", default="*.dat")
    _add_input_args(p)
    _add_run_args(p)
    p.add_argument("--sweep", action="store_true",
                   help="run the published (delta, prd0) operating points")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", default=None, help="CSV output path")
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("profile", help="per-segment inverse sparsity and local PRD")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    _add_input_args(p)
    _add_run_args(p)
    p.set_defaults(func=_cmd_profile)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IngestionError as exc:
        print(f"ingestion error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except (CorruptContainerError, CorruptModelError, CorruptStreamError) as exc:
        print(f"corrupt input: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except SparsecgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
