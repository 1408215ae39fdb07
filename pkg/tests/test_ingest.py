import json

import numpy as np
import pytest

from sparsecg.errors import ConfigurationError, IngestionError
from sparsecg.ingest import (
    RunConfig,
    decode_212_pairs,
    load_run_config,
    read_record,
    segment,
    write_samples,
)


class Test212:
    def test_reference_chunk(self):
        # 0xE3 0x3F 0xF3: low byte + low nibble = 0xFE3 -> -29 (two's
        # complement); high nibble + third byte = 0x3F3 -> 1011
        s0, s1 = decode_212_pairs(bytes([0xE3, 0x3F, 0xF3]))
        assert s0[0] == -29.0
        assert s1[0] == 1011.0

    def test_positive_pair(self):
        # 950 = 0x3B6, 1024 = 0x400 -> bytes B6 (4<<4 | 3) 00
        raw = bytes([0xB6, 0x43, 0x00])
        s0, s1 = decode_212_pairs(raw)
        assert (s0[0], s1[0]) == (950.0, 1024.0)

    def test_file_reader_takes_first_channel(self, tmp_path):
        p = tmp_path / "r.dat"
        p.write_bytes(bytes([0xE3, 0x3F, 0xF3, 0xB6, 0x43, 0x00]))
        rec = read_record(p, "mitdb212")
        assert rec.samples.tolist() == [-29.0, 950.0]
        assert rec.sample_rate == 360.0 and rec.bit_depth == 11

    def test_truncated_reports_offset(self, tmp_path):
        p = tmp_path / "r.dat"
        p.write_bytes(bytes(7))
        with pytest.raises(IngestionError) as e:
            read_record(p, "mitdb212")
        assert e.value.offset == 6

    def test_empty_file(self, tmp_path):
        p = tmp_path / "r.dat"
        p.write_bytes(b"")
        with pytest.raises(IngestionError):
            read_record(p, "mitdb212")

    def test_matches_reference_reader_on_record_100(self):
        from conftest import mitdb_dir

        d = mitdb_dir()
        if d is None or not (d / "100.dat").exists():
            pytest.skip("MIT-BIH record 100 not present")
        wfdb = pytest.importorskip("wfdb")
        rec = read_record(d / "100.dat", "mitdb212")
        ref = wfdb.rdrecord(str(d / "100"), sampto=1000, physical=False)
        assert np.array_equal(rec.samples[:1000], ref.d_signal[:, 0].astype(float))


class TestOtherFormats:
    def test_csv(self, tmp_path):
        p = tmp_path / "r.csv"
        p.write_text("1\n2\n3\n")
        assert read_record(p, "csv").samples.tolist() == [1.0, 2.0, 3.0]

    def test_csv_bad_line(self, tmp_path):
        p = tmp_path / "r.csv"
        p.write_text("1\nx\n")
        with pytest.raises(IngestionError) as e:
            read_record(p, "csv")
        assert e.value.offset == 2

    def test_raw_i16_roundtrip(self, tmp_path):
        p = tmp_path / "r.bin"
        vals = np.array([-5, 0, 1023, -1024], dtype=float)
        write_samples(p, vals, "raw_i16")
        assert read_record(p, "raw_i16").samples.tolist() == vals.tolist()

    def test_raw_i16_odd_length(self, tmp_path):
        p = tmp_path / "r.bin"
        p.write_bytes(b"\x01\x02\x03")
        with pytest.raises(IngestionError):
            read_record(p, "raw_i16")

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ConfigurationError):
            read_record(tmp_path / "x", "flac")

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestionError):
            read_record(tmp_path / "nope.dat", "mitdb212")


class TestSegment:
    def test_full_record_partition(self):
        segs, n = segment(np.zeros(650000), 500)
        assert segs.shape == (1300, 500)
        assert n == 650000

    def test_padding(self):
        segs, n = segment(np.arange(7.0), 4)
        assert segs.shape == (2, 4)
        assert segs[1].tolist() == [4.0, 5.0, 6.0, 0.0]
        assert n == 7

    def test_exact_single_segment(self):
        segs, n = segment(np.ones(16), 16)
        assert segs.shape == (1, 16)

    def test_concat_crop_inverse(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal(1234)
        segs, n = segment(x, 100)
        assert np.array_equal(segs.ravel()[:n], x)

    def test_rejects_tiny_nb(self):
        with pytest.raises(ConfigurationError):
            segment(np.zeros(10), 1)


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig()
        cfg.validate()
        assert cfg.n_b == 500
        assert segment(np.zeros(650000), cfg.n_b)[0].shape[0] == 1300

    def test_config_file(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"family": "db4", "n_b": 256, "refine": 1,
                                 "delta": 20.0, "prd0": 0.7, "huffman": False}))
        cfg = load_run_config(p)
        assert cfg.dictionary.family == "db4"
        assert cfg.dictionary.n_b == 256
        assert cfg.dictionary.l == 1
        assert cfg.delta == 20.0 and cfg.prd0 == 0.7 and cfg.huffman is False

    def test_unknown_key_rejected(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"familia": "db4"}))
        with pytest.raises(ConfigurationError):
            load_run_config(p)

    def test_bad_values_rejected(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"delta": -1}))
        with pytest.raises(ConfigurationError):
            load_run_config(p)
