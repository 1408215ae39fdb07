import csv
import json
import re

import numpy as np
import pytest

from sparsecg.cli import main
from sparsecg.dictionary import load_dictionary
from sparsecg.ingest import read_record
from sparsecg.synthetic import synthetic_ecg, with_noise_burst

CFG = ["--nb", "128", "--format", "csv"]


@pytest.fixture()
def record_csv(tmp_path):
    p = tmp_path / "synt.csv"
    sig = synthetic_ecg(2000, seed=5)
    p.write_text("".join(f"{v:g}\n" for v in sig))
    return p, sig


def run(args):
    return main([str(a) for a in args])


class TestCompressDecompress:
    def test_roundtrip(self, tmp_path, record_csv, capsys):
        src, sig = record_csv
        out = tmp_path / "r.secg"
        assert run(["compress", src, "-o", out] + CFG) == 0
        text = capsys.readouterr().out
        assert out.exists()
        m = re.search(r"PRD=([\d.]+)", text)
        assert m and float(m.group(1)) < 5.0

        dec = tmp_path / "r.bin"
        assert run(["decompress", out, "-o", dec]) == 0
        rec = read_record(dec, "raw_i16")
        assert len(rec.samples) == len(sig)
        err = np.linalg.norm(rec.samples - sig) / np.linalg.norm(sig) * 100
        assert err < 5.0

    def test_decompress_csv_output(self, tmp_path, record_csv):
        src, sig = record_csv
        out = tmp_path / "r.secg"
        run(["compress", src, "-o", out] + CFG)
        dec = tmp_path / "r.csv"
        assert run(["decompress", out, "-o", dec, "--format", "csv"]) == 0
        vals = [float(v) for v in dec.read_text().split()]
        assert len(vals) == len(sig)

    def test_metrics_matches_compress(self, tmp_path, record_csv, capsys):
        src, _ = record_csv
        out = tmp_path / "r.secg"
        run(["compress", src, "-o", out] + CFG)
        prd_compress = float(re.search(r"PRD=([\d.]+)", capsys.readouterr().out).group(1))
        assert run(["metrics", src, out] + CFG[2:] + ["--format", "csv"]) == 0
        table = capsys.readouterr().out
        row = table.splitlines()[1].split()
        assert float(row[1]) == pytest.approx(prd_compress, abs=5e-3)  # printed at 2-3 decimals

    def test_missing_input(self, tmp_path, capsys):
        out = tmp_path / "r.secg"
        code = run(["compress", tmp_path / "absent.csv", "-o", out] + CFG)
        assert code == 3
        assert not out.exists()

    def test_bad_family(self, tmp_path, record_csv):
        src, _ = record_csv
        code = run(["compress", src, "-o", tmp_path / "x.secg", "--family", "nope",
                    "--format", "csv"])
        assert code == 2

    def test_corrupt_container(self, tmp_path, record_csv):
        src, _ = record_csv
        out = tmp_path / "r.secg"
        run(["compress", src, "-o", out] + CFG)
        data = bytearray(out.read_bytes())
        data[0] ^= 0xFF
        out.write_bytes(bytes(data))
        assert run(["decompress", out, "-o", tmp_path / "y.bin"]) == 4

    def test_config_file(self, tmp_path, record_csv):
        src, _ = record_csv
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n_b": 128, "family": "db4", "prd0": 1.0}))
        out = tmp_path / "r.secg"
        assert run(["compress", src, "-o", out, "--config", cfg, "--format", "csv"]) == 0


class TestBuildDict:
    def test_dump_loads_back(self, tmp_path, capsys):
        blob = tmp_path / "d.scgd"
        assert run(["build-dict", "--family", "cw2", "--nb", "100", "--refine", "2",
                    "--dict-dump", blob]) == 0
        d = load_dictionary(blob.read_bytes())
        assert d.n_b == 100
        assert "M=" in capsys.readouterr().out


class TestBenchmark:
    def test_two_record_directory(self, tmp_path, capsys):
        data = tmp_path / "ds"
        data.mkdir()
        for i in range(2):
            sig = synthetic_ecg(1500, seed=i)
            (data / f"r{i}.csv").write_text("".join(f"{v:g}\n" for v in sig))
        out = tmp_path / "bench.csv"
        assert run(["benchmark", data, "--pattern", "*.csv", "--format", "csv",
                    "--nb", "128", "-o", out]) == 0
        rows = list(csv.reader(out.open()))
        assert rows[0][0] == "rec"
        assert [r[0] for r in rows[1:]] == ["r0", "r1", "mean", "std"]

    def test_single_record_mean_and_zero_std(self, tmp_path):
        data = tmp_path / "ds"
        data.mkdir()
        sig = synthetic_ecg(1500, seed=0)
        (data / "solo.csv").write_text("".join(f"{v:g}\n" for v in sig))
        out = tmp_path / "bench.csv"
        assert run(["benchmark", data, "--pattern", "*.csv", "--format", "csv",
                    "--nb", "128", "-o", out]) == 0
        rows = list(csv.reader(out.open()))
        assert [r[0] for r in rows] == ["rec", "solo", "mean", "std"]
        assert float(rows[1][1]) == float(rows[2][1])  # mean = the record
        assert all(float(v) == 0.0 for v in rows[3][1:])  # std = 0

    def test_empty_directory(self, tmp_path):
        data = tmp_path / "ds"
        data.mkdir()
        assert run(["benchmark", data, "--pattern", "*.csv", "--format", "csv"]) == 3

    def test_unreadable_record_skipped(self, tmp_path, capsys):
        data = tmp_path / "ds"
        data.mkdir()
        sig = synthetic_ecg(1500, seed=0)
        (data / "good.csv").write_text("".join(f"{v:g}\n" for v in sig))
        (data / "bad.csv").write_text("not-a-number\n")
        assert run(["benchmark", data, "--pattern", "*.csv", "--format", "csv",
                    "--nb", "128"]) == 0
        assert "skipping" in capsys.readouterr().err


class TestProfile:
    def test_burst_is_flagged(self, tmp_path, capsys):
        sig = synthetic_ecg(128 * 24, seed=9, noise_std=1.0)
        sig = with_noise_burst(sig, 128, burst_segment=11, gain=10.0)
        src = tmp_path / "b.csv"
        src.write_text("".join(f"{v:g}\n" for v in sig))
        out = tmp_path / "prof.csv"
        assert run(["profile", src, "-o", out, "--nb", "128", "--format", "csv",
                    "--prd0", "1.0"]) == 0
        rows = list(csv.DictReader(out.open()))
        inv = np.array([float(r["inv_sr"]) for r in rows])
        flags = [int(r["flagged"]) for r in rows]
        assert int(np.argmax(inv)) == 11
        assert flags[11] == 1

    def test_clean_record_no_flags(self, tmp_path):
        sig = synthetic_ecg(128 * 16, seed=10, noise_std=0.5)
        src = tmp_path / "c.csv"
        src.write_text("".join(f"{v:g}\n" for v in sig))
        out = tmp_path / "prof.csv"
        assert run(["profile", src, "-o", out, "--nb", "128", "--format", "csv",
                    "--prd0", "1.0"]) == 0
        rows = list(csv.DictReader(out.open()))
        assert sum(int(r["flagged"]) for r in rows) == 0
