"""CLI contract: exit codes, report field names, seeded reproducibility."""

import json
import os
import pathlib

import numpy as np
import pytest

from castlab.cli import main
from castlab.image_io import load_image, save_image, synth_image

KEY = "ADF278565E262AD1F5DEC94A0BF25B27"


@pytest.fixture()
def plain_pgm(tmp_path):
    path = tmp_path / "plain.pgm"
    save_image(synth_image("smooth_noise", 64, 64, seed=11), path)
    return str(path)


def test_encrypt_decrypt_image_roundtrip(tmp_path, plain_pgm):
    cipher = str(tmp_path / "c.pgm")
    back = str(tmp_path / "b.pgm")
    assert main(["encrypt", "--key", KEY, "--variant", "original",
                 "--in", plain_pgm, "--out", cipher]) == 0
    assert main(["decrypt", "--key", KEY, "--in", cipher, "--out", back]) == 0
    assert np.array_equal(load_image(back), load_image(plain_pgm))
    assert not np.array_equal(load_image(cipher), load_image(plain_pgm))


def test_encrypt_bytes_mode_roundtrip(tmp_path):
    src = tmp_path / "doc.txt"
    src.write_bytes(b"attack at dawn" * 3)
    enc = tmp_path / "doc.enc"
    dec = tmp_path / "doc.dec"
    assert main(["encrypt", "--key", KEY, "--in", str(src), "--out", str(enc)]) == 0
    assert enc.stat().st_size % 8 == 0
    assert main(["decrypt", "--key", KEY, "--in", str(enc), "--out", str(dec)]) == 0
    assert dec.read_bytes() == src.read_bytes()


def test_usage_errors_exit_2(tmp_path, plain_pgm, capsys):
    out = str(tmp_path / "x.pgm")
    assert main(["encrypt", "--key", "ZZZ", "--in", plain_pgm, "--out", out]) == 2
    assert main(["encrypt", "--key", KEY, "--in", str(tmp_path / "none.pgm"),
                 "--out", out]) == 2
    assert main(["encrypt", "--key", KEY, "--in", plain_pgm, "--out", out,
                 "--frobnicate"]) == 2
    assert main(["avalanche", "--rounds", "0-3"]) == 2
    assert main(["avalanche", "--samples", "0", "--rounds", "16"]) == 2
    assert main(["correlate", "--in", plain_pgm, "--pairs", "1"]) == 2
    assert main(["quality"]) == 2
    capsys.readouterr()


def test_runtime_errors_exit_1(tmp_path, capsys):
    odd = tmp_path / "odd.pgm"   # 3x3 = 9 pixels, not block aligned
    save_image(synth_image("gradient", 3, 3), odd)
    out = str(tmp_path / "x.pgm")
    assert main(["encrypt", "--key", KEY, "--in", str(odd), "--out", out]) == 1
    assert "NotBlockAligned" in capsys.readouterr().err

    flat = tmp_path / "flat.pgm"
    save_image(synth_image("constant", 16, 16, seed=0), flat)
    assert main(["correlate", "--in", str(flat)]) == 1
    assert "DegenerateVariance" in capsys.readouterr().err


def test_avalanche_json_fields_and_seed_reproducibility(tmp_path, capsys):
    argv = ["avalanche", "--samples", "400", "--rounds", "16", "--seed", "9"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    rows = json.loads(first)
    assert rows[0]["samples"] == 400
    assert list(rows[0].keys()) == [
        "rounds", "samples", "wins_original", "wins_modified", "ties",
        "mean_distance_original", "mean_distance_modified",
        "sd_distance_original", "sd_distance_modified"]
    assert main(argv + ["--workers", "4"]) == 0
    assert capsys.readouterr().out == first


def test_avalanche_csv(capsys):
    assert main(["avalanche", "--samples", "100", "--rounds", "2,4",
                 "--seed", "1", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("rounds,samples,wins_original")
    assert len(lines) == 3


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("CASTLAB_SEED", "77")
    assert main(["avalanche", "--samples", "200", "--rounds", "16"]) == 0
    env_out = capsys.readouterr().out
    monkeypatch.delenv("CASTLAB_SEED")
    assert main(["avalanche", "--samples", "200", "--rounds", "16", "--seed", "77"]) == 0
    assert capsys.readouterr().out == env_out


def test_quality_pair_and_sweep(tmp_path, plain_pgm, capsys):
    cipher = str(tmp_path / "c.pgm")
    main(["encrypt", "--key", KEY, "--in", plain_pgm, "--out", cipher])
    capsys.readouterr()
    assert main(["quality", "--plain", plain_pgm, "--cipher", cipher]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) == {"eq"} and rep["eq"] > 0
    assert main(["quality", "--sweep", "--in", plain_pgm, "--key", KEY,
                 "--rounds", "15-16", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "variant,rounds,eq"
    assert len(lines) == 5  # both variants x two rounds


def test_keysens_writes_artifacts(tmp_path, plain_pgm, capsys):
    prefix = str(tmp_path / "ks")
    assert main(["keysens", "--in", plain_pgm, "--out-prefix", prefix]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert 90 < rep["percent_differing"] <= 100
    assert 90 < rep["wrong_key_decrypt_percent"] <= 100
    for suffix in ("_cipher_k1.pgm", "_cipher_k2.pgm", "_diff.pgm", "_wrongkey.pgm"):
        assert os.path.isfile(prefix + suffix)
    wrong = load_image(prefix + "_wrongkey.pgm")
    assert not np.array_equal(wrong, load_image(plain_pgm))


def test_histogram_subcommand(tmp_path, plain_pgm, capsys):
    csv_path = str(tmp_path / "h.csv")
    svg_path = str(tmp_path / "h.svg")
    assert main(["histogram", "--in", plain_pgm, "--csv", csv_path,
                 "--svg", svg_path]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) == {"chi_square", "p_value", "max_bin_percent", "min_bin_percent"}
    lines = pathlib.Path(csv_path).read_text(encoding="utf-8").splitlines()
    assert lines[0] == "level,count" and len(lines) == 257
    assert pathlib.Path(svg_path).read_text(encoding="utf-8").startswith("<svg ")


def test_correlate_subcommand(tmp_path, plain_pgm, capsys):
    svg_path = str(tmp_path / "scatter.svg")
    assert main(["correlate", "--in", plain_pgm, "--pairs", "500",
                 "--seed", "3", "--svg", svg_path]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) == {"pairs", "direction", "correlation"}
    assert rep["pairs"] == 500
    assert rep["correlation"] > 0.5  # smooth noise is strongly correlated
    assert os.path.isfile(svg_path)


def test_plot_subcommand_roundtrip(tmp_path, plain_pgm, capsys):
    csv_path = str(tmp_path / "h.csv")
    svg1 = str(tmp_path / "h1.svg")
    main(["histogram", "--in", plain_pgm, "--csv", csv_path, "--svg", svg1,
          "--title", "T"])
    capsys.readouterr()
    svg2 = str(tmp_path / "h2.svg")
    assert main(["plot", "--kind", "histogram", "--in", csv_path, "--out", svg2,
                 "--title", "T"]) == 0
    assert pathlib.Path(svg1).read_bytes() == pathlib.Path(svg2).read_bytes()
    assert main(["plot", "--kind", "scatter", "--in", csv_path,
                 "--out", str(tmp_path / "bad.svg")]) == 2  # wrong CSV shape
    capsys.readouterr()


def test_bench_subcommand(capsys):
    assert main(["bench", "--op", "round", "--iters", "2000", "--repeats", "1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["speedup_modified_vs_original"] > 0
    assert rep["original"]["checksum"] != rep["modified"]["checksum"]
    assert main(["bench", "--op", "block", "--mb", "1", "--repeats", "1"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["original"]["throughput_mb_s"] > 0


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()
