import dataclasses

import numpy as np
import pytest

from grandsim.cli import main
from grandsim.sim import (
    CSV_HEADER,
    ExperimentConfig,
    build_code,
    emit_plot,
    parse_config_file,
    parse_snr,
    read_records,
    run_point,
    run_sweep,
)


def small_cfg(**overrides):
    base = dict(
        code="random:16,8,1",
        mod="bpsk",
        channel="rayleigh",
        decoder="turbo",
        budget=300,
        iters=2,
        snr_db=[8.0],
        max_frames=40,
        max_frame_errors=1000,
        seed=1,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_parse_snr():
    assert parse_snr("10") == [10.0]
    assert parse_snr("8:2:14") == [8.0, 10.0, 12.0, 14.0]
    assert parse_snr("9:0.5:11") == [9.0, 9.5, 10.0, 10.5, 11.0]
    assert parse_snr("5:3:6") == [5.0]
    with pytest.raises(ValueError):
        parse_snr("1:2")
    with pytest.raises(ValueError):
        parse_snr("1:0:5")
    with pytest.raises(ValueError):
        parse_snr("3:-1:5")


def test_build_code(tmp_path):
    code = build_code("bch127")
    assert (code.n, code.k) == (127, 113)
    rnd = build_code("random:16,8,3")
    assert (rnd.n, rnd.k) == (16, 8)
    path = tmp_path / "gen.txt"
    path.write_text("1 0 1\n0 1 1\n")
    loaded = build_code(f"file:{path}")
    assert (loaded.n, loaded.k) == (3, 2)
    with pytest.raises(ValueError):
        build_code("golay23")
    with pytest.raises(ValueError):
        build_code("random:16")


def test_run_point_deterministic():
    a = run_point(small_cfg(), 8.0)
    b = run_point(small_cfg(), 8.0)
    fa = dataclasses.asdict(a)
    fb = dataclasses.asdict(b)
    fa.pop("wall_s")
    fb.pop("wall_s")
    assert fa == fb
    c = run_point(small_cfg(seed=2), 8.0)
    assert c.mean_queries != a.mean_queries or c.bit_errors != a.bit_errors


def test_run_point_quiet_at_high_snr():
    rec = run_point(small_cfg(snr_db=[25.0]), 25.0)
    assert rec.frames == 40
    assert rec.frame_errors == 0
    assert rec.bler == 0.0
    assert rec.ber == 0.0
    assert rec.mean_iters == pytest.approx(2.0)
    assert rec.mean_queries == pytest.approx(2.0)  # immediate hit per pass


def test_run_point_stops_at_error_limit():
    cfg = small_cfg(snr_db=[-5.0], max_frames=5000, max_frame_errors=5, budget=32)
    rec = run_point(cfg, -5.0)
    assert rec.frame_errors == 5
    assert rec.frames < 5000


def test_run_point_zero_frames():
    rec = run_point(small_cfg(max_frames=0), 8.0)
    assert rec.frames == 0
    assert rec.bler == 0.0


def test_run_sweep_csv_roundtrip(tmp_path):
    out = tmp_path / "curve.csv"
    cfg = small_cfg(snr_db=[6.0, 10.0], max_frames=25, out=str(out))
    records = run_sweep(cfg)
    lines = out.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    back = read_records(str(out))
    assert len(back) == 2
    for rec, parsed in zip(records, back):
        assert parsed.snr_db == rec.snr_db
        assert parsed.frames == rec.frames
        assert parsed.frame_errors == rec.frame_errors
        assert parsed.bit_errors == rec.bit_errors
        assert parsed.bler == pytest.approx(rec.bler, rel=1e-6)
        assert parsed.mean_queries == pytest.approx(rec.mean_queries, rel=1e-6)


def test_queries_shrink_with_snr(tmp_path):
    cfg = small_cfg(snr_db=[0.0, 14.0], max_frames=30)
    records = run_sweep(cfg)
    assert records[0].mean_queries > records[1].mean_queries


def test_read_records_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("snr,bler\n1,2\n")
    with pytest.raises(ValueError, match="header"):
        read_records(str(bad))
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ValueError, match="empty"):
        read_records(str(empty))
    short = tmp_path / "short.csv"
    short.write_text(CSV_HEADER + "\n1,2,3\n")
    with pytest.raises(ValueError, match="short.csv:2"):
        read_records(str(short))
    garbled = tmp_path / "garbled.csv"
    garbled.write_text(CSV_HEADER + "\n10,x,0,0,0,0,1,1,0.1\n")
    with pytest.raises(ValueError, match="garbled.csv:2.*frames"):
        read_records(str(garbled))


def test_emit_plot(tmp_path):
    csv = tmp_path / "a.csv"
    csv.write_text(
        CSV_HEADER + "\n"
        "10,100,10,20,0.1,0.002,50,2,0.5\n"
        "12,100,1,2,0.01,0.0002,20,2,0.4\n"
        "14,100,0,0,0,0,4,2,0.3\n"
    )
    out = tmp_path / "curve.svg"
    emit_plot([str(csv)], str(out))
    text = out.read_text()
    assert text.lstrip().startswith("<?xml")
    assert "<svg" in text


def test_parse_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# compare settings\n"
        "decoder = turbo\n"
        "snr=9:1:11  # grid\n"
        "\n"
        "budget = 2000\n"
    )
    assert parse_config_file(str(path)) == {
        "decoder": "turbo",
        "snr": "9:1:11",
        "budget": "2000",
    }
    bad = tmp_path / "bad.cfg"
    bad.write_text("decoder turbo\n")
    with pytest.raises(ValueError, match="bad.cfg:1"):
        parse_config_file(str(bad))


def test_cli_sweep_and_plot(tmp_path):
    csv = tmp_path / "cli.csv"
    rc = main([
        "sweep", "--code", "random:16,8,1", "--channel", "rayleigh",
        "--decoder", "turbo", "--budget", "300", "--snr", "8",
        "--frames", "20", "--errors", "1000", "--seed", "1",
        "--out", str(csv),
    ])
    assert rc == 0
    recs = read_records(str(csv))
    assert len(recs) == 1 and recs[0].frames == 20

    svg = tmp_path / "cli.svg"
    assert main(["plot", str(csv), "--out", str(svg)]) == 0
    assert svg.exists()


def test_cli_config_file_and_flag_precedence(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text(
        "code = random:16,8,1\n"
        "decoder = turbo\n"
        "budget = 300\n"
        "snr = 4\n"
        "frames = 10\n"
        "errors = 1000\n"
    )
    out = tmp_path / "merge.csv"
    rc = main([
        "sweep", "--config", str(cfgfile), "--snr", "7", "--out", str(out),
    ])
    assert rc == 0
    recs = read_records(str(out))
    assert [r.snr_db for r in recs] == [7.0]  # flag beats config file
    assert recs[0].frames == 10               # config file beats default


def test_cli_rejects_bad_input(tmp_path):
    with pytest.raises(SystemExit):
        main(["sweep", "--decoder", "viterbi"])
    rc = main(["sweep", "--code", "random:nope", "--snr", "5"])
    assert rc != 0


def test_config_validation():
    with pytest.raises(ValueError):
        small_cfg(decoder="cyclic").validate()
    with pytest.raises(ValueError):
        small_cfg(detector="mmse").validate()
    with pytest.raises(ValueError):
        small_cfg(channel="rician").validate()
    with pytest.raises(ValueError):
        small_cfg(snr_db=[]).validate()
    with pytest.raises(ValueError):
        small_cfg(max_frames=-1).validate()


def test_single_pass_decoders_run():
    for decoder in ("hard", "orbgrand", "sgrand"):
        cfg = small_cfg(decoder=decoder, budget=2000, snr_db=[12.0], max_frames=15)
        rec = run_point(cfg, 12.0)
        assert rec.frames == 15
        assert rec.mean_iters == pytest.approx(1.0)


def test_ml_detector_path_runs():
    cfg = small_cfg(
        code="random:8,4,2", decoder="sgrand", detector="ml",
        budget=256, snr_db=[10.0], max_frames=10,
    )
    rec = run_point(cfg, 10.0)
    assert rec.frames == 10
