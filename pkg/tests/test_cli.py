import json
import math

import numpy as np
import pytest

from mparray.cli import _read_weights, main

PASS_EDGE = math.pi * math.sin(0.2182)
STOP_EDGE = math.pi * math.sin(math.pi / 3.0)


def write_spec(path, *, angle_unit="u_rad", spacing=0.5, steering=0.0,
               bands=None, name="lowpass"):
    if bands is None:
        bands = [
            {"u_lo": 0.0, "u_hi": PASS_EDGE, "kind": "pass", "ripple_db": 0.25},
            {"u_lo": STOP_EDGE, "u_hi": math.pi, "kind": "stop",
             "max_level_db": -52.0},
        ]
    path.write_text(json.dumps({
        "name": name,
        "spacing_wavelengths": spacing,
        "angle_unit": angle_unit,
        "steering_angle_rad": steering,
        "bands": bands,
    }))


def read_report(out):
    return json.loads((out / "report.json").read_text())


def test_design_writes_artifacts(tmp_path):
    spec = tmp_path / "spec.json"
    write_spec(spec)
    out = tmp_path / "out"
    assert main(["design", "--spec", str(spec), "--out", str(out)]) == 0

    for name in ("weights.csv", "pattern.csv", "zeros.csv", "report.json"):
        assert (out / name).exists()
    report = read_report(out)
    assert report["element_count"] == 6
    assert report["feasible"] is True
    assert report["min_phase"] is True
    assert report["max_sidelobe_db"] <= -52.0
    assert len(_read_weights(out / "weights.csv")) == 6

    header = (out / "pattern.csv").read_text().splitlines()[0]
    assert header == "u_rad,theta_deg,magnitude_db"


def test_design_runs_are_deterministic(tmp_path):
    spec = tmp_path / "spec.json"
    write_spec(spec)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["design", "--spec", str(spec), "--out", str(out1)]) == 0
    assert main(["design", "--spec", str(spec), "--out", str(out2)]) == 0
    for name in ("weights.csv", "pattern.csv", "zeros.csv", "report.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_degree_bands_match_u_bands(tmp_path):
    u_spec, deg_spec = tmp_path / "u.json", tmp_path / "deg.json"
    write_spec(u_spec)
    write_spec(deg_spec, angle_unit="theta_deg", bands=[
        {"u_lo": 0.0, "u_hi": math.degrees(0.2182), "kind": "pass",
         "ripple_db": 0.25},
        {"u_lo": 60.0, "u_hi": 90.0, "kind": "stop", "max_level_db": -52.0},
    ])
    out_u, out_deg = tmp_path / "u", tmp_path / "deg"
    assert main(["design", "--spec", str(u_spec), "--out", str(out_u)]) == 0
    assert main(["design", "--spec", str(deg_spec), "--out", str(out_deg)]) == 0
    cu = _read_weights(out_u / "weights.csv")
    cd = _read_weights(out_deg / "weights.csv")
    assert cd == pytest.approx(cu, abs=1e-9)


def test_invalid_spec_exits_one(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    write_spec(spec, bands=[
        {"u_lo": 0.0, "u_hi": 1.0, "kind": "pass", "ripple_db": 0.25},
        {"u_lo": 1.5, "u_hi": 2.0, "kind": "pass", "ripple_db": 0.25},
    ])
    assert main(["design", "--spec", str(spec), "--out", str(tmp_path / "o")]) == 1
    assert "error:" in capsys.readouterr().err


def test_missing_and_malformed_inputs_exit_one(tmp_path):
    out = str(tmp_path / "o")
    assert main(["design", "--spec", str(tmp_path / "nope.json"),
                 "--out", out]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["design", "--spec", str(bad), "--out", out]) == 1


def test_usage_errors_exit_one():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_unreachable_bands_write_best_attempt(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    write_spec(spec)
    out = tmp_path / "out"
    code = main(["design", "--spec", str(spec), "--out", str(out), "--max-n", "3"])
    assert code == 2
    assert "bands unmet" in capsys.readouterr().err
    report = read_report(out)
    assert report["feasible"] is False
    assert report["element_count"] == 3
    assert report["witness"]
    assert len(_read_weights(out / "weights.csv")) == 3


def test_reproduce_design1_passes(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["reproduce", "design1", "--out", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert all(line.startswith("PASS") for line in lines)
    assert any("element count" in line for line in lines)
    assert any("minimum phase" in line for line in lines)
    assert read_report(out)["element_count"] == 6


def test_reproduce_design3_checks_real_weights(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["reproduce", "design3", "--out", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert any(line.startswith("PASS") and "weights real" in line
               for line in lines)
    c = _read_weights(out / "weights.csv")
    assert c.dtype == np.float64  # imaginary parts all exactly zero
    assert np.min(c) < 0.0


def test_reproduce_pencil_reports_sidelobe_shortfall(tmp_path, capsys):
    out = tmp_path / "out"
    # 27 elements cannot reach -30 dB; the run must say so, not hide it.
    assert main(["reproduce", "pencil", "--out", str(out)]) == 2
    lines = capsys.readouterr().out.splitlines()
    assert any(line.startswith("PASS") and "element count" in line
               for line in lines)
    assert any(line.startswith("PASS") and "unit circle" in line
               for line in lines)
    assert any(line.startswith("FAIL") and "-30 dB" in line for line in lines)
    assert read_report(out)["element_count"] == 27


def test_analyze_round_trips_design_artifacts(tmp_path):
    spec = tmp_path / "spec.json"
    write_spec(spec)
    out, out2 = tmp_path / "out", tmp_path / "out2"
    assert main(["design", "--spec", str(spec), "--out", str(out)]) == 0
    assert main(["analyze", "--weights", str(out / "weights.csv"),
                 "--spec", str(spec), "--out", str(out2)]) == 0
    designed, analyzed = read_report(out), read_report(out2)
    for key in ("name", "element_count", "bands", "max_sidelobe_db",
                "flattop_ripple_db", "min_phase", "zero_max_radius"):
        assert analyzed[key] == designed[key]


def test_analyze_without_spec_flags_max_phase(tmp_path, capsys):
    weights = tmp_path / "weights.csv"
    weights.write_text("index,re,im\n0,0.5,0.0\n1,1.0,0.0\n")
    out = tmp_path / "out"
    assert main(["analyze", "--weights", str(weights), "--out", str(out)]) == 0
    assert "not minimum phase (1 zeros outside)" in capsys.readouterr().out
    report = read_report(out)
    assert report["min_phase"] is False
    assert report["zero_max_radius"] == pytest.approx(2.0)


def test_analyze_rejects_bad_weights_header(tmp_path, capsys):
    weights = tmp_path / "weights.csv"
    weights.write_text("re,im\n0.5,0.0\n")
    assert main(["analyze", "--weights", str(weights),
                 "--out", str(tmp_path / "o")]) == 1
    assert "index,re,im" in capsys.readouterr().err


def test_steered_design_writes_complex_weights(tmp_path):
    spec = tmp_path / "spec.json"
    write_spec(spec, steering=0.3)
    out = tmp_path / "out"
    assert main(["design", "--spec", str(spec), "--out", str(out)]) == 0
    c = _read_weights(out / "weights.csv")
    assert np.iscomplexobj(c)
    assert np.max(np.abs(c.imag)) > 0.0
    report = read_report(out)
    assert report["steering_angle_rad"] == pytest.approx(0.3)
    assert report["min_phase"] is True


def test_pattern_marks_invisible_angles(tmp_path):
    spec = tmp_path / "spec.json"
    write_spec(spec, spacing=0.25, bands=[
        {"u_lo": 0.0, "u_hi": 0.5, "kind": "pass", "ripple_db": 1.0},
        {"u_lo": 1.0, "u_hi": 1.5, "kind": "stop", "max_level_db": -25.0},
    ])
    out = tmp_path / "out"
    assert main(["design", "--spec", str(spec), "--out", str(out),
                 "--no-newton"]) == 0
    assert read_report(out)["refined"] is False
    rows = (out / "pattern.csv").read_text().splitlines()[1:]
    thetas = [r.split(",")[1] for r in rows]
    assert "nan" in thetas  # u beyond the visible region of 0.25-lambda spacing
    visible = [t for t in thetas if t != "nan"]
    assert visible and all(-90.0 <= float(t) <= 90.0 for t in visible)
