"""Serialization formats and the command-line front end."""
import json
import math

import pytest

import mutdyn.acceptance
from mutdyn.cli import main
from mutdyn.errors import DomainError
from mutdyn.export import export_csv, export_json, fmt_float, parse_scan_json
from mutdyn.orbits import OrbitKind, StartPolicy, iterate_orbit, scan_grid
from mutdyn.params import Params


def test_fmt_float_cases():
    assert fmt_float(0.1) == "0.1"
    assert fmt_float(2.0) == "2"
    assert fmt_float(-3.5) == "-3.5"
    assert fmt_float(-0.0) == "0"
    assert fmt_float(1e20) == "1e+20"
    assert fmt_float(math.nan) == "nan"
    assert fmt_float(math.inf) == "inf"
    assert fmt_float(-math.inf) == "-inf"
    assert float(fmt_float(0.30000000000000004)) == 0.30000000000000004


def test_csv_golden_tropical():
    orbit = iterate_orbit(Params(1, 1), OrbitKind.TROPICAL, (1, 0), 1)
    assert export_csv(orbit) == "step,s,t,phi\n0,1,0,1\n1,0,-1,1\n"


def test_csv_golden_rational():
    orbit = iterate_orbit(Params(1, 1), OrbitKind.RATIONAL, (1, 1), 5)
    assert export_csv(orbit) == (
        "step,x,y\n0,1,1\n1,2,3\n2,2,1\n3,1,2\n4,3,2\n5,1,1\n"
    )


def test_json_is_valid_deterministic_and_ordered():
    orbit = iterate_orbit(Params(1.3, 0.8), OrbitKind.TROPICAL, (0.4, -1.1), 12)
    text = export_json(orbit)
    assert text == export_json(orbit)
    assert text.endswith("\n")
    doc = json.loads(text)
    assert list(doc.keys()) == [
        "kind", "params", "start", "requested_steps",
        "truncated_at", "truncation_reason", "points", "diagnostics",
    ]
    assert list(doc["diagnostics"].keys()) == [
        "log_radius", "phi", "polar_angle", "sign_pairs",
    ]
    assert doc["kind"] == "tropical"
    assert len(doc["points"]) == 13


def test_json_rational_orbit_has_no_tropical_diagnostics():
    orbit = iterate_orbit(Params(1, 1), OrbitKind.RATIONAL, (1, 1), 4)
    doc = json.loads(export_json(orbit))
    assert list(doc["diagnostics"].keys()) == ["log_radius"]


def test_json_quotes_non_finite_diagnostics():
    orbit = iterate_orbit(Params(3, 3), OrbitKind.TROPICAL, (1, 1), 300)
    text = export_json(orbit)
    doc = json.loads(text)
    quoted = [v for v in doc["diagnostics"]["phi"] if isinstance(v, str)]
    assert quoted
    assert all(v in ("nan", "inf", "-inf") for v in quoted)


def test_json_rejects_unsupported_objects():
    with pytest.raises(DomainError):
        export_json(42)


def test_scan_json_roundtrip():
    table = scan_grid((0.5, 1.5), (0.5, 1.5), 2, OrbitKind.TROPICAL, 60,
                      StartPolicy(seed=11, count=2))
    assert parse_scan_json(export_json(table)) == table


def test_scan_json_rejects_bad_documents():
    for bad in ("{}", "[1, 2", '{"kind": "rational", "steps": 1, '
                '"p_values": [], "q_values": [], "cells": 5}'):
        with pytest.raises(DomainError):
            parse_scan_json(bad)


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_trop_orbit_csv_golden(capsys):
    code, out, err = _run(capsys, [
        "trop-orbit", "--p", "1", "--q", "1", "--s0", "1", "--t0", "0", "--steps", "1",
    ])
    assert code == 0
    assert out == "step,s,t,phi\n0,1,0,1\n1,0,-1,1\n"
    assert err == ""


def test_cli_orbit_json(capsys):
    code, out, _ = _run(capsys, [
        "orbit", "--p", "1", "--q", "1", "--x0", "1", "--y0", "1",
        "--steps", "5", "--format", "json",
    ])
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "rational"
    assert doc["points"][-1] == [1, 1]


def test_cli_svg_output_is_deterministic(capsys):
    argv = ["trop-orbit", "--p", "1", "--q", "1", "--s0", "1", "--t0", "0",
            "--steps", "3", "--format", "svg"]
    code, first, _ = _run(capsys, argv)
    assert code == 0
    assert first.startswith("<svg xmlns=")
    code, second, _ = _run(capsys, argv)
    assert first == second


def test_cli_out_writes_file(capsys, tmp_path):
    target = tmp_path / "orbit.csv"
    code, out, _ = _run(capsys, [
        "trop-orbit", "--p", "1", "--q", "1", "--s0", "1", "--t0", "0",
        "--steps", "1", "--out", str(target),
    ])
    assert code == 0
    assert out == ""
    assert target.read_text() == "step,s,t,phi\n0,1,0,1\n1,0,-1,1\n"


def test_cli_truncated_orbit_exits_two_with_prefix(capsys):
    code, out, err = _run(capsys, [
        "orbit", "--p", "4", "--q", "4", "--x0", "1e80", "--y0", "1e80", "--steps", "5",
    ])
    assert code == 2
    assert out == "step,x,y\n0,1e+80,1e+80\n"
    assert "left float range at step 1" in err


def test_cli_period(capsys):
    code, out, _ = _run(capsys, ["period", "--p", "1", "--q", "1", "--s0", "1", "--t0", "0"])
    assert code == 0 and out == "5\n"
    code, out, _ = _run(capsys, ["period", "--p", "2", "--q", "2", "--s0", "1", "--t0", "0",
                                 "--max-steps", "200"])
    assert code == 0 and out == "none\n"


def test_cli_usage_errors(capsys):
    for argv in ([], ["orbit", "--p", "1"], ["nope"], ["orbit", "--p", "x"]):
        code, _, err = _run(capsys, argv)
        assert code == 1
        assert err.startswith("usage error:")


def test_cli_domain_error_exits_one(capsys):
    code, _, err = _run(capsys, [
        "orbit", "--p", "1", "--q", "1", "--x0", "-1", "--y0", "1", "--steps", "5",
    ])
    assert code == 1
    assert err.startswith("error:")


def test_cli_scan_config_and_overrides(capsys, tmp_path):
    cfg = tmp_path / "scan.cfg"
    cfg.write_text(
        "# grid under test\n"
        "p-min = 0.5\np-max = 1.5\nq-min = 0.5\nq-max = 1.5\n"
        "resolution = 3\nsteps = 60\nkind = tropical\nseed = 3\ncount = 2\n"
    )
    code, out, _ = _run(capsys, ["scan", "--config", str(cfg), "--resolution", "2"])
    assert code == 0
    table = parse_scan_json(out)
    assert len(table.p_values) == 2
    assert table.kind is OrbitKind.TROPICAL
    assert table.steps == 60
    code, again, _ = _run(capsys, ["scan", "--config", str(cfg), "--resolution", "2"])
    assert again == out


def test_cli_scan_config_errors(capsys, tmp_path):
    bad_key = tmp_path / "a.cfg"
    bad_key.write_text("p-mni = 0.5\n")
    code, _, err = _run(capsys, ["scan", "--config", str(bad_key)])
    assert code == 1 and "unknown key" in err
    bad_val = tmp_path / "b.cfg"
    bad_val.write_text("resolution = abc\n")
    code, _, err = _run(capsys, ["scan", "--config", str(bad_val)])
    assert code == 1 and "bad value" in err
    no_eq = tmp_path / "c.cfg"
    no_eq.write_text("resolution\n")
    code, _, err = _run(capsys, ["scan", "--config", str(no_eq)])
    assert code == 1 and "key=value" in err


def test_cli_levelset_formats(capsys):
    code, out, _ = _run(capsys, [
        "levelset", "--p", "1", "--q", "1", "--level", "1", "--samples", "16",
    ])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "piece,index,s,t"
    assert len(lines) == 1 + 2 * 16
    code, out, _ = _run(capsys, [
        "levelset", "--p", "1", "--q", "1", "--level", "1", "--samples", "16",
        "--format", "json",
    ])
    doc = json.loads(out)
    assert doc["level"] == 1
    assert len(doc["pieces"]) == 2
    code, _, err = _run(capsys, [
        "levelset", "--p", "1", "--q", "1", "--level", "-1",
    ])
    assert code == 1 and err.startswith("error:")


def test_cli_matclass(capsys):
    code, out, _ = _run(capsys, ["matclass", "--p", "1", "--q", "1", "--rows", "1,0"])
    assert code == 0
    assert json.loads(out) == {"size": 10, "complete": True}
    code, out, _ = _run(capsys, [
        "matclass", "--p", "1", "--q", "1", "--rows", "1,0", "--negated", "--full",
    ])
    doc = json.loads(out)
    assert doc["size"] == 10 and len(doc["matrices"]) == 10
    code, _, err = _run(capsys, ["matclass", "--p", "1", "--q", "1", "--rows", "1"])
    assert code == 1 and err.startswith("error:")


def test_cli_verify_reports_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(mutdyn.acceptance, "run_all", lambda: False)
    assert main(["verify"]) == 1
    monkeypatch.setattr(mutdyn.acceptance, "run_all", lambda: True)
    assert main(["verify"]) == 0
    capsys.readouterr()
