import json
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from minflow.cli import ConfigError, build_scenario, emit_csv, main, read_csv, verify_report

DEMO = Path(__file__).resolve().parents[1] / "demos" / "scenario.json"


def base_config(queries):
    return {
        "schema_version": 1,
        "seed": 3,
        "basis": {"generators": [
            {"name": "s", "refiner": "sqrt 2", "enclosure": ["1.414", "1.415"], "quadratic_closure": True},
            {"name": "u", "refiner": "sqrt 3"},
        ]},
        "systems": {"rot": {"kind": "rotation", "s": "s"}, "odo": {"kind": "odometer", "digits": [2, 2, 3]}},
        "ceilings": {"one": {"variant": "constant", "value": "1"}},
        "flows": {"R": {"system": "rot", "ceiling": "one"}, "O": {"system": "odo", "ceiling": "one"}},
        "queries": queries,
    }


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


def strip_clock(obj):
    if isinstance(obj, dict):
        return {k: strip_clock(v) for k, v in obj.items() if k != "wall_clock_s"}
    if isinstance(obj, list):
        return [strip_clock(v) for v in obj]
    return obj


def test_single_decide_smoke(tmp_path, capsys):
    cfg = write(tmp_path, base_config([{"id": "d", "op": "decide", "flow": "R", "rho": "3/2 + 2*s"}]))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
    rep = json.loads((tmp_path / "out" / "report.json").read_text())
    assert rep["schema_version"] == 1
    rec = rep["records"][0]
    assert rec["verdict"] == "NotMinimal"
    assert rec["certificate"]["r"] == "1/2"
    assert rec["certificate"]["lambda"] == {"1": "3/1", "s": "4/1"}


def test_undeclared_generator_exit_2(tmp_path, capsys):
    cfg = write(tmp_path, base_config([{"id": "d", "op": "decide", "flow": "R", "rho": "1 + w"}]))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 2
    err = capsys.readouterr().err
    assert "'w'" in err and "queries[0].rho" in err


@pytest.mark.parametrize("mutate, field", [
    (lambda c: c["flows"]["R"].update(system="nope"), "flows.R.system"),
    (lambda c: c["queries"].append({"id": "x", "op": "frobnicate", "flow": "R"}), "queries[0].op"),
    (lambda c: c["queries"].append({"id": "x", "op": "decide", "flow": "R"}), "queries[0]"),
    (lambda c: c["queries"].append({"id": "x", "op": "decompose", "flow": "R", "t": 1.5}), "queries[0].t"),
    (lambda c: c["queries"].append({"id": "x", "op": "realize-clopen", "system": "rot", "gamma": "1/2"}),
     "queries[0].system"),
    (lambda c: c["basis"]["generators"].append({"name": "v", "refiner": "opaque"}), "basis.generators[2].enclosure"),
    (lambda c: c["basis"]["generators"][0].update(enclosure=["1.5", "1.6"]), "basis.generators[0].enclosure"),
    (lambda c: c["ceilings"].update(bad={"variant": "trig", "constant": "1", "terms": [[1, 2, 0]]}), "ceilings.bad"),
])
def test_validation_names_the_field(mutate, field):
    cfg = base_config([])
    mutate(cfg)
    if field == "ceilings.bad":
        cfg["flows"]["W"] = {"system": "rot", "ceiling": "bad"}
        field = "flows.W"
    with pytest.raises(ConfigError) as e:
        build_scenario(cfg)
    assert str(e.value).startswith(field)


def test_malformed_json_reports_position(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "basis": {,}\n}')
    assert main(["run", "--config", str(p)]) == 2
    assert "bad.json:2:" in capsys.readouterr().err


def test_runtime_error_exit_1_names_query(tmp_path, capsys):
    cfg = write(tmp_path, base_config([
        {"id": "fine", "op": "decide", "flow": "R", "rho": "1"},
        {"id": "broken", "op": "decompose", "flow": "R", "t": "u"},
    ]))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1
    assert "broken" in capsys.readouterr().err
    rep = json.loads((tmp_path / "o" / "report.json").read_text())
    assert [r["status"] for r in rep["records"]] == ["ok", "error"]


def test_unknown_verdict_still_exits_0(tmp_path, capsys):
    cfg = base_config([{"id": "fu", "op": "decide", "flow": "F", "rho": "1"}])
    cfg["systems"]["fur"] = {"kind": "furstenberg", "theta": "s", "n": 1}
    cfg["flows"]["F"] = {"system": "fur", "ceiling": "one"}
    assert main(["run", "--config", str(write(tmp_path, cfg)), "--out", str(tmp_path / "o")]) == 0
    assert "flagged fu" in capsys.readouterr().out
    rep = json.loads((tmp_path / "o" / "report.json").read_text())
    assert rep["records"][0]["status"] == "unknown" and rep["summary"]["unknown"] == 1


def test_hundred_decides_keep_order_and_reproduce(tmp_path):
    queries = [{"id": f"q{i:03d}", "op": "decide", "flow": "R" if i % 2 else "O",
                "rho": f"{i + 1}/{1 + i % 5} + {i % 3}*s" if i % 7 else "u"} for i in range(100)]
    cfg = write(tmp_path, base_config(queries))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "a")]) == 0
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "b"), "--threads", "4"]) == 0
    a = json.loads((tmp_path / "a" / "report.json").read_text())
    b = json.loads((tmp_path / "b" / "report.json").read_text())
    assert [r["id"] for r in a["records"]] == [q["id"] for q in queries]
    assert strip_clock(a) == strip_clock(b)
    assert main(["verify-report", str(tmp_path / "a" / "report.json")]) == 0


def test_demo_scenario_reproduces_and_verifies(tmp_path, capsys):
    outs = []
    for name in ("x", "y"):
        assert main(["run", "--config", str(DEMO), "--out", str(tmp_path / name), "--seed", "11"]) == 0
        outs.append(json.loads((tmp_path / name / "report.json").read_text()))
    assert strip_clock(outs[0]) == strip_clock(outs[1])
    assert outs[0]["seed"] == 11
    for csv_name in ("cover-nonmin-coverage.csv", "detect-s-detector.csv"):
        assert (tmp_path / "x" / csv_name).read_bytes() == (tmp_path / "y" / csv_name).read_bytes()
    failures, lines = verify_report(tmp_path / "x" / "report.json")
    assert failures == 0 and len(lines) == len(outs[0]["records"])


def test_verify_report_catches_tampering(tmp_path):
    cfg = write(tmp_path, base_config([{"id": "d", "op": "decide", "flow": "R", "rho": "3/2 + 2*s"}]))
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")])
    path = tmp_path / "o" / "report.json"
    rep = json.loads(path.read_text())
    rep["records"][0]["certificate"]["r"] = "1/3"
    path.write_text(json.dumps(rep))
    assert main(["verify-report", str(path)]) == 1


def test_list_catalog(capsys):
    assert main(["list-catalog"]) == 0
    out = capsys.readouterr().out
    for kind in ("rotation", "odometer", "denjoy", "declared"):
        assert f"system {kind}" in out
    assert "query conjugacy-check" in out


def test_emit_csv_empty(tmp_path):
    p = emit_csv(tmp_path / "e.csv", [])
    assert p.read_bytes() == b"checkpoint,value\n"


def test_emit_csv_five_checkpoints(tmp_path):
    p = emit_csv(tmp_path / "c.csv", [(n, n / 10) for n in (1, 10, 100, 1000, 10000)])
    text = p.read_text(encoding="utf-8")
    assert text.endswith("\n") and len(text.splitlines()) == 6


@given(st.lists(st.tuples(st.integers(0, 10**9), st.fractions(max_denominator=10**6)), max_size=20))
def test_csv_round_trip_rationals(series):
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        p = emit_csv(Path(d) / "r.csv", series)
        back = read_csv(p)
    assert back == [(cp, F(v)) for cp, v in series]
    assert all(isinstance(v, F) for _, v in back)


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), max_size=10))
def test_csv_round_trip_floats(values):
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        back = read_csv(emit_csv(Path(d) / "f.csv", list(enumerate(values))))
    assert [v for _, v in back] == values
