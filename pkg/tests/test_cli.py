import csv
import io
import json
import math
import subprocess
import sys

import pytest

from bicomplex_laplace import RationalFunction
from bicomplex_laplace.cli import fmt, main, parse_grid
from bicomplex_laplace.errors import DomainError, InvalidArgumentError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestHelpers:
    def test_fmt(self):
        assert fmt(-0.0) == "0"
        assert fmt(0.1) == "0.10000000000000001"
        assert float(fmt(math.pi)) == math.pi

    def test_grid(self):
        assert list(parse_grid("0.5:2:0.5")) == [0.5, 1.0, 1.5, 2.0]
        assert len(parse_grid("0.1:5:0.1")) == 50

    @pytest.mark.parametrize("bad", ["0:1:0.1", "-1:1:0.5"])
    def test_grid_nonpositive(self, bad):
        with pytest.raises(DomainError):
            parse_grid(bad)

    @pytest.mark.parametrize("bad", ["1:2", "a:b:c", "1:2:0", "2:1:0.5"])
    def test_grid_malformed(self, bad):
        with pytest.raises(InvalidArgumentError):
            parse_grid(bad)


class TestDecompose:
    def test_e1(self, capsys):
        code, out, _ = run(capsys, "decompose", "0.5,0,0,0.5")
        d = {r["field"]: r["value"] for r in rows(out)}
        assert code == 0
        assert d["xi1"] == "1+0i" and d["xi2"] == "0+0i" and d["singular"] == "true"

    def test_one(self, capsys):
        code, out, _ = run(capsys, "decompose", "1,0,0,0")
        d = {r["field"]: r["value"] for r in rows(out)}
        assert d["xi1"] == d["xi2"] == "1+0i"
        assert d["singular"] == "false" and d["norm"] == "1"

    def test_json(self, capsys):
        code, out, _ = run(capsys, "decompose", "1,1,1,1", "--format", "json")
        doc = json.loads(out)
        assert doc["norm"] == 2.0
        # xi1 = (1+i) - i(1+i) = 2, xi2 = (1+i) + i(1+i) = 2i
        assert doc["idempotent"] == {"xi1": [2.0, 0.0], "xi2": [0.0, 2.0]}

    def test_negative_literal(self, capsys):
        code, out, _ = run(capsys, "decompose", "--", "-1,0,0,0")
        assert code == 0 and "a0,-1" in out

    @pytest.mark.parametrize("bad", ["1,2,3", "x,0,0,0"])
    def test_parse_failure(self, capsys, bad):
        code, _, err = run(capsys, "decompose", bad)
        assert code == 2 and "error" in err

    def test_out_file(self, capsys, tmp_path):
        p = tmp_path / "d.csv"
        code, out, _ = run(capsys, "decompose", "1,0,0,0", "--out", str(p))
        assert code == 0 and out == ""
        assert p.read_text().startswith("field,value\n")


class TestLaplace:
    def test_catalog_signal(self, capsys):
        code, out, _ = run(capsys, "laplace", "--signal", "sin", "--xi", "1,0,0,0", "--xi", "2,0.5,0.1,0")
        assert code == 0
        r = rows(out)
        assert abs(float(r[0]["a0"]) - 0.5) <= 1e-8
        assert all(x["status"] == "ok" for x in r)

    def test_out_of_region_partial(self, capsys):
        code, out, err = run(capsys, "laplace", "--signal", "unit_step", "--xi", "2,0,0,0", "--xi=1,0,0,-1")
        assert code == 1
        r = rows(out)
        assert r[0]["status"] == "ok" and r[1]["status"] == "ConvergenceRegionError"
        assert "ConvergenceRegionError" in err

    def test_samples(self, capsys, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("t,f\n0,1\n1,1\n2,1\n")
        code, out, _ = run(capsys, "laplace", "--samples", str(p), "--order-k", "0", "--xi", "2,0,0,0")
        assert code == 0 and abs(float(rows(out)[0]["a0"]) - 0.5) <= 1e-8

    def test_samples_need_k(self, capsys, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("t,f\n0,1\n1,1\n")
        code, _, _ = run(capsys, "laplace", "--samples", str(p), "--xi", "2,0,0,0")
        assert code == 2

    def test_json(self, capsys):
        code, out, _ = run(capsys, "laplace", "--signal", "unit_step", "--xi", "2,0,0,0", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc[0]["status"] == "ok"

    def test_missing_signal(self, capsys):
        code, _, _ = run(capsys, "laplace", "--xi", "2,0,0,0")
        assert code == 2


class TestInvert:
    def test_unit_step(self, capsys):
        code, out, _ = run(capsys, "invert", "--pair", "unit_step", "--grid", "0.5:2:0.5")
        r = rows(out)
        assert code == 0 and len(r) == 4
        assert list(r[0]) == ["t", "f", "reality_defect", "refinements"]
        assert all(abs(float(x["f"]) - 1) <= 1e-12 for x in r)

    def test_sin_residue(self, capsys):
        code, out, _ = run(capsys, "invert", "--pair", "sin", "--omega", "2", "--grid", "0.1:3:0.1",
                           "--method", "residue")
        r = rows(out)
        assert code == 0 and len(r) == 30
        assert max(abs(float(x["f"]) - math.sin(2 * float(x["t"]))) for x in r) <= 1e-9

    def test_bromwich(self, capsys):
        code, out, _ = run(capsys, "invert", "--pair", "cos", "--grid", "0.5:1:0.5", "--method", "bromwich")
        r = rows(out)
        assert code == 0 and all(int(x["refinements"]) >= 1 for x in r)
        assert abs(float(r[1]["f"]) - math.cos(1.0)) <= 1e-4

    def test_t_zero(self, capsys):
        code, _, err = run(capsys, "invert", "--pair", "unit_step", "--grid", "0:1:0.1")
        assert code == 2

    def test_numeric_failure(self, capsys):
        code, out, _ = run(capsys, "invert", "--pair", "unit_step", "--grid", "1:2:1", "--method", "bromwich",
                           "--tol", "1e-300", "--max-refinements", "1")
        assert code == 1
        assert len(rows(out)) == 2

    def test_rational_files(self, capsys, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        p1.write_text(RationalFunction([1], [1, 2, 1]).to_json())
        p2.write_text(RationalFunction([1], [1, 2, 1]).to_json())
        code, out, _ = run(capsys, "invert", "--rational-xi1", str(p1), "--rational-xi2", str(p2),
                           "--grid", "1:2:1")
        r = rows(out)
        assert code == 0
        assert abs(float(r[1]["f"]) - 2 * math.exp(-2)) <= 1e-12

    def test_bad_rational_file(self, capsys, tmp_path):
        p = tmp_path / "a.json"
        p.write_text('{"num": 1}')
        code, _, _ = run(capsys, "invert", "--rational-xi1", str(p), "--grid", "1:2:1")
        assert code == 2

    def test_pair_and_files_conflict(self, capsys, tmp_path):
        p = tmp_path / "a.json"
        p.write_text(RationalFunction([1], [0, 1]).to_json())
        code, _, _ = run(capsys, "invert", "--pair", "sin", "--rational-xi1", str(p), "--grid", "1:2:1")
        assert code == 2

    def test_json(self, capsys):
        code, out, _ = run(capsys, "invert", "--pair", "unit_step", "--grid", "1:2:1", "--format", "json")
        doc = json.loads(out)
        assert [d["t"] for d in doc] == [1.0, 2.0]
        assert set(doc[0]) == {"t", "f", "reality_defect", "refinements"}

    def test_unknown_pair_is_usage(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["invert", "--pair", "tan", "--grid", "1:2:1"])
        assert info.value.code == 2

    def test_invalid_config_value(self, capsys):
        code, _, _ = run(capsys, "invert", "--pair", "sin", "--grid", "1:2:1", "--step", "-1",
                         "--method", "bromwich")
        assert code == 2


class TestConfig:
    def test_config_then_flag(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"grid": "1:3:1", "format": "json"}))
        code, out, _ = run(capsys, "invert", "--pair", "unit_step", "--config", str(cfg))
        assert code == 0 and len(json.loads(out)) == 3
        code, out, _ = run(capsys, "invert", "--pair", "unit_step", "--config", str(cfg), "--grid", "1:2:1",
                           "--format", "csv")
        assert code == 0 and len(rows(out)) == 2

    def test_bad_config(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text("[1, 2]")
        code, _, _ = run(capsys, "decompose", "1,0,0,0", "--config", str(cfg))
        assert code == 2

    def test_missing_config(self, capsys, tmp_path):
        code, _, _ = run(capsys, "decompose", "1,0,0,0", "--config", str(tmp_path / "nope.json"))
        assert code == 2


class TestPairs:
    def test_single_entry(self, capsys):
        code, out, _ = run(capsys, "pairs", "--pairs", "damped_sin", "--grid", "0.5:2:0.5")
        r = rows(out)
        assert code == 0
        assert {x["pair"] for x in r} == {"damped_sin"}
        assert len(r) == 8 and all(x["status"] == "PASS" for x in r)

    def test_tiny_tol_fails(self, capsys):
        code, out, _ = run(capsys, "pairs", "--pairs", "sin", "cos", "--grid", "0.5:2:0.5", "--tol", "1e-15",
                           "--omegas", "1")
        r = rows(out)
        assert code == 1
        # the residue sums land within a few ulps, so only quadrature rows trip 1e-15
        assert all(x["status"] == "FAIL" for x in r if x["method"] == "bromwich")
        assert all(float(x["max_abs_error"]) <= 1e-15 for x in r if x["method"] == "residue")

    def test_json(self, capsys):
        code, out, _ = run(capsys, "pairs", "--pairs", "unit_step", "--grid", "1:2:1", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and [d["method"] for d in doc] == ["residue", "bromwich"]

    def test_unknown_id(self, capsys):
        code, _, _ = run(capsys, "pairs", "--pairs", "tan")
        assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bicomplex_laplace", "decompose", "1,0,0,0"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0 and "singular,false" in proc.stdout


def test_no_command_is_usage():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
