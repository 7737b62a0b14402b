"""
Command line: subcommand output and exit codes.
"""

import json

import pytest
from scipy import special

from hstationary_lab.cli import main, parse_params, parse_vector
from hstationary_lab.errors import ConfigError

QUICK = ["--grid", "5", "--seed", "3", "--single-thread"]


class TestArguments:

    def test_parse_params(self):
        assert parse_params(["a=1.5", "m = 2"]) == {"a": 1.5, "m": 2.0}
        assert parse_params(None) is None

    @pytest.mark.parametrize("item", ["a", "=1", "a=x"])
    def test_bad_params(self, item):
        with pytest.raises(ConfigError):
            parse_params([item])

    def test_parse_vector(self):
        assert parse_vector("0.1,-0.2") == [0.1, -0.2]
        with pytest.raises(ConfigError):
            parse_vector("0.1;0.2")

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["--version"])
        assert info.value.code == 0
        assert "hstationary-lab" in capsys.readouterr().out

    def test_missing_subcommand(self):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 2


class TestCatalog:

    def test_list(self, capsys):
        assert main(["catalog", "list", "--ambient", "flat"]) == 0
        out = capsys.readouterr().out
        assert "c2-torus" in out
        assert "cp2-type1" not in out

    def test_json_manifest(self, capsys):
        assert main(["catalog", "list", "--json", "--dim", "3"]) == 0
        document = json.loads(capsys.readouterr().out)
        assert document["families"]
        assert all(f["n"] == 3 for f in document["families"])

    def test_describe(self, capsys):
        assert main(["catalog", "describe", "c2-torus"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["id"] == "c2-torus"
        assert summary["twistor"] == "exp-wave"

    def test_describe_unknown(self, capsys):
        assert main(["catalog", "describe", "c9-nothing"]) == 2
        assert "error" in capsys.readouterr().err

    def test_describe_needs_id(self):
        assert main(["catalog", "describe"]) == 2


class TestVerify:

    def test_torus(self, capsys):
        assert main(["verify", "c2-torus", "--nested-points", "2", *QUICK]) == 0
        document = json.loads(capsys.readouterr().out)
        assert document["exit_status"] == 0
        assert document["reports"][0]["family"] == "c2-torus"

    def test_negative_control_text(self, capsys):
        assert main(["verify", "c2-control", "--format", "text", "--nested-points", "2", *QUICK]) == 0
        assert "xfail" in capsys.readouterr().out

    def test_report_file(self, tmp_path, capsys):
        out = tmp_path / "torus.json"
        assert main(["verify", "c2-torus", "--param", "a=1.2", "--nested-points", "1", "--out", str(out),
                     *QUICK]) == 0
        document = json.loads(out.read_text())
        assert document["reports"][0]["params"] == {"a": 1.2}
        assert "wrote 1 report(s)" in capsys.readouterr().out

    def test_unknown_family(self):
        assert main(["verify", "c9-nothing", *QUICK]) == 2

    def test_bad_parameter(self):
        assert main(["verify", "c2-torus", "--param", "a", *QUICK]) == 2

    def test_inadmissible_parameter_fails_the_run(self, capsys):
        assert main(["verify", "c2-torus", "--param", "a=-1", *QUICK]) == 1
        document = json.loads(capsys.readouterr().out)
        assert document["reports"][0]["error"].startswith("AdmissibilityError")

    def test_sweep(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"families": ["c2-torus"], "grid": {"count": 4, "seed": 1},
                                      "nested_points": 1}))
        out = tmp_path / "sweep.json"
        assert main(["sweep", "--config", str(config), "--out", str(out), "--single-thread"]) == 0
        assert json.loads(out.read_text())["exit_status"] == 0
        assert "VERIFICATION SWEEP" in capsys.readouterr().out

    def test_sweep_missing_config(self, tmp_path):
        assert main(["sweep", "--config", str(tmp_path / "none.json")]) == 2


class TestOtherCommands:

    def test_twistor_list(self, capsys):
        assert main(["twistor", "list"]) == 0
        assert "sech-wave" in capsys.readouterr().out

    def test_twistor_residual(self, capsys):
        assert main(["twistor", "residual", "--solution", "sech-pair", "--grid", "10"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["solution"] == "sech-pair"

    def test_scaled_twistor_residual(self, capsys):
        assert main(["twistor", "residual", "--solution", "sech-wave", "--grid", "10", "--scale-m", "2",
                     "--scale-mode", "traveling"]) == 0
        assert "curvature" in json.loads(capsys.readouterr().out)["declared"]

    def test_twistor_residual_needs_solution(self):
        assert main(["twistor", "residual"]) == 2

    def test_variation(self, capsys):
        assert main(["variation", "c2-control", "--center", "0.4,0.0", "--radius", "0.3"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["family"] == "c2-control"
        assert abs(result["predicted"]) > 1e-3

    def test_variation_on_a_lift(self):
        assert main(["variation", "cp2-type1", "--center", "0,0", "--radius", "0.3"]) == 2

    def test_bessel(self, capsys):
        assert main(["bessel", "--nu-re", "0.5", "--z", "1.2", "--integral", "1.0"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["J"][0] == pytest.approx(special.jv(0.5, 1.2), abs=1e-12)
        assert out["integral"]["gap"] < 1e-8
