import json

import jsonschema
import pytest

from nbody_galois import cli
from nbody_galois.report import load_schema


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def validate(text):
    d = json.loads(text)
    jsonschema.validate(d, load_schema())
    return d


def test_central_config_equal_masses(capsys):
    code, out, _ = run(capsys, "central-config", "--masses", "1,1,1")
    assert code == 0
    d = validate(out)
    a = (5 / 4) ** (1 / 3)
    xs = d["config"]["x"]
    assert xs == pytest.approx([-a, 0.0, a], abs=1e-12)
    assert d["report_version"] == 1


def test_negative_mass_is_input_error(capsys):
    code, _, err = run(capsys, "central-config", "--masses", "1,-1,1")
    assert code == 1
    assert "masses must be positive" in err


def test_two_body_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--masses", "1,1")
    assert code == 0
    d = validate(out)
    assert d["spectrum"]["lambdas"] == pytest.approx([1.0, 0.0], abs=1e-12)
    assert any("no delta" in n for n in d["spectrum"]["notes"])


def test_analyze_exit_codes(capsys):
    code, out, _ = run(capsys, "analyze", "--masses", "1,1,1", "--h", "-0.375", "--c", "1")
    assert code == 0 and validate(out)["overall"] == "NotIntegrableOnLevel"
    code, out, _ = run(capsys, "analyze", "--masses", "1,2,3", "--h", "1", "--c", "0")
    assert code == 0 and validate(out)["overall"] == "OutOfScope"
    code, out, _ = run(capsys, "analyze", "--masses", "1,1,1", "--h", "-1", "--c", "1")
    assert code == 2 and validate(out)["overall"] == "Inconclusive"


@pytest.mark.parametrize("argv", [
    ["analyze", "--masses", "1,1", "--h", "-1/2", "--c", "1"],
    ["analyze", "--masses", "1,1,1", "--c", "1"],
    ["analyze", "--masses", "1,1,1", "--h", "abc", "--c", "1"],
    ["analyze", "--masses", "1,1,1", "--h", "-1/2", "--c", "1", "--ordering", "1,1,2"],
    ["verify", "--only", "nonsense"],
])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_byte_identical_reports(capsys):
    argv = ["analyze", "--masses", "1,1,1", "--h", "-3/8", "--c", "1", "--seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_input_file_and_flag_override(capsys, tmp_path):
    f = tmp_path / "req.json"
    f.write_text(json.dumps({"masses": [1, 1, 1], "h": "-3/8", "c": "1", "output_format": "json"}))
    code, out, _ = run(capsys, "analyze", "--input", str(f))
    assert code == 0 and validate(out)["overall"] == "NotIntegrableOnLevel"
    code, out, _ = run(capsys, "analyze", "--input", str(f), "--c", "0")
    assert validate(out)["overall"] == "OutOfScope"


def test_markdown_output(capsys):
    code, out, _ = run(capsys, "analyze", "--masses", "1,1,1", "--h", "-1/2", "--c", "1", "--format", "md")
    assert code == 0
    assert out.startswith("#") and "NotIntegrableOnLevel" in out


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    d = validate(out)
    assert d["passed"]


def test_verify_only_gauge(capsys):
    code, out, _ = run(capsys, "verify", "--only", "gauge")
    assert code == 0
    d = validate(out)
    assert {c["suite"] for c in d["checks"]} == {"gauge"}


def test_verify_perturbed_hessian_fails(capsys):
    code, _, err = run(capsys, "verify", "--perturb-hessian", "1e-3")
    assert code == 3
    assert "invariant failed" in err
