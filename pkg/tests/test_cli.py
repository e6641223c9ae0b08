import json
import subprocess
import sys

import pytest

from novikov.cli import run
from novikov.generate import GeneratorParams, gen_random
from novikov.scenario import bundled_fixtures, load_text, parse_scenario, serialize_scenario


def cli(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_novikov_e1(capsys):
    code, out, _ = cli(capsys, "novikov", "--order", "3", "e1")
    assert code == 0
    assert "d: 2 + 5*z + 15*z^2 + 45*z^3 + O(z^4)" in out.splitlines()
    assert "exact: (2 - z)/(1 - 3*z)" in out.splitlines()


def test_torsion_circle(capsys):
    code, out, _ = cli(capsys, "torsion", "--order", "4", "circle")
    assert code == 0
    assert out.strip() == "1 + z + z^2 + z^3 + z^4 + O(z^5)"


def test_validate_e1_is_silent(capsys):
    assert cli(capsys, "validate", "e1") == (0, "", "")


def test_fixture_files_by_path(capsys, tmp_path):
    p = tmp_path / "e1.json"
    p.write_text(load_text("e1"))
    code, out, _ = cli(capsys, "novikov", "--order", "1", str(p))
    assert code == 0 and "exact: (2 - z)/(1 - 3*z)" in out


def test_gradient_like_label(capsys):
    _, out, _ = cli(capsys, "novikov", "circle")
    assert "flow lines" in out
    _, out, _ = cli(capsys, "novikov", "e1")
    assert "flow lines" not in out


def test_json_output(capsys):
    code, out, _ = cli(capsys, "novikov", "--order", "2", "--format", "json", "e1")
    doc = json.loads(out)
    assert code == 0
    assert doc["exact"][0]["matrix"] == [["(2 - z)/(1 - 3*z)"]]
    assert doc["betti"] == [0, 0]


def test_validation_failure(capsys, tmp_path):
    data = json.loads(load_text("e1"))
    data["F"] = {"ranks": [1, 1, 1], "differentials": [[], [["2"]], [["1"]]]}
    data["c"] = [[], [["1"]], []]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    code, out, _ = cli(capsys, "validate", str(p))
    assert code == 1
    assert "degree 2" in out and "(0, 0)" in out
    code, _, err = cli(capsys, "novikov", str(p))
    assert code == 1 and "validation failed" in err


def test_parse_errors(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"schema": 1,')
    code, _, err = cli(capsys, "novikov", str(p))
    assert code == 2 and "line 1" in err
    data = json.loads(load_text("e1"))
    data["F"]["differentials"][1] = [["2", "x"]]
    p.write_text(json.dumps(data))
    code, _, err = cli(capsys, "validate", str(p))
    assert code == 2 and "$.F.differentials[1][0]" in err
    code, _, err = cli(capsys, "novikov", str(tmp_path / "missing.json"))
    assert code == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        run(["frobnicate"])
    assert e.value.code == 2
    capsys.readouterr()
    assert cli(capsys, "novikov", "--order", "-1", "e1")[0] == 2
    assert cli(capsys, "torsion", "klein")[0] == 2
    assert cli(capsys, "campaign", "--suite", "nope")[0] == 2


def test_other_commands(capsys):
    for argv in (["cone", "e1"], ["cokernel", "e1"], ["betti", "e1"], ["glue", "double-glue"],
                 ["exchange", "exchange-e1"], ["tower", "--order", "4", "e1"], ["invariance", "e1"],
                 ["novikov", "klein"], ["tower", "klein"]):
        code, out, err = cli(capsys, *argv)
        assert code == 0, (argv, err)
        assert out


def test_glue_output(capsys):
    _, out, _ = cli(capsys, "glue", "double-glue")
    assert "[2, 5; 0, 2]" in out


def test_campaign(capsys):
    code, out, _ = cli(capsys, "campaign", "--seeds", "3", "--suite", "d2", "--suite", "tower")
    assert code == 0
    assert out.splitlines() == ["d2: 3 passed, 0 failed", "tower: 3 passed, 0 failed"]


def test_gen_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert cli(capsys, "gen", "--seed", "17", "--ring", "Zu-twist", "--homotopy", "-o", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert cli(capsys, "validate", str(a))[0] == 0


def test_gen_empty(capsys, tmp_path):
    p = tmp_path / "empty.json"
    cli(capsys, "gen", "--max-rank", "0", "-o", str(p))
    code, out, _ = cli(capsys, "novikov", "--order", "3", str(p))
    assert code == 0
    assert "deformed complex is zero" in out
    assert "torsion: 1 + O(z^4)" in out


@pytest.mark.parametrize("name", bundled_fixtures())
def test_fixture_round_trip(name):
    text = load_text(name)
    assert serialize_scenario(parse_scenario(name)) == text


@pytest.mark.parametrize("seed", range(100))
def test_generated_scenarios_validate(seed):
    from novikov.fundamental import validate
    sc = gen_random(GeneratorParams(seed=seed, ring=("Z", "Q", "Zu", "Zu-twist")[seed % 4]))
    assert validate(sc.fd).ok


def test_generator_bounds():
    for seed in range(30):
        p = GeneratorParams(seed=seed, max_degree=2, max_rank=2, entry_bound=1)
        fd = gen_random(p).fd
        assert fd.top <= 2
        assert all(r <= 2 for r in fd.D.ranks + fd.F.ranks)


def test_bad_generator_params():
    with pytest.raises(ValueError):
        GeneratorParams(seed=0, max_degree=6)
    with pytest.raises(ValueError):
        GeneratorParams(seed=0, ring="Zv")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "novikov", "validate", "circle"], capture_output=True)
    assert proc.returncode == 0


def test_ten_thousand_generated_scenarios_validate():
    from novikov.campaign import run_suite
    res = run_suite("validate", 10_000)
    assert res.ok, res.failures[:3]
