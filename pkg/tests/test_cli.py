import json

import pytest

from cberlab.cli import main
from cberlab.instances import gen_instance


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_gen_deterministic(capsys):
    c1, out1 = run(capsys, "gen", "--seed", "9")
    c2, out2 = run(capsys, "gen", "--seed", "9")
    assert c1 == c2 == 0
    assert out1 == out2


def test_gen_roundtrips_through_link(tmp_path, capsys):
    path = tmp_path / "inst.json"
    assert main(["gen", "--seed", "5", "--out", str(path)]) == 0
    code, out = run(capsys, "link", "--instance", str(path))
    rep = json.loads(out)
    assert code == 0
    assert rep["outcome"] == "pass"
    assert all(entry["verdict"] for entry in rep["ledger"])


def test_verify_link_pass_and_fail(tmp_path, capsys):
    inst = gen_instance(3)
    raw = json.loads(inst.to_json())

    code, out = run(capsys, "link", "--seed", "3")
    l_classes = json.loads(out)["metrics"]["L"]

    good = dict(raw, L=l_classes)
    path = tmp_path / "good.json"
    path.write_text(json.dumps(good))
    assert main(["verify-link", "--instance", str(path)]) == 0
    capsys.readouterr()

    bad = dict(raw, L=[[x] for x in range(raw["n"])])
    path.write_text(json.dumps(bad))
    code, out = run(capsys, "verify-link", "--instance", str(path))
    if inst.e != inst.f:
        assert code == 1
        assert json.loads(out)["outcome"] == "fail"


def test_missing_field_is_input_error(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text(gen_instance(1).to_json())
    assert main(["verify-link", "--instance", str(path)]) == 2


def test_bad_json_is_input_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["link", "--instance", str(path)]) == 2


def test_bad_fraction_is_input_error():
    assert main(["tile", "--eps", "nonsense"]) == 2


def test_no_floats_in_reports(capsys):
    code, out = run(capsys, "hierarchy", "--levels", "2")
    assert code == 0
    payload = json.loads(out, parse_float=lambda s: pytest.fail(f"float {s}"))
    assert payload["outcome"] == "pass"


def test_lift_sim_small(capsys):
    code, out = run(capsys, "lift-sim", "--stages", "2", "--eps", "1/16,1/32")
    rep = json.loads(out)
    assert code == 0
    assert rep["outcome"] == "pass"


def test_extend_and_hf_and_smooth(capsys):
    for argv in (["extend-link", "--seed", "2"], ["hf-link", "--seed", "2"],
                 ["smooth-link", "--seed", "4"], ["lift", "--seed", "6"],
                 ["choice-link", "--seed", "1", "--depth", "120"]):
        code, out = run(capsys, *argv)
        assert code == 0, (argv, out)
