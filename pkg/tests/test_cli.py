import json

import pytest

from formal_demazure.cli import COMMANDS, dumps, main, run

A2 = [[2, -1], [-1, 2]]
ONE_OVER_X1 = {"support": [{"w": [], "coeff": {"num": {"terms": [[[0, 0], "1"]], "order": 10}, "den": [[1, 0]]}}]}


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def invoke(tmp_path, cfg, command, *extra):
    out = tmp_path / f"{command}.json"
    rc = main(["--config", write(tmp_path, cfg), "--command", command, "--out", str(out), *extra])
    return rc, (out.read_text() if rc == 0 else None)


def walk(obj):
    yield obj
    if isinstance(obj, dict):
        for v in obj.values():
            yield from walk(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from walk(v)


def test_structconst_additive_identity_pair():
    rep = run({"cartan": A2, "length_bound": 1, "fgl": "additive", "pairs": [[[], []]]}, "structconst")
    (item,) = rep["result"]["constants"]
    ws = {tuple(row["w"]) for row in item["table"]}
    assert ws == {()}
    assert (1,) not in ws
    assert item["methods_agree"] and rep["result"]["agree"]


def test_braid_multiplicative_zero():
    rep = run({"cartan": A2, "length_bound": 3, "fgl": {"kind": "multiplicative"}}, "braid")
    (pair,) = rep["result"]["pairs"]
    assert pair["m"] == 3 and pair["zero"] and pair["defect"] == []


def test_braid_below_bound_is_reported():
    rep = run({"cartan": A2, "length_bound": 2, "fgl": "additive"}, "braid")
    assert "length bound" in rep["result"]["pairs"][0]["status"]


def test_weyl_affine_zero_bound():
    rep = run({"cartan": [[2, -2], [-2, 2]], "length_bound": 0}, "weyl")
    (row,) = rep["result"]["elements"]
    assert row["word"] == [] and row["length"] == 0


def test_member_and_residue_flag_planted_pole():
    cfg = {"cartan": A2, "length_bound": 2, "fgl": {"kind": "hyperbolic"}, "element": ONE_OVER_X1}
    assert run(cfg, "member")["result"]["member"] is False
    res = run(cfg, "residue")["result"]
    assert res["passes"] is False and res["agrees_with_membership"] is True


@pytest.mark.parametrize("command", ["roots", "expand", "structconst", "hecke"])
def test_byte_stable_and_float_free(tmp_path, command):
    cfg = {"cartan": A2, "length_bound": 2, "fgl": {"kind": "hyperbolic", "mu1": "1/2"}}
    rc1, t1 = invoke(tmp_path, cfg, command)
    rc2, t2 = invoke(tmp_path, cfg, command, "--jobs", "3")
    assert rc1 == rc2 == 0
    assert t1 == t2
    assert not any(isinstance(v, float) for v in walk(json.loads(t1)))
    assert dumps(json.loads(t1)) == t1


def test_every_command_is_wired():
    assert {"roots", "weyl", "expand", "braid", "member", "residue", "coproduct", "structconst",
            "billey", "graded", "hecke", "rootpoly"} <= set(COMMANDS)


def test_exit_invalid_cartan(tmp_path):
    assert invoke(tmp_path, {"cartan": [[2, 1], [-1, 2]]}, "roots")[0] == 2


def test_exit_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    assert main(["--config", str(path), "--command", "roots"]) == 2


def test_exit_out_of_slice(tmp_path):
    cfg = {"cartan": A2, "length_bound": 2, "word": [1, 2, 1], "element": ONE_OVER_X1}
    assert invoke(tmp_path, cfg, "coproduct")[0] == 3


def test_exit_low_precision(tmp_path, capsys):
    cfg = {"cartan": A2, "length_bound": 2, "N": 4}
    assert invoke(tmp_path, cfg, "weyl")[0] == 4
    rc, _ = invoke(tmp_path, cfg, "weyl", "--allow-low-precision")
    assert rc == 0
    assert "warning" in capsys.readouterr().err
