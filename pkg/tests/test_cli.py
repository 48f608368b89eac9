import io
import json

import pytest

from steencalc.cli import COMMANDS, SCHEMA_VERSION, load_config, parse_window, run, UsageError


def call(*argv, env_cfg=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_all_thirteen_subcommands_registered():
    assert sorted(COMMANDS) == sorted(
        ["coeff", "tor", "box", "tor-b", "geom-smash", "element", "verify-relations", "coproduct",
         "verify-coaction", "basis", "flag-ss", "audit-lens", "euler"]
    )


def test_coeff_at():
    assert call("coeff", "--module", "HZp", "--at", "0,0") == (0, "1\n", "")


def test_tor_table():
    code, out, _ = call("tor", "--p", "3", "--length", "5")
    assert code == 0
    assert out.splitlines()[0] == "(1,1),(0,1),(0,1),(0,1),(0,1),(0,1)"


def test_euler():
    code, out, _ = call("euler", "--p", "5")
    assert code == 0 and out.splitlines()[0] == "x^5 - b^4 x"


def test_json_schema():
    code, out, _ = call("coeff", "--module", "HT", "--window", "-6:6", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["command"] == "coeff"
    assert len(doc["table"]) == 13 * 13
    assert set(doc["table"][0]) == {"k", "l", "dim"}
    row = {(r["k"], r["l"]): r["dim"] for r in doc["table"]}
    assert [row[(k, 0)] for k in (-1, 0, 1)] == [1, 2, 1]


def test_csv_output():
    code, out, _ = call("coeff", "--module", "HZp", "--window", "0:1,0:0", "--format", "csv")
    assert out == "k,l,dim\n0,0,1\n1,0,0\n"


def test_window_parsing():
    assert parse_window("-6:6") == (-6, 6, -6, 6)
    assert parse_window("-2:3,0:1") == (-2, 3, 0, 1)
    with pytest.raises(UsageError):
        parse_window("3:1")


def test_invalid_arguments_exit_2():
    assert call("euler", "--p", "4")[0] == 2
    assert call("coeff", "--module", "nope")[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("verify-relations", "--prec", "40", "--n-max", "1")[0] == 2


def test_verification_failure_exit_1():
    code, out, _ = call("verify-relations", "--p", "3", "--prec", "12", "--n-max", "2", "--mutate", "xi_hat_rho")
    assert code == 1 and "False" in out
    assert call("coproduct", "--variant", "uncorrected", "--prec", "10")[0] == 1


def test_verify_relations_passes():
    code, out, _ = call("verify-relations", "--p", "3", "--prec", "12", "--n-max", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["summary"]["ok"] and doc["summary"]["total"] == 26


def test_other_commands_run():
    for argv in (
        ["box", "--left", "Q", "--right", "Q"],
        ["tor-b", "--i-max", "2", "--degrees", "0:6"],
        ["geom-smash", "--n-max", "4"],
        ["element", "--name", "xi_hat(1)", "--prec", "6"],
        ["coproduct", "--name", "tau_1", "--prec", "6"],
        ["coproduct", "--prec", "10"],
        ["verify-coaction", "--space", "Lens"],
        ["basis", "--window", "-3:3"],
        ["flag-ss", "--window", "-3:3"],
        ["audit-lens", "--window", "-4:4"],
    ):
        code, out, err = call(*argv)
        assert code == 0, (argv, err)
        assert out.strip()


def test_box_identifies_result():
    code, out, _ = call("box", "--left", "Q", "--right", "Q", "--format", "json")
    assert json.loads(out)["box"][0]["iso"] == "coconstant"


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "steen.cfg"
    cfg.write_text("# defaults\np = 5\nformat = json\n")
    code, out, _ = call("euler", "--config", str(cfg))
    assert code == 0 and json.loads(out)["text"] == "x^5 - b^4 x"
    monkeypatch.setenv("STEENCALC_CONFIG", str(cfg))
    code, out, _ = call("euler")
    assert json.loads(out)["params"]["p"] == 5
    # command line beats the file
    code, out, _ = call("euler", "--p", "3", "--format", "ascii")
    assert out.startswith("x^3 - b^2 x")


def test_config_precision_enforced(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("p = 3\nprec = 40\nn_max = 2\n")
    with pytest.raises(UsageError):
        load_config(bad)
    assert call("euler", "--config", str(bad))[0] == 2
    junk = tmp_path / "junk.cfg"
    junk.write_text("colour = blue\n")
    assert call("euler", "--config", str(junk))[0] == 2


def test_golden_roundtrip(tmp_path):
    gold = tmp_path / "g.json"
    argv = ["tor", "--length", "2", "--format", "json", "--golden", str(gold)]
    assert call(*argv, "--regen")[0] == 0
    assert call(*argv)[0] == 0
    gold.write_text(gold.read_text().replace('"fixed": 1', '"fixed": 2', 1))
    code, _, err = call(*argv)
    assert code == 1 and "---" in err
    assert call("tor", "--golden", str(tmp_path / "missing.json"))[0] == 2
    assert call("tor", "--regen")[0] == 2
