import io as stdio
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from isx import cli
from isx.fixtures import pinched_torus
from isx.generate import GenProfile, generate_instance
from isx.io import SchemaError, dump_instance, instance_to_dict, loads_instance


def run(argv, stdin=None, monkeypatch=None, capsys=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", stdio.StringIO(stdin))
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fixture_file(tmp_path):
    p = tmp_path / "pt.json"
    p.write_text(dump_instance(pinched_torus()))
    return p


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 4, 6]), st.booleans())
def test_round_trip(seed, N, witt):
    inst = generate_instance(GenProfile.random(seed, N, witt=witt))
    text = dump_instance(inst)
    back = loads_instance(text)
    assert back == inst and dump_instance(back) == text


def test_fixture_round_trip():
    inst = pinched_torus()
    assert loads_instance(dump_instance(inst)) == inst


def test_unknown_field_rejected():
    data = instance_to_dict(pinched_torus())
    data["tube"]["extra"] = {}
    with pytest.raises(SchemaError) as e:
        loads_instance(json.dumps(data))
    assert e.value.where == "tube" and "extra" in str(e.value)


def test_bad_entry_located():
    data = instance_to_dict(pinched_torus())
    data["complement"]["iota"]["0"][0][0] = "1.5"
    with pytest.raises(SchemaError) as e:
        loads_instance(json.dumps(data))
    assert e.value.where == "complement.iota.0[0][0]"


def test_wrong_shape_located():
    data = instance_to_dict(pinched_torus())
    data["tube"]["D_bdry"]["0"] = [["1", "0"]]
    with pytest.raises(SchemaError) as e:
        loads_instance(json.dumps(data))
    assert e.value.where == "tube.D_bdry.0[0]"


def test_short_dims_are_padded():
    data = instance_to_dict(pinched_torus())
    data["boundary"]["dims"] = data["boundary"]["dims"][:4]
    assert loads_instance(json.dumps(data)) == pinched_torus()


def test_malformed_json_exits_1(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"name": ')
    code, out, err = run(["validate", str(p)], capsys=capsys)
    assert code == 1 and "line 1 column" in err and out == ""


def test_missing_file_exits_1(tmp_path, capsys):
    code, _, err = run(["validate", str(tmp_path / "nope.json")], capsys=capsys)
    assert code == 1 and "file not found" in err


def test_unknown_flag_exits_2(fixture_file, capsys):
    code, _, err = run(["validate", str(fixture_file), "--bogus"], capsys=capsys)
    assert code == 2 and "unrecognized" in err
    assert run([], capsys=capsys)[0] == 2


def test_fixture_piped_to_validate(monkeypatch, capsys):
    code, text, _ = run(["fixture", "pinched-torus"], capsys=capsys)
    assert code == 0
    code, out, _ = run(["validate", "-"], stdin=text, monkeypatch=monkeypatch, capsys=capsys)
    assert code == 0 and out == "pinched-torus: valid\n"


def test_invalid_instance_reports_failures(tmp_path, capsys):
    data = instance_to_dict(pinched_torus())
    data["complement"]["lefschetz"]["3"] = [["1"]]
    p = tmp_path / "m.json"
    p.write_text(json.dumps(data))
    code, out, _ = run(["validate", str(p), "--format", "json"], capsys=capsys)
    data = json.loads(out)
    assert code == 1 and data["valid"] is False and data["failures"]
    code, _, err = run(["homology", str(p)], capsys=capsys)
    assert code == 1 and err


def test_homology_table(fixture_file, capsys):
    code, out, _ = run(["homology", str(fixture_file)], capsys=capsys)
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:]]
    assert [int(r[2]) for r in rows] == [0, 1, 0, 1, 0]
    code, out, _ = run(["homology", str(fixture_file), "--format", "json"], capsys=capsys)
    data = json.loads(out)
    assert [d["p"]["H_ix"] for d in data["degrees"]] == [0, 1, 0, 1, 0]
    assert [d["p"]["H_cf"] for d in data["degrees"]] == [0, 1, 0, 1, 0]


def test_obstructions_and_signature(fixture_file, capsys):
    code, out, _ = run(["obstructions", str(fixture_file), "--format", "json"], capsys=capsys)
    assert code == 0 and json.loads(out)["vanish"] is True
    code, out, _ = run(["signature", str(fixture_file)], capsys=capsys)
    assert code == 0 and "sigma_ix = 0" in out and "sigma_novikov = 0" in out


def test_approx_outputs(fixture_file, capsys):
    code, out, _ = run(["approx", str(fixture_file)], capsys=capsys)
    assert code == 0 and "dims [1, 0, 1, 0, 0]" in out
    code, out, _ = run(["approx", str(fixture_file), "--witt-approx", "--format", "json"], capsys=capsys)
    assert json.loads(out)["approximations"]["dims"] == [1, 0, 1, 0, 0]


def test_signature_refuses_non_witt(tmp_path, capsys):
    p = tmp_path / "g.json"
    code, _, _ = run(["gen", "--seed", "3", "--dimension", "4", "--non-witt", "--out", str(p)], capsys=capsys)
    assert code == 0
    code, _, err = run(["signature", str(p)], capsys=capsys)
    assert code == 1 and "Witt" in err


def test_gen_deterministic(capsys):
    a = run(["gen", "--seed", "9", "--dimension", "6"], capsys=capsys)
    b = run(["gen", "--seed", "9", "--dimension", "6"], capsys=capsys)
    assert a == b and a[0] == 0
    assert loads_instance(a[1]).validate().ok


def test_gen_odd_dimension_rejected(capsys):
    code, _, err = run(["gen", "--seed", "1", "--dimension", "5"], capsys=capsys)
    assert code == 1 and "even" in err


def test_module_entry_point(fixture_file):
    proc = subprocess.run([sys.executable, "-m", "isx", "validate", str(fixture_file)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "pinched-torus: valid\n"
