import json

import pytest

from freeprob.cli import main
from freeprob.emit import from_json, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moments_pretty(capsys):
    code, out, _ = run(capsys, "moments", "--order", "3", "--t", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("phi(u_t^k)")
    assert "t=1" in lines[1]
    assert lines[2].split()[:2] == ["1", "Q"]
    assert "(1 - t)*Q^2" in lines[3]
    assert lines[2].split()[2].startswith("0.606530659712633")


def test_moments_json_round_trip(capsys):
    code, out, _ = run(capsys, "moments", "--order", "3", "--t", "1", "--t", "1/2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["table"] == "phi(u_t^k)" and doc["order"] == 3
    assert [e["n"] for e in doc["entries"]] == [1, 2, 3]
    assert set(doc["entries"][0]["numeric"]) == {"t=1", "t=1/2"}
    assert to_json(from_json(out)) == out.rstrip("\n")


def test_multi_table_json_round_trip(capsys):
    code, out, _ = run(capsys, "star-cumulants", "--order", "2", "--t", "2", "--format", "json")
    assert code == 0
    docs = json.loads(out)
    assert [d["table"][0] for d in docs] == ["g", "h", "a"]
    assert to_json(from_json(out)) == out.rstrip("\n")


def test_csv_header(capsys):
    code, out, _ = run(capsys, "free-cumulants", "--order", "2", "--t", "1", "--t", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "n,symbolic,t=1,t=3"
    assert out.splitlines()[1].startswith("1,Q,")


def test_schur_gamma1(capsys):
    code, out, _ = run(capsys, "schur", "--depth", "1", "--t", "1", "--format", "json")
    assert code == 0
    gamma = next(d for d in json.loads(out) if d["table"] == "gamma")
    e = gamma["entries"][1]
    assert e["symbolic"] == "t*Q^2/(-1 + Q^2)"
    assert abs(float(e["numeric"]["t=1"]) + 0.581977) < 1e-6


def test_jacobi_r_reports_erratum(capsys):
    code, out, _ = run(capsys, "jacobi-r", "--order", "4", "--format", "json")
    assert code == 0
    oracle, printed, corrected = json.loads(out)
    assert oracle["provenance"] == "oracle"
    verdicts = [f["holds"] for f in oracle["errata"]]
    assert verdicts == [False, True]
    assert printed["entries"][1]["symbolic"] != oracle["entries"][1]["symbolic"]


def test_jacobi_s_single_variant(capsys):
    code, out, _ = run(capsys, "jacobi-s", "--order", "3", "--variant", "corrected", "--format", "json")
    assert code == 0
    c, s = json.loads(out)
    assert c["entries"][0]["symbolic"] == "2/(1 + Q^2)"
    assert all(f["holds"] for f in c["errata"] + s["errata"])


@pytest.mark.parametrize(
    "argv",
    [
        ["moments", "--order", "0"],
        ["moments", "--t", "-1"],
        ["moments", "--t", "x"],
        ["moments", "--precision", "20"],
        ["schur", "--depth", "9"],
        ["nonsense"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_json_error_record(capsys):
    code, out, _ = run(capsys, "moments", "--order", "99", "--format", "json")
    assert code == 2
    err = json.loads(out)["error"]
    assert err["type"] == "BadParameter"
    assert "order" in err["message"]


def test_order_cap_override(capsys, monkeypatch):
    monkeypatch.setenv("FREEPROB_MAX_ORDER", "2")
    code, _, _ = run(capsys, "moments", "--order", "3")
    assert code == 2


def test_verify_subset_is_deterministic(capsys):
    code1, out1, _ = run(capsys, "verify", "--order", "4", "--only", "Lambert", "--format", "csv")
    code2, out2, _ = run(capsys, "verify", "--order", "4", "--only", "Lambert", "--format", "csv")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.splitlines()[1].startswith('"Lambert reversion')


def test_verify_exit_code_on_failure(capsys, monkeypatch):
    from freeprob import verify

    monkeypatch.setattr(
        verify, "checks", lambda: [verify.Check("always fails", lambda N: [verify.Finding("x", False)])]
    )
    code, out, _ = run(capsys, "verify", "--order", "2")
    assert code == 1
    assert out.startswith("FAIL  always fails")
