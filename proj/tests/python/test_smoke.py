import json
import os

import pytest

import pcfunify as pu

DATA = os.path.join(os.path.dirname(__file__), "..", "..", "data", "corpus")


def test_limit_and_identify():
    out = pu.limit("PCF(2; (2n-1)^2)", digits=60)
    assert out["converged"]
    assert out["value"].startswith("2.2732395447351626861")
    assert pu.identify("PCF(2; (2n-1)^2)") == ["1", "4", "1", "0"]


def test_metrics():
    assert pu.delta("PCF(3n+1; n(1-2n))") == pytest.approx(-0.65, abs=0.02)
    assert pu.rate("PCF(3n+1; n(1-2n))") == pytest.approx(0.69, abs=0.02)


def test_canonicalize_and_fold():
    form, trace = pu.canonicalize("PCF((2n+1)/(n+1); n/(n+1))")
    assert form == "PCF(2*n + 1; n^2)"
    assert "inflate" in trace
    assert pu.fold("PCF(3n+1; n(1-2n))", 2).startswith("PCF(60*n^3 + 34*n^2 - 11*n - 3;")


def test_guess_series():
    g = pu.guess_series("(-1)^n/(2n+1)", 0)
    assert g["order"] == 2
    assert g["canonical"] == "PCF(2; 4*n^2 - 4*n + 1)"


def test_match_and_verify():
    cert = pu.match("PCF(2; (2n-1)^2)", "PCF(6; (2n+1)^2)")
    assert cert is not None
    assert json.loads(cert)["schema_version"] == 1
    assert pu.verify(cert)
    assert pu.match("PCF(2; (2n-1)^2)", "PCF(3n+1; n(1-2n))") is None


def test_cmf():
    assert pu.pi_cmf_is_conserving()
    assert pu.trajectory("1,0,0", "1/2,1/2,1/2") == "PCF(3*n + 1; -2*n^2 + n)"


def test_cluster_table1():
    summary = json.loads(pu.cluster(os.path.join(DATA, "table1.json")))
    clusters = summary["clusters"] if isinstance(summary, dict) else summary
    members = {c["root"]: sorted(c["members"]) for c in clusters}
    assert members["cmf(1,0,0)"] == ["t1-1", "t1-2", "t1-5"]
    assert members["cmf(1,1,1)"] == ["t1-3", "t1-4"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        pu.limit("PCF(2;")
