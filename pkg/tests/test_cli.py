from __future__ import annotations

from pathlib import Path

import pytest

from ordspace.cli import main, run

DATA = Path(__file__).resolve().parent.parent / "data"


def code(*argv):
    return run([str(a) for a in argv]).exit_code


def test_verify_exit_codes():
    assert code("verify", DATA / "four_fan.space") == 0
    assert code("verify", DATA / "six_ordering_quotient.space") == 1


def test_quotient_six_orderings():
    r = run(["quotient", str(DATA / "six_ordering.space"), "--gammas", "s1*s2*s3*s4*s5*s6", "--oracle"])
    assert r.exit_code == 1
    assert "status: NotQuotientSpace" in r.lines and any("agrees" in line for line in r.lines)


def test_quotient_by_subgroup():
    assert code("quotient", DATA / "fan8.space", "--subgroup", "g1*g2", "g3", "--oracle") == 0


def test_qx_build_prints_sizes():
    r = run(["qx", "build", str(DATA / "sqrt2.model")])
    assert r.exit_code == 0 and "|X|=6, |H|=32 (|A|=1, |B|=0, m=2)" in r.lines


def test_qx_quotient():
    r = run(["qx", "quotient", str(DATA / "three_cubics.model"), "--gammas",
             "r1m*r1p*r2m*r2p*r3m*r3p", "--oracle"])
    assert r.exit_code == 1


def test_other_commands():
    assert code("stab", DATA / "stab2_case1.space") == 0
    assert "stability index: 2" in run(["stab", str(DATA / "stab2_case1.space")]).lines
    assert "connected components: 2" in run(["components", str(DATA / "stab2_case1.space")]).lines
    assert code("decompose", DATA / "stab2_case4.space") == 0
    assert code("decompose", DATA / "six_ordering_quotient.space") == 1
    assert "fans of size 8: 1" in run(["fans", str(DATA / "fan8.space")]).lines
    assert code("witt", DATA / "four_fan.space", "--form", "1,g1,g2,g1*g2", "--power", "2") == 0
    assert code("witt", DATA / "four_fan.space", "--form", "1,g1", "--power", "2") == 1
    assert code("lamb", DATA / "fan8.space", "--power", "3") == 0


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["verify"],
    ["verify", "missing.space"],
    ["quotient", str(DATA / "four_fan.space")],
    ["quotient", str(DATA / "four_fan.space"), "--gammas", "nope"],
    ["quotient", str(DATA / "four_fan.space"), "--gammas", "s1"],
    ["witt", str(DATA / "four_fan.space"), "--form", "1", "--power", "0"],
])
def test_usage_errors(argv):
    assert code(*argv) == 3


def test_oracle_bound_env(monkeypatch):
    monkeypatch.setenv("ORDSPACE_MAX_DIM", "2")
    assert code("verify", DATA / "four_fan.space") == 3


def test_output_is_deterministic(capsys):
    argv = ["quotient", str(DATA / "stab2_case3.space"), "--gammas", "s1*s2*s5*s6", "--oracle"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first and "command:" in first


def test_input_file_errors(tmp_path):
    bad = tmp_path / "bad.space"
    bad.write_text("space v1\norderings: a\ngenerators:\n-1: +\n")
    r = run(["verify", str(bad)])
    assert r.exit_code == 3 and "line 4" in r.lines[-1]
    model = tmp_path / "bad.model"
    model.write_text("poly: x^2 - 1\n")
    assert code("qx", "build", model) == 3
