"""Parsers, canonical printers, file formats, and subcommands."""

import io
import json
from fractions import Fraction

import pytest

from rigidconn.cli import (
    EXIT_INPUT,
    EXIT_NOT_RIGID,
    EXIT_OK,
    ParseError,
    SemanticError,
    coeff_str,
    execute_command,
    parse_certificate,
    parse_coeff,
    parse_loc,
    parse_polar,
    parse_problem,
    polar_str,
    print_certificate,
    print_problem,
)
from rigidconn.cyclo import CycloNum
from rigidconn.formal import INF, Location
from rigidconn.puiseux import PolarPart
from rigidconn.radicals import cadd, ceq, croot

from helpers import F, fourpoint, hypergeometric, kloosterman, problems_equal


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = execute_command(argv, out, err)
    return code, out.getvalue(), err.getvalue()


# --- expression grammar ---------------------------------------------------


def test_parse_coeff_rationals_and_roots_of_unity():
    assert parse_coeff("3/4") == CycloNum.from_rational(F(3, 4))
    assert parse_coeff("z(6)^2") == CycloNum.zeta(6) ** 2
    assert parse_coeff("1/2 - 1/2*z(6)") == (
        CycloNum.from_rational(F(1, 2)) - CycloNum.from_rational(F(1, 2)) * CycloNum.zeta(6)
    )
    assert parse_coeff("-z(4)") == -CycloNum.zeta(4)


def test_parse_coeff_radicals():
    got = parse_coeff("2*rt(2,2)")
    want = croot(CycloNum.from_rational(2), 2)
    assert ceq(got, cadd(want, want))


def test_coeff_roundtrip():
    for text in ("3/4", "1/2 - 1/2*z(6)", "z(12)^5", "-2"):
        a = parse_coeff(text)
        assert parse_coeff(coeff_str(a)) == a
        assert coeff_str(parse_coeff(coeff_str(a))) == coeff_str(a)


def test_parse_polar():
    phi = parse_polar("1*t^(-1/2)")
    assert phi == PolarPart.make(2, [(1, CycloNum.one())])
    assert parse_polar("0").is_zero()
    two = parse_polar("2*t^(-2/1) - 1*t^(-1/1)")
    assert two == PolarPart.unramified({2: CycloNum.from_rational(2), 1: CycloNum.from_rational(-1)})


def test_polar_roundtrip_with_radical_coefficient():
    phi = PolarPart.make(3, [(1, croot(CycloNum.from_rational(2), 2))])
    assert parse_polar(polar_str(phi)) == phi


def test_parse_coeff_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse_coeff("1/2 + + 3")
    assert e.value.line == 1 and e.value.column > 0


def test_loc_roundtrip():
    assert parse_loc("inf") == INF
    assert parse_loc("-1") == Location.of(-1)


# --- problem files --------------------------------------------------------


def test_problem_roundtrip_byte_identical():
    for P in (hypergeometric(), kloosterman(), fourpoint()):
        text = print_problem(P)
        Q = parse_problem(text)
        assert problems_equal(P, Q)
        assert print_problem(Q) == text


def test_problem_unknown_field_rejected():
    d = json.loads(print_problem(kloosterman()))
    d["color"] = "blue"
    with pytest.raises(SemanticError):
        parse_problem(json.dumps(d))


def test_problem_rank_mismatch_rejected():
    d = json.loads(print_problem(kloosterman()))
    d["points"][0]["factors"][0]["reg"][0]["blocks"] = [3]
    with pytest.raises(SemanticError):
        parse_problem(json.dumps(d))


def test_problem_bad_json_is_parse_error():
    with pytest.raises(ParseError):
        parse_problem("{not json")


# --- subcommands ----------------------------------------------------------


@pytest.fixture()
def files(tmp_path):
    paths = {}
    for name, P in (
        ("hyper", hypergeometric()),
        ("kloos", kloosterman()),
        ("four", fourpoint()),
    ):
        p = tmp_path / f"{name}.json"
        p.write_text(print_problem(P), encoding="utf-8")
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_cmd_rig(files):
    code, out, _ = run(["rig", files["hyper"]])
    assert code == EXIT_OK and out.strip().endswith("2")
    code, out, _ = run(["rig", files["four"]])
    assert code == EXIT_OK and out.strip().endswith("0")


def test_cmd_reduce_and_replay(files):
    cert_path = str(files["dir"] / "cert.json")
    code, out, _ = run(["reduce", files["hyper"], "--cert", cert_path])
    assert code == EXIT_OK
    code, out, _ = run(["replay", cert_path])
    assert code == EXIT_OK
    assert problems_equal(parse_problem(out), hypergeometric())


def test_cmd_reduce_not_rigid(files):
    code, out, _ = run(["reduce", files["four"]])
    assert code == EXIT_NOT_RIGID


def test_cmd_fourier(files):
    code, out, _ = run(["fourier", files["kloos"]])
    assert code == EXIT_OK
    parse_problem(out)  # output is a valid problem file


def test_cmd_mc(files):
    from rigidconn.transforms import mc_rank_prediction

    code, out, _ = run(["mc", files["hyper"], "--chi", "1/6"])
    assert code == EXIT_OK
    assert parse_problem(out).rank() == mc_rank_prediction(hypergeometric(), F(1, 6))
    code, _, err = run(["mc", files["hyper"], "--chi", "0/1"])
    assert code == EXIT_INPUT
    code, _, err = run(["mc", files["hyper"], "--chi", "1"])
    assert code == EXIT_INPUT


def test_cmd_missing_file():
    code, _, err = run(["rig", "/nonexistent/problem.json"])
    assert code == EXIT_INPUT and err


def test_cmd_enumerate(tmp_path):
    code, out, _ = run(
        ["enumerate", "--points", "0,1,inf", "--order", "2", "--rank", "1"]
    )
    assert code == EXIT_OK
    lines = [json.loads(l) for l in out.splitlines() if l.strip()]
    assert len(lines) == 4
    assert all(l["verdict"] == "certified" for l in lines)


def test_cmd_stokes_arcs(files):
    code, out, _ = run(["stokes-arcs", files["kloos"], "--point", "inf"])
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["cover"] == 2
    assert all(p["full_circle"] == (p["psi"] == p["phi"]) for p in report["pairs"])


def test_certificate_roundtrip():
    from rigidconn.adk import run_adk

    cert = run_adk(hypergeometric())
    text = print_certificate(cert)
    C = parse_certificate(text)
    assert print_certificate(C) == text


def test_determinism(files):
    a = run(["rig", files["hyper"]])
    b = run(["rig", files["hyper"]])
    assert a == b
