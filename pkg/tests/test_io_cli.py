"""File formats, certificate round-trips and the command line."""

import csv
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from nilaa import cli as ncli
from nilaa import io as nio
from nilaa.criteria import (CosetObstruction, InvariantSubtorus, NotFixed,
                            ObstructionBracket, SpectralObstruction,
                            UnipotentPower, WitnessSubspace)
from nilaa.poly import ParamVector, Poly
from nilaa.ratlin import QMatrix, QSubspace


# ---- rationals ----

def test_parse_rational_accepts_exact_forms():
    assert nio.parse_rational("1/2", "x") == F(1, 2)
    assert nio.parse_rational("-3", "x") == F(-3)
    assert nio.parse_rational(5, "x") == F(5)
    assert nio.parse_rational("0", "x") == 0
    assert nio.parse_rational("+7/3", "x") == F(7, 3)


@pytest.mark.parametrize("bad", [0.5, "0.5", "1/0", "1/-2", "1e3", "",
                                 "1 / 2", True, None, [1]])
def test_parse_rational_rejects_inexact_forms(bad):
    with pytest.raises(nio.ParseError):
        nio.parse_rational(bad, "x")


def test_rational_string_round_trips():
    for v in (F(0), F(-1, 2), F(22, 7), F(5)):
        assert nio.parse_rational(nio.rational_string(v), "x") == v


# ---- polynomials ----

def test_parse_polynomial_grammar():
    def ev(text, params, **values):
        return nio.parse_polynomial(text, params, "x").substitute(values)

    assert ev("t^2 - 1/2*t + 3", ("t",), t=F(2)) == F(6)
    assert ev("1/2 + t", ("t",), t=F(1, 2)) == 1
    assert ev("-t", ("t",), t=F(3)) == -3
    assert ev("s*t", ("s", "t"), s=F(2), t=F(3)) == 6
    assert nio.parse_polynomial(0, ("t",), "x") == Poly.constant(0, ("t",))
    assert ev("2*t^3", ("t",), t=F(1, 2)) == F(1, 4)


def test_parse_polynomial_round_trips_through_str():
    for text in ("t^2 - 1/2*t + 3", "0", "-t", "s*t", "1/12"):
        params = ("s", "t")
        p = nio.parse_polynomial(text, params, "x")
        again = nio.parse_polynomial(str(p), params, "x")
        assert again == p


@pytest.mark.parametrize("bad", ["0.5", "u", "t t", "2**t", "", "t^",
                                 "t^-1", "(t)", "1/2/3", "t^2.5"])
def test_parse_polynomial_rejects(bad):
    with pytest.raises(nio.ParseError):
        nio.parse_polynomial(bad, ("t",), "x")


# ---- structure constants ----

def _parse_sc(entries, dim=3):
    return nio._parse_structure_constants(entries, dim, "c")


def test_structure_constants_antisymmetry_conflict():
    with pytest.raises(nio.ParseError, match="antisymmetry conflict"):
        _parse_sc([[1, 2, 3, "1"], [2, 1, 3, "1"]])


def test_structure_constants_duplicate_rejected():
    with pytest.raises(nio.ParseError, match="duplicate"):
        _parse_sc([[1, 2, 3, "1"], [1, 2, 3, "1"]])
    # a consistent mirror entry is still a duplicate of the same bracket
    with pytest.raises(nio.ParseError, match="duplicate"):
        _parse_sc([[1, 2, 3, "1"], [2, 1, 3, "-1"]])


def test_structure_constants_bounds_and_shape():
    with pytest.raises(nio.ParseError, match="itself"):
        _parse_sc([[1, 1, 2, "1"]])
    with pytest.raises(nio.ParseError, match="1..3"):
        _parse_sc([[1, 4, 2, "1"]])
    with pytest.raises(nio.ParseError):
        _parse_sc([[1, 2, 3]])
    assert _parse_sc([[2, 1, 3, "1"]]) == [(1, 2, 3, F(-1))]
    assert _parse_sc([[1, 2, 3, "0"]]) == []


# ---- system files ----

def _minimal_dict(**extra):
    data = {"dim": 1, "params": ["t"],
            "structure_constants": [],
            "lattice_basis": [["1"]],
            "automorphism": [["1"]],
            "translation": ["t"]}
    data.update(extra)
    return data


def test_system_from_dict_minimal():
    system = nio.system_from_dict(_minimal_dict(name="line"))
    assert system.name == "line"
    assert system.algebra.dim == 1


def test_system_from_dict_rejects_unknown_key():
    with pytest.raises(nio.ParseError, match="unknown"):
        nio.system_from_dict(_minimal_dict(extra_field=1))


def test_system_from_dict_requires_dim():
    data = _minimal_dict()
    del data["dim"]
    with pytest.raises(nio.ParseError, match="dim"):
        nio.system_from_dict(data)


def test_system_from_dict_optional_maps_default():
    system = nio.system_from_dict({"dim": 2, "params": []})
    assert system.automorphism == QMatrix.identity(2)
    assert all(p.is_zero() for p in system.translation.entries)


def test_lattice_file_rows_are_generators():
    data = {"dim": 2, "params": [],
            "structure_constants": [],
            "lattice_basis": [["1", "1/2"], ["0", "1/3"]],
            "automorphism": [["1", "0"], ["0", "1"]],
            "translation": ["0", "0"]}
    system = nio.system_from_dict(data)
    assert system.lattice.generator(0) == (F(1), F(1, 2))
    assert system.lattice.generator(1) == (F(0), F(1, 3))


def test_designated_generators_must_be_a_pair():
    data = _minimal_dict(designated_generators=[["1"]])
    with pytest.raises(nio.ParseError, match="two"):
        nio.system_from_dict(data)


def test_parse_system_reports_json_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"dim": 1,\n  "params": [}\n', encoding="utf-8")
    with pytest.raises(nio.ParseError) as info:
        nio.parse_system(path)
    assert ":2:" in info.value.location


# ---- certificate round-trips ----

CERTIFICATES = [
    WitnessSubspace(QSubspace(3, ((F(1), F(0), F(2)),)), (F(0), F(-1), F(0))),
    WitnessSubspace(QSubspace(2, ()), None),
    ObstructionBracket((F(0), F(1)), (F(1), F(0)), (F(1), F(1))),
    NotFixed((F(0), F(1)), (F(1), F(0)), "t"),
    NotFixed((F(1),), (F(0),), None),
    CosetObstruction(ParamVector(("t",), [Poly.variable("t", ("t",)),
                                          Poly.constant(F(1, 2), ("t",))]),
                     ((F(1), F(0)), (F(0), F(2)))),
    SpectralObstruction((F(1), F(1), F(1))),
    UnipotentPower(6),
    InvariantSubtorus(((F(1), F(-1)),)),
    None,
]


@pytest.mark.parametrize("cert", CERTIFICATES,
                         ids=lambda c: type(c).__name__)
def test_certificate_serialization_round_trips(cert):
    data = nio.serialize_certificate(cert)
    rebuilt = nio.parse_certificate(data)
    assert nio.serialize_certificate(rebuilt) == data


def test_opaque_certificates_pass_through():
    for kind in ("validation_failure", "falsification_witness"):
        data = {"kind": kind, "extra": "x"}
        assert nio.parse_certificate(data) == data


def test_unknown_certificate_kind_rejected():
    with pytest.raises(nio.ParseError):
        nio.parse_certificate({"kind": "mystery"})
    with pytest.raises(TypeError):
        nio.serialize_certificate(object())


# ---- verdict files ----

def test_verdict_round_trip_is_byte_identical():
    verdict = nio.make_verdict_dict(
        "NOT_AA", "full", CERTIFICATES[2], notes=["a", "b"])
    text = nio.canonical_json(verdict)
    assert nio.canonical_json(nio.parse_verdict(text)) == text
    assert text.endswith("\n")


def test_parse_verdict_requires_exact_shape():
    good = nio.make_verdict_dict("AA", "full", None)
    with pytest.raises(nio.ParseError):
        nio.parse_verdict(nio.canonical_json({**good, "extra": 1}))
    bad = dict(good)
    del bad["notes"]
    with pytest.raises(nio.ParseError):
        nio.parse_verdict(nio.canonical_json(bad))
    with pytest.raises(nio.ParseError):
        nio.parse_verdict(nio.canonical_json({**good, "notes": "oops"}))


def test_exit_code_table():
    zeros = ["AA", "VALID", "PASS", "Minimal", "ConsistentWithAA"]
    ones = ["NOT_AA", "INVALID", "FAIL", "NotMinimal", "Falsified"]
    assert [nio.exit_code_for(s) for s in zeros] == [0] * 5
    assert [nio.exit_code_for(s) for s in ones] == [1] * 5
    assert nio.exit_code_for("INCONCLUSIVE") == 2
    assert nio.exit_code_for("anything else") == 3


# ---- command line ----

def _corpus(name):
    return str(nio.corpus_file(name))


def _run_main(capsys, *argv):
    code = ncli.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.startswith("{") else out


def test_cli_validate_valid_file(capsys):
    code, verdict = _run_main(capsys, "validate", _corpus("heisenberg.json"))
    assert code == 0
    assert verdict["status"] == "VALID"
    assert verdict["criterion"] == "validate"


def test_cli_validate_reports_first_failing_check(capsys):
    code, verdict = _run_main(capsys, "validate",
                              _corpus("paper_example_4d.json"))
    assert code == 1
    assert verdict["status"] == "INVALID"
    cert = verdict["certificate"]
    assert cert["kind"] == "validation_failure"
    assert cert["check"] == "is_automorphism"
    assert cert["witness"] == "pair (1, 3); residual (0, 0, 0, 1)"
    assert any("first failing check" in n for n in verdict["notes"])


def test_cli_validate_missing_file(capsys):
    code, verdict = _run_main(capsys, "validate", "no_such_file.json")
    assert code == 3
    assert verdict["status"] == "ERROR"


def test_cli_decide_full(capsys):
    code, verdict = _run_main(capsys, "decide", _corpus("torus_skew.json"),
                              "--criterion", "full")
    assert code == 0
    assert verdict["status"] == "AA"
    assert verdict["certificate"]["kind"] == "witness_subspace"


def test_cli_decide_inapplicable_criterion(capsys):
    code, verdict = _run_main(capsys, "decide", _corpus("heisenberg.json"),
                              "--criterion", "translation")
    assert code == 3
    assert verdict["status"] == "ERROR"


def test_cli_decide_inconclusive(capsys):
    code, verdict = _run_main(capsys, "decide",
                              _corpus("torus_skew_rational.json"),
                              "--criterion", "minimality")
    assert code == 2
    assert verdict["status"] == "INCONCLUSIVE"


def test_cli_run_criterion_dispatch():
    from nilaa.criteria import NonAbelian
    system = nio.parse_system(_corpus("free_nilpotent_2_3.json"))
    for criterion in ncli.CRITERIA:
        if criterion in ("torus", "translation"):
            continue  # hypotheses fail for this system, tested below
        result = ncli.run_criterion(system, criterion)
        assert result["criterion"] == criterion
        assert set(result) == {"status", "criterion", "certificate", "notes"}
    # dispatch does not swallow hypothesis errors; the CLI wrapper does
    with pytest.raises(NonAbelian):
        ncli.run_criterion(system, "torus")


def test_cli_suspend_writes_data(capsys, tmp_path):
    out = tmp_path / "susp.json"
    code, verdict = _run_main(capsys, "suspend",
                              _corpus("torus_skew_translation.json"),
                              "--out", str(out))
    assert code == 0
    assert verdict["status"] == "PASS"
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["dim"] == 3
    assert data["monodromy"] == [["0", "1"], ["0", "0"]]
    assert data["embedded_translation"] == ["1", "-1/2*t", "t"]
    assert data["structure_constants"] == [[1, 3, 2, "1"]]


def test_cli_simulate_dump_csv(capsys, tmp_path):
    out = tmp_path / "orbit.csv"
    code, verdict = _run_main(capsys, "simulate",
                              _corpus("torus_rotation_1d.json"),
                              "--horizon", "500", "--trials", "1",
                              "--dump", str(out))
    assert code == 0
    assert verdict["status"] == "ConsistentWithAA"
    with open(out, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["k", "x1"]
    assert len(rows) == 202  # header + steps 0..200
    assert rows[1][0] == "0"
    assert all(0 <= float(r[1]) < 1 for r in rows[1:])


def test_cli_corpus_run_passes(capsys):
    code = ncli.main(["corpus", "run"])
    out = capsys.readouterr().out
    assert code == 0
    lines = [line for line in out.splitlines() if line]
    assert lines[-1].endswith("corpus checks passed")
    assert all(line.endswith(": PASS") for line in lines[:-1])


def test_console_script_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "nilaa.cli", "decide",
         _corpus("torus_jordan3.json"), "--criterion", "torus"],
        capture_output=True, text=True)
    assert result.returncode == 1
    verdict = nio.parse_verdict(result.stdout)
    assert verdict["status"] == "NOT_AA"
    assert verdict["certificate"]["kind"] == "not_fixed"
