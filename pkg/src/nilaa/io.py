"""System files, verdict files, and certificate serialization.

A system file is JSON with exact rational data: dimensions, 1-based
structure constants, an optional lattice basis (rows are generators),
an automorphism matrix of rational strings and a translation of
polynomial strings over declared parameters.  No floating point is
accepted on this symbolic path; floats appear only inside the optional
"simulate" block consumed by the numeric oracle.

A verdict file has exactly four fields: status, criterion, certificate,
notes.  Serialization is canonical (sorted keys, two-space indent,
trailing newline), so byte comparison of verdict files is meaningful.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .criteria import (AffineSystem, CosetObstruction, InvariantSubtorus,
                       NotFixed, ObstructionBracket, SpectralObstruction,
                       UnipotentPower, ValidationError, Verdict,
                       WitnessSubspace, make_system)
from .poly import ParamVector, Poly
from .ratlin import QMatrix, QSubspace

VALID = "VALID"
INVALID = "INVALID"
ERROR = "ERROR"
PASS = "PASS"
FAIL = "FAIL"


class ParseError(ValueError):
    """Malformed input file; location names the offending field."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


# ---- rational and polynomial grammar ----

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")
_TOKEN_RE = re.compile(r"\s*(\d+/\d+|\d+|[A-Za-z_]\w*|\^|\*|\+|-)")


def parse_rational(value, location: str) -> Fraction:
    """An integer, or a string like "3", "-1/2"; floats are rejected."""
    if isinstance(value, bool):
        raise ParseError(location, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL_RE.match(value.strip()):
        return Fraction(value.strip())
    raise ParseError(location, f"expected an integer or 'p/q', got {value!r}")


def rational_string(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _tokenize(text: str, location: str) -> list:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(location,
                             f"unexpected character {text[pos:].strip()[0]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_polynomial(value, params, location: str) -> Poly:
    """Sums of terms like "1/2", "t", "-3*t^2", "t*s" over the parameters."""
    params = tuple(params)
    if isinstance(value, int) and not isinstance(value, bool):
        return Poly.constant(Fraction(value), params)
    if not isinstance(value, str):
        raise ParseError(location, f"expected a polynomial string, got "
                                   f"{value!r}")
    tokens = _tokenize(value, location)
    if not tokens:
        raise ParseError(location, "empty polynomial")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def factor() -> Poly:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ParseError(location, "incomplete term")
        pos += 1
        if re.fullmatch(r"\d+(/\d+)?", tok):
            return Poly.constant(Fraction(tok), params)
        if re.fullmatch(r"[A-Za-z_]\w*", tok):
            if tok not in params:
                raise ParseError(location, f"unknown parameter {tok!r}")
            base = Poly.variable(tok, params)
            if peek() == "^":
                pos += 1
                exp = peek()
                if exp is None or not exp.isdigit():
                    raise ParseError(location, "exponent must be an integer")
                pos += 1
                return base ** int(exp)
            return base
        raise ParseError(location, f"unexpected token {tok!r}")

    def term() -> Poly:
        nonlocal pos
        out = factor()
        while peek() == "*":
            pos += 1
            out = out * factor()
        return out

    sign = 1
    while peek() in ("+", "-"):
        if peek() == "-":
            sign = -sign
        pos += 1
    result = term() * sign
    while peek() is not None:
        tok = peek()
        if tok not in ("+", "-"):
            raise ParseError(location, f"expected '+' or '-', got {tok!r}")
        sign = 1
        while peek() in ("+", "-"):
            if peek() == "-":
                sign = -sign
            pos += 1
        result = result + term() * sign
    return result


# ---- system files ----

_SYSTEM_KEYS = {"dim", "params", "structure_constants", "lattice_basis",
                "automorphism", "translation", "name",
                "designated_generators", "description", "notes", "simulate",
                "space"}
_SIMULATE_KEYS = {"probe", "eps", "horizon", "seed", "trials", "values",
                  "space", "dump_steps"}


def _parse_matrix(data, dim, location) -> QMatrix:
    if not isinstance(data, list) or len(data) != dim:
        raise ParseError(location, f"expected {dim} rows")
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"{location}[{i}]", f"expected {dim} entries")
        rows.append([parse_rational(v, f"{location}[{i}][{j}]")
                     for j, v in enumerate(row)])
    return QMatrix(rows)


def _parse_structure_constants(data, dim, location):
    if not isinstance(data, list):
        raise ParseError(location, "expected a list of (i, j, k, value)")
    seen = {}
    for idx, entry in enumerate(data):
        where = f"{location}[{idx}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError(where, "expected [i, j, k, value]")
        i, j, k, raw = entry
        for name, v in (("i", i), ("j", j), ("k", k)):
            if not isinstance(v, int) or not 1 <= v <= dim:
                raise ParseError(where, f"index {name} must be in 1..{dim}")
        if i == j:
            raise ParseError(where, "bracket of a vector with itself")
        value = parse_rational(raw, where)
        lo, hi = min(i, j), max(i, j)
        signed = value if i < j else -value
        key = (lo, hi, k)
        if key in seen:
            if seen[key] != signed:
                raise ParseError(where, f"antisymmetry conflict for "
                                        f"[xi{i}, xi{j}] on xi{k}")
            raise ParseError(where, f"duplicate structure constant "
                                    f"({i}, {j}, {k})")
        seen[key] = signed
    return [(lo, hi, k, val) for (lo, hi, k), val in seen.items()
            if val != 0]


def system_from_dict(data: dict, source: str = "<memory>") -> AffineSystem:
    """Build a validated system from a decoded JSON object."""
    if not isinstance(data, dict):
        raise ParseError(source, "top level must be an object")
    unknown = set(data) - _SYSTEM_KEYS
    if unknown:
        raise ParseError(source, f"unknown keys: {sorted(unknown)}")
    dim = data.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{source}:dim", "dim must be a positive integer")
    params = data.get("params", [])
    if (not isinstance(params, list)
            or any(not isinstance(p, str) or not p.isidentifier()
                   for p in params)
            or len(set(params)) != len(params)):
        raise ParseError(f"{source}:params",
                         "params must be distinct identifiers")
    params = tuple(params)

    from .nilalg import LieAlgebraSpec
    entries = _parse_structure_constants(
        data.get("structure_constants", []), dim,
        f"{source}:structure_constants")
    algebra = LieAlgebraSpec.from_sparse(dim, entries, one_based=True)

    lattice = None
    if data.get("lattice_basis") is not None:
        rows = _parse_matrix(data["lattice_basis"], dim,
                             f"{source}:lattice_basis")
        # file rows are generators; LogLattice wants them as columns
        lattice = QMatrix.from_columns(rows.entries)

    automorphism = None
    if data.get("automorphism") is not None:
        automorphism = _parse_matrix(data["automorphism"], dim,
                                     f"{source}:automorphism")

    translation = None
    if data.get("translation") is not None:
        raw = data["translation"]
        if not isinstance(raw, list) or len(raw) != dim:
            raise ParseError(f"{source}:translation",
                             f"expected {dim} polynomial strings")
        polys = [parse_polynomial(v, params, f"{source}:translation[{i}]")
                 for i, v in enumerate(raw)]
        translation = ParamVector(params, polys)

    gens = None
    if data.get("designated_generators") is not None:
        raw = data["designated_generators"]
        where = f"{source}:designated_generators"
        if not isinstance(raw, list) or len(raw) != 2:
            raise ParseError(where, "expected exactly two generators")
        gens = [[parse_rational(v, f"{where}[{i}][{j}]")
                 for j, v in enumerate(g)] for i, g in enumerate(raw)]
        if any(len(g) != dim for g in gens):
            raise ParseError(where, f"generators must have {dim} entries")

    simulate = data.get("simulate")
    if simulate is not None:
        if not isinstance(simulate, dict):
            raise ParseError(f"{source}:simulate", "expected an object")
        unknown = set(simulate) - _SIMULATE_KEYS
        if unknown:
            raise ParseError(f"{source}:simulate",
                             f"unknown keys: {sorted(unknown)}")
        simulate = dict(simulate)
    if data.get("space") is not None:
        if data["space"] not in ("Torus", "Heisenberg3"):
            raise ParseError(f"{source}:space",
                             "space must be 'Torus' or 'Heisenberg3'")
        simulate = dict(simulate or {})
        simulate.setdefault("space", data["space"])

    notes = data.get("notes", [])
    if not isinstance(notes, list) or any(not isinstance(n, str)
                                          for n in notes):
        raise ParseError(f"{source}:notes", "notes must be strings")

    return make_system(algebra, lattice=lattice, automorphism=automorphism,
                       translation=translation,
                       name=str(data.get("name", "")),
                       designated_generators=gens,
                       description=str(data.get("description", "")),
                       notes=tuple(notes), simulate=simulate)


def parse_system(path) -> AffineSystem:
    """Read and fully validate a system file.

    Raises ParseError for malformed files and ValidationError (with the
    first failing check) for well-formed but inconsistent systems.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(path), str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}",
                         exc.msg) from exc
    return system_from_dict(data, source=path.name)


# ---- certificates ----

def _vector_strings(vec) -> list:
    return [rational_string(v) for v in vec]


def serialize_certificate(cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, WitnessSubspace):
        return {"kind": "witness_subspace",
                "ambient_dim": cert.subspace.ambient_dim,
                "basis": [_vector_strings(row) for row in
                          cert.subspace.basis],
                "shift": None if cert.shift is None
                else _vector_strings(cert.shift)}
    if isinstance(cert, ObstructionBracket):
        return {"kind": "obstruction_bracket",
                "left": _vector_strings(cert.left),
                "right": _vector_strings(cert.right),
                "bracket": _vector_strings(cert.bracket)}
    if isinstance(cert, NotFixed):
        return {"kind": "not_fixed",
                "vector": _vector_strings(cert.vector),
                "image": _vector_strings(cert.image),
                "monomial": cert.monomial}
    if isinstance(cert, CosetObstruction):
        return {"kind": "coset_obstruction",
                "params": list(cert.vector.params),
                "vector": [str(p) for p in cert.vector.entries],
                "generators": [_vector_strings(g) for g in cert.generators]}
    if isinstance(cert, SpectralObstruction):
        return {"kind": "spectral_obstruction",
                "factor": _vector_strings(cert.factor)}
    if isinstance(cert, UnipotentPower):
        return {"kind": "unipotent_power", "power": cert.power}
    if isinstance(cert, InvariantSubtorus):
        return {"kind": "invariant_subtorus",
                "covectors": [_vector_strings(c) for c in cert.covectors]}
    raise TypeError(f"unknown certificate type {type(cert).__name__}")


def parse_certificate(data):
    """Rebuild a certificate object from its serialized form."""
    if data is None:
        return None
    if not isinstance(data, dict) or "kind" not in data:
        raise ParseError("certificate", "expected an object with a kind")
    kind = data["kind"]
    loc = f"certificate({kind})"

    def vec(values):
        return tuple(parse_rational(v, loc) for v in values)

    if kind == "witness_subspace":
        sub = QSubspace(int(data["ambient_dim"]),
                        tuple(vec(row) for row in data["basis"]))
        shift = None if data.get("shift") is None else vec(data["shift"])
        return WitnessSubspace(sub, shift)
    if kind == "obstruction_bracket":
        return ObstructionBracket(vec(data["left"]), vec(data["right"]),
                                  vec(data["bracket"]))
    if kind == "not_fixed":
        return NotFixed(vec(data["vector"]), vec(data["image"]),
                        data.get("monomial"))
    if kind == "coset_obstruction":
        params = tuple(data.get("params", []))
        polys = [parse_polynomial(p, params, loc) for p in data["vector"]]
        return CosetObstruction(ParamVector(params, polys),
                                tuple(vec(g) for g in data["generators"]))
    if kind == "spectral_obstruction":
        return SpectralObstruction(vec(data["factor"]))
    if kind == "unipotent_power":
        return UnipotentPower(int(data["power"]))
    if kind == "invariant_subtorus":
        return InvariantSubtorus(tuple(vec(c) for c in data["covectors"]))
    if kind in ("validation_failure", "falsification_witness"):
        return dict(data)
    raise ParseError(loc, "unknown certificate kind")


# ---- verdict files ----

def make_verdict_dict(status: str, criterion: str, certificate,
                      notes=()) -> dict:
    if certificate is not None and not isinstance(certificate, dict):
        certificate = serialize_certificate(certificate)
    return {"status": status, "criterion": criterion,
            "certificate": certificate, "notes": [str(n) for n in notes]}


def verdict_to_dict(verdict: Verdict) -> dict:
    return make_verdict_dict(verdict.status, verdict.criterion,
                             verdict.certificate, verdict.notes)


def lie_report_to_dict(report) -> dict:
    notes = [
        "composite map condition ((U - I) after the defect family): "
        + ("passed" if report.composite_zero else "failed"),
        "image bracket condition: "
        + ("passed" if report.image_abelian else "failed"),
    ]
    if report.witness is not None:
        which, i, j, text = report.witness
        notes.append(f"witness for {which}: entry ({i + 1}, {j + 1}) = "
                     f"{text}")
    notes.append("these conditions are necessary, not sufficient")
    return make_verdict_dict(PASS if report.passed else FAIL, "lie", None,
                             notes)


def minimality_report_to_dict(report) -> dict:
    return make_verdict_dict(report.status, "minimality",
                             report.certificate, report.notes)


def two_generator_report_to_dict(report) -> dict:
    agree = report.coefficients == report.matrix_coefficients
    notes = [f"chain length n = {report.n}",
             "curve coefficients: "
             + ", ".join(rational_string(c) for c in report.coefficients),
             "matrix coefficients: "
             + ", ".join(rational_string(c)
                         for c in report.matrix_coefficients)]
    notes.extend(report.notes)
    return make_verdict_dict(PASS if agree else FAIL, "two-generator",
                             None, notes)


def power_result_to_dict(result) -> dict:
    if isinstance(result, UnipotentPower):
        return make_verdict_dict(PASS, "power-unipotent", result,
                                 [f"U^{result.power} is unipotent"])
    return make_verdict_dict(FAIL, "power-unipotent", result,
                             ["a non-cyclotomic factor obstructs every "
                              "power"])


def aa_report_to_dict(report) -> dict:
    certificate = None
    if report.witness is not None:
        w = report.witness
        certificate = {"kind": "falsification_witness",
                       "probe": _vector_strings(w.probe),
                       "target": _vector_strings(w.target),
                       "sequence": list(w.sequence),
                       "forward_distance": w.forward_distance,
                       "backward_distance": w.backward_distance}
    notes = [f"trials = {report.trials}, horizon = {report.horizon}, "
             f"eps = {report.epsilon_forward}, seed = {report.seed}"]
    notes.extend(report.notes)
    notes.append("a Falsified verdict is conclusive up to rounding; "
                 "ConsistentWithAA is evidence, not proof")
    return make_verdict_dict(report.verdict, "simulate", certificate, notes)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def parse_verdict(text: str) -> dict:
    """Decode and shape-check a verdict file."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"verdict:{exc.lineno}", exc.msg) from exc
    if not isinstance(data, dict) or set(data) != {"status", "criterion",
                                                   "certificate", "notes"}:
        raise ParseError("verdict", "expected exactly the fields status, "
                                    "criterion, certificate, notes")
    if not isinstance(data["notes"], list):
        raise ParseError("verdict:notes", "notes must be a list")
    parse_certificate(data["certificate"])  # shape check
    return data


def exit_code_for(status: str) -> int:
    if status in ("AA", VALID, PASS, "Minimal", "ConsistentWithAA"):
        return 0
    if status in ("NOT_AA", INVALID, FAIL, "NotMinimal", "Falsified"):
        return 1
    if status == "INCONCLUSIVE":
        return 2
    return 3


def validation_failure_dict(exc: ValidationError) -> dict:
    return {"kind": "validation_failure", "check": exc.check,
            "witness": describe_validation_witness(exc)}


def describe_validation_witness(exc: ValidationError) -> str:
    if exc.check == "is_automorphism":
        pair, residual = exc.witness
        i, j = pair
        return (f"pair ({i + 1}, {j + 1}); residual "
                f"({', '.join(rational_string(v) for v in residual)})")
    return str(exc.witness)


# ---- suspension files ----

def suspension_to_dict(susp, base_name: str = "") -> dict:
    """Serialize a suspended system: big algebra, monodromy, fiber data.

    The suspension lattice is the monodromy-twisted product of a circle
    and the fiber lattice; it is generally not the integer span of any
    basis, so it is recorded as the pair (monodromy, fiber lattice).
    """
    big = susp.big_algebra
    constants = []
    for (i, j), vec in sorted(big.table.items()):
        for k, c in enumerate(vec):
            if c != 0:
                constants.append([i + 1, j + 1, k + 1, rational_string(c)])
    return {
        "name": f"suspension of {base_name}" if base_name else "suspension",
        "dim": big.dim,
        "structure_constants": constants,
        "monodromy": [[rational_string(v) for v in row]
                      for row in susp.monodromy.entries],
        "fiber_lattice_basis": [
            [rational_string(v) for v in susp.fiber_lattice.generator(i)]
            for i in range(susp.fiber_lattice.dim)],
        "embedded_translation": [str(p) for p in
                                 susp.embedded_translation.entries],
        "notes": ["coordinates are (circle, fiber); the circle generator "
                  "acts on the fiber by the monodromy derivation"],
    }


# ---- corpus access ----

def corpus_dir() -> Path:
    return Path(resources.files("nilaa") / "corpus")


def corpus_file(name: str) -> Path:
    path = corpus_dir() / name
    if not path.exists():
        raise FileNotFoundError(f"no corpus file named {name}")
    return path


def load_manifest() -> dict:
    return json.loads((corpus_dir() / "manifest.json").read_text())
