"""Sparse multivariate polynomials over the rationals.

Translation parts of affine maps may carry free parameters ("t", "s", ...)
standing for algebraically independent real numbers, so coordinates of group
elements are polynomials in those parameters with Fraction coefficients.
The representation is deliberately small: an ordered tuple of parameter
names plus a dict mapping exponent tuples to nonzero coefficients.  All
arithmetic is exact.

Monomial order used for printing and for any "first monomial" tie-break is
graded lexicographic: higher total degree first, then lexicographic in the
parameter tuple order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def _gradlex_key(exps: tuple[int, ...]):
    # sort() ascending with this key lists high degree first, then lex order
    return (-sum(exps), tuple(-e for e in exps))


class Poly:
    """Polynomial in a fixed ordered tuple of parameters, exact coefficients."""

    __slots__ = ("params", "terms")

    def __init__(self, params: Sequence[str], terms: Mapping[tuple[int, ...], object] | None = None):
        params = tuple(params)
        if len(set(params)) != len(params):
            raise ValueError(f"duplicate parameter names in {params}")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(params) or any((not isinstance(e, int)) or e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps} for parameters {params}")
            c = _as_fraction(coeff)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.params = params
        self.terms = clean

    # ---- constructors ----

    @classmethod
    def zero(cls, params: Sequence[str] = ()) -> "Poly":
        return cls(params)

    @classmethod
    def constant(cls, value, params: Sequence[str] = ()) -> "Poly":
        params = tuple(params)
        c = _as_fraction(value)
        if not c:
            return cls(params)
        return cls(params, {tuple(0 for _ in params): c})

    @classmethod
    def variable(cls, name: str, params: Sequence[str]) -> "Poly":
        params = tuple(params)
        if name not in params:
            raise ValueError(f"unknown parameter {name!r}, have {params}")
        exps = tuple(1 if p == name else 0 for p in params)
        return cls(params, {exps: Fraction(1)})

    # ---- parameter alignment ----

    def with_params(self, params: Sequence[str]) -> "Poly":
        """Re-express over another parameter tuple covering every used name."""
        params = tuple(params)
        if params == self.params:
            return self
        missing = set(self.used_params()) - set(params)
        if missing:
            raise ValueError(f"parameters {sorted(missing)} missing from {params}")
        terms = {}
        for exps, coeff in self.terms.items():
            terms[tuple(_remap(exps, self.params, params))] = coeff
        return Poly(params, terms)

    def _align(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if self.params == other.params:
            return self, other
        merged = list(self.params)
        for name in other.params:
            if name not in merged:
                merged.append(name)
        merged = tuple(merged)
        return self.with_params(merged), other.with_params(merged)

    # ---- queries ----

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return sum(self.terms.values(), Fraction(0))

    def degree(self) -> int:
        """Total degree; the zero polynomial gets -1."""
        if not self.terms:
            return -1
        return max(sum(exps) for exps in self.terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def monomials(self) -> list[tuple[int, ...]]:
        """Exponent tuples present, in graded lexicographic order (largest first)."""
        return sorted(self.terms, key=_gradlex_key)

    def used_params(self) -> tuple[str, ...]:
        used = set()
        for exps in self.terms:
            for name, e in zip(self.params, exps):
                if e:
                    used.add(name)
        return tuple(name for name in self.params if name in used)

    # ---- arithmetic ----

    def __neg__(self) -> "Poly":
        return Poly(self.params, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other, self.params)
        a, b = self._align(other)
        terms = dict(a.terms)
        for exps, coeff in b.terms.items():
            acc = terms.get(exps, Fraction(0)) + coeff
            if acc:
                terms[exps] = acc
            else:
                terms.pop(exps, None)
        return Poly(a.params, terms)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other, self.params)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.constant(other, self.params) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _as_fraction(other)
            return Poly(self.params, {e: c * v for e, v in self.terms.items()})
        a, b = self._align(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                exps = tuple(x + y for x, y in zip(e1, e2))
                acc = terms.get(exps, Fraction(0)) + c1 * c2
                if acc:
                    terms[exps] = acc
                else:
                    terms.pop(exps, None)
        return Poly(a.params, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"polynomial power must be a nonnegative integer, got {n!r}")
        out = Poly.constant(1, self.params)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def substitute(self, values: Mapping[str, object]) -> Fraction:
        """Evaluate at exact rational parameter values."""
        vals = []
        for name in self.params:
            if name not in values:
                if name in self.used_params():
                    raise ValueError(f"no value supplied for parameter {name!r}")
                vals.append(Fraction(0))
            else:
                vals.append(_as_fraction(values[name]))
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(vals, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    # ---- canonical form, comparison, printing ----

    def _canonical(self) -> tuple:
        """Form invariant under unused-parameter padding and reordering."""
        used = self.used_params()
        order = sorted(used)
        idx = [self.params.index(name) for name in order]
        items = []
        for exps, coeff in self.terms.items():
            items.append((tuple(exps[i] for i in idx), coeff))
        return (tuple(order), tuple(sorted(items)))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, Poly):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _term_str(self, exps: tuple[int, ...], coeff: Fraction) -> str:
        factors = []
        for name, e in zip(self.params, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            return str(coeff)
        body = "*".join(factors)
        if coeff == 1:
            return body
        if coeff == -1:
            return f"-{body}"
        return f"{coeff}*{body}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in self.monomials():
            s = self._term_str(exps, self.terms[exps])
            if parts:
                parts.append(f"- {s[1:]}" if s.startswith("-") else f"+ {s}")
            else:
                parts.append(s)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")
_NUMBER_RE = re.compile(r"^\d+(?:/\d+)?$")


def parse_poly(text: str, params: Sequence[str] | None = None) -> Poly:
    """Parse expressions like "t", "-1/2", "2*t^2 - s + 3/4".

    No parentheses; terms are separated by +/-, factors by *.  When params is
    None the parameter tuple is the names in order of first appearance.
    """
    squeezed = text.replace(" ", "")
    if not squeezed:
        raise ValueError("empty polynomial string")
    if any(ch in squeezed for ch in "()"):
        raise ValueError(f"parentheses not supported: {text!r}")
    tokens = re.findall(r"[+-]?[^+-]+", squeezed)
    if "".join(tokens) != squeezed:
        raise ValueError(f"cannot tokenize: {text!r}")

    parsed: list[tuple[Fraction, dict[str, int]]] = []
    names: list[str] = []
    for token in tokens:
        sign = Fraction(1)
        if token[0] in "+-":
            if token[0] == "-":
                sign = Fraction(-1)
            token = token[1:]
        if not token:
            raise ValueError(f"dangling sign in {text!r}")
        coeff = sign
        powers: dict[str, int] = {}
        for factor in token.split("*"):
            if _NUMBER_RE.match(factor):
                coeff *= Fraction(factor)
                continue
            m = _FACTOR_RE.match(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            name, exp = m.group(1), int(m.group(2) or 1)
            powers[name] = powers.get(name, 0) + exp
            if name not in names:
                names.append(name)
        parsed.append((coeff, powers))

    if params is None:
        params = tuple(names)
    else:
        params = tuple(params)
        for name in names:
            if name not in params:
                raise ValueError(f"unknown parameter {name!r}, expected one of {params}")

    out = Poly.zero(params)
    for coeff, powers in parsed:
        exps = tuple(powers.get(p, 0) for p in params)
        out = out + Poly(params, {exps: coeff})
    return out


class ParamVector:
    """Vector whose entries are polynomials over one shared parameter tuple."""

    __slots__ = ("params", "entries")

    def __init__(self, params: Sequence[str], entries: Iterable[Poly | object]):
        params = tuple(params)
        fixed = []
        for entry in entries:
            if isinstance(entry, Poly):
                if not set(entry.used_params()) <= set(params):
                    raise ValueError(f"entry {entry} uses parameters outside {params}")
                fixed.append(entry if entry.params == params else
                             Poly(params, {tuple(_remap(exps, entry.params, params)): c
                                           for exps, c in entry.terms.items()}))
            else:
                fixed.append(Poly.constant(entry, params))
        self.params = params
        self.entries = tuple(fixed)

    @classmethod
    def from_rationals(cls, values: Iterable[object], params: Sequence[str] = ()) -> "ParamVector":
        return cls(params, [Poly.constant(v, params) for v in values])

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Poly:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.entries)

    def is_constant(self) -> bool:
        return all(p.is_constant() for p in self.entries)

    def __add__(self, other: "ParamVector") -> "ParamVector":
        a, b = _align_vectors(self, other)
        return ParamVector(a.params, [x + y for x, y in zip(a.entries, b.entries)])

    def __sub__(self, other: "ParamVector") -> "ParamVector":
        a, b = _align_vectors(self, other)
        return ParamVector(a.params, [x - y for x, y in zip(a.entries, b.entries)])

    def __neg__(self) -> "ParamVector":
        return ParamVector(self.params, [-p for p in self.entries])

    def scale(self, c) -> "ParamVector":
        return ParamVector(self.params, [p * c for p in self.entries])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamVector):
            return NotImplemented
        if len(self.entries) != len(other.entries):
            return False
        return all(x == y for x, y in zip(self.entries, other.entries))

    def __hash__(self):
        return hash(tuple(self.entries))

    def monomials(self) -> list[tuple[int, ...]]:
        """All exponent tuples appearing in any entry, graded lex, largest first."""
        seen = set()
        for p in self.entries:
            seen.update(p.terms)
        return sorted(seen, key=_gradlex_key)

    def coefficient_vectors(self) -> dict[tuple[int, ...], tuple[Fraction, ...]]:
        """Map each monomial to its vector of coefficients across entries.

        The defect of an affine map is such a vector of polynomials; rational
        subspace questions about it reduce to questions about these finitely
        many rational vectors.
        """
        out = {}
        for exps in self.monomials():
            out[exps] = tuple(p.coefficient(exps) for p in self.entries)
        return out

    def substitute(self, values: Mapping[str, object]) -> tuple[Fraction, ...]:
        return tuple(p.substitute(values) for p in self.entries)

    def constant_values(self) -> tuple[Fraction, ...]:
        return tuple(p.constant_value() for p in self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.entries) + ")"

    def __repr__(self) -> str:
        return f"ParamVector{self}"


def _remap(exps, old_params, new_params):
    new = [0] * len(new_params)
    for name, e in zip(old_params, exps):
        if e:
            new[new_params.index(name)] = e
    return new


def _merge(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    merged = list(a)
    for name in b:
        if name not in merged:
            merged.append(name)
    return tuple(merged)


def _align_vectors(a: ParamVector, b: ParamVector) -> tuple[ParamVector, ParamVector]:
    if len(a.entries) != len(b.entries):
        raise ValueError(f"dimension mismatch: {len(a.entries)} vs {len(b.entries)}")
    if a.params == b.params:
        return a, b
    merged = _merge(a.params, b.params)
    return (ParamVector(merged, [p.with_params(merged) for p in a.entries]),
            ParamVector(merged, [p.with_params(merged) for p in b.entries]))


class PolyMatrix:
    """Dense matrix with polynomial entries; only what elimination needs."""

    __slots__ = ("params", "rows")

    def __init__(self, params: Sequence[str], rows: Iterable[Iterable[Poly | object]]):
        params = tuple(params)
        fixed = []
        width = None
        for row in rows:
            vec = [entry.with_params(params) if isinstance(entry, Poly)
                   else Poly.constant(entry, params) for entry in row]
            if width is None:
                width = len(vec)
            elif len(vec) != width:
                raise ValueError("ragged rows")
            fixed.append(tuple(vec))
        self.params = params
        self.rows = tuple(fixed)

    @classmethod
    def from_columns(cls, columns: Sequence[ParamVector]) -> "PolyMatrix":
        if not columns:
            raise ValueError("no columns")
        params = columns[0].params
        for col in columns[1:]:
            params = _merge(params, col.params)
        cols = [[p.with_params(params) for p in col.entries] for col in columns]
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ValueError("columns of unequal dimension")
        return cls(params, [[cols[j][i] for j in range(len(cols))] for i in range(n)])

    @classmethod
    def identity(cls, n: int, params: Sequence[str] = ()) -> "PolyMatrix":
        return cls(params, [[Poly.constant(int(i == j), params) for j in range(n)]
                            for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        return self.rows[ij[0]][ij[1]]

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.rows for p in row)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        params = _merge(self.params, other.params)
        return PolyMatrix(params, [[a + b for a, b in zip(r1, r2)]
                                   for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(self.params, [[p * c for p in row] for row in self.rows])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        params = _merge(self.params, other.params)
        rows = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = Poly.zero(params)
                for t in range(k):
                    acc = acc + self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            rows.append(row)
        return PolyMatrix(params, rows)

    def exp_nilpotent(self, max_terms: int | None = None) -> "PolyMatrix":
        """exp of a nilpotent polynomial matrix (series must terminate)."""
        n, m = self.shape
        if n != m:
            raise ValueError("exp of a non-square matrix")
        limit = n if max_terms is None else max_terms
        out = PolyMatrix.identity(n, self.params)
        term = PolyMatrix.identity(n, self.params)
        for k in range(1, limit + 1):
            term = (term @ self).scale(Fraction(1, k))
            if term.is_zero():
                return out
            out = out + term
        if not (term @ self).is_zero():
            raise ValueError("matrix is not nilpotent")
        return out

    def log_unipotent(self) -> "PolyMatrix":
        """log of a unipotent polynomial matrix (terminating Mercator series)."""
        n, m = self.shape
        if n != m:
            raise ValueError("log of a non-square matrix")
        N = self - PolyMatrix.identity(n, self.params)
        out = PolyMatrix(self.params, [[Poly.zero(self.params)] * n for _ in range(n)])
        power = PolyMatrix.identity(n, self.params)
        for j in range(1, n + 1):
            power = power @ N
            if power.is_zero():
                return out
            out = out + power.scale(Fraction((-1) ** (j + 1), j))
        if not (power @ N).is_zero():
            raise ValueError("matrix is not unipotent")
        return out

    def matvec(self, vec: ParamVector) -> ParamVector:
        n, m = self.shape
        if m != vec.dim:
            raise ValueError(f"shape mismatch: {self.shape} times {vec.dim}")
        params = _merge(self.params, vec.params)
        out = []
        for i in range(n):
            acc = Poly.zero(params)
            for j in range(m):
                acc = acc + self.rows[i][j] * vec.entries[j]
            out.append(acc)
        return ParamVector(params, out)

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(p) for p in row) + "]" for row in self.rows)
