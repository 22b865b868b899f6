"""Finite-dimensional nilpotent Lie algebras over the rationals.

An algebra is specified by structure constants on an ordered basis
xi_1, ..., xi_d.  Validation checks antisymmetry (by construction), the
Jacobi identity on basis triples, and nilpotency via the lower central
series.  Brackets are bilinear over the polynomial layer, so elements whose
coordinates carry symbolic translation parameters bracket exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .poly import ParamVector, Poly, PolyMatrix, _merge
from .ratlin import QMatrix, QSubspace


class JacobiViolation(ValueError):
    """Structure constants fail the Jacobi identity; carries the triple."""

    def __init__(self, triple, residual):
        self.triple = triple
        self.residual = residual
        super().__init__(f"Jacobi identity fails on basis triple {triple}: residual {residual}")


class NotNilpotent(ValueError):
    """Lower central series stabilizes at a nonzero subalgebra."""


class LieAlgebraSpec:
    """Structure constants [xi_i, xi_j] = sum_k c_ijk xi_k on a d-dim space."""

    __slots__ = ("dim", "table")

    def __init__(self, dim: int, table: Mapping[tuple[int, int], Sequence[object]]):
        if dim < 1:
            raise ValueError("dimension must be positive")
        clean: dict[tuple[int, int], tuple[Fraction, ...]] = {}
        for (i, j), vec in table.items():
            if not (0 <= i < dim and 0 <= j < dim) or i == j:
                raise ValueError(f"bad basis index pair ({i}, {j}) for dimension {dim}")
            vec = tuple(Fraction(x) for x in vec)
            if len(vec) != dim:
                raise ValueError(f"structure vector for ({i}, {j}) has wrong length")
            key, val = ((i, j), vec) if i < j else ((j, i), tuple(-x for x in vec))
            if key in clean:
                if clean[key] != val:
                    raise ValueError(f"conflicting declarations for bracket {key}")
                continue
            clean[key] = val
        self.dim = dim
        self.table = {k: v for k, v in clean.items() if any(v)}

    @classmethod
    def from_sparse(cls, dim: int, entries: Iterable[tuple[int, int, int, object]],
                    one_based: bool = True) -> "LieAlgebraSpec":
        """Build from (i, j, k, coeff) quadruples meaning [xi_i, xi_j] has
        coefficient coeff on xi_k."""
        off = 1 if one_based else 0
        table: dict[tuple[int, int], list[Fraction]] = {}
        for i, j, k, coeff in entries:
            i, j, k = i - off, j - off, k - off
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise ValueError(f"index out of range in structure constant ({i + off}, {j + off}, {k + off})")
            vec = table.setdefault((i, j), [Fraction(0)] * dim)
            vec[k] += Fraction(coeff)
        return cls(dim, table)

    def abelian(self) -> bool:
        return not self.table

    def structure_vector(self, i: int, j: int) -> tuple[Fraction, ...]:
        if i == j:
            return tuple(Fraction(0) for _ in range(self.dim))
        if i < j:
            return self.table.get((i, j), tuple(Fraction(0) for _ in range(self.dim)))
        base = self.table.get((j, i))
        if base is None:
            return tuple(Fraction(0) for _ in range(self.dim))
        return tuple(-x for x in base)

    # ---- brackets ----

    def bracket_vec(self, v: Sequence[object], w: Sequence[object]) -> tuple[Fraction, ...]:
        """Bracket of two rational coordinate vectors."""
        v = [Fraction(x) for x in v]
        w = [Fraction(x) for x in w]
        if len(v) != self.dim or len(w) != self.dim:
            raise ValueError("vector has wrong dimension")
        out = [Fraction(0)] * self.dim
        for (i, j), vec in self.table.items():
            c = v[i] * w[j] - v[j] * w[i]
            if c:
                for k, x in enumerate(vec):
                    if x:
                        out[k] += c * x
        return tuple(out)

    def bracket(self, v: ParamVector, w: ParamVector) -> ParamVector:
        """Bracket of two polynomial coordinate vectors."""
        if v.dim != self.dim or w.dim != self.dim:
            raise ValueError("vector has wrong dimension")
        params = _merge(v.params, w.params)
        out = [Poly.zero(params) for _ in range(self.dim)]
        for (i, j), vec in self.table.items():
            c = v.entries[i] * w.entries[j] - v.entries[j] * w.entries[i]
            if not c.is_zero():
                for k, x in enumerate(vec):
                    if x:
                        out[k] = out[k] + c * x
        return ParamVector(params, out)

    def ad_matrix(self, v: Sequence[object]) -> QMatrix:
        """Matrix of ad_v = [v, .] on the basis (rational v)."""
        cols = [self.bracket_vec(v, _unit(self.dim, j)) for j in range(self.dim)]
        return QMatrix.from_columns(cols)

    def ad_poly_matrix(self, v: ParamVector) -> PolyMatrix:
        """Matrix of ad_v for a polynomial coordinate vector."""
        unit_vecs = [ParamVector.from_rationals(_unit(self.dim, j), v.params)
                     for j in range(self.dim)]
        cols = [self.bracket(v, e) for e in unit_vecs]
        return PolyMatrix.from_columns(cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebraSpec):
            return NotImplemented
        return self.dim == other.dim and self.table == other.table

    def __repr__(self) -> str:
        return f"LieAlgebraSpec(dim={self.dim}, {len(self.table)} nonzero brackets)"


def _unit(dim: int, j: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(i == j)) for i in range(dim))


def validate_algebra(spec: LieAlgebraSpec) -> tuple[int, list[QSubspace]]:
    """Check Jacobi and nilpotency.

    Returns (nilpotency class, lower central series [g = g_1, g_2, ...])
    where g_{k+1} = [g, g_k] and the last listed term is the final nonzero
    one.  Raises JacobiViolation or NotNilpotent.
    """
    d = spec.dim
    units = [_unit(d, i) for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                acc = [Fraction(0)] * d
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = spec.bracket_vec(units[b], units[c])
                    outer = spec.bracket_vec(units[a], inner)
                    acc = [x + y for x, y in zip(acc, outer)]
                if any(acc):
                    raise JacobiViolation((i, j, k), tuple(acc))

    series = [QSubspace.full(d)]
    while True:
        prev = series[-1]
        gens = []
        for b in prev.basis:
            for u in units:
                w = spec.bracket_vec(u, b)
                if any(w):
                    gens.append(w)
        nxt = QSubspace.from_spanning(gens, d)
        if nxt.dim == 0:
            break
        if nxt.dim == prev.dim:
            raise NotNilpotent(f"lower central series stabilizes at dimension {nxt.dim}")
        series.append(nxt)
    return len(series), series


def subalgebra_closure(spec: LieAlgebraSpec, vectors: Iterable[Sequence[object]]) -> QSubspace:
    """Smallest subalgebra containing the given rational vectors."""
    span = QSubspace.from_spanning(vectors, spec.dim)
    while True:
        new = []
        basis = span.basis
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                w = spec.bracket_vec(basis[a], basis[b])
                if any(w) and not span.contains(w):
                    new.append(w)
        if not new:
            return span
        span = QSubspace(spec.dim, list(basis) + new)


def is_abelian_family(spec: LieAlgebraSpec, vectors: Sequence[Sequence[object]]
                      ) -> tuple[bool, tuple[int, int] | None]:
    """Do the vectors pairwise commute?  Returns the first failing index pair
    in lexicographic order, if any."""
    vecs = [tuple(map(Fraction, v)) for v in vectors]
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            if any(spec.bracket_vec(vecs[i], vecs[j])):
                return False, (i, j)
    return True, None


def center(spec: LieAlgebraSpec) -> QSubspace:
    """Vectors commuting with the whole algebra."""
    from .ratlin import kernel_basis
    d = spec.dim
    rows = []
    for i in range(d):
        ad = spec.ad_matrix(_unit(d, i))
        rows.extend(ad.entries)
    return QSubspace.from_spanning(kernel_basis(QMatrix(rows)), d)


def derived_subalgebra(spec: LieAlgebraSpec) -> QSubspace:
    return QSubspace.from_spanning([vec for vec in spec.table.values()], spec.dim)


def is_ideal(spec: LieAlgebraSpec, subspace: QSubspace) -> bool:
    """Is [g, W] contained in W?"""
    d = spec.dim
    for b in subspace.basis:
        for i in range(d):
            w = spec.bracket_vec(_unit(d, i), b)
            if any(w) and not subspace.contains(w):
                return False
    return True


def is_automorphism(spec: LieAlgebraSpec, matrix: QMatrix
                    ) -> tuple[bool, tuple[int, int] | None, tuple[Fraction, ...] | None]:
    """Does the matrix preserve brackets: [M xi_i, M xi_j] = M [xi_i, xi_j]?

    On failure returns the first basis pair (i, j), i < j, in lexicographic
    order together with the residual [M xi_i, M xi_j] - M [xi_i, xi_j].
    """
    if matrix.shape != (spec.dim, spec.dim):
        raise ValueError("matrix has wrong shape for this algebra")
    cols = matrix.columns()
    for i in range(spec.dim):
        for j in range(i + 1, spec.dim):
            lhs = spec.bracket_vec(cols[i], cols[j])
            rhs = matrix.matvec(spec.structure_vector(i, j))
            residual = tuple(a - b for a, b in zip(lhs, rhs))
            if any(residual):
                return False, (i, j), residual
    return True, None, None
