"""Exact rational linear algebra.

Everything the deciders need from linear algebra lives here: reduced row
echelon form over the rationals, canonical subspace bases, characteristic
polynomials, Hermite normal form over the integers (for lattice membership
and integer kernels), cyclotomic factor stripping for root-of-unity spectra,
and generic rank of matrices whose entries are polynomials in the symbolic
translation parameters.

No floating point anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .poly import ParamVector, Poly


class NotUnipotent(ValueError):
    """The matrix has an eigenvalue other than 1."""


def _frac_rows(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


class QMatrix:
    """Immutable matrix with Fraction entries."""

    __slots__ = ("entries",)

    def __init__(self, rows: Iterable[Iterable[object]]):
        entries = _frac_rows(rows)
        if entries and any(len(r) != len(entries[0]) for r in entries):
            raise ValueError("ragged rows")
        self.entries = entries

    # ---- constructors ----

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "QMatrix":
        m = n if m is None else m
        return cls([[Fraction(0)] * m for _ in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]]) -> "QMatrix":
        cols = _frac_rows(columns)
        if not cols:
            raise ValueError("no columns")
        n = len(cols[0])
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(n)])

    # ---- shape and access ----

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.entries[ij[0]][ij[1]]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    # ---- arithmetic ----

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return QMatrix([[a + b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return QMatrix([[a - b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "QMatrix":
        return QMatrix([[-x for x in row] for row in self.entries])

    def scale(self, c) -> "QMatrix":
        c = Fraction(c)
        return QMatrix([[c * x for x in row] for row in self.entries])

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return QMatrix([[sum((a * b for a, b in zip(row, col)), Fraction(0))
                         for col in ocols] for row in self.entries])

    def matvec(self, vec: Sequence[object]) -> tuple[Fraction, ...]:
        vec = [Fraction(x) for x in vec]
        if len(vec) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} times {len(vec)}")
        return tuple(sum((a * v for a, v in zip(row, vec)), Fraction(0))
                     for row in self.entries)

    def apply(self, vec: ParamVector) -> ParamVector:
        """Matrix times a vector of polynomials."""
        if vec.dim != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} times {vec.dim}")
        out = []
        for row in self.entries:
            acc = Poly.zero(vec.params)
            for a, p in zip(row, vec.entries):
                if a:
                    acc = acc + p * a
            out.append(acc)
        return ParamVector(vec.params, out)

    def __pow__(self, n: int) -> "QMatrix":
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if not isinstance(n, int):
            raise TypeError("integer power required")
        if n < 0:
            return self.inverse() ** (-n)
        out = QMatrix.identity(self.nrows)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def transpose(self) -> "QMatrix":
        return QMatrix(self.columns())

    def trace(self) -> Fraction:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.nrows)), Fraction(0))

    def inverse(self) -> "QMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
               for i, row in enumerate(self.entries)]
        reduced, pivots = rref(aug)
        if pivots != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return QMatrix([row[n:] for row in reduced])

    def det(self) -> Fraction:
        p = charpoly(self)
        n = self.nrows
        return p[0] if n % 2 == 0 else -p[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in row) + "]"
                         for row in self.entries)

    def __repr__(self) -> str:
        return f"QMatrix({[list(map(str, row)) for row in self.entries]})"


# ---- echelon forms over the rationals ----

def rref(rows: Iterable[Iterable[object]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    mat = [list(map(Fraction, row)) for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def kernel_basis(matrix: QMatrix) -> list[tuple[Fraction, ...]]:
    """Canonical basis of the right kernel (free variables set to 1)."""
    reduced, pivots = rref(matrix.entries)
    n = matrix.ncols
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][fc]
        basis.append(tuple(vec))
    return basis


def solve_linear(matrix: QMatrix, rhs: Sequence[object]) -> tuple[Fraction, ...] | None:
    """One exact solution of matrix @ x = rhs, or None if inconsistent."""
    rhs = [Fraction(x) for x in rhs]
    if len(rhs) != matrix.nrows:
        raise ValueError("right hand side has wrong length")
    aug = [list(row) + [b] for row, b in zip(matrix.entries, rhs)]
    reduced, pivots = rref(aug)
    n = matrix.ncols
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r][n]
    return tuple(x)


class QSubspace:
    """Rational subspace of Q^n with a canonical (RREF) basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Sequence[Sequence[object]]):
        reduced, pivots = rref(basis)
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(reduced[r]) for r in range(len(pivots)))
        for row in self.basis:
            if len(row) != ambient_dim:
                raise ValueError("basis vector has wrong dimension")

    @classmethod
    def from_spanning(cls, vectors: Iterable[Sequence[object]], ambient_dim: int) -> "QSubspace":
        vecs = [tuple(map(Fraction, v)) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("spanning vector has wrong dimension")
        return cls(ambient_dim, vecs)

    @classmethod
    def zero(cls, ambient_dim: int) -> "QSubspace":
        return cls(ambient_dim, [])

    @classmethod
    def full(cls, ambient_dim: int) -> "QSubspace":
        return cls(ambient_dim, QMatrix.identity(ambient_dim).entries)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vec: Sequence[object]) -> bool:
        v = list(map(Fraction, vec))
        if len(v) != self.ambient_dim:
            raise ValueError("vector has wrong dimension")
        for row in self.basis:
            pc = next(i for i, x in enumerate(row) if x)
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, row)]
        return not any(v)

    def contains_subspace(self, other: "QSubspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def sum_with(self, other: "QSubspace") -> "QSubspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return QSubspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "QSubspace") -> "QSubspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        # kernel of the stacked coordinate map: x in both spans
        cols = list(self.basis) + list(other.basis)
        if not cols:
            return QSubspace.zero(self.ambient_dim)
        stacked = QMatrix.from_columns(cols)
        vecs = []
        for k in kernel_basis(stacked):
            v = [Fraction(0)] * self.ambient_dim
            for coeff, b in zip(k[: self.dim], self.basis):
                v = [a + coeff * x for a, x in zip(v, b)]
            vecs.append(tuple(v))
        return QSubspace.from_spanning(vecs, self.ambient_dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSubspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"QSubspace(dim {self.dim} of Q^{self.ambient_dim})"


def annihilator_basis(vectors: Iterable[Sequence[object]], ambient_dim: int) -> list[tuple[Fraction, ...]]:
    """Covectors phi with phi . v = 0 for every given vector."""
    vecs = [tuple(map(Fraction, v)) for v in vectors]
    if not vecs:
        return [tuple(row) for row in QMatrix.identity(ambient_dim).entries]
    return kernel_basis(QMatrix(vecs))


def minimal_rational_subspace(vec: ParamVector) -> QSubspace:
    """Smallest rational subspace containing vec for all parameter values.

    Parameters are algebraically independent reals, so this is the span of
    the per-monomial coefficient vectors.
    """
    return QSubspace.from_spanning(vec.coefficient_vectors().values(), vec.dim)


# ---- characteristic polynomial and unipotency ----

def charpoly(matrix: QMatrix) -> list[Fraction]:
    """Coefficients of det(x I - M), low degree first, monic."""
    if not matrix.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = matrix.nrows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = QMatrix.zeros(n)
    for k in range(1, n + 1):
        M = matrix @ M + QMatrix.identity(n).scale(coeffs[n - k + 1])
        coeffs[n - k] = -(matrix @ M).trace() / k
    return coeffs


def unipotency_index(matrix: QMatrix) -> int | None:
    """Least k with (M - I)^k = 0, or None when M is not unipotent."""
    if not matrix.is_square():
        raise ValueError("unipotency of a non-square matrix")
    n = matrix.nrows
    p = charpoly(matrix)
    binom = [Fraction((-1) ** (n - k) * math.comb(n, k)) for k in range(n + 1)]
    if p != binom:  # charpoly must be (x - 1)^n
        return None
    N = matrix - QMatrix.identity(n)
    power = QMatrix.identity(n)
    for k in range(n + 1):
        if power.is_zero():
            return k
        power = power @ N
    return None


def matrix_exp_nilpotent(matrix: QMatrix) -> QMatrix:
    """exp of a nilpotent matrix, exact (the series terminates)."""
    if not matrix.is_square():
        raise ValueError("exp of a non-square matrix")
    n = matrix.nrows
    out = QMatrix.identity(n)
    term = QMatrix.identity(n)
    for k in range(1, n + 1):
        term = (term @ matrix).scale(Fraction(1, k))
        if term.is_zero():
            return out
        out = out + term
    if not (term @ matrix).is_zero():
        raise ValueError("matrix is not nilpotent")
    return out


def matrix_log_unipotent(matrix: QMatrix) -> QMatrix:
    """log of a unipotent matrix via the terminating Mercator series."""
    k = unipotency_index(matrix)
    if k is None:
        raise ValueError("matrix is not unipotent")
    n = matrix.nrows
    N = matrix - QMatrix.identity(n)
    out = QMatrix.zeros(n)
    power = QMatrix.identity(n)
    for j in range(1, k + 1):
        power = power @ N
        out = out + power.scale(Fraction((-1) ** (j + 1), j))
    return out


# ---- integer lattice computations (Hermite normal form) ----

def _to_int_columns(vectors: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """Scale rational vectors by a common denominator; returns (columns, D)."""
    denom = 1
    for v in vectors:
        for x in v:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
    cols = [[int(x * denom) for x in v] for v in vectors]
    return cols, denom


def column_hnf(columns: list[list[int]], n: int) -> tuple[list[list[int]], list[list[int]]]:
    """Column Hermite normal form.

    Returns (H, U) with H = A U (columns listed as vectors of length n),
    U unimodular over the integers, H in lower staircase form with positive
    pivots and reduced entries left of each pivot.
    """
    m = len(columns)
    H = [list(c) for c in columns]
    U = [[int(i == j) for j in range(m)] for i in range(m)]  # columns of U

    def col_op(j, k, q):  # column j -= q * column k, in both H and U
        H[j] = [a - q * b for a, b in zip(H[j], H[k])]
        U[j] = [a - q * b for a, b in zip(U[j], U[k])]

    c = 0
    for i in range(n):
        if c >= m:
            break
        # euclid out row i across columns c..m-1
        while True:
            nz = [j for j in range(c, m) if H[j][i]]
            if len(nz) <= 1:
                break
            j_min = min(nz, key=lambda j: abs(H[j][i]))
            for j in nz:
                if j != j_min:
                    col_op(j, j_min, H[j][i] // H[j_min][i])
        nz = [j for j in range(c, m) if H[j][i]]
        if not nz:
            continue
        j = nz[0]
        H[c], H[j] = H[j], H[c]
        U[c], U[j] = U[j], U[c]
        if H[c][i] < 0:
            H[c] = [-x for x in H[c]]
            U[c] = [-x for x in U[c]]
        for j in range(c):  # canonical: 0 <= H[j][i] < pivot
            q = H[j][i] // H[c][i]
            if q:
                col_op(j, c, q)
        c += 1
    return H, U


def zspan_basis(vectors: Iterable[Sequence[object]], ambient_dim: int) -> list[tuple[Fraction, ...]]:
    """Canonical basis of the additive group generated by rational vectors."""
    vecs = [tuple(map(Fraction, v)) for v in vectors]
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return []
    cols, denom = _to_int_columns(vecs)
    H, _ = column_hnf(cols, ambient_dim)
    return [tuple(Fraction(x, denom) for x in col) for col in H if any(col)]


def hnf_membership(generators: Sequence[Sequence[object]], target: Sequence[object]
                   ) -> tuple[bool, tuple[int, ...] | None]:
    """Is target an integer combination of the generators?

    Returns (True, coefficients) with one valid integer coefficient vector,
    or (False, None).  Generators may be rationally dependent.
    """
    gens = [tuple(map(Fraction, v)) for v in generators]
    tgt = tuple(map(Fraction, target))
    n = len(tgt)
    for g in gens:
        if len(g) != n:
            raise ValueError("generator has wrong dimension")
    if not any(tgt):
        return True, (0,) * len(gens)
    if not gens:
        return False, None
    cols, denom = _to_int_columns(list(gens) + [tgt])
    tcol = cols[-1]
    H, U = column_hnf(cols[:-1], n)
    # solve H y = t by walking the staircase
    y = [0] * len(H)
    t = list(tcol)
    col_idx = 0
    for i in range(n):
        pivot = H[col_idx][i] if col_idx < len(H) else 0
        if pivot:
            if t[i] % pivot:
                return False, None
            q = t[i] // pivot
            y[col_idx] = q
            t = [a - q * b for a, b in zip(t, H[col_idx])]
            col_idx += 1
        elif t[i]:
            return False, None
    if any(t):
        return False, None
    coords = [sum(U[j][g] * y[j] for j in range(len(y))) for g in range(len(gens))]
    return True, tuple(coords)


def integer_kernel(matrix: QMatrix) -> list[tuple[int, ...]]:
    """Basis of the group of integer vectors x with M x = 0."""
    # row scaling does not change the kernel, so clear denominators per row
    rows = []
    for row in matrix.entries:
        d = 1
        for x in row:
            d = d * x.denominator // math.gcd(d, x.denominator)
        rows.append([int(x * d) for x in row])
    m = matrix.ncols
    cols = [[rows[i][j] for i in range(len(rows))] for j in range(m)]
    H, U = column_hnf(cols, len(rows))
    return [tuple(U[j]) for j in range(m) if not any(H[j])]


# ---- cyclotomic spectra ----

@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    out, k, left = 1, 2, m
    while k * k <= left:
        if left % k == 0:
            out *= k - 1
            left //= k
            while left % k == 0:
                out *= k
                left //= k
        k += 1
    if left > 1:
        out *= left - 1
    return out


def _poly_divmod(num: Sequence[Fraction], den: Sequence[Fraction]):
    num = list(num)
    den = list(den)
    while den and not den[-1]:
        den.pop()
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    rem = list(num)
    dlead = den[-1]
    for k in range(len(rem) - len(den), -1, -1):
        coeff = rem[k + len(den) - 1] / dlead
        quot[k] = coeff
        if coeff:
            for i, d in enumerate(den):
                rem[k + i] -= coeff * d
    while rem and not rem[-1]:
        rem.pop()
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> tuple[Fraction, ...]:
    """Coefficients of the m-th cyclotomic polynomial, low degree first."""
    if m < 1:
        raise ValueError("cyclotomic index must be positive")
    if m == 1:
        return (Fraction(-1), Fraction(1))
    num = [Fraction(0)] * (m + 1)
    num[0], num[m] = Fraction(-1), Fraction(1)  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic(d)))
            assert not rem
    return tuple(num)


@dataclass(frozen=True)
class SpectrumResult:
    """Outcome of factoring a characteristic polynomial into cyclotomics."""

    all_roots_of_unity: bool
    orders: dict  # cyclotomic index -> multiplicity, for the stripped part
    lcm_order: int | None  # least r with every root of unity an r-th root
    obstruction: tuple[Fraction, ...] | None  # leftover factor, if any


def cyclotomic_spectrum_test(coeffs: Sequence[object]) -> SpectrumResult:
    """Split a monic rational polynomial into cyclotomic factors.

    Every root of unity has a cyclotomic minimal polynomial Phi_m with
    phi(m) <= degree, and phi(m) >= sqrt(m/2) bounds the indices m that can
    possibly divide.  Whatever is left after stripping all cyclotomic factors
    witnesses an eigenvalue off the unit circle or irrational on it.
    """
    p = [Fraction(x) for x in coeffs]
    while p and not p[-1]:
        p.pop()
    if not p or p[-1] != 1:
        raise ValueError("polynomial must be monic")
    deg0 = len(p) - 1
    if deg0 == 0:
        return SpectrumResult(True, {}, 1, None)
    if not p[0]:
        # x divides: eigenvalue 0
        while p and not p[0]:
            p.pop(0)
        return SpectrumResult(False, {}, None, tuple([Fraction(0), Fraction(1)]))
    orders: dict[int, int] = {}
    bound = 2 * deg0 * deg0 + 1
    for m in range(1, bound + 1):
        if euler_phi(m) > len(p) - 1:
            continue
        phi_m = list(cyclotomic(m))
        while len(p) - 1 >= len(phi_m) - 1:
            quot, rem = _poly_divmod(p, phi_m)
            if rem:
                break
            orders[m] = orders.get(m, 0) + 1
            p = quot
        if len(p) == 1:
            break
    if len(p) == 1:
        r = 1
        for m in orders:
            r = r * m // math.gcd(r, m)
        return SpectrumResult(True, orders, r, None)
    return SpectrumResult(False, orders, None, tuple(p))


# ---- generic rank over the parameter field ----

def generic_rank(columns: Sequence[ParamVector]) -> int:
    """Rank of the matrix of polynomial columns over the field of fractions.

    Parameters stand for algebraically independent reals, so this is the rank
    attained for all parameter values outside a proper algebraic set.
    """
    if not columns:
        return 0
    from .poly import PolyMatrix
    mat = PolyMatrix.from_columns(list(columns))
    rows = [list(r) for r in mat.rows]
    nrows, ncols = len(rows), len(rows[0])
    rank = 0
    for c in range(ncols):
        pr = next((i for i in range(rank, nrows) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        pivot = rows[rank][c]
        for i in range(rank + 1, nrows):
            if not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [pivot * a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank
