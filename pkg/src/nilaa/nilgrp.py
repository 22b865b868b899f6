"""Simply connected nilpotent groups in exponential coordinates.

A group element is identified with its logarithm, a coordinate vector in the
Lie algebra, and multiplication is the Baker-Campbell-Hausdorff series.  For
a nilpotent algebra of class c the series is a finite sum over words of
length at most c, so multiplication is exact rational (or polynomial, when
coordinates carry symbolic parameters).

BCH coefficients are obtained once per class by expanding log(e^X e^Y) in
the truncated free associative algebra on two letters and projecting each
word to its left-normed bracket; for a homogeneous Lie element of degree n
that projection is n times the element, which fixes the normalization.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .nilalg import LieAlgebraSpec, validate_algebra
from .poly import ParamVector, Poly, PolyMatrix, _merge
from .ratlin import QMatrix, matrix_exp_nilpotent, matrix_log_unipotent

BCH_CLASS_CAP = 6


class ClassCapExceeded(ValueError):
    """Nilpotency class above the supported truncation depth."""


def _fa_mul(p: dict, q: dict, cap: int) -> dict:
    out: dict[tuple[int, ...], Fraction] = {}
    for w1, c1 in p.items():
        if len(w1) > cap:
            continue
        for w2, c2 in q.items():
            if len(w1) + len(w2) > cap:
                continue
            w = w1 + w2
            acc = out.get(w, Fraction(0)) + c1 * c2
            if acc:
                out[w] = acc
            else:
                out.pop(w, None)
    return out


@lru_cache(maxsize=None)
def bch_table(cap: int) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """BCH terms up to word length cap.

    Each entry (word, coeff) contributes coeff times the left-normed bracket
    of the word, letters 0 and 1 standing for the two arguments.  The degree
    1 and 2 entries reproduce X + Y + [X,Y]/2.
    """
    if not 1 <= cap <= BCH_CLASS_CAP:
        raise ClassCapExceeded(f"BCH truncation {cap} outside 1..{BCH_CLASS_CAP}")
    one: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}

    def fa_exp(p: dict) -> dict:
        out = dict(one)
        term = dict(one)
        for k in range(1, cap + 1):
            term = _fa_mul(term, p, cap)
            term = {w: c / k for w, c in term.items()}
            for w, c in term.items():
                out[w] = out.get(w, Fraction(0)) + c
        return {w: c for w, c in out.items() if c}

    z = _fa_mul(fa_exp({(0,): Fraction(1)}), fa_exp({(1,): Fraction(1)}), cap)
    u = {w: c for w, c in z.items() if w}  # z - 1
    log = {}
    power = dict(one)
    for k in range(1, cap + 1):
        power = _fa_mul(power, u, cap)
        sign = Fraction((-1) ** (k + 1), k)
        for w, c in power.items():
            acc = log.get(w, Fraction(0)) + sign * c
            if acc:
                log[w] = acc
            else:
                log.pop(w, None)
    # Dynkin projection: a degree-n Lie element equals 1/n times the sum of
    # left-normed bracketings of its words
    terms = [(w, c / len(w)) for w, c in sorted(log.items(), key=lambda t: (len(t[0]), t[0]))]
    return tuple(terms)


class NilpotentGroup:
    """Group law, adjoint action, and affine defect for one algebra."""

    def __init__(self, spec: LieAlgebraSpec):
        self.spec = spec
        self.nilpotency_class, self.lower_central_series = validate_algebra(spec)
        if self.nilpotency_class > BCH_CLASS_CAP:
            raise ClassCapExceeded(
                f"nilpotency class {self.nilpotency_class} exceeds cap {BCH_CLASS_CAP}")
        self._terms = bch_table(self.nilpotency_class)

    @property
    def dim(self) -> int:
        return self.spec.dim

    # ---- multiplication ----

    def mult_vec(self, v: Sequence[object], w: Sequence[object]) -> tuple[Fraction, ...]:
        """log(exp v exp w) for rational coordinate vectors."""
        v = tuple(Fraction(x) for x in v)
        w = tuple(Fraction(x) for x in w)
        args = (v, w)
        out = [Fraction(0)] * self.dim
        for word, coeff in self._terms:
            acc = args[word[0]]
            for letter in word[1:]:
                acc = self.spec.bracket_vec(acc, args[letter])
                if not any(acc):
                    break
            else:
                for k, x in enumerate(acc):
                    if x:
                        out[k] += coeff * x
        return tuple(out)

    def mult(self, v: ParamVector, w: ParamVector) -> ParamVector:
        """log(exp v exp w) for polynomial coordinate vectors."""
        params = _merge(v.params, w.params)
        v = ParamVector(params, [p.with_params(params) for p in v.entries])
        w = ParamVector(params, [p.with_params(params) for p in w.entries])
        args = (v, w)
        out = ParamVector(params, [Poly.zero(params)] * self.dim)
        for word, coeff in self._terms:
            acc = args[word[0]]
            for letter in word[1:]:
                acc = self.spec.bracket(acc, args[letter])
                if acc.is_zero():
                    break
            else:
                out = out + acc.scale(coeff)
        return out

    def inv(self, v):
        """exp(v)^{-1} = exp(-v) in any group."""
        if isinstance(v, ParamVector):
            return -v
        return tuple(-Fraction(x) for x in v)

    # ---- adjoint action ----

    def adjoint_matrix(self, v: Sequence[object]) -> QMatrix:
        """Ad(exp v) = exp(ad_v) on the algebra, rational v."""
        return matrix_exp_nilpotent(self.spec.ad_matrix(v))

    def adjoint_poly_matrix(self, v: ParamVector) -> PolyMatrix:
        return self.spec.ad_poly_matrix(v).exp_nilpotent(max_terms=self.nilpotency_class)

    # ---- automorphism logarithms ----

    def log_automorphism(self, matrix: QMatrix) -> QMatrix:
        """log of a unipotent algebra automorphism; checked to be a derivation."""
        D = matrix_log_unipotent(matrix)
        d = self.dim
        units = [tuple(Fraction(int(i == j)) for i in range(d)) for j in range(d)]
        for i in range(d):
            for j in range(i + 1, d):
                lhs = D.matvec(self.spec.bracket_vec(units[i], units[j]))
                rhs1 = self.spec.bracket_vec(D.matvec(units[i]), units[j])
                rhs2 = self.spec.bracket_vec(units[i], D.matvec(units[j]))
                if lhs != tuple(a + b for a, b in zip(rhs1, rhs2)):
                    raise ValueError(
                        f"log of the matrix is not a derivation at basis pair ({i}, {j})")
        return D

    # ---- affine defect ----

    def defect_map(self, log_a: ParamVector, matrix: QMatrix,
                   var_prefix: str = "X") -> ParamVector:
        """Defect c(X) = log( exp(X)^{-1} exp(a) U(exp X) ).

        X ranges over the algebra through fresh symbolic coordinates
        X1, ..., Xd; the translation coordinates of log_a may carry their own
        parameters.  The affine map exp X -> exp(a) U(exp X) fixes directions
        where c vanishes and transports everything else.
        """
        d = self.dim
        if matrix.shape != (d, d):
            raise ValueError("automorphism matrix has wrong shape")
        names = tuple(f"{var_prefix}{i + 1}" for i in range(d))
        if set(names) & set(log_a.params):
            raise ValueError(f"parameter names {set(names) & set(log_a.params)} collide "
                             f"with the defect coordinates; pick another prefix")
        params = _merge(log_a.params, names)
        X = ParamVector(params, [Poly.variable(n, params) for n in names])
        a = ParamVector(params, [p.with_params(params) for p in log_a.entries])
        inner = self.mult(a, matrix.apply(X))
        return self.mult(-X, inner)
