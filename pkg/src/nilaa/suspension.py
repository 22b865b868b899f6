"""Suspension of a unipotent affine map into a translation on a larger group.

An affine map T = (left translation by exp a) composed with a unipotent
automorphism U of N extends to a pure translation on the semidirect product
M = R x N: adjoin one generator delta acting on the algebra of N by the
derivation D = log U, and translate by the element exp(a) exp(delta).  The
original quotient N / exp(Lambda) sits inside M as the fiber over 0 of the
circle coordinate, and T is the restriction of the big translation to that
fiber.

The discrete group downstairs is generated by exp(Lambda) together with the
automorphism itself, so it is generally not the exponential of a lattice in
the big algebra; reduction to a fundamental domain therefore happens in two
steps (circle coordinate first, then the fiber).  This module keeps the pair
(D, Lambda) as the lattice data and leaves fiber reduction to CosetReducer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Sequence

from .lattice import CosetReducer, LogLattice, preserves_lattice
from .nilalg import LieAlgebraSpec
from .nilgrp import NilpotentGroup
from .poly import ParamVector, Poly
from .ratlin import NotUnipotent, QMatrix, matrix_exp_nilpotent, unipotency_index


class Mismatch(ValueError):
    """The direct and the embedded evaluation of the map disagree."""

    def __init__(self, sample, direct, embedded):
        super().__init__(f"embedding mismatch at sample {sample}: "
                         f"direct {direct} vs embedded {embedded}")
        self.sample = sample
        self.direct = direct
        self.embedded = embedded


def build_suspension_algebra(spec: LieAlgebraSpec, derivation: QMatrix) -> LieAlgebraSpec:
    """Adjoin a generator delta with [delta, x] = D x to the algebra.

    Basis order downstairs is preserved and delta is prepended, so vectors of
    the big algebra read (phi, fiber).  The result is nilpotent whenever D is
    (which log of a unipotent automorphism always is); the constructor of
    NilpotentGroup re-checks Jacobi and nilpotency anyway.
    """
    d = spec.dim
    if derivation.shape != (d, d):
        raise ValueError("derivation matrix has wrong shape")
    table: dict[tuple[int, int], list[Fraction]] = {}
    for j in range(d):
        col = derivation.column(j)
        if any(col):
            table[(0, j + 1)] = [Fraction(0), *col]
    for (i, j), vec in spec.table.items():
        table[(i + 1, j + 1)] = [Fraction(0), *vec]
    return LieAlgebraSpec(d + 1, table)


@dataclass(frozen=True, eq=False)
class SuspendedSystem:
    """A unipotent affine map realized as a translation one dimension up."""

    big_algebra: LieAlgebraSpec
    big_group: NilpotentGroup
    monodromy: QMatrix                 # D = log U acting on the fiber algebra
    fiber_lattice: LogLattice          # Lambda, unchanged from downstairs
    embedded_translation: ParamVector  # w = log(exp(a) exp(delta)), length d+1
    base: object                       # the suspended affine system

    @property
    def dim(self) -> int:
        return self.big_algebra.dim

    def delta(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(i == 0)) for i in range(self.dim))

    def lift(self, vec: Sequence[object]) -> tuple[Fraction, ...]:
        """Embed a fiber vector with circle coordinate 0."""
        if len(vec) != self.dim - 1:
            raise ValueError("fiber vector has wrong length")
        return (Fraction(0), *(Fraction(x) for x in vec))

    def fiber(self, vec: Sequence[object]) -> tuple[Fraction, ...]:
        """Project a big vector with vanishing circle coordinate to the fiber."""
        vec = tuple(Fraction(x) for x in vec)
        if vec[0] != 0:
            raise ValueError(f"vector has circle coordinate {vec[0]}, not 0")
        return vec[1:]


def suspend(system, *, monodromy_override: QMatrix | None = None) -> SuspendedSystem:
    """Build the suspension of an affine system.

    `monodromy_override` replaces log U by another derivation and exists for
    negative controls: the construction goes through but the embedded
    translation then fails embedding_consistency_check.
    """
    group: NilpotentGroup = system.group
    U: QMatrix = system.automorphism
    if unipotency_index(U) is None:
        raise NotUnipotent("the automorphism is not unipotent; no suspension")
    ok, reason, _ = preserves_lattice(U, system.lattice)
    if not ok:
        raise ValueError(f"automorphism does not preserve the lattice: {reason}")
    D = group.log_automorphism(U) if monodromy_override is None else monodromy_override
    big_spec = build_suspension_algebra(group.spec, D)
    big_group = NilpotentGroup(big_spec)

    # class can grow by at most the unipotency index of U
    bound = group.nilpotency_class + unipotency_index(U)
    if big_group.nilpotency_class > bound:
        raise AssertionError("suspension raised the nilpotency class past its bound")

    a = system.translation
    lifted = ParamVector(a.params, [Poly.zero(a.params),
                                    *(p for p in a.entries)])
    delta = ParamVector(a.params, [Poly.constant(1, a.params),
                                   *[Poly.zero(a.params)] * group.dim])
    w = big_group.mult(lifted, delta)
    return SuspendedSystem(big_spec, big_group, D, system.lattice, w, system)


def monodromy_adjoint_check(susp: SuspendedSystem) -> bool:
    """Conjugation by exp(delta) must act on the fiber exactly as U does."""
    ad = susp.big_group.adjoint_matrix(susp.delta())
    d = susp.dim
    for i in range(d):
        expected = Fraction(1) if i == 0 else Fraction(0)
        if ad[0, i] != expected or ad[i, 0] != expected:
            return False
    fiber_block = QMatrix([[ad[i, j] for j in range(1, d)] for i in range(1, d)])
    return fiber_block == matrix_exp_nilpotent(susp.monodromy)


def embedding_consistency_check(system, susp: SuspendedSystem | None = None,
                                samples: int = 25, seed: int = 2024) -> bool:
    """Evaluate the affine map directly and through the suspension.

    Route one applies exp(x) -> exp(a) U(exp x) downstairs and reduces
    modulo the lattice.  Route two multiplies by the embedded translation in
    the big group, quotients the circle coordinate by its lattice (here the
    circle coordinate of the product is exactly 1, so one factor of
    exp(-delta) clears it), drops to the fiber and reduces there.  Both
    routes must agree exactly, before and after reduction.
    """
    if susp is None:
        susp = suspend(system)
    group: NilpotentGroup = system.group
    reducer = CosetReducer(group, system.lattice)
    rng = Random(seed)
    params = system.translation.params

    def rnd(lo: int, hi: int, den: int) -> Fraction:
        return Fraction(rng.randrange(lo, hi + 1), rng.randrange(1, den + 1))

    for _ in range(samples):
        values = {p: rnd(-40, 40, 8) for p in params}
        a_val = system.translation.substitute(values)
        w_val = susp.embedded_translation.substitute(values)
        point = tuple(rnd(-24, 24, 12) for _ in range(group.dim))
        sample = (point, tuple(sorted(values.items())))

        direct = group.mult_vec(a_val, system.automorphism.matvec(point))
        up = susp.big_group.mult_vec(w_val, susp.lift(point))
        k = up[0]
        if k.denominator != 1:
            raise Mismatch(sample, direct, up)
        clear = tuple(-k if i == 0 else Fraction(0) for i in range(susp.dim))
        down = susp.big_group.mult_vec(up, clear)
        embedded = susp.fiber(down)
        if embedded != direct:
            raise Mismatch(sample, direct, embedded)
        if reducer.reduce(embedded) != reducer.reduce(direct):
            raise Mismatch(sample, reducer.reduce(direct), reducer.reduce(embedded))
    return True
