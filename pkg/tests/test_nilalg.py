"""Lie algebra layer: brackets, validation, automorphisms."""

import random
from fractions import Fraction

import pytest

from conftest import abelian, free_nilpotent_2_3, heisenberg
from nilaa.poly import ParamVector, Poly, parse_poly
from nilaa.nilalg import (
    JacobiViolation, LieAlgebraSpec, NotNilpotent, center, derived_subalgebra,
    is_abelian_family, is_automorphism, is_ideal, subalgebra_closure,
    validate_algebra,
)
from nilaa.ratlin import QMatrix, QSubspace

F = Fraction


def test_structure_normalization():
    a = LieAlgebraSpec(3, {(0, 1): (0, 0, 1)})
    b = LieAlgebraSpec(3, {(1, 0): (0, 0, -1)})
    assert a == b
    assert a.structure_vector(1, 0) == (F(0), F(0), F(-1))
    assert a.structure_vector(0, 0) == (F(0), F(0), F(0))
    # consistent double declaration is fine, conflicting is not
    LieAlgebraSpec(3, {(0, 1): (0, 0, 1), (1, 0): (0, 0, -1)})
    with pytest.raises(ValueError):
        LieAlgebraSpec(3, {(0, 1): (0, 0, 1), (1, 0): (0, 0, 1)})
    with pytest.raises(ValueError):
        LieAlgebraSpec(3, {(0, 0): (0, 0, 1)})
    with pytest.raises(ValueError):
        LieAlgebraSpec(2, {(0, 1): (1, 0, 0)})


def test_from_sparse_accumulates():
    spec = LieAlgebraSpec.from_sparse(3, [(1, 2, 3, "1/2"), (1, 2, 3, "1/2")])
    assert spec.structure_vector(0, 1) == (F(0), F(0), F(1))


def test_bracket_vec_heisenberg(heis):
    assert heis.bracket_vec((1, 0, 0), (0, 1, 0)) == (0, 0, 1)
    assert heis.bracket_vec((0, 1, 0), (1, 0, 0)) == (0, 0, -1)
    assert heis.bracket_vec((1, 0, 0), (0, 0, 1)) == (0, 0, 0)
    # bilinearity spot check
    assert heis.bracket_vec((2, 3, 0), (1, 1, 5)) == (0, 0, 2 * 1 - 3 * 1)


def test_bracket_parametric_matches_substitution(heis):
    params = ("t",)
    v = ParamVector(params, [parse_poly("t", params), Poly.constant(1, params),
                             Poly.zero(params)])
    w = ParamVector(params, [Poly.constant(2, params), parse_poly("t", params),
                             Poly.zero(params)])
    bracket = heis.bracket(v, w)
    for t in (F(0), F(1), F("-2/3")):
        expect = heis.bracket_vec(v.substitute({"t": t}), w.substitute({"t": t}))
        assert bracket.substitute({"t": t}) == expect
    # [v, w] = t^2 - 2 on the third coordinate
    assert bracket[2] == parse_poly("t^2 - 2", params)


def test_ad_matrix(heis):
    ad1 = heis.ad_matrix((1, 0, 0))
    assert ad1.matvec((0, 1, 0)) == (0, 0, 1)
    assert ad1.matvec((1, 0, 0)) == (0, 0, 0)
    assert (ad1 @ ad1).is_zero()


def test_ad_poly_matrix_and_exp(heis):
    params = ("t",)
    v = ParamVector(params, [parse_poly("t", params), Poly.zero(params), Poly.zero(params)])
    ad = heis.ad_poly_matrix(v)
    assert ad[(2, 1)] == parse_poly("t", params)
    e = ad.exp_nilpotent()
    assert e[(0, 0)] == Poly.constant(1, params)
    assert e[(2, 1)] == parse_poly("t", params)


def test_validate_heisenberg(heis):
    cls, series = validate_algebra(heis)
    assert cls == 2
    assert [s.dim for s in series] == [3, 1]
    assert series[1].contains((0, 0, 1))


def test_validate_free_nilpotent(free23):
    cls, series = validate_algebra(free23)
    assert cls == 3
    assert [s.dim for s in series] == [5, 3, 2]
    assert series[2].contains((0, 0, 0, 1, 0))
    assert series[2].contains((0, 0, 0, 0, 1))


def test_validate_abelian():
    cls, series = validate_algebra(abelian(4))
    assert cls == 1 and len(series) == 1


def test_jacobi_violation_detected():
    bad = LieAlgebraSpec.from_sparse(3, [(1, 2, 3, 1), (1, 3, 1, 1)])
    with pytest.raises(JacobiViolation) as err:
        validate_algebra(bad)
    assert err.value.triple == (0, 1, 2)
    assert any(err.value.residual)


def test_not_nilpotent_detected():
    # [x1,x2]=x3, [x1,x3]=x2 satisfies Jacobi but is not nilpotent
    swing = LieAlgebraSpec.from_sparse(3, [(1, 2, 3, 1), (1, 3, 2, 1)])
    with pytest.raises(NotNilpotent):
        validate_algebra(swing)
    sl2 = LieAlgebraSpec.from_sparse(3, [(1, 2, 2, 2), (1, 3, 3, -2), (2, 3, 1, 1)])
    with pytest.raises(NotNilpotent):
        validate_algebra(sl2)


def test_center_and_derived(heis, free23):
    assert center(heis).basis == ((F(0), F(0), F(1)),)
    assert derived_subalgebra(heis).basis == ((F(0), F(0), F(1)),)
    c = center(free23)
    assert c.dim == 2
    assert c.contains((0, 0, 0, 1, 0)) and c.contains((0, 0, 0, 0, 1))
    d = derived_subalgebra(free23)
    assert d.dim == 3 and d.contains((0, 0, 1, 0, 0))
    assert center(abelian(2)).dim == 2


def test_subalgebra_closure(heis):
    closed = subalgebra_closure(heis, [(1, 0, 0), (0, 1, 0)])
    assert closed.dim == 3
    assert subalgebra_closure(heis, [(1, 0, 0), (0, 0, 1)]).dim == 2


def test_is_abelian_family(heis):
    ok, pair = is_abelian_family(heis, [(1, 0, 0), (0, 0, 1)])
    assert ok and pair is None
    ok, pair = is_abelian_family(heis, [(0, 0, 1), (1, 0, 0), (0, 1, 0)])
    assert not ok and pair == (1, 2)  # first failing pair in lex order


def test_is_ideal(heis):
    assert is_ideal(heis, QSubspace.from_spanning([(0, 0, 1)], 3))
    assert not is_ideal(heis, QSubspace.from_spanning([(1, 0, 0)], 3))
    assert is_ideal(heis, QSubspace.full(3))


def test_is_automorphism(heis):
    shear = QMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    ok, pair, residual = is_automorphism(heis, shear)
    assert ok and pair is None and residual is None

    scale_center = QMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    ok, pair, residual = is_automorphism(heis, scale_center)
    assert not ok and pair == (0, 1)
    assert residual == (F(0), F(0), F(-1))  # [Mx1, Mx2] - M[x1, x2] = x3 - 2 x3


def test_automorphisms_preserve_brackets_random(heis, free23):
    rng = random.Random(23)
    for spec in (heis, free23):
        d = spec.dim
        for _ in range(10):
            # exp(ad_v) is always an automorphism of a nilpotent algebra
            v = [F(rng.randrange(-3, 4), rng.randrange(1, 3)) for _ in range(d)]
            from nilaa.ratlin import matrix_exp_nilpotent
            m = matrix_exp_nilpotent(spec.ad_matrix(v))
            ok, _, _ = is_automorphism(spec, m)
            assert ok
