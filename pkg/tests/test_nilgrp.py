"""Group layer: BCH multiplication, adjoint action, affine defect.

The BCH implementation is cross-checked against an independent matrix
realization: filiform algebras embed into strictly upper triangular
matrices, where exp and log are plain terminating matrix series and the
group law is honest matrix multiplication.
"""

import random
from fractions import Fraction

import pytest

from conftest import free_nilpotent_2_3, heisenberg
from nilaa.nilalg import LieAlgebraSpec
from nilaa.nilgrp import BCH_CLASS_CAP, ClassCapExceeded, NilpotentGroup, bch_table
from nilaa.poly import ParamVector, Poly, parse_poly
from nilaa.ratlin import QMatrix, matrix_exp_nilpotent, matrix_log_unipotent

F = Fraction


def filiform(total_dim: int) -> LieAlgebraSpec:
    """Basis delta, v1..v_{n}: [delta, v_i] = v_{i+1}; class n."""
    n = total_dim - 1
    return LieAlgebraSpec.from_sparse(
        total_dim, [(1, i, i + 1, 1) for i in range(2, total_dim)])


def filiform_matrix(vec) -> QMatrix:
    """Faithful representation: (c, u) -> [[c*shift, u], [0, 0]] where the
    shift moves e_i to e_{i+1} (subdiagonal), matching [delta, v_i] = v_{i+1}."""
    c = Fraction(vec[0])
    u = [Fraction(x) for x in vec[1:]]
    n = len(u)
    rows = []
    for i in range(n):
        row = [Fraction(0)] * (n + 1)
        if i > 0:
            row[i - 1] = c
        row[n] = u[i]
        rows.append(row)
    rows.append([Fraction(0)] * (n + 1))
    return QMatrix(rows)


def heisenberg_matrix(vec) -> QMatrix:
    a, b, c = (Fraction(x) for x in vec)
    return QMatrix([[0, a, c], [0, 0, b], [0, 0, 0]])


def heisenberg_coords(m: QMatrix):
    return (m[0, 1], m[1, 2], m[0, 2])


def filiform_coords(m: QMatrix):
    n = m.nrows - 1
    c = m[1, 0]
    for i in range(1, n):
        assert m[i, i - 1] == c, "image must stay inside the embedded subalgebra"
    return (c,) + tuple(m[i, n] for i in range(n))


def test_bch_table_low_degrees():
    terms = dict(bch_table(2))
    assert terms[(0,)] == 1 and terms[(1,)] == 1
    assert terms[(0, 1)] == F(1, 4) and terms[(1, 0)] == F(-1, 4)
    with pytest.raises(ClassCapExceeded):
        bch_table(0)
    with pytest.raises(ClassCapExceeded):
        bch_table(BCH_CLASS_CAP + 1)


def test_bch_hall_basis_coefficients():
    # log(exp x1 exp x2) = x1 + x2 + x3/2 + x4/12 - x5/12 on the Hall basis
    group = NilpotentGroup(free_nilpotent_2_3())
    z = group.mult_vec((1, 0, 0, 0, 0), (0, 1, 0, 0, 0))
    assert z == (F(1), F(1), F(1, 2), F(1, 12), F(-1, 12))


def test_heisenberg_closed_form():
    group = NilpotentGroup(heisenberg())
    rng = random.Random(3)
    for _ in range(30):
        v = tuple(F(rng.randrange(-4, 5), rng.randrange(1, 4)) for _ in range(3))
        w = tuple(F(rng.randrange(-4, 5), rng.randrange(1, 4)) for _ in range(3))
        half = F(1, 2)
        comm = group.spec.bracket_vec(v, w)
        expect = tuple(a + b + half * c for a, b, c in zip(v, w, comm))
        assert group.mult_vec(v, w) == expect


def test_bch_against_matrix_realization():
    rng = random.Random(5)
    # class 4 and class 6 filiform algebras, plus heisenberg
    cases = [(filiform(5), filiform_matrix, filiform_coords),
             (filiform(7), filiform_matrix, filiform_coords),
             (heisenberg(), heisenberg_matrix, heisenberg_coords)]
    for spec, embed, coords in cases:
        group = NilpotentGroup(spec)
        for _ in range(12):
            v = tuple(F(rng.randrange(-3, 4), rng.randrange(1, 3))
                      for _ in range(spec.dim))
            w = tuple(F(rng.randrange(-3, 4), rng.randrange(1, 3))
                      for _ in range(spec.dim))
            product = matrix_exp_nilpotent(embed(v)) @ matrix_exp_nilpotent(embed(w))
            eye = QMatrix.identity(product.nrows)
            expected = coords(matrix_log_unipotent(product))
            assert group.mult_vec(v, w) == expected


def test_group_axioms_random():
    group = NilpotentGroup(free_nilpotent_2_3())
    rng = random.Random(9)
    zero = (F(0),) * 5

    def rand_vec():
        return tuple(F(rng.randrange(-3, 4), rng.randrange(1, 3)) for _ in range(5))

    for _ in range(15):
        u, v, w = rand_vec(), rand_vec(), rand_vec()
        assert group.mult_vec(group.mult_vec(u, v), w) == group.mult_vec(u, group.mult_vec(v, w))
        assert group.mult_vec(v, group.inv(v)) == zero
        assert group.mult_vec(v, zero) == v
        assert group.mult_vec(zero, v) == v


def test_adjoint_matches_conjugation():
    group = NilpotentGroup(free_nilpotent_2_3())
    rng = random.Random(31)
    for _ in range(10):
        v = tuple(F(rng.randrange(-2, 3), rng.randrange(1, 3)) for _ in range(5))
        w = tuple(F(rng.randrange(-2, 3), rng.randrange(1, 3)) for _ in range(5))
        conj = group.mult_vec(v, group.mult_vec(w, group.inv(v)))
        assert group.adjoint_matrix(v).matvec(w) == conj


def test_polynomial_and_rational_paths_agree():
    group = NilpotentGroup(free_nilpotent_2_3())
    params = ("t",)
    t = parse_poly("t", params)
    v = ParamVector(params, [t, Poly.constant(F(1, 2), params), Poly.zero(params),
                             Poly.zero(params), Poly.zero(params)])
    w = ParamVector(params, [Poly.constant(1, params), t * t, Poly.zero(params),
                             Poly.zero(params), t])
    product = group.mult(v, w)
    for tv in (F(0), F(1), F("2/7")):
        lhs = product.substitute({"t": tv})
        rhs = group.mult_vec(v.substitute({"t": tv}), w.substitute({"t": tv}))
        assert lhs == rhs


def test_automorphisms_commute_with_bch():
    spec = heisenberg()
    group = NilpotentGroup(spec)
    shear = QMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    rng = random.Random(41)
    for _ in range(15):
        v = tuple(F(rng.randrange(-3, 4)) for _ in range(3))
        w = tuple(F(rng.randrange(-3, 4)) for _ in range(3))
        assert shear.matvec(group.mult_vec(v, w)) == \
            group.mult_vec(shear.matvec(v), shear.matvec(w))


def test_log_automorphism():
    group = NilpotentGroup(heisenberg())
    shear = QMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    d = group.log_automorphism(shear)
    assert d == shear - QMatrix.identity(3)  # square of the off-diagonal part is 0
    # unipotent but not an automorphism: its log is not a derivation
    bad = QMatrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        group.log_automorphism(bad)


def test_defect_translation_only():
    group = NilpotentGroup(heisenberg())
    a = ParamVector.from_rationals([F(1, 3), F(1, 5), F(0)])
    c = group.defect_map(a, QMatrix.identity(3))
    # c(X) = a + [a, X] in class 2
    assert c[0] == Poly.constant(F(1, 3), c.params)
    assert c[1] == Poly.constant(F(1, 5), c.params)
    assert c[2] == parse_poly("1/3*X2 - 1/5*X1", c.params)


def test_defect_pure_automorphism():
    group = NilpotentGroup(heisenberg())
    shear = QMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    zero = ParamVector.from_rationals([0, 0, 0])
    c = group.defect_map(zero, shear)
    # c(X) = (X2, 0, X2^2/2 ...) for the shear
    assert c[0] == parse_poly("X2", c.params)
    assert c[1].is_zero()
    assert c[2] == parse_poly("1/2*X2^2", c.params)
    vectors = c.coefficient_vectors()
    assert vectors[(0, 1, 0)] == (F(1), F(0), F(0))
    assert vectors[(0, 2, 0)] == (F(0), F(0), F(1, 2))


def test_defect_substitution_consistency():
    group = NilpotentGroup(free_nilpotent_2_3())
    params = ("t",)
    a = ParamVector(params, [parse_poly("t", params)] + [Poly.zero(params)] * 4)
    shear = QMatrix([[1, 1, 0, 0, 0], [0, 1, 0, 0, 0], [0, 1, 1, 0, 0],
                     [0, 0, 1, 1, 0], [0, 0, 0, 0, 1]])
    # (not necessarily an automorphism; the defect map is defined regardless)
    c = group.defect_map(a, shear)
    rng = random.Random(51)
    for _ in range(5):
        tv = F(rng.randrange(-3, 4), rng.randrange(1, 4))
        xv = [F(rng.randrange(-2, 3), rng.randrange(1, 3)) for _ in range(5)]
        values = {"t": tv, **{f"X{i + 1}": xv[i] for i in range(5)}}
        direct = group.mult_vec(
            group.inv(xv), group.mult_vec(a.substitute({"t": tv}), shear.matvec(xv)))
        assert c.substitute(values) == direct


def test_defect_name_collision():
    group = NilpotentGroup(heisenberg())
    a = ParamVector(("X1",), [parse_poly("X1", ("X1",)), Poly.zero(("X1",)),
                              Poly.zero(("X1",))])
    with pytest.raises(ValueError):
        group.defect_map(a, QMatrix.identity(3))
    c = group.defect_map(a, QMatrix.identity(3), var_prefix="Y")
    assert "Y1" in c.params


def test_class_cap_enforced():
    with pytest.raises(ClassCapExceeded):
        NilpotentGroup(filiform(8))  # class 7
    NilpotentGroup(filiform(7))  # class 6 is fine
