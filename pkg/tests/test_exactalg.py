"""Exact arithmetic layer: polynomial/matrix laws and the normal forms."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffmod.exactalg import (NotUnimodular, Poly, PolyMat, RatMat,
                              ShapeMismatch, kernel_basis, poly_gcd,
                              poly_xgcd, rat_nullspace, smith_normal_form,
                              unimodular_completion)

rationals = st.fractions(min_value=-30, max_value=30, max_denominator=7)
polys = st.builds(Poly, st.lists(rationals, max_size=5))
small_polys = st.builds(Poly, st.lists(st.integers(-4, 4), max_size=4))


def P(*coeffs):
    return Poly([Fraction(c) for c in coeffs])


X = P(0, 1)


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------

def test_zero_poly_degree_is_sentinel():
    assert Poly([]).degree is None
    assert Poly([0, 0]).degree is None  # trailing zeros stripped
    assert P(5).degree == 0
    assert X.degree == 1


def test_poly_str():
    assert str(P(0)) == "0"
    assert str(P(-1, 2)) == "2*x - 1"
    assert str(P(0, 0, 1)) == "x^2"
    assert str(P(Fraction(1, 2))) == "1/2"


def test_poly_eval_and_derivative():
    p = P(1, -3, 0, 2)  # 2x^3 - 3x + 1
    assert p(Fraction(2)) == 16 - 6 + 1
    assert p.derivative() == P(-3, 0, 6)
    assert P(7).derivative().is_zero()


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_poly_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_leibniz(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_divmod_identity(a, b):
    if b.is_zero():
        with pytest.raises(ZeroDivisionError):
            divmod(a, b)
        return
    q, r = divmod(a, b)
    assert a == q * b + r
    assert r.is_zero() or r.degree < b.degree


@given(small_polys, small_polys)
@settings(max_examples=60, deadline=None)
def test_gcd_divides_and_is_monic(a, b):
    g = poly_gcd(a, b)
    if g.is_zero():
        assert a.is_zero() and b.is_zero()
    else:
        assert g.lc() == 1
        assert (a % g).is_zero()
        assert (b % g).is_zero()


@given(small_polys, small_polys)
@settings(max_examples=60, deadline=None)
def test_xgcd_bezout(a, b):
    g, s, t = poly_xgcd(a, b)
    assert s * a + t * b == g


def test_gcd_example():
    # (x-1)(x+2) and (x-1)(x-3) share exactly x-1
    assert poly_gcd(P(-2, 1, 1), P(3, -4, 1)) == P(-1, 1)


def test_exact_div_rejects_remainder():
    with pytest.raises(ArithmeticError):
        P(1, 1).exact_div(X)


# ---------------------------------------------------------------------------
# PolyMat / RatMat
# ---------------------------------------------------------------------------

def test_polymat_shape_checks():
    A = PolyMat(2, 2, [P(1), P(0), P(0), P(1)])
    B = PolyMat(1, 2, [P(1), P(2)])
    with pytest.raises(ShapeMismatch):
        A + B
    with pytest.raises(ShapeMismatch):
        B @ B


def test_matmul_and_derivative():
    A = PolyMat(2, 2, [X, P(1), P(0), X * X])
    B = PolyMat(2, 2, [P(1), P(0), X, P(1)])
    prod = A @ B
    assert prod.entry(0, 0) == X + X  # x*1 + 1*x
    D = A.derivative()
    assert D.entry(0, 0) == P(1)
    assert D.entry(1, 1) == P(0, 2)
    # product rule for matrices
    assert (A @ B).derivative() == A.derivative() @ B + A @ B.derivative()


def test_determinant_and_unimodular_inverse():
    U = PolyMat(2, 2, [P(1), -X, P(0), P(1)])
    assert U.determinant() == P(1)
    V = U.inverse_unimodular()
    assert U @ V == PolyMat.identity(2)
    # x on the diagonal is not a unit
    W = PolyMat(2, 2, [X, P(0), P(0), P(1)])
    with pytest.raises(NotUnimodular):
        W.inverse_unimodular()


def test_determinant_cubic():
    A = PolyMat(3, 3, [X, P(1), P(0),
                       P(0), X, P(1),
                       P(1), P(0), X])
    assert A.determinant() == X * X * X + P(1)


def test_ratmat_inverse():
    M = RatMat(2, 2, [Fraction(2), Fraction(1), Fraction(7), Fraction(4)])
    assert M @ M.inverse() == RatMat.identity(2)
    singular = RatMat(2, 2, [1, 2, 2, 4])
    with pytest.raises(ZeroDivisionError):
        singular.inverse()


def test_rat_nullspace_known_kernel():
    # rows (1,1,0) and (0,1,1): kernel spanned by (1,-1,1)
    M = RatMat(2, 3, [1, 1, 0, 0, 1, 1])
    basis = rat_nullspace(M)
    assert len(basis) == 1
    v = basis[0]
    assert (M @ v).is_zero()
    assert [v.entry(i, 0) for i in range(3)] == [1, -1, 1]


def test_rat_nullspace_full_rank():
    assert rat_nullspace(RatMat.identity(3)) == []


# ---------------------------------------------------------------------------
# Smith normal form and unimodular rows
# ---------------------------------------------------------------------------

def test_smith_form_diagonal_example():
    M = PolyMat(2, 2, [X, P(0), P(0), X * X])
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    # already in divisibility order, so the form is the input itself
    assert D.entry(0, 0) == X
    assert D.entry(1, 1) == X * X
    assert D.entry(0, 1).is_zero() and D.entry(1, 0).is_zero()


def test_smith_form_coprime_entries_give_unit():
    # gcd(x, x+1) = 1, so the first invariant factor is 1
    M = PolyMat(1, 2, [X, X + P(1)])
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert D.entry(0, 0) == P(1)


def test_smith_form_rank_deficient():
    M = PolyMat(2, 2, [X, X, X, X])
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert D.entry(0, 0) == X
    assert D.entry(1, 1).is_zero()


def test_kernel_basis_of_unimodular_row():
    w = PolyMat(1, 2, [P(1), X])
    K = kernel_basis(w)
    assert K.rows == 2 and K.cols == 1
    assert (w @ K).is_zero()
    C = unimodular_completion(w)
    det = PolyMat.vstack(w, C).determinant()
    assert det.is_constant() and not det.is_zero()


def test_kernel_basis_three_entries():
    w = PolyMat(1, 3, [P(1), X, X * X])
    K = kernel_basis(w)
    assert K.cols == 2
    assert (w @ K).is_zero()
    stacked = PolyMat.vstack(w, unimodular_completion(w))
    det = stacked.determinant()
    assert det.is_constant() and not det.is_zero()


def test_kernel_basis_rejects_non_unimodular_row():
    with pytest.raises(NotUnimodular):
        kernel_basis(PolyMat(1, 2, [X, X * X]))
