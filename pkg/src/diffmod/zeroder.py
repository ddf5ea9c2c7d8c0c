"""Zero-derivation backend: over the rational-constants ring a differential
structure is just a linear endomorphism, differential homomorphisms are
intertwiners, and isomorphism is matrix similarity.  Similarity is decided
completely via the rational canonical (Frobenius) form, with an explicit
change-of-basis certificate; cancellation of padded zero blocks between
identity-structured summands falls out of the eigenspace decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactalg import (Poly, PolyMat, RatMat, ShapeMismatch,
                       smith_normal_form_with_inverses)


class NotIntertwining(Exception):
    """The given map does not intertwine the two structures."""


class BlockNotInvertible(Exception):
    """The block that should carry an isomorphism is singular — the input
    was not a genuine isomorphism of the padded structures."""


@dataclass(frozen=True)
class SimilarityCertificate:
    """transform @ A @ inverse == B, re-verified exactly at construction."""
    transform: RatMat
    inverse: RatMat


def _check_certificate(A: RatMat, B: RatMat, cert: SimilarityCertificate):
    n = A.rows
    if cert.transform @ cert.inverse != RatMat.identity(n):
        raise ArithmeticError("similarity transform and inverse do not compose to identity")
    if cert.transform @ A @ cert.inverse != B:
        raise ArithmeticError("similarity certificate fails transform @ A @ inverse == B")


def companion(f: Poly) -> RatMat:
    """Companion matrix of a monic polynomial of degree >= 1."""
    m = f.degree
    if m is None or m < 1 or f.lc() != 1:
        raise ValueError(f"companion matrix needs a monic nonconstant polynomial, got {f}")
    ents = []
    for i in range(m):
        for j in range(m):
            if j == m - 1:
                ents.append(-f.coeff(i))
            elif i == j + 1:
                ents.append(Fraction(1))
            else:
                ents.append(Fraction(0))
    return RatMat(m, m, ents)


@dataclass(frozen=True)
class FrobeniusForm:
    """Companion-block diagonal form with invariant factors in divisibility
    order, plus the certified change of basis to it."""
    form: RatMat
    invariant_factors: tuple  # monic nonconstant Polys, each dividing the next
    certificate: SimilarityCertificate


def _eval_poly_columns(W: PolyMat, A_powers):
    """Columns g_i = sum_j W[j][i](A) e_j, for a polynomial matrix W."""
    n = W.rows
    cols = []
    for i in range(W.cols):
        g = [Fraction(0)] * n
        for j in range(n):
            p = W.entry(j, i)
            for d, c in enumerate(p.coeffs):
                if c:
                    col = A_powers[d]
                    for r in range(n):
                        g[r] += c * col.entry(r, j)
        cols.append(g)
    return cols


def rcf(A: RatMat) -> FrobeniusForm:
    """Rational canonical form with a verified similarity certificate.

    The invariant factors are read off the Smith normal form of xI - A over
    Q[x]; generators of the cyclic pieces come from the columns of U^{-1}
    evaluated at A, and their Krylov iterates assemble the new basis."""
    if A.rows != A.cols:
        raise ShapeMismatch("rational canonical form of a non-square matrix")
    n = A.rows
    if n == 0:
        cert = SimilarityCertificate(RatMat.identity(0), RatMat.identity(0))
        return FrobeniusForm(A, (), cert)
    x_minus_a = PolyMat(n, n, [
        Poly([-A.entry(i, j), 1]) if i == j else Poly([-A.entry(i, j)])
        for i in range(n) for j in range(n)
    ])
    U, D, V, uinv, _ = smith_normal_form_with_inverses(x_minus_a)
    factors = [D.entry(i, i) for i in range(n)]
    if any(f.is_zero() for f in factors):
        raise ArithmeticError("xI - A must have full rank")
    nonunit = [f for f in factors if f.degree >= 1]
    # generator of the i-th cyclic summand: column i of U^{-1} evaluated at A
    A_powers = [RatMat.identity(n)]
    maxdeg = max((p.degree or 0) for p in uinv.entries)
    for _ in range(maxdeg):
        A_powers.append(A @ A_powers[-1])
    gens = _eval_poly_columns(uinv, A_powers)
    basis_cols = []
    for f, g in zip(factors, gens):
        if f.degree < 1:
            continue
        vec = RatMat(n, 1, g)
        for _ in range(f.degree):
            basis_cols.append(vec)
            vec = A @ vec
    if len(basis_cols) != n:
        raise ArithmeticError("cyclic generators did not span")
    P = RatMat(n, n, [basis_cols[j].entry(i, 0) for i in range(n) for j in range(n)])
    Pinv = P.inverse()
    form = Pinv @ A @ P
    expected = RatMat(0, 0, [])
    for f in nonunit:
        expected = RatMat.block_diag(expected, companion(f))
    if form != expected:
        raise ArithmeticError("computed form does not match the invariant factors")
    for a, b in zip(nonunit, nonunit[1:]):
        if not (b % a).is_zero():
            raise ArithmeticError("invariant factors out of divisibility order")
    cert = SimilarityCertificate(Pinv, P)
    _check_certificate(A, form, cert)
    return FrobeniusForm(form, tuple(nonunit), cert)


@dataclass(frozen=True)
class SimilarityResult:
    similar: bool
    certificate: Optional[SimilarityCertificate]
    witness: Optional[str]


def similar(A: RatMat, B: RatMat) -> SimilarityResult:
    """Complete decision of similarity over Q, by comparing rational
    canonical forms; a positive answer carries a verified transform."""
    if A.rows != A.cols or B.rows != B.cols:
        raise ShapeMismatch("similarity needs square matrices")
    if A.rows != B.rows:
        return SimilarityResult(False, None, f"size {A.rows} != {B.rows}")
    fa = rcf(A)
    fb = rcf(B)
    if fa.invariant_factors != fb.invariant_factors:
        return SimilarityResult(
            False, None,
            f"invariant factors differ: {[str(f) for f in fa.invariant_factors]} "
            f"vs {[str(f) for f in fb.invariant_factors]}")
    # A -> form -> B
    transform = fb.certificate.inverse @ fa.certificate.transform
    inverse = fa.certificate.inverse @ fb.certificate.transform
    cert = SimilarityCertificate(transform, inverse)
    _check_certificate(A, B, cert)
    return SimilarityResult(True, cert, None)


def _padded(I_size: int, zero_size: int) -> RatMat:
    return RatMat.block_diag(RatMat.identity(I_size), RatMat.zeros(zero_size, zero_size))


def cancel_zero_derivation(a: int, b: int, m: int, f: RatMat) -> SimilarityCertificate:
    """Cancel the zero-structured padding: f is an invertible map intertwining
    diag(I_b, 0_m) -> diag(I_a, 0_m); eigenspace separation forces it to be
    block diagonal, so a == b and the upper-left a x b block is itself an
    isomorphism between the identity-structured parts (the quotient by the
    constants).  Returns that block as a verified certificate.

    Raises NotIntertwining when f fails the intertwining identity and
    BlockNotInvertible when a relevant block is singular (impossible for a
    genuine isomorphism)."""
    if min(a, b, m) < 0:
        raise ValueError("block sizes must be nonnegative")
    if f.rows != a + m or f.cols != b + m:
        raise ShapeMismatch(f"expected a {a + m}x{b + m} matrix, got {f.rows}x{f.cols}")
    src = _padded(b, m)
    tgt = _padded(a, m)
    if f @ src != tgt @ f:
        raise NotIntertwining("f does not intertwine the padded structures")
    if a != b:
        # intertwiners are block diagonal, so an invertible one needs a == b
        raise BlockNotInvertible(f"no invertible intertwiner exists for a={a}, b={b}")
    if f.determinant() == 0:
        raise BlockNotInvertible("f is singular")
    top = f.submatrix(0, a, 0, b)
    if top.determinant() == 0:
        raise BlockNotInvertible("upper-left block is singular")
    cert = SimilarityCertificate(top, top.inverse())
    if cert.transform @ cert.inverse != RatMat.identity(a):
        raise ArithmeticError("certificate inverse check failed")
    return cert


def padded_cancellation_check(A: RatMat, B: RatMat, m: int) -> bool:
    """Whether similar(A + 0_m, B + 0_m) and similar(A, B) agree.  They must:
    padding both sides by the same zero block multiplies the invariant factor
    list by the same x-powers."""
    direct = similar(A, B).similar
    padded = similar(RatMat.block_diag(A, RatMat.zeros(m, m)),
                     RatMat.block_diag(B, RatMat.zeros(m, m))).similar
    return direct == padded
