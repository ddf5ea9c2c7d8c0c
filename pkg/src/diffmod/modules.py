"""Differential modules (R^n, A) and the exact linear machinery on them:
hom spaces up to a degree cap, constants, triviality certificates, a
randomized isomorphism search, and scrambling by random basis change.

A differential module is free with a chosen basis, so it is just a square
matrix A over the ring; the derivation acts by v |-> v' + A v.  A
differential homomorphism T from (R^n, A) to (R^m, B) is an m x n matrix
with T' = T A - B T; the same convention is used everywhere in the package.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .diffring import DiffRing, RingMismatch
from .exactalg import (Poly, PolyMat, RatMat, ShapeMismatch, _int_nullspace,
                       rat_nullspace)
from .rng import StableRng

DEFAULT_DEG_CAP = 32
DEFAULT_TRIALS = 32
COEFF_HEIGHT = 101  # sampling height for random hom combinations


class CertificateInvalid(Exception):
    """A claimed isomorphism certificate failed exact re-verification."""


@dataclass(frozen=True)
class DiffModule:
    """(R^rank, matrix): the free module R^rank with derivation
    v |-> v' + matrix @ v."""
    ring: DiffRing
    rank: int
    matrix: PolyMat

    def __post_init__(self):
        if self.matrix.rows != self.rank or self.matrix.cols != self.rank:
            raise ShapeMismatch(
                f"rank {self.rank} module needs a {self.rank}x{self.rank} matrix, "
                f"got {self.matrix.rows}x{self.matrix.cols}")
        for e in self.matrix.entries:
            self.ring.validate_element(e)

    def derive(self, v: PolyMat) -> PolyMat:
        """The derivation action on a column vector (or matrix of columns)."""
        if v.rows != self.rank:
            raise ShapeMismatch(f"vector of length {v.rows} in a rank {self.rank} module")
        return self.ring.derive_mat(v) + self.matrix @ v

    def __repr__(self):
        return f"DiffModule({self.ring.tag}, rank={self.rank})"


def trivial_module(ring: DiffRing, n: int) -> DiffModule:
    """(R^n, 0): the trivial differential structure."""
    return DiffModule(ring, n, PolyMat.zeros(n, n))


def direct_sum(P: DiffModule, Q: DiffModule) -> DiffModule:
    if P.ring != Q.ring:
        raise RingMismatch(f"{P.ring.tag} vs {Q.ring.tag}")
    return DiffModule(P.ring, P.rank + Q.rank, PolyMat.block_diag(P.matrix, Q.matrix))


def verify_hom(T: PolyMat, source: DiffModule, target: DiffModule) -> bool:
    """Exact check of T' = T A_source - A_target T (by substitution)."""
    if source.ring != target.ring:
        raise RingMismatch(f"{source.ring.tag} vs {target.ring.tag}")
    if T.rows != target.rank or T.cols != source.rank:
        raise ShapeMismatch(
            f"hom {source.rank}->{target.rank} needs a {target.rank}x{source.rank} "
            f"matrix, got {T.rows}x{T.cols}")
    lhs = source.ring.derive_mat(T)
    rhs = T @ source.matrix - target.matrix @ T
    return lhs == rhs


# ---------------------------------------------------------------------------
# isomorphism certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsoCertificate:
    """forward: source -> target and backward: target -> source, with both
    composites the identity.  Certificates are re-verified exactly at
    construction time; trust nothing that was not checked."""
    source: DiffModule
    target: DiffModule
    forward: PolyMat
    backward: PolyMat


def make_iso_certificate(source: DiffModule, target: DiffModule,
                         forward: PolyMat, backward: PolyMat) -> IsoCertificate:
    if not verify_hom(forward, source, target):
        raise CertificateInvalid("forward map is not a differential homomorphism")
    if not verify_hom(backward, target, source):
        raise CertificateInvalid("backward map is not a differential homomorphism")
    if backward @ forward != PolyMat.identity(source.rank):
        raise CertificateInvalid("backward . forward is not the identity")
    if forward @ backward != PolyMat.identity(target.rank):
        raise CertificateInvalid("forward . backward is not the identity")
    return IsoCertificate(source, target, forward, backward)


def identity_certificate(P: DiffModule) -> IsoCertificate:
    eye = PolyMat.identity(P.rank)
    return make_iso_certificate(P, P, eye, eye)


# ---------------------------------------------------------------------------
# hom spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomSpace:
    """Q-basis of differential homomorphisms source -> target with entry
    degree <= deg_cap.  Sound unconditionally (every element re-verified by
    substitution); complete for degree <= deg_cap, and complete outright
    when proven_complete is set (constant matrices, where degree
    rank*rank suffices)."""
    source: DiffModule
    target: DiffModule
    basis: tuple
    deg_cap: int
    proven_complete: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)


def resolve_deg_cap(P: DiffModule, Q: DiffModule, deg_cap: Optional[int]):
    """Effective cap and whether completeness at that cap is proven."""
    mn = P.rank * Q.rank
    if P.ring is DiffRing.CONST_ZERO:
        return (0 if deg_cap is None else deg_cap), True
    both_const = P.matrix.is_constant() and Q.matrix.is_constant()
    if deg_cap is not None:
        return deg_cap, both_const and deg_cap >= mn
    if both_const:
        # polynomial solutions have degree < rank*rank for constant matrices,
        # so raising the default to that bound makes the basis complete
        return max(DEFAULT_DEG_CAP, mn), True
    return DEFAULT_DEG_CAP, False


def _imat_mul(A, B):
    """Product of integer matrices stored as lists of rows."""
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def _imat_vec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def _content(rows) -> int:
    g = 0
    for row in rows:
        for v in row:
            if v:
                g = math.gcd(g, v)
                if g == 1:
                    return 1
    return g or 1


def _sylvester_layers(A: PolyMat, B: PolyMat):
    """Integerized coefficient operators of T |-> T A - B T.

    Column-major vec: vec(T)[i + m*j] = T[i][j].  Returns (layers, sigma)
    where layers[e] is an integer mn x mn matrix and the true operator for
    the x^e coefficient is layers[e] / sigma.
    """
    n, m = A.rows, B.rows
    mn = m * n
    E = max(A.max_degree(), B.max_degree())
    sigma = 1
    for M in (A, B):
        for p in M.entries:
            for c in p.coeffs:
                sigma = sigma * c.denominator // math.gcd(sigma, c.denominator)
    layers = []
    for e in range(E + 1):
        S = [[0] * mn for _ in range(mn)]
        Ae = A.coefficient_matrix(e)
        Be = B.coefficient_matrix(e)
        for i in range(m):
            for j in range(n):
                r = i + m * j
                for k in range(n):
                    c = Ae.entry(k, j)
                    if c:
                        S[r][i + m * k] += int(c * sigma)
                for k in range(m):
                    c = Be.entry(i, k)
                    if c:
                        S[r][k + m * j] -= int(c * sigma)
        layers.append(S)
    return layers, sigma


def _poly_hom_basis(A: PolyMat, B: PolyMat, cap: int):
    """Basis of {T : T' = T A - B T, entries of degree <= cap} over Q[x].

    The x^d coefficient of the equation reads
        (d+1) T_{d+1} = sum_e S_e T_{d-e},
    so T is determined linearly by T_0 and the degree-cap solutions are the
    kernel of the window map T_0 |-> (T_{cap+1}, ..., T_{cap+E+1}).  The
    chain is run on integer matrices with a tracked rational scale; scales
    do not affect kernels, so the window rows are stacked unscaled.
    """
    n, m = A.rows, B.rows
    mn = m * n
    if mn == 0:
        return []
    layers, sigma = _sylvester_layers(A, B)
    E = len(layers) - 1
    nonzero_layer = [any(any(row) for row in S) for S in layers]
    steps = cap + E + 1

    H = [[[1 if i == j else 0 for j in range(mn)] for i in range(mn)]]
    scales = [Fraction(1)]
    zero_mat = [[0] * mn for _ in range(mn)]
    for d in range(steps):
        acc = None
        denoms = 1
        for e in range(min(d, E) + 1):
            if nonzero_layer[e] and scales[d - e]:
                q = scales[d - e].denominator
                denoms = denoms * q // math.gcd(denoms, q)
        for e in range(min(d, E) + 1):
            sc = scales[d - e]
            if not nonzero_layer[e] or not sc:
                continue
            w = sc.numerator * (denoms // sc.denominator)
            prod = _imat_mul(layers[e], H[d - e])
            if acc is None:
                acc = [[w * v for v in row] for row in prod]
            else:
                for i in range(mn):
                    ai = acc[i]
                    pi = prod[i]
                    for j in range(mn):
                        ai[j] += w * pi[j]
        if acc is None or all(not any(row) for row in acc):
            H.append(zero_mat)
            scales.append(Fraction(0))
            continue
        g = _content(acc)
        if g > 1:
            acc = [[v // g for v in row] for row in acc]
        H.append(acc)
        scales.append(Fraction(g, (d + 1) * sigma * denoms))

    window = []
    for d in range(cap + 1, cap + E + 2):
        if scales[d]:
            window.extend(H[d])
    if not window:
        t0s = [[1 if i == j else 0 for i in range(mn)] for j in range(mn)]
    else:
        t0s = _int_nullspace(window, mn)

    basis = []
    for t0 in t0s:
        # coefficient vectors of the solution, degree by degree
        coeff_lists = [[Fraction(0)] * (cap + 1) for _ in range(mn)]
        for d in range(cap + 1):
            if not scales[d]:
                continue
            vd = _imat_vec(H[d], t0) if d else t0
            sc = scales[d]
            for idx in range(mn):
                if vd[idx]:
                    coeff_lists[idx][d] = vd[idx] * sc
        # clear to a primitive integer polynomial matrix
        den = 1
        for cl in coeff_lists:
            for v in cl:
                den = den * v.denominator // math.gcd(den, v.denominator)
        num_g = 0
        for cl in coeff_lists:
            for v in cl:
                if v:
                    num_g = math.gcd(num_g, int(v * den))
        num_g = num_g or 1
        entries = [Poly([v * den / num_g for v in coeff_lists[i + m * j]])
                   for i in range(m) for j in range(n)]
        basis.append(PolyMat(m, n, [entries[j * n + k] for j in range(m) for k in range(n)]))
    return basis


@functools.lru_cache(maxsize=512)
def _hom_basis_cached(ring: DiffRing, A: PolyMat, B: PolyMat, cap: int):
    if ring is DiffRing.CONST_ZERO:
        n, m = A.rows, B.rows
        mn = m * n
        if mn == 0:
            return ()
        layers, sigma = _sylvester_layers(A, B)
        S0 = RatMat(mn, mn, [Fraction(v, sigma) for row in layers[0] for v in row])
        basis = []
        for vec in rat_nullspace(S0):
            ents = [Poly.constant(vec.entry(i + m * j, 0)) for i in range(m) for j in range(n)]
            basis.append(PolyMat(m, n, ents))
        return tuple(basis)
    return tuple(_poly_hom_basis(A, B, cap))


def hom_space(P: DiffModule, Q: DiffModule, deg_cap: Optional[int] = None) -> HomSpace:
    """Q-basis of differential homomorphisms P -> Q with entry degree
    bounded by the cap.  Every basis element is re-verified by substitution
    before being returned."""
    if P.ring != Q.ring:
        raise RingMismatch(f"{P.ring.tag} vs {Q.ring.tag}")
    cap, proven = resolve_deg_cap(P, Q, deg_cap)
    basis = _hom_basis_cached(P.ring, P.matrix, Q.matrix, cap)
    for T in basis:
        if not verify_hom(T, P, Q):
            raise ArithmeticError("hom solver returned a non-homomorphism")
    return HomSpace(P, Q, basis, cap, proven)


def constants(M: DiffModule, deg_cap: Optional[int] = None):
    """Basis of {v : v' + A v = 0} as rank x 1 columns.  These are exactly
    the homomorphisms out of the rank-1 trivial module.  Dimension never
    exceeds the rank (evaluation at 0 is injective on constants)."""
    space = hom_space(trivial_module(M.ring, 1), M, deg_cap)
    if len(space.basis) > M.rank:
        raise ArithmeticError("more constants than the rank allows")
    return space.basis


# ---------------------------------------------------------------------------
# triviality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrivialityResult:
    trivial: bool
    certificate: Optional[IsoCertificate]  # M isomorphic to (R^n, 0) when trivial
    constants_dim: int
    deg_cap: int
    proven_complete: bool

    @property
    def constants_matrix(self) -> Optional[PolyMat]:
        """Columns are a constants basis (the backward map of the certificate)."""
        return self.certificate.backward if self.certificate else None


def is_trivial(M: DiffModule, deg_cap: Optional[int] = None) -> TrivialityResult:
    """Decide M isomorphic to (R^n, 0), with certificate.

    Trivial iff the constants have full rank; the certificate matrix (columns
    a constants basis) then automatically has constant nonzero determinant,
    which is re-checked exactly.  A negative verdict is cap-relative unless
    proven_complete is set."""
    cap, proven = resolve_deg_cap(trivial_module(M.ring, 1), M, deg_cap)
    cs = constants(M, deg_cap)
    if len(cs) < M.rank:
        return TrivialityResult(False, None, len(cs), cap, proven)
    T = PolyMat(M.rank, 0, [])
    for v in cs:
        T = PolyMat.hstack(T, v)
    det = T.determinant()
    if det.is_zero() or not det.is_constant():
        raise ArithmeticError("full constants basis with non-unit determinant")
    forward = T.inverse_unimodular()
    cert = make_iso_certificate(M, trivial_module(M.ring, M.rank), forward, T)
    return TrivialityResult(True, cert, len(cs), cap, proven)


# ---------------------------------------------------------------------------
# isomorphism search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsoResult:
    kind: str  # "iso" | "not_iso" | "unknown"
    certificate: Optional[IsoCertificate]
    witness: Optional[str]
    trials_used: int
    deg_cap: int

    @property
    def is_iso(self) -> bool:
        return self.kind == "iso"


def _constant_det(T: PolyMat) -> Optional[Fraction]:
    """det(T) when it is a nonzero constant, else None.  Decided exactly by
    evaluation at deg-bound + 1 points."""
    npts = T.rows * T.max_degree() + 1
    first = None
    for p in range(npts):
        d = T.eval_at(p).determinant()
        if not d:
            return None
        if first is None:
            first = d
        elif d != first:
            return None
    return first


def _solve_linear(rows, rhs):
    """One exact solution of rows @ x = rhs (free variables zero), or None."""
    if not rows:
        return []
    ncols = len(rows[0])
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        f = 1 / m[r][c]
        m[r] = [v * f for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                g = m[i][c]
                m[i] = [a - g * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for k, c in enumerate(pivots):
        x[c] = m[k][ncols]
    return x


def _solve_left_inverse(T: PolyMat, hom_qp: HomSpace) -> Optional[PolyMat]:
    """Solve S @ T = identity for S in the span of hom_qp.basis.

    The polynomial identity is equivalent to its evaluations at
    deg-bound + 1 points, which keeps the assembly scalar."""
    basis = hom_qp.basis
    if not basis:
        return None
    n = T.cols  # identity size
    db = max(S.max_degree() for S in basis) + T.max_degree()
    rows, rhs = [], []
    for p in range(db + 1):
        Tp = T.eval_at(p)
        prods = [S.eval_at(p) @ Tp for S in basis]
        for i in range(n):
            for j in range(n):
                rows.append([pr.entry(i, j) for pr in prods])
                rhs.append(Fraction(1) if i == j else Fraction(0))
    sol = _solve_linear(rows, rhs)
    if sol is None:
        return None
    S = PolyMat.zeros(basis[0].rows, basis[0].cols)
    for c, Bl in zip(sol, basis):
        if c:
            S = S + Bl.scale(c)
    if S @ T != PolyMat.identity(n):
        return None
    return S


def iso_search(P: DiffModule, Q: DiffModule, trials: int = DEFAULT_TRIALS,
               seed: int = 0, deg_cap: Optional[int] = None) -> IsoResult:
    """Three-valued isomorphism decision.

    NotIso is returned only on a proven invariant mismatch (rank, hom-space
    dimensions both ways, constants dimensions), with negative dimension
    evidence re-checked at cap + 10.  Iso certificates come from sampling
    random integer combinations T of hom(P, Q) and solving S T = identity
    for S in hom(Q, P); everything returned is re-verified exactly.
    Deterministic for a fixed seed."""
    if P.ring != Q.ring:
        raise RingMismatch(f"{P.ring.tag} vs {Q.ring.tag}")
    cap, proven = resolve_deg_cap(P, Q, deg_cap)
    if P.rank != Q.rank:
        return IsoResult("not_iso", None, f"rank {P.rank} != {Q.rank}", 0, cap)
    if P.rank == 0:
        empty = PolyMat(0, 0, [])
        return IsoResult("iso", make_iso_certificate(P, Q, empty, empty), None, 0, cap)

    def stabilized_dim(src, tgt, label):
        # hom space at the working cap, raising the cap once if a zero
        # dimension fails to stabilize
        h = hom_space(src, tgt, cap)
        if h.dimension > 0 or h.proven_complete:
            return h, h.dimension
        h2 = hom_space(src, tgt, cap + 10)
        return (h2, h2.dimension) if h2.dimension else (h, 0)

    h_pq, d_pq = stabilized_dim(P, Q, "P->Q")
    h_qp, d_qp = stabilized_dim(Q, P, "Q->P")
    if d_pq == 0 or d_qp == 0:
        caps = f"degree cap {cap}" + ("" if h_pq.proven_complete else f" and {cap + 10}")
        direction = "P->Q" if d_pq == 0 else "Q->P"
        return IsoResult("not_iso", None,
                         f"hom space {direction} has dimension 0 ({caps})", 0, cap)

    c_p = len(constants(P, cap))
    c_q = len(constants(Q, cap))
    if c_p != c_q:
        c_p2 = len(constants(P, cap + 10))
        c_q2 = len(constants(Q, cap + 10))
        if c_p2 != c_q2:
            return IsoResult(
                "not_iso", None,
                f"constants dimension {c_p2} != {c_q2} (degree cap {cap + 10})", 0, cap)

    if P.matrix == Q.matrix:
        return IsoResult("iso", make_iso_certificate(
            P, Q, PolyMat.identity(P.rank), PolyMat.identity(P.rank)), None, 0, cap)

    rng = StableRng(seed)
    for trial in range(trials):
        coeffs = [rng.randint(-COEFF_HEIGHT, COEFF_HEIGHT) for _ in h_pq.basis]
        if not any(coeffs):
            continue
        T = PolyMat.zeros(Q.rank, P.rank)
        for c, Bl in zip(coeffs, h_pq.basis):
            if c:
                T = T + Bl.scale(c)
        if _constant_det(T) is None:
            continue
        S = _solve_left_inverse(T, h_qp)
        if S is None:
            continue
        cert = make_iso_certificate(P, Q, T, S)
        return IsoResult("iso", cert, None, trial + 1, cap)
    return IsoResult("unknown", None,
                     f"no invertible combination found in {trials} trials", trials, cap)


# ---------------------------------------------------------------------------
# scramble
# ---------------------------------------------------------------------------

def scramble(P: DiffModule, seed: int, ops: Optional[int] = None):
    """Random change of basis: returns (Q, certificate) with Q isomorphic to
    P via a product U of elementary row operations (certified and verified).
    The conjugated matrix is B = (U A - U') U^{-1}, the unique matrix making
    U a differential isomorphism P -> Q.  Deterministic for a fixed seed."""
    if P.ring is not DiffRing.POLY_DX:
        raise ValueError("scramble is defined over the polynomial ring")
    n = P.rank
    if n == 0:
        empty = PolyMat(0, 0, [])
        return P, make_iso_certificate(P, P, empty, empty)
    rng = StableRng(seed)
    U = PolyMat.identity(n)
    Uinv = PolyMat.identity(n)
    count = ops if ops is not None else n + 2
    scales = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
              Fraction(3), Fraction(1, 2), Fraction(-1, 2))
    for _ in range(count):
        kind = rng.randint(0, 9)
        if n == 1:
            kind = 7  # only scaling changes a 1x1 basis
        if kind < 6:
            # shear: row_i += p(x) * row_j
            i = rng.randint(0, n - 1)
            j = rng.randint(0, n - 1)
            while j == i:
                j = rng.randint(0, n - 1)
            deg = rng.randint(0, 1)
            p = Poly([rng.nonzero_int(2)] + ([rng.randint(-2, 2)] if deg else []))
            E = PolyMat.identity(n).to_rows()
            E[i][j] = p
            Einv = PolyMat.identity(n).to_rows()
            Einv[i][j] = -p
            U = PolyMat.from_rows(E) @ U
            Uinv = Uinv @ PolyMat.from_rows(Einv)
        elif kind < 8:
            i = rng.randint(0, n - 1)
            c = scales[rng.randint(0, len(scales) - 1)]
            E = PolyMat.identity(n).to_rows()
            E[i][i] = Poly.constant(c)
            Einv = PolyMat.identity(n).to_rows()
            Einv[i][i] = Poly.constant(1 / c)
            U = PolyMat.from_rows(E) @ U
            Uinv = Uinv @ PolyMat.from_rows(Einv)
        else:
            i = rng.randint(0, n - 1)
            j = rng.randint(0, n - 1)
            while j == i:
                j = rng.randint(0, n - 1)
            rows = U.to_rows()
            rows[i], rows[j] = rows[j], rows[i]
            U = PolyMat.from_rows(rows)
            cols = Uinv.transpose().to_rows()
            cols[i], cols[j] = cols[j], cols[i]
            Uinv = PolyMat.from_rows(cols).transpose()
    B = (U @ P.matrix - U.derivative()) @ Uinv
    Q = DiffModule(P.ring, n, B)
    cert = make_iso_certificate(P, Q, U, Uinv)
    return Q, cert
