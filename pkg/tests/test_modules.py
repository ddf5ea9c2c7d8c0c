"""Engine tests: hom spaces (cross-checked against a brute-force solver),
constants, triviality, isomorphism search, scrambling."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffmod.diffring import DiffRing, RingMismatch
from diffmod.exactalg import (Poly, PolyMat, RatMat, ShapeMismatch,
                              rat_nullspace)
from diffmod.modules import (CertificateInvalid, DiffModule, constants,
                             direct_sum, hom_space, identity_certificate,
                             is_trivial, iso_search, make_iso_certificate,
                             resolve_deg_cap, scramble, trivial_module,
                             verify_hom)
from diffmod.rng import StableRng


def P(*coeffs):
    return Poly([Fraction(c) for c in coeffs])


X = P(0, 1)


def line(f: Poly) -> DiffModule:
    return DiffModule(DiffRing.POLY_DX, 1, PolyMat(1, 1, [f]))


def mod2(a, b, c, d) -> DiffModule:
    return DiffModule(DiffRing.POLY_DX, 2, PolyMat(2, 2, [a, b, c, d]))


NILPOTENT = mod2(P(0), P(1), P(0), P(0))


# ---------------------------------------------------------------------------
# brute-force oracle: assemble the full linear system on the coefficients of
# T up to the cap and solve it with nothing but rat_nullspace
# ---------------------------------------------------------------------------

def oracle_hom_basis(src: DiffModule, tgt: DiffModule, cap: int):
    m, n = tgt.rank, src.rank
    A, B = src.matrix, tgt.matrix
    unknowns = []            # (degree, row, col)
    residuals = []           # residual PolyMat per unknown basis matrix
    for d in range(cap + 1):
        for i in range(m):
            for j in range(n):
                U = PolyMat(m, n, [
                    Poly([0] * d + [1]) if (r, c) == (i, j) else Poly.zero()
                    for r in range(m) for c in range(n)])
                unknowns.append((d, i, j))
                residuals.append(U.derivative() - U @ A + B @ U)
    rdeg = 0
    for R in residuals:
        rdeg = max(rdeg, R.max_degree())
    rows = []
    for k in range(rdeg + 1):
        for i in range(m):
            for j in range(n):
                rows.append([R.entry(i, j).coeff(k) for R in residuals])
    M = RatMat(len(rows), len(unknowns), [e for row in rows for e in row])
    basis = []
    for v in rat_nullspace(M):
        entries = [[Poly.zero() for _ in range(n)] for _ in range(m)]
        for idx, (d, i, j) in enumerate(unknowns):
            c = v.entry(idx, 0)
            if c:
                entries[i][j] = entries[i][j] + Poly([0] * d + [c])
        basis.append(PolyMat(m, n, [e for row in entries for e in row]))
    return basis


def assert_same_space(src, tgt, cap):
    fast = hom_space(src, tgt, cap)
    slow = oracle_hom_basis(src, tgt, cap)
    assert fast.dimension == len(slow)
    for T in fast.basis:
        assert T.max_degree() <= cap
        assert verify_hom(T, src, tgt)
    for T in slow:
        assert verify_hom(T, src, tgt)
    if fast.basis:
        # fast basis elements are independent: stack their coefficient
        # vectors and check the stacked matrix has full row rank
        vecs = []
        for T in fast.basis:
            vec = []
            for d in range(cap + 1):
                for i in range(T.rows):
                    for j in range(T.cols):
                        vec.append(T.entry(i, j).coeff(d))
            vecs.append(vec)
        stacked = RatMat(len(vecs), len(vecs[0]), [e for v in vecs for e in v])
        assert rat_nullspace(stacked.transpose()) == []


def test_hom_matches_oracle_on_seeded_instances():
    rng = StableRng(2024)
    for _ in range(12):
        m = rng.randint(1, 2)
        n = rng.randint(1, 2)
        src = DiffModule(DiffRing.POLY_DX, n, PolyMat(
            n, n, [Poly([rng.randint(-2, 2) for _ in range(rng.randint(1, 3))])
                   for _ in range(n * n)]))
        tgt = DiffModule(DiffRing.POLY_DX, m, PolyMat(
            m, m, [Poly([rng.randint(-2, 2) for _ in range(rng.randint(1, 3))])
                   for _ in range(m * m)]))
        assert_same_space(src, tgt, 8)


def test_hom_matches_oracle_on_worked_lines():
    for f, g in [(P(0), P(0)), (X, X), (X, X + P(1)), (X * X, X),
                 (P(0, 3), X), (P(1), P(1))]:
        assert_same_space(line(f), line(g), 10)


# ---------------------------------------------------------------------------
# rank-1 structure: dim hom((R,f),(R,g)) = 1 exactly when f = g
# ---------------------------------------------------------------------------

def test_rank_one_hom_dimension_table():
    reps = [P(0), P(1), X, X + P(1), X * X, P(0, 3)]
    for f in reps:
        for g in reps:
            hs = hom_space(line(f), line(g), 32)
            assert hs.dimension == (1 if f == g else 0)


def test_equal_lines_hom_is_the_constants():
    hs = hom_space(line(X), line(X), 32)
    assert hs.dimension == 1
    assert hs.basis[0] == PolyMat(1, 1, [P(1)])


# ---------------------------------------------------------------------------
# constants and triviality
# ---------------------------------------------------------------------------

def test_constants_of_nilpotent_jordan_block():
    basis = constants(NILPOTENT)
    cols = {tuple(str(v.entry(i, 0)) for i in range(2)) for v in basis}
    assert cols == {("1", "0"), ("-x", "1")}


def test_nilpotent_jordan_block_is_trivial():
    res = is_trivial(NILPOTENT)
    assert res.trivial
    assert res.constants_dim == 2
    cert = res.certificate
    assert cert.backward == PolyMat(2, 2, [P(1), -X, P(0), P(1)])
    det = cert.backward.determinant()
    assert det.is_constant() and not det.is_zero()
    assert verify_hom(cert.backward, trivial_module(DiffRing.POLY_DX, 2),
                      NILPOTENT)


def test_unit_line_has_no_constants():
    assert len(constants(line(P(1)))) == 0
    res = is_trivial(line(P(1)))
    assert not res.trivial
    assert res.constants_dim == 0


def test_trivial_module_is_trivial():
    res = is_trivial(trivial_module(DiffRing.POLY_DX, 3))
    assert res.trivial
    assert res.certificate.forward == PolyMat.identity(3)


def test_constants_additive_over_direct_sum():
    p, q = line(X), NILPOTENT
    assert len(constants(direct_sum(p, q), 16)) == \
        len(constants(p, 16)) + len(constants(q, 16))


# ---------------------------------------------------------------------------
# degree cap policy
# ---------------------------------------------------------------------------

def test_cap_policy_const_ring():
    M = DiffModule(DiffRing.CONST_ZERO, 2, PolyMat.identity(2))
    cap, proven = resolve_deg_cap(M, M, None)
    assert cap == 0 and proven


def test_cap_policy_constant_matrices_proven():
    M = mod2(P(1), P(0), P(0), P(2))
    cap, proven = resolve_deg_cap(M, M, None)
    assert cap == 32 and proven  # max(32, 2*2)


def test_cap_policy_nonconstant_not_proven():
    cap, proven = resolve_deg_cap(line(X), line(X), None)
    assert cap == 32 and not proven


def test_cap_policy_explicit_cap_wins():
    cap, proven = resolve_deg_cap(line(X), line(X), 7)
    assert cap == 7 and not proven


def test_const_ring_hom_is_intertwiner_space():
    d12 = DiffModule(DiffRing.CONST_ZERO, 2,
                     PolyMat(2, 2, [P(1), P(0), P(0), P(2)]))
    hs = hom_space(d12, d12)
    assert hs.dimension == 2
    assert hs.proven_complete
    assert hs.deg_cap == 0
    other = DiffModule(DiffRing.CONST_ZERO, 2,
                       PolyMat(2, 2, [P(3), P(0), P(0), P(4)]))
    assert hom_space(d12, other).dimension == 0


def test_hom_rejects_mixed_rings():
    with pytest.raises(RingMismatch):
        hom_space(line(X), DiffModule(DiffRing.CONST_ZERO, 1,
                                      PolyMat(1, 1, [P(1)])))


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def test_certificate_requires_two_sided_inverse():
    with pytest.raises(CertificateInvalid):
        make_iso_certificate(line(X), line(X), PolyMat(1, 1, [P(2)]),
                             PolyMat(1, 1, [P(1)]))
    cert = make_iso_certificate(line(X), line(X), PolyMat(1, 1, [P(2)]),
                                PolyMat(1, 1, [Fraction(1, 2)]))
    assert cert.forward.entry(0, 0) == P(2)


def test_certificate_rejects_non_hom():
    with pytest.raises(CertificateInvalid):
        make_iso_certificate(line(X), line(X * X), PolyMat(1, 1, [P(1)]),
                             PolyMat(1, 1, [P(1)]))


def test_identity_certificate():
    cert = identity_certificate(NILPOTENT)
    assert cert.forward == PolyMat.identity(2)


# ---------------------------------------------------------------------------
# isomorphism search
# ---------------------------------------------------------------------------

def test_not_iso_different_ranks():
    r = iso_search(line(X), NILPOTENT)
    assert r.kind == "not_iso"
    assert "rank" in r.witness


def test_not_iso_lines_with_different_exponents():
    r = iso_search(line(X), line(X * X))
    assert r.kind == "not_iso"
    assert "dimension 0" in r.witness


def test_iso_on_equal_modules_is_fast_path():
    r = iso_search(NILPOTENT, NILPOTENT, trials=0)
    assert r.kind == "iso"
    assert r.certificate.forward == PolyMat.identity(2)


def test_iso_found_on_scrambled_module():
    base = mod2(X, P(1), P(0), X * X)
    twisted, cert = scramble(base, seed=5)
    r = iso_search(base, twisted, seed=9)
    assert r.kind == "iso"
    f, b = r.certificate.forward, r.certificate.backward
    assert verify_hom(f, base, twisted)
    assert f @ b == PolyMat.identity(2)


def test_unknown_when_sampling_disabled():
    base = mod2(X, P(1), P(0), X * X)
    twisted, _ = scramble(base, seed=11)
    r = iso_search(base, twisted, trials=0)
    assert r.kind == "unknown"
    assert r.trials_used == 0


def test_iso_search_deterministic_per_seed():
    base = mod2(X, P(1), P(0), X)
    twisted, _ = scramble(base, seed=3)
    a = iso_search(base, twisted, seed=4)
    b = iso_search(base, twisted, seed=4)
    assert a.kind == b.kind == "iso"
    assert a.certificate.forward == b.certificate.forward
    assert a.trials_used == b.trials_used


def test_rank_zero_modules_are_isomorphic():
    z = trivial_module(DiffRing.POLY_DX, 0)
    assert iso_search(z, z).kind == "iso"


# ---------------------------------------------------------------------------
# scramble
# ---------------------------------------------------------------------------

def test_scramble_certificate_verified():
    base = mod2(P(0), X, P(1), P(0))
    twisted, cert = scramble(base, seed=21)
    assert cert.source == base and cert.target == twisted
    assert verify_hom(cert.forward, base, twisted)
    assert verify_hom(cert.backward, twisted, base)
    assert cert.forward @ cert.backward == PolyMat.identity(2)


def test_scramble_deterministic():
    base = mod2(P(0), X, P(1), P(0))
    t1, _ = scramble(base, seed=8)
    t2, _ = scramble(base, seed=8)
    assert t1 == t2


def test_scramble_rejects_const_ring():
    with pytest.raises(ValueError):
        scramble(DiffModule(DiffRing.CONST_ZERO, 1, PolyMat(1, 1, [P(1)])),
                 seed=0)


# ---------------------------------------------------------------------------
# module construction guards
# ---------------------------------------------------------------------------

def test_module_shape_guard():
    with pytest.raises(ShapeMismatch):
        DiffModule(DiffRing.POLY_DX, 2, PolyMat(1, 1, [P(0)]))


def test_const_ring_module_requires_constant_matrix():
    with pytest.raises(ValueError):
        DiffModule(DiffRing.CONST_ZERO, 1, PolyMat(1, 1, [X]))


def test_module_derivation_leibniz_property():
    M = mod2(X, P(1), P(2), X * X)
    r = X * X + P(3)
    v = PolyMat(2, 1, [X, P(1, 1)])
    assert M.derive(v.scale(r)) == v.scale(r.derivative()) + M.derive(v).scale(r)


@given(st.integers(0, 2**31), st.integers(1, 3))
@settings(max_examples=15, deadline=None)
def test_scramble_preserves_triviality(seed, n):
    twisted, _ = scramble(trivial_module(DiffRing.POLY_DX, n), seed=seed)
    assert is_trivial(twisted).trivial
