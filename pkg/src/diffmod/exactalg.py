"""Exact arithmetic substrate: rationals, univariate polynomials over Q,
matrices of both, rational nullspaces, and Smith normal form over Q[x].

Everything in this module is immutable and exact.  There is no floating
point anywhere in the package; all verdicts upstream reduce to identities
between the objects defined here.
"""

from __future__ import annotations

import math
from fractions import Fraction

# Rationals are stdlib Fractions: always reduced, denominator > 0.
Rat = Fraction

_R0 = Fraction(0)
_R1 = Fraction(1)


class ShapeMismatch(Exception):
    """Matrix dimensions incompatible with the requested operation."""


class NotUnimodular(Exception):
    """A row/matrix expected to be completable to a unit is not."""


def _as_rat(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial over Q, coefficients ascending.

    The zero polynomial is the empty coefficient tuple; its degree is the
    sentinel None (never -1-as-a-number).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return _P_ZERO

    @staticmethod
    def one() -> "Poly":
        return _P_ONE

    @staticmethod
    def x() -> "Poly":
        return _P_X

    @staticmethod
    def constant(c) -> "Poly":
        return Poly((_as_rat(c),))

    # -- structure ----------------------------------------------------------

    @property
    def degree(self):
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self) -> Fraction:
        """Leading coefficient (0 for the zero polynomial)."""
        return self.coeffs[-1] if self.coeffs else _R0

    def coeff(self, d: int) -> Fraction:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else _R0

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_rat(other)
            return Poly(tuple(a * c for a in self.coeffs)) if c else _P_ZERO
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _P_ZERO
        out = [_R0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = _P_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dlc = other.lc()
        dd = len(other.coeffs) - 1
        q = [_R0] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if not c:
                continue
            f = c / dlc
            q[i - dd] = f
            for j, oc in enumerate(other.coeffs):
                rem[i - dd + j] -= f * oc
        return Poly(q), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division was expected to be exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        c = self.lc()
        return self if c == 1 else self * (1 / c)

    def derivative(self) -> "Poly":
        return Poly(tuple(self.coeffs[i] * i for i in range(1, len(self.coeffs))))

    def __call__(self, point) -> Fraction:
        # Horner evaluation at an exact rational point.
        point = _as_rat(point)
        acc = _R0
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    # -- comparisons / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            if d == 0:
                term = str(c)
            else:
                xs = "x" if d == 1 else f"x^{d}"
                if c == 1:
                    term = xs
                elif c == -1:
                    term = f"-{xs}"
                else:
                    term = f"{c}*{xs}"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def _coerce_poly(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly.constant(v)
    return NotImplemented


_P_ZERO = Poly()
_P_ONE = Poly((_R1,))
_P_X = Poly((_R0, _R1))


def poly_derivative(p: Poly) -> Poly:
    return p.derivative()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic or zero."""
    r0, r1 = a, b
    s0, s1 = _P_ONE, _P_ZERO
    t0, t1 = _P_ZERO, _P_ONE
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = 1 / r0.lc()
    return r0 * c, s0 * c, t0 * c


# ---------------------------------------------------------------------------
# matrices over Q[x]
# ---------------------------------------------------------------------------

class PolyMat:
    """Immutable row-major matrix with Poly entries.  Zero-row or zero-column
    shapes are legal and arise for rank-0 modules."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        es = []
        for e in entries:
            p = _coerce_poly(e)
            if p is NotImplemented:
                raise TypeError(f"bad matrix entry {e!r}")
            es.append(p)
        if len(es) != rows * cols:
            raise ShapeMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(es)}")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(es)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rows(rows) -> "PolyMat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ShapeMismatch("ragged rows")
            flat.extend(row)
        return PolyMat(r, c, flat)

    @staticmethod
    def zeros(r: int, c: int) -> "PolyMat":
        return PolyMat(r, c, [_P_ZERO] * (r * c))

    @staticmethod
    def identity(n: int) -> "PolyMat":
        return PolyMat(n, n, [_P_ONE if i == j else _P_ZERO for i in range(n) for j in range(n)])

    @staticmethod
    def diagonal(entries) -> "PolyMat":
        es = [_coerce_poly(e) for e in entries]
        n = len(es)
        return PolyMat(n, n, [es[i] if i == j else _P_ZERO for i in range(n) for j in range(n)])

    # -- access -------------------------------------------------------------

    def entry(self, i: int, j: int) -> Poly:
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def col_vector(self, j: int) -> "PolyMat":
        return PolyMat(self.rows, 1, [self.entry(i, j) for i in range(self.rows)])

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "PolyMat":
        ents = [self.entry(i, j) for i in range(r0, r1) for j in range(c0, c1)]
        return PolyMat(r1 - r0, c1 - c0, ents)

    def max_degree(self) -> int:
        """Largest entry degree; 0 for a zero or empty matrix."""
        d = 0
        for e in self.entries:
            if e.coeffs:
                d = max(d, len(e.coeffs) - 1)
        return d

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def is_constant(self) -> bool:
        return all(e.is_constant() for e in self.entries)

    def coefficient_matrix(self, d: int) -> "RatMat":
        """The RatMat of x^d coefficients."""
        return RatMat(self.rows, self.cols, [e.coeff(d) for e in self.entries])

    def eval_at(self, point) -> "RatMat":
        point = _as_rat(point)
        return RatMat(self.rows, self.cols, [e(point) for e in self.entries])

    def to_ratmat(self) -> "RatMat":
        if not self.is_constant():
            raise ShapeMismatch("matrix has nonconstant entries")
        return self.coefficient_matrix(0)

    # -- arithmetic ---------------------------------------------------------

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other):
        if not isinstance(other, PolyMat):
            return NotImplemented
        self._same_shape(other)
        return PolyMat(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, PolyMat):
            return NotImplemented
        self._same_shape(other)
        return PolyMat(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return PolyMat(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "PolyMat":
        c = _coerce_poly(c)
        return PolyMat(self.rows, self.cols, [a * c for a in self.entries])

    def __matmul__(self, other):
        if not isinstance(other, PolyMat):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        n, k, m = self.rows, self.cols, other.cols
        out = []
        for i in range(n):
            ri = self.row(i)
            for j in range(m):
                acc = _P_ZERO
                for t in range(k):
                    a = ri[t]
                    if a.coeffs:
                        b = other.entries[t * m + j]
                        if b.coeffs:
                            acc = acc + a * b
                out.append(acc)
        return PolyMat(n, m, out)

    def transpose(self) -> "PolyMat":
        return PolyMat(self.cols, self.rows,
                       [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)])

    def derivative(self) -> "PolyMat":
        return PolyMat(self.rows, self.cols, [e.derivative() for e in self.entries])

    # -- block operations ----------------------------------------------------

    @staticmethod
    def block_diag(a: "PolyMat", b: "PolyMat") -> "PolyMat":
        r, c = a.rows + b.rows, a.cols + b.cols
        out = [_P_ZERO] * (r * c)
        for i in range(a.rows):
            for j in range(a.cols):
                out[i * c + j] = a.entry(i, j)
        for i in range(b.rows):
            for j in range(b.cols):
                out[(a.rows + i) * c + (a.cols + j)] = b.entry(i, j)
        return PolyMat(r, c, out)

    @staticmethod
    def hstack(a: "PolyMat", b: "PolyMat") -> "PolyMat":
        if a.rows != b.rows:
            raise ShapeMismatch("hstack needs equal row counts")
        rows = [list(a.row(i)) + list(b.row(i)) for i in range(a.rows)]
        return PolyMat(a.rows, a.cols + b.cols, [e for row in rows for e in row])

    @staticmethod
    def vstack(a: "PolyMat", b: "PolyMat") -> "PolyMat":
        if a.cols != b.cols:
            raise ShapeMismatch("vstack needs equal column counts")
        return PolyMat(a.rows + b.rows, a.cols, list(a.entries) + list(b.entries))

    # -- determinant / inverse ----------------------------------------------

    def determinant(self) -> Poly:
        """Exact determinant by fraction-free (Bareiss) elimination in Q[x].
        The 0x0 determinant is 1."""
        if self.rows != self.cols:
            raise ShapeMismatch("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return _P_ONE
        m = self.to_rows()
        sign = 1
        prev = _P_ONE
        for k in range(n - 1):
            piv = next((i for i in range(k, n) if not m[i][k].is_zero()), None)
            if piv is None:
                return _P_ZERO
            if piv != k:
                m[k], m[piv] = m[piv], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                    m[i][j] = num.exact_div(prev)
                m[i][k] = _P_ZERO
            prev = m[k][k]
        d = m[n - 1][n - 1]
        return -d if sign < 0 else d

    def inverse_unimodular(self) -> "PolyMat":
        """Inverse of a matrix whose determinant is a nonzero constant.
        Raises NotUnimodular otherwise (inverse would leave Q[x])."""
        if self.rows != self.cols:
            raise ShapeMismatch("inverse of a non-square matrix")
        n = self.rows
        det = self.determinant()
        if det.is_zero() or not det.is_constant():
            raise NotUnimodular(f"determinant {det} is not a nonzero constant")
        inv_c = 1 / det.lc()
        if n == 0:
            return self
        # adjugate via cofactors; fine at the small sizes used here
        cof = []
        for i in range(n):
            for j in range(n):
                minor_rows = [
                    [self.entry(r, c) for c in range(n) if c != j]
                    for r in range(n) if r != i
                ]
                mdet = PolyMat.from_rows(minor_rows).determinant() if n > 1 else _P_ONE
                cof.append(mdet if (i + j) % 2 == 0 else -mdet)
        # adjugate = transpose of cofactor matrix
        adj = PolyMat(n, n, cof).transpose()
        return adj.scale(inv_c)

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PolyMat):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"PolyMat({self.rows}x{self.cols}, {[str(e) for e in self.entries]})"


# ---------------------------------------------------------------------------
# matrices over Q
# ---------------------------------------------------------------------------

class RatMat:
    """Immutable row-major matrix with Fraction entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        es = [_as_rat(e) for e in entries]
        if len(es) != rows * cols:
            raise ShapeMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(es)}")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(es)

    @staticmethod
    def from_rows(rows) -> "RatMat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ShapeMismatch("ragged rows")
            flat.extend(row)
        return RatMat(r, c, flat)

    @staticmethod
    def zeros(r: int, c: int) -> "RatMat":
        return RatMat(r, c, [_R0] * (r * c))

    @staticmethod
    def identity(n: int) -> "RatMat":
        return RatMat(n, n, [_R1 if i == j else _R0 for i in range(n) for j in range(n)])

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return all(not e for e in self.entries)

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        self._same_shape(other)
        return RatMat(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        self._same_shape(other)
        return RatMat(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return RatMat(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "RatMat":
        c = _as_rat(c)
        return RatMat(self.rows, self.cols, [a * c for a in self.entries])

    def __matmul__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        n, k, m = self.rows, self.cols, other.cols
        out = []
        for i in range(n):
            ri = self.row(i)
            for j in range(m):
                acc = _R0
                for t in range(k):
                    a = ri[t]
                    if a:
                        b = other.entries[t * m + j]
                        if b:
                            acc += a * b
                out.append(acc)
        return RatMat(n, m, out)

    def transpose(self) -> "RatMat":
        return RatMat(self.cols, self.rows,
                      [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)])

    @staticmethod
    def block_diag(a: "RatMat", b: "RatMat") -> "RatMat":
        r, c = a.rows + b.rows, a.cols + b.cols
        out = [_R0] * (r * c)
        for i in range(a.rows):
            for j in range(a.cols):
                out[i * c + j] = a.entry(i, j)
        for i in range(b.rows):
            for j in range(b.cols):
                out[(a.rows + i) * c + (a.cols + j)] = b.entry(i, j)
        return RatMat(r, c, out)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "RatMat":
        ents = [self.entry(i, j) for i in range(r0, r1) for j in range(c0, c1)]
        return RatMat(r1 - r0, c1 - c0, ents)

    def determinant(self) -> Fraction:
        if self.rows != self.cols:
            raise ShapeMismatch("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return _R1
        m = self.to_rows()
        det = _R1
        for k in range(n):
            piv = next((i for i in range(k, n) if m[i][k]), None)
            if piv is None:
                return _R0
            if piv != k:
                m[k], m[piv] = m[piv], m[k]
                det = -det
            det *= m[k][k]
            inv = 1 / m[k][k]
            for i in range(k + 1, n):
                f = m[i][k] * inv
                if f:
                    for j in range(k, n):
                        m[i][j] -= f * m[k][j]
        return det

    def inverse(self) -> "RatMat":
        if self.rows != self.cols:
            raise ShapeMismatch("inverse of a non-square matrix")
        n = self.rows
        m = self.to_rows()
        inv = RatMat.identity(n).to_rows()
        for k in range(n):
            piv = next((i for i in range(k, n) if m[i][k]), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            if piv != k:
                m[k], m[piv] = m[piv], m[k]
                inv[k], inv[piv] = inv[piv], inv[k]
            f = 1 / m[k][k]
            m[k] = [c * f for c in m[k]]
            inv[k] = [c * f for c in inv[k]]
            for i in range(n):
                if i != k and m[i][k]:
                    g = m[i][k]
                    m[i] = [a - g * b for a, b in zip(m[i], m[k])]
                    inv[i] = [a - g * b for a, b in zip(inv[i], inv[k])]
        return RatMat.from_rows(inv)

    def to_polymat(self) -> PolyMat:
        return PolyMat(self.rows, self.cols, [Poly.constant(e) for e in self.entries])

    def __eq__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"RatMat({self.rows}x{self.cols}, {[str(e) for e in self.entries]})"


# ---------------------------------------------------------------------------
# integer echelon / rational nullspace
# ---------------------------------------------------------------------------

def _int_row_echelon(rows, ncols):
    """Fraction-free (Bareiss) row echelon of an integer matrix.

    Returns (echelon_rows, pivot_cols).  Entries stay integers throughout;
    every intermediate value is a minor of the input, so the divisions by
    the previous pivot are exact.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            f = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c + 1, ncols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def _int_nullspace(rows, ncols):
    """Primitive integer basis of the right kernel of an integer matrix.

    Basis vectors are gcd-reduced with their first nonzero entry positive,
    one per free column, in ascending column order.
    """
    ech, pivots = _int_row_echelon(rows, ncols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        x = [_R0] * ncols
        x[fc] = _R1
        for k in range(len(pivots) - 1, -1, -1):
            pc = pivots[k]
            if pc > fc:
                continue
            s = _R0
            row = ech[k]
            for j in range(pc + 1, ncols):
                if row[j] and x[j]:
                    s += row[j] * x[j]
            x[pc] = -s / row[pc]
        # clear to a primitive integer vector
        den = 1
        for v in x:
            den = den * v.denominator // math.gcd(den, v.denominator)
        ints = [int(v * den) for v in x]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        lead = next((v for v in ints if v), 0)
        if lead < 0:
            ints = [-v for v in ints]
        basis.append(ints)
    return basis


def rat_nullspace(M: RatMat):
    """Exact basis of the right kernel of M, as a list of column RatMats.

    Elimination is fraction-free on a denominator-cleared integer copy to
    control coefficient growth; the returned vectors are primitive integer
    vectors (up to scaling this is canonical).
    """
    int_rows = []
    for i in range(M.rows):
        row = M.row(i)
        den = 1
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
        int_rows.append([int(v * den) for v in row])
    basis = _int_nullspace(int_rows, M.cols)
    return [RatMat(M.cols, 1, vec) for vec in basis]


# ---------------------------------------------------------------------------
# Smith normal form over Q[x]
# ---------------------------------------------------------------------------

def _int_cleared(rows):
    """Scale a grid of Poly entries by the lcm of all coefficient
    denominators: returns (grid of int coefficient lists, scale)."""
    den = 1
    for row in rows:
        for p in row:
            for cf in p.coeffs:
                den = den * cf.denominator // math.gcd(den, cf.denominator)
    grid = [[[cf.numerator * (den // cf.denominator) for cf in p.coeffs]
             for p in row] for row in rows]
    return grid, den


def _int_eval(grid, k: int):
    """Evaluate a grid of int coefficient lists at an integer point."""
    out = []
    for row in grid:
        vals = []
        for cs in row:
            v = 0
            for cf in reversed(cs):
                v = v * k + cf
            vals.append(v)
        out.append(vals)
    return out


def _int_matmul(A, B):
    cols = list(zip(*B)) if B else []
    return [[sum(x * y for x, y in zip(row, col)) for col in cols]
            for row in A]


def _grid_degree(grid) -> int:
    d = 0
    for row in grid:
        for cs in row:
            if len(cs) - 1 > d:
                d = len(cs) - 1
    return d


def smith_normal_form_with_inverses(M: PolyMat):
    """Smith normal form over Q[x]: returns (U, D, V, Uinv, Vinv) with
    U*M*V = D, D diagonal with monic entries, each dividing the next, and
    U, V products of elementary operations whose inverses are accumulated
    alongside (so unimodularity is verified by a product, not a determinant).

    The factorization and both inverse identities are re-verified exactly
    before returning.
    """
    r, c = M.rows, M.cols
    a = M.to_rows()
    U = PolyMat.identity(r).to_rows()
    Ui = PolyMat.identity(r).to_rows()
    V = PolyMat.identity(c).to_rows()
    Vi = PolyMat.identity(c).to_rows()

    def row_op(i, j, q):
        # row_i -= q * row_j on a and U; on the inverse, col_j += q * col_i
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]
        for rr in range(r):
            Ui[rr][j] = Ui[rr][j] + q * Ui[rr][i]

    def col_op(i, j, q):
        # col_i -= q * col_j on a and V; on the inverse, row_j += q * row_i
        for rr in range(r):
            a[rr][i] = a[rr][i] - q * a[rr][j]
        for rr in range(c):
            V[rr][i] = V[rr][i] - q * V[rr][j]
        Vi[j] = [x + q * y for x, y in zip(Vi[j], Vi[i])]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for rr in range(r):
            Ui[rr][i], Ui[rr][j] = Ui[rr][j], Ui[rr][i]

    def swap_cols(i, j):
        for rr in range(r):
            a[rr][i], a[rr][j] = a[rr][j], a[rr][i]
        for rr in range(c):
            V[rr][i], V[rr][j] = V[rr][j], V[rr][i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def min_deg_entry(t):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if not a[i][j].is_zero():
                    d = a[i][j].degree
                    if best is None or d < best[0]:
                        best = (d, i, j)
        return best

    t = 0
    while t < min(r, c):
        found = min_deg_entry(t)
        if found is None:
            break
        while True:
            # re-locate the minimal-degree pivot each pass; the submatrix is
            # nonempty here because a[t][t] stays nonzero between passes
            _, pi, pj = min_deg_entry(t)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, r):
                if not a[i][t].is_zero():
                    q, rem = divmod(a[i][t], piv)
                    row_op(i, t, q)
                    if not rem.is_zero():
                        dirty = True
            for j in range(t + 1, c):
                if not a[t][j].is_zero():
                    q, rem = divmod(a[t][j], piv)
                    col_op(j, t, q)
                    if not rem.is_zero():
                        dirty = True
            if dirty:
                continue
            # column and row are clear; enforce divisibility of the rest
            piv = a[t][t]
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if not a[i][j].is_zero() and not (a[i][j] % piv).is_zero():
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            # pull the offending row into the pivot row and restart the pass
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            U[t] = [x + y for x, y in zip(U[t], U[offender])]
            for rr in range(r):
                Ui[rr][offender] = Ui[rr][offender] - Ui[rr][t]
        t += 1

    # monic normalization: scale rows of a (and U) by 1/lc of the diagonal
    for i in range(min(r, c)):
        piv = a[i][i]
        if not piv.is_zero() and piv.lc() != 1:
            f = 1 / piv.lc()
            a[i] = [x * f for x in a[i]]
            U[i] = [x * f for x in U[i]]
            for rr in range(r):
                Ui[rr][i] = Ui[rr][i] * piv.lc()

    Um = PolyMat.from_rows(U) if r else PolyMat(0, 0, [])
    Uim = PolyMat.from_rows(Ui) if r else PolyMat(0, 0, [])
    Vm = PolyMat.from_rows(V) if c else PolyMat(0, 0, [])
    Vim = PolyMat.from_rows(Vi) if c else PolyMat(0, 0, [])
    Dm = PolyMat.from_rows(a) if r else PolyMat(0, c, [])

    # verification: the factorization, and unimodularity of U and V via
    # their accumulated inverses.  Polynomial matrix identities of entry
    # degree <= B hold iff they hold at B+1 distinct evaluation points, so
    # checking products at 0..B is an exact proof and avoids the symbolic
    # triple product.  Denominators are cleared once per matrix so the
    # per-point work is plain integer arithmetic.
    gu, lu = _int_cleared(U)
    gui, lui = _int_cleared(Ui)
    gv, lv = _int_cleared(V)
    gvi, lvi = _int_cleared(Vi)
    gm, lm = _int_cleared(M.to_rows())
    gd, ld = _int_cleared(a)
    b_fact = max(_grid_degree(gu) + _grid_degree(gm) + _grid_degree(gv),
                 _grid_degree(gd))
    b_uinv = _grid_degree(gu) + _grid_degree(gui)
    b_vinv = _grid_degree(gv) + _grid_degree(gvi)
    s_fact = lu * lm * lv
    for k in range(max(b_fact, b_uinv, b_vinv) + 1):
        eu, ev = _int_eval(gu, k), _int_eval(gv, k)
        if k <= b_fact:
            prod = _int_matmul(_int_matmul(eu, _int_eval(gm, k)), ev)
            ed = _int_eval(gd, k)
            if any(ld * prod[i][j] != s_fact * ed[i][j]
                   for i in range(r) for j in range(c)):
                raise ArithmeticError("smith normal form verification failed")
        if k <= b_uinv:
            prod = _int_matmul(eu, _int_eval(gui, k))
            if any(prod[i][j] != (lu * lui if i == j else 0)
                   for i in range(r) for j in range(r)):
                raise ArithmeticError("transform inverse verification failed")
        if k <= b_vinv:
            prod = _int_matmul(ev, _int_eval(gvi, k))
            if any(prod[i][j] != (lv * lvi if i == j else 0)
                   for i in range(c) for j in range(c)):
                raise ArithmeticError("transform inverse verification failed")
    return Um, Dm, Vm, Uim, Vim


def smith_normal_form(M: PolyMat):
    """Smith normal form over Q[x]: returns (U, D, V) with U*M*V = D,
    D diagonal with monic entries, each dividing the next, and U, V
    unimodular (verified exactly)."""
    U, D, V, _, _ = smith_normal_form_with_inverses(M)
    return U, D, V


def kernel_basis(w: PolyMat) -> PolyMat:
    """Basis of the kernel of a unimodular row w (1xn), as the columns of an
    n x (n-1) matrix.  Raises NotUnimodular when the entries of w do not
    generate the unit ideal (kernel then has no free complement of this form).
    """
    if w.rows != 1:
        raise ShapeMismatch("kernel_basis expects a single row")
    n = w.cols
    if n == 0:
        raise NotUnimodular("empty row generates the zero ideal")
    U, D, V = smith_normal_form(w)
    d = D.entry(0, 0)
    if d.is_zero() or not d.is_constant():
        raise NotUnimodular(f"gcd of row entries is {d}, not a nonzero constant")
    ker = V.submatrix(0, n, 1, n)
    if not (w @ ker).is_zero():
        raise ArithmeticError("kernel basis verification failed")
    # unimodular completability: stacking w atop the completion must give a
    # matrix with constant nonzero determinant
    comp = unimodular_completion(w)
    stacked = PolyMat.vstack(w, comp)
    det = stacked.determinant()
    if det.is_zero() or not det.is_constant():
        raise ArithmeticError("unimodular completion verification failed")
    return ker


def unimodular_completion(w: PolyMat) -> PolyMat:
    """An (n-1) x n matrix C such that [w; C] is invertible over Q[x]."""
    if w.rows != 1:
        raise ShapeMismatch("unimodular_completion expects a single row")
    n = w.cols
    U, D, V, _, vinv = smith_normal_form_with_inverses(w)
    d = D.entry(0, 0)
    if d.is_zero() or not d.is_constant():
        raise NotUnimodular(f"gcd of row entries is {d}, not a nonzero constant")
    return vinv.submatrix(1, n, 0, n)
