"""Exact linear algebra over GF(2), the rationals and the integers.

Matrices are plain lists of rows.  GF(2) entries are the ints 0/1, rational
entries are ``Fraction`` and integer entries are ``int``.  Pivoting always
takes the first nonzero entry so results depend only on the input order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import RingError, ShapeError

GF2, Q, Z = "gf2", "q", "z"
RINGS = (GF2, Q, Z)

_ALIASES = {
    "gf2": GF2, "gf(2)": GF2, "z2": GF2, "z/2": GF2, "f2": GF2,
    "q": Q, "qq": Q, "rationals": Q, "rational": Q,
    "z": Z, "zz": Z, "integers": Z, "integer": Z,
}


def as_ring(ring) -> str:
    key = str(ring).strip().lower()
    if key not in _ALIASES:
        raise RingError(f"unknown coefficient ring {ring!r}")
    return _ALIASES[key]


def is_field(ring: str) -> bool:
    return ring in (GF2, Q)


def coerce(x, ring: str):
    """Map an int/Fraction/string scalar into the ring."""
    if isinstance(x, str):
        x = Fraction(x)
    if ring == GF2:
        x = Fraction(x)
        if x.denominator % 2 == 0:
            raise RingError(f"{x} has no image in GF(2)")
        return (x.numerator * x.denominator) % 2
    if ring == Q:
        return Fraction(x)
    x = Fraction(x)
    if x.denominator != 1:
        raise RingError(f"{x} is not an integer")
    return int(x)


def zero(ring):
    return Fraction(0) if ring == Q else 0


def one(ring):
    return Fraction(1) if ring == Q else 1


def _copy(M):
    return [list(r) for r in M]


def _shape(M, ncols=None):
    n = len(M[0]) if M else (ncols or 0)
    return len(M), n


# ---------------------------------------------------------------- fields

def rref(M, ring: str, ncols: int | None = None):
    """Reduced row echelon form over a field. Returns (R, pivot columns)."""
    if not is_field(ring):
        raise RingError("rref needs a field")
    A = _copy(M)
    m, n = _shape(A, ncols)
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        if ring == Q:
            inv = 1 / A[r][c]
            A[r] = [x * inv for x in A[r]]
            for i in range(m):
                if i != r and A[i][c]:
                    f = A[i][c]
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        else:
            for i in range(m):
                if i != r and A[i][c]:
                    A[i] = [x ^ y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(M, ring: str) -> int:
    if ring == Z:
        return smith_normal_form(M).rank
    return len(rref(M, ring)[1])


def kernel_basis(M, ring: str, ncols: int | None = None) -> list[list]:
    """Basis of {x : M x = 0}; canonical (RREF over fields, Hermite over Z)."""
    m, n = _shape(M, ncols)
    if ring == Z:
        if m == 0:
            return [[int(i == j) for i in range(n)] for j in range(n)]
        snf = smith_normal_form(M)
        vecs = [[snf.V[i][j] for i in range(n)] for j in range(snf.rank, n)]
        return hermite_rows(vecs)
    if m == 0:
        return [[one(ring) if i == j else zero(ring) for i in range(n)] for j in range(n)]
    R, piv = rref(M, ring, n)
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [zero(ring)] * n
        v[f] = one(ring)
        for row, pc in enumerate(piv):
            if R[row][f]:
                v[pc] = (-R[row][f]) if ring == Q else R[row][f]
        basis.append(v)
    # present as row-reduced generators
    if basis:
        R2, _ = rref(basis, ring, n)
        basis = [r for r in R2 if any(r)]
    return basis


def solve(A, b, ring: str, ncols: int | None = None):
    """One solution x of A x = b, or None.  Over Z the solution is integral."""
    m, n = _shape(A, ncols)
    if len(b) != m:
        raise ShapeError(f"right-hand side has length {len(b)}, expected {m}")
    if ring == Z:
        return _solve_z(A, b, n)
    if m == 0:
        return [zero(ring)] * n
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug, ring, n + 1)
    if n in piv:
        return None
    x = [zero(ring)] * n
    for row, pc in enumerate(piv):
        x[pc] = R[row][n]
    return x


class Eliminator:
    """Incremental echelon basis over a field with combination tracking.

    Vectors are dicts ``{index: coeff}`` over Q and int bitmasks over GF(2).
    ``add`` stores a vector under an integer tag; ``reduce`` returns the
    residual and the tag combination ``c`` with ``vec = residual + sum c[t] v_t``.
    """

    def __init__(self, ring: str):
        if not is_field(ring):
            raise RingError("Eliminator needs a field")
        self.ring = ring
        self._piv: dict[int, tuple] = {}
        self.tags: list[int] = []

    def __len__(self):
        return len(self._piv)

    def reduce(self, vec):
        if self.ring == GF2:
            combo = 0
            while vec:
                low = (vec & -vec).bit_length() - 1
                hit = self._piv.get(low)
                if hit is None:
                    break
                vec ^= hit[0]
                combo ^= hit[1]
            return vec, combo
        vec = {i: c for i, c in vec.items() if c}
        combo: dict[int, Fraction] = {}
        while vec:
            low = min(vec)
            hit = self._piv.get(low)
            if hit is None:
                break
            f = vec[low]
            for i, c in hit[0].items():
                nv = vec.get(i, 0) - f * c
                if nv:
                    vec[i] = nv
                else:
                    vec.pop(i, None)
            for t, c in hit[1].items():
                nc = combo.get(t, 0) + f * c
                if nc:
                    combo[t] = nc
                else:
                    combo.pop(t, None)
        return vec, combo

    def add(self, vec, tag: int) -> bool:
        self.tags.append(tag)
        res, combo = self.reduce(vec)
        if not res:
            return False
        if self.ring == GF2:
            low = (res & -res).bit_length() - 1
            self._piv[low] = (res, combo ^ (1 << tag))
            return True
        low = min(res)
        inv = 1 / Fraction(res[low])
        res = {i: c * inv for i, c in res.items()}
        full = {t: -c * inv for t, c in combo.items()}
        full[tag] = full.get(tag, 0) + inv
        self._piv[low] = (res, full)
        return True


def combo_coeffs(combo, ring: str) -> dict[int, object]:
    """Normalise an Eliminator combination to ``{tag: coeff}``."""
    if ring == GF2:
        out = {}
        t = 0
        while combo:
            if combo & 1:
                out[t] = 1
            combo >>= 1
            t += 1
        return out
    return {t: c for t, c in combo.items() if c}


# ---------------------------------------------------------------- integers

@dataclass
class SmithForm:
    """U M V = D with U, V unimodular; ``diag`` has the divisibility chain."""
    U: list
    Uinv: list
    V: list
    Vinv: list
    diag: list
    rank: int

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diag if d > 1]


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M) -> SmithForm:
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if A else 0
    U, Ui, V, Vi = _eye(m), _eye(m), _eye(n), _eye(n)

    def row_add(i, j, q):  # R_i += q R_j
        A[i] = [a + q * b for a, b in zip(A[i], A[j])]
        U[i] = [a + q * b for a, b in zip(U[i], U[j])]
        for r in Ui:
            r[j] -= q * r[i]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_add(i, j, q):  # C_i += q C_j
        for r in A:
            r[i] += q * r[j]
        for r in V:
            r[i] += q * r[j]
        Vi[j] = [a - q * b for a, b in zip(Vi[j], Vi[i])]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                cands = [(abs(A[i][t]), 0, i) for i in range(t + 1, m) if A[i][t]]
                cands += [(abs(A[t][j]), 1, j) for j in range(t + 1, n) if A[t][j]]
                _, kind, idx = min(cands)
                if kind == 0:
                    row_swap(t, idx)
                else:
                    col_swap(t, idx)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if A[t][t] < 0:
            row_neg(t)
        t += 1
    diag = [A[i][i] for i in range(min(m, n))]
    r = sum(1 for d in diag if d)
    return SmithForm(U, Ui, V, Vi, diag[:r], r)


def hermite_rows(vecs: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``vecs`` (zero rows dropped)."""
    A = [list(map(int, v)) for v in vecs if any(v)]
    if not A:
        return []
    n = len(A[0])
    r = 0
    for c in range(n):
        rows = [i for i in range(r, len(A)) if A[i][c]]
        if not rows:
            continue
        while len(rows) > 1:
            rows.sort(key=lambda i: abs(A[i][c]))
            p = rows[0]
            for i in rows[1:]:
                q = A[i][c] // A[p][c]
                A[i] = [a - q * b for a, b in zip(A[i], A[p])]
            rows = [i for i in rows if A[i][c]]
        p = rows[0]
        A[r], A[p] = A[p], A[r]
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return [row for row in A[:r]]


def _solve_z(A, b, n):
    if not A:
        return [0] * n
    s = smith_normal_form(A)
    ub = [sum(u * x for u, x in zip(row, b)) for row in s.U]
    y = [0] * n
    for i, bi in enumerate(ub):
        if i < s.rank:
            if bi % s.diag[i]:
                return None
            y[i] = bi // s.diag[i]
        elif bi:
            return None
    return [sum(V_row[j] * y[j] for j in range(n)) for V_row in s.V]


def matmul(A, B, ring: str):
    if not A or not B:
        cols = len(B[0]) if B else 0
        return [[zero(ring)] * cols for _ in A]
    out = []
    for row in A:
        r = []
        for j in range(len(B[0])):
            s = sum(row[k] * B[k][j] for k in range(len(B)))
            r.append(s % 2 if ring == GF2 else s)
        out.append(r)
    return out


def det_int(M) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    A = [[int(x) for x in r] for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
