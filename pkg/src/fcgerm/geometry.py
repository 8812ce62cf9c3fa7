"""Geometric simplicial complexes with exact rational coordinates."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .complex import SimplicialComplex, closure_rows
from .errors import DegenerateSimplex, InvalidComplex
from .rings import det_int

_SAFE = 2 ** 60


def _to_array(values: list[list[int]]) -> np.ndarray:
    big = max((abs(v) for row in values for v in row), default=0)
    if big < _SAFE:
        return np.array(values, dtype=np.int64).reshape(len(values), -1)
    arr = np.empty((len(values), len(values[0]) if values else 0), dtype=object)
    for i, row in enumerate(values):
        arr[i, :] = row
    return arr


@dataclass(frozen=True, eq=False)
class GeometricComplex:
    """A complex plus coordinates ``numer[v] / denom`` for every vertex id ``v``."""

    complex: SimplicialComplex
    numer: np.ndarray
    denom: int = 1
    verified_embedding: bool = False

    @classmethod
    def from_points(cls, K: SimplicialComplex, points) -> "GeometricComplex":
        """``points[v]`` is a sequence of rationals for every vertex id ``v``."""
        pts = [[Fraction(x) for x in p] for p in points]
        if not pts:
            return cls(K, np.zeros((0, 0), dtype=np.int64), 1)
        width = len(pts[0])
        if any(len(p) != width for p in pts):
            raise InvalidComplex("points have different ambient dimensions")
        den = 1
        for p in pts:
            for x in p:
                den = den * x.denominator // math.gcd(den, x.denominator)
        numer = [[int(x * den) for x in p] for p in pts]
        if len(K.vertices) and int(K.vertices.max()) >= len(pts):
            raise InvalidComplex("a vertex has no coordinates")
        return cls(K, _to_array(numer), den)

    @property
    def ambient_dim(self) -> int:
        return self.numer.shape[1] if self.numer.ndim == 2 else 0

    def point(self, v: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(x), self.denom) for x in self.numer[int(v)])

    def points(self, simplex) -> list[tuple[Fraction, ...]]:
        return [self.point(v) for v in simplex]

    def restrict(self, K: SimplicialComplex) -> "GeometricComplex":
        return GeometricComplex(K, self.numer, self.denom, self.verified_embedding)

    def simplex_volume_sq(self, simplex) -> Fraction:
        return simplex_volume_sq(self, simplex)

    def check_nondegenerate(self) -> None:
        for s in self.complex.maximal_simplices():
            if len(s) > 1:
                simplex_volume_sq(self, s)

    def with_verified_embedding(self) -> "GeometricComplex":
        if not verify_embedding(self):
            raise InvalidComplex("two simplices intersect outside a common face")
        return replace(self, verified_embedding=True)


def simplex_volume_sq(gc: GeometricComplex, simplex) -> Fraction:
    """Squared k-volume det(G)/(k!)^2 from the Gram matrix of edge vectors."""
    s = [int(v) for v in simplex]
    k = len(s) - 1
    if k <= 0:
        return Fraction(1)
    base = [int(x) for x in gc.numer[s[0]]]
    E = [[int(x) - b for x, b in zip(gc.numer[v], base)] for v in s[1:]]
    G = [[sum(a * b for a, b in zip(E[i], E[j])) for j in range(k)] for i in range(k)]
    det = det_int(G)
    if det == 0:
        raise DegenerateSimplex(f"simplex {s} is degenerate")
    return Fraction(det, gc.denom ** (2 * k) * math.factorial(k) ** 2)


# ---------------------------------------------------------------- subdivision

@dataclass(frozen=True, eq=False)
class Subdivision:
    """One barycentric subdivision step.

    Vertex ``offsets[k] + i`` of the result is the barycenter of the i-th
    k-simplex of ``parent``.
    """

    parent: SimplicialComplex
    result: SimplicialComplex
    offsets: np.ndarray = field(repr=False)

    def origin(self, new_vertices) -> tuple[np.ndarray, np.ndarray]:
        ids = np.asarray(new_vertices, dtype=np.int64)
        dims = np.searchsorted(self.offsets, ids, side="right") - 1
        return dims, ids - self.offsets[dims]

    def vertex_of(self, k: int, positions) -> np.ndarray:
        return self.offsets[k] + np.asarray(positions, dtype=np.int64)

    def sub_masks(self, parent_masks: list[np.ndarray]) -> list[np.ndarray]:
        """Masks in the result of the subdivision of a parent subcomplex."""
        flags = np.concatenate([np.asarray(m, bool) for m in parent_masks]
                               + [np.zeros(self.parent.count(k), bool)
                                  for k in range(len(parent_masks), self.parent.dim + 1)])
        return self.result.vertex_masks(flags, "all")


def subdivide_complex(K: SimplicialComplex) -> Subdivision:
    offsets = K.offsets()
    if K.dim < 0:
        return Subdivision(K, K, offsets)
    tops = []
    masks = K.maximal()
    for j in range(K.dim + 1):
        M = K.simplices(j)[masks[j]]
        if len(M) == 0:
            continue
        m = j + 1
        sub = {}
        for size in range(1, m + 1):
            for cols in itertools.combinations(range(m), size):
                sub[cols] = offsets[size - 1] + K.index(size - 1, M[:, list(cols)])
        for perm in itertools.permutations(range(m)):
            tops.append(np.stack([sub[tuple(sorted(perm[:i + 1]))] for i in range(m)], axis=1))
    by_size: dict[int, list] = {}
    for t in tops:
        by_size.setdefault(t.shape[1], []).append(t)
    blocks = [np.concatenate(v) for _, v in sorted(by_size.items())]
    return Subdivision(K, SimplicialComplex(closure_rows(blocks, K.dim)), offsets)


def barycentric_subdivide(gc: GeometricComplex, s: int = 1) -> GeometricComplex:
    out, _ = subdivide_with_steps(gc, s)
    return out


def subdivide_with_steps(gc: GeometricComplex, s: int) -> tuple[GeometricComplex, list[Subdivision]]:
    if s < 0:
        raise ValueError("subdivision level must be >= 0")
    steps = []
    cur = gc
    for _ in range(s):
        step = subdivide_complex(cur.complex)
        numer, denom = _barycenters(cur, step)
        cur = GeometricComplex(step.result, numer, denom, cur.verified_embedding)
        steps.append(step)
    return cur, steps


def _barycenters(gc: GeometricComplex, step: Subdivision):
    K = gc.complex
    L = math.lcm(*range(1, K.dim + 2)) if K.dim >= 0 else 1
    numer = gc.numer
    big = int(np.abs(numer).max(initial=0)) if numer.dtype != object else None
    use_int = big is not None and big * (K.dim + 1) * L < _SAFE
    blocks = []
    for k in range(K.dim + 1):
        rows = K.simplices(k)
        if use_int:
            acc = numer[rows].sum(axis=1) * (L // (k + 1))
        else:
            acc = np.array([[sum(int(numer[v][c]) for v in r) * (L // (k + 1))
                             for c in range(gc.ambient_dim)] for r in rows], dtype=object)
            acc = acc.reshape(len(rows), gc.ambient_dim)
        blocks.append(acc)
    new = np.concatenate(blocks) if blocks else numer[:0]
    denom = gc.denom * L
    g = denom
    flat = new.ravel()
    if use_int:
        g = int(np.gcd.reduce(np.concatenate([flat, [denom]]).astype(np.int64)))
    else:
        for x in flat:
            g = math.gcd(g, int(x))
    if g > 1:
        new = new // g
        denom //= g
    if not use_int and new.dtype == object:
        big = max((abs(int(x)) for x in new.ravel()), default=0)
        if big < _SAFE:
            new = new.astype(np.int64)
    return new, denom


# ---------------------------------------------------------------- embedding

def _lp_max(A, b, c):
    """max c.x s.t. A x = b, x >= 0 with exact Fractions; None if infeasible."""
    m, n = len(A), len(c)
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # tableau with artificials n..n+m-1
    T = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m

    def pivot(r, col):
        inv = 1 / T[r][col]
        T[r] = [x * inv for x in T[r]]
        for i in range(m):
            if i != r and T[i][col]:
                f = T[i][col]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        basis[r] = col

    def run(cost, allowed):
        while True:
            red = []
            for j in range(width):
                if j not in allowed or j in basis:
                    red.append(Fraction(0))
                    continue
                red.append(cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m)))
            col = next((j for j in range(width) if red[j] > 0), None)
            if col is None:
                return
            rows = [(T[i][-1] / T[i][col], basis[i], i) for i in range(m) if T[i][col] > 0]
            if not rows:
                raise ArithmeticError("unbounded")
            _, _, r = min(rows)
            pivot(r, col)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, set(range(width)))
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return None
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    cost = [Fraction(x) for x in c] + [Fraction(0)] * m
    run(cost, set(range(n)))
    return sum(cost[basis[i]] * T[i][-1] for i in range(m))


def _proper_pair(gc: GeometricComplex, s, t) -> bool:
    common = sorted(set(s) & set(t))
    ps = [gc.point(v) for v in s]
    pt = [gc.point(v) for v in t]
    D = gc.ambient_dim
    n = len(s) + len(t)
    A = []
    for d in range(D):
        A.append([p[d] for p in ps] + [-q[d] for q in pt])
    A.append([1] * len(s) + [0] * len(t))
    A.append([0] * len(s) + [1] * len(t))
    b = [0] * D + [1, 1]
    c = [0 if v in common else 1 for v in s] + [0 if v in common else 1 for v in t]
    best = _lp_max(A, b, c)
    return best is None or best == 0


def verify_embedding(gc: GeometricComplex) -> bool:
    """Exact check that any two maximal simplices meet in a common face."""
    tops = gc.complex.maximal_simplices()
    pts = {}
    for s in tops:
        for v in s:
            if v not in pts:
                pts[v] = gc.point(v)
    boxes = []
    for s in tops:
        cs = [pts[v] for v in s]
        boxes.append(([min(c) for c in zip(*cs)], [max(c) for c in zip(*cs)]))
    for i, j in itertools.combinations(range(len(tops)), 2):
        lo1, hi1 = boxes[i]
        lo2, hi2 = boxes[j]
        if any(h1 < l2 or h2 < l1 for l1, h1, l2, h2 in zip(lo1, hi1, lo2, hi2)):
            continue
        if not _proper_pair(gc, tops[i], tops[j]):
            return False
    return True
