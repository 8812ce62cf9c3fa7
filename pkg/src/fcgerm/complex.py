"""Finite abstract simplicial complexes.

A complex stores one ``(n_k, k+1)`` int64 array per dimension; rows are
vertex-sorted and the rows of each array are in lexicographic order.  That
order is the canonical simplex order used by every other module.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from fractions import Fraction

import numpy as np

from .errors import DegreeError, InvalidComplex, InvalidSimplex, NotFound
from .rings import GF2, Q, Z, as_ring, coerce

_LIMIT = 2 ** 62


def _encode(rows: np.ndarray, base: int) -> np.ndarray:
    key = np.zeros(len(rows), dtype=np.int64)
    for c in range(rows.shape[1]):
        key = key * base + rows[:, c]
    return key


def _fits(base: int, width: int) -> bool:
    return base ** max(width, 1) < _LIMIT


def unique_rows(rows: np.ndarray) -> np.ndarray:
    """Sorted distinct rows of an int array."""
    if len(rows) == 0:
        return rows.reshape(0, rows.shape[1]).astype(np.int64)
    base = int(rows.max()) + 1
    width = rows.shape[1]
    if _fits(base, width):
        keys = np.unique(_encode(rows, base))
        out = np.empty((len(keys), width), dtype=np.int64)
        for c in range(width - 1, -1, -1):
            out[:, c] = keys % base
            keys //= base
        return out
    return np.unique(rows, axis=0)


def row_keys(table: np.ndarray, query: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Order-preserving int64 keys for the rows of ``table`` and ``query``.

    Query rows made of values absent from the table get key -1.
    """
    base = int(max(table.max(initial=0), query.max(initial=0))) + 1
    width = table.shape[1]
    if _fits(base, width):
        return _encode(table, base), _encode(query, base)
    cols_t = [table[:, c] for c in range(width)]
    cols_q = [query[:, c] for c in range(width)]
    while len(cols_t) > 1:
        nt, nq = [], []
        for i in range(0, len(cols_t), 2):
            if i + 1 == len(cols_t):
                nt.append(cols_t[i])
                nq.append(cols_q[i])
                continue
            ranks_t, ranks_q = [], []
            for ct, cq in ((cols_t[i], cols_q[i]), (cols_t[i + 1], cols_q[i + 1])):
                u = np.unique(ct)
                rq = np.searchsorted(u, cq)
                rq_c = np.minimum(rq, len(u) - 1)
                rq = np.where((cq >= 0) & (u[rq_c] == cq), rq_c, -1)
                ranks_t.append(np.searchsorted(u, ct))
                ranks_q.append(rq)
            nb = int(ranks_t[1].max(initial=0)) + 1
            nt.append(ranks_t[0] * nb + ranks_t[1])
            nq.append(np.where((ranks_q[0] < 0) | (ranks_q[1] < 0), -1,
                               ranks_q[0] * nb + ranks_q[1]))
        cols_t, cols_q = nt, nq
    return cols_t[0], cols_q[0]


def lookup(table: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Row positions of ``query`` rows inside the sorted ``table`` (-1 if absent)."""
    query = np.asarray(query, dtype=np.int64).reshape(-1, table.shape[1])
    if len(query) == 0:
        return np.zeros(0, dtype=np.int64)
    if len(table) == 0:
        return np.full(len(query), -1, dtype=np.int64)
    kt, kq = row_keys(table, query)
    pos = np.searchsorted(kt, kq)
    pos_c = np.minimum(pos, len(kt) - 1)
    return np.where((kq >= 0) & (kt[pos_c] == kq), pos_c, -1).astype(np.int64)


def closure_rows(generators: Iterable[np.ndarray], dim: int) -> list[np.ndarray]:
    """Per-dimension sorted face arrays of the complex generated by the row blocks."""
    parts: list[list[np.ndarray]] = [[] for _ in range(dim + 1)]
    for block in generators:
        if len(block) == 0:
            continue
        m = block.shape[1]
        for j in range(1, m + 1):
            for cols in itertools.combinations(range(m), j):
                parts[j - 1].append(block[:, list(cols)])
    out = []
    for j, p in enumerate(parts):
        if p:
            out.append(unique_rows(np.concatenate(p)))
        else:
            out.append(np.zeros((0, j + 1), dtype=np.int64))
    while out and len(out[-1]) == 0:
        out.pop()
    return out


class SimplicialComplex:
    """Immutable finite simplicial complex (see module docstring for layout)."""

    def __init__(self, rows: list[np.ndarray]):
        rows = [np.ascontiguousarray(r, dtype=np.int64) for r in rows]
        while rows and len(rows[-1]) == 0:
            rows.pop()
        for r in rows:
            r.setflags(write=False)
        self._rows = rows
        self._faces: dict[int, np.ndarray] = {}
        self._cache: dict = {}

    # construction -----------------------------------------------------
    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        return validate_complex(simplices)

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls([])

    # basic queries ----------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self._rows) - 1

    def simplices(self, k: int) -> np.ndarray:
        if 0 <= k < len(self._rows):
            return self._rows[k]
        return np.zeros((0, max(k + 1, 0)), dtype=np.int64)

    def count(self, k: int) -> int:
        return len(self.simplices(k)) if k >= 0 else 0

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self._rows)

    @property
    def vertices(self) -> np.ndarray:
        return self.simplices(0)[:, 0]

    @property
    def n_cells(self) -> int:
        return sum(self.f_vector)

    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.f_vector)]).astype(np.int64)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    def __len__(self):
        return self.n_cells

    def __iter__(self):
        for r in self._rows:
            for row in r:
                yield tuple(int(v) for v in row)

    def __contains__(self, simplex) -> bool:
        s = tuple(sorted(int(v) for v in simplex))
        if not s:
            return False
        return bool(self.index(len(s) - 1, [s])[0] >= 0)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.f_vector == other.f_vector and all(
            np.array_equal(a, b) for a, b in zip(self._rows, other._rows))

    def __hash__(self):
        return hash(self.dump())

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, f={self.f_vector})"

    def index(self, k: int, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, k + 1)
        return lookup(self.simplices(k), rows)

    def position(self, simplex) -> tuple[int, int]:
        s = tuple(sorted(int(v) for v in simplex))
        k = len(s) - 1
        i = int(self.index(k, [s])[0]) if k >= 0 else -1
        if i < 0:
            raise NotFound(f"simplex {s} is not in the complex")
        return k, i

    def faces(self, k: int) -> np.ndarray:
        """``(n_k, k+1)`` positions of codimension-one faces; column i omits vertex i."""
        if k < 1 or k > self.dim:
            raise DegreeError(f"faces need 1 <= k <= dim, got {k}")
        if k not in self._faces:
            rows = self._rows[k]
            cols = []
            for i in range(k + 1):
                keep = [c for c in range(k + 1) if c != i]
                cols.append(self.index(k - 1, rows[:, keep]))
            f = np.stack(cols, axis=1)
            f.setflags(write=False)
            self._faces[k] = f
        return self._faces[k]

    def maximal(self) -> list[np.ndarray]:
        """Per-dimension boolean masks of maximal simplices."""
        masks = [np.ones(self.count(k), dtype=bool) for k in range(self.dim + 1)]
        for k in range(1, self.dim + 1):
            masks[k - 1][self.faces(k).ravel()] = False
        return masks

    def maximal_simplices(self) -> list[tuple[int, ...]]:
        out = []
        for k, m in enumerate(self.maximal()):
            out.extend(tuple(int(v) for v in r) for r in self._rows[k][m])
        return out

    def is_pure(self) -> bool:
        masks = self.maximal()
        return all(not m.any() for m in masks[:-1])

    # subcomplexes -----------------------------------------------------
    def closure_masks(self, masks: list[np.ndarray]) -> list[np.ndarray]:
        out = [np.asarray(m, dtype=bool).copy() for m in masks]
        out += [np.zeros(self.count(k), dtype=bool) for k in range(len(out), self.dim + 1)]
        for k in range(self.dim, 0, -1):
            if out[k].any():
                out[k - 1][self.faces(k)[out[k]].ravel()] = True
        return out

    def subcomplex(self, masks: list[np.ndarray]) -> "SimplicialComplex":
        """Subcomplex of the selected simplices (masks must be face-closed)."""
        return SimplicialComplex([self._rows[k][np.asarray(m, bool)]
                                  for k, m in enumerate(masks)])

    def masks_of(self, sub: "SimplicialComplex") -> list[np.ndarray]:
        """Membership masks of a subcomplex's simplices inside this complex."""
        out = []
        for k in range(self.dim + 1):
            m = np.zeros(self.count(k), dtype=bool)
            if k <= sub.dim and sub.count(k):
                pos = self.index(k, sub.simplices(k))
                if (pos < 0).any():
                    raise NotFound("not a subcomplex")
                m[pos] = True
            out.append(m)
        return out

    def vertex_masks(self, vertex_flags: np.ndarray, mode: str = "all") -> list[np.ndarray]:
        """Masks of simplices whose vertices are all / any flagged (flags indexed by vertex id)."""
        flags = np.asarray(vertex_flags, dtype=bool)
        if mode == "all":
            return [flags[r].all(axis=1) for r in self._rows]
        return [flags[r].any(axis=1) for r in self._rows]

    def induced(self, vertex_flags: np.ndarray) -> "SimplicialComplex":
        """Full subcomplex spanned by the flagged vertices."""
        return self.subcomplex(self.vertex_masks(vertex_flags, "all"))

    def vertex_flags(self, ids) -> np.ndarray:
        flags = np.zeros(int(self.vertices.max(initial=-1)) + 1, dtype=bool)
        ids = np.asarray(list(ids), dtype=np.int64)
        if len(ids):
            flags[ids] = True
        return flags

    def star_masks(self, k: int, positions) -> list[np.ndarray]:
        """Masks of the open star (all cofaces) of the given k-simplices."""
        masks = [np.zeros(self.count(j), dtype=bool) for j in range(self.dim + 1)]
        masks[k][np.asarray(positions, dtype=np.int64)] = True
        for j in range(k + 1, self.dim + 1):
            masks[j] = masks[j - 1][self.faces(j)].any(axis=1)
        return masks

    def open_star_of_subcomplex(self, sub_masks: list[np.ndarray]) -> list[np.ndarray]:
        """Masks of simplices having a face in the given subcomplex."""
        out = [np.asarray(sub_masks[0], bool).copy()]
        for j in range(1, self.dim + 1):
            prev = out[j - 1][self.faces(j)].any(axis=1)
            own = np.asarray(sub_masks[j], bool) if j < len(sub_masks) else False
            out.append(prev | own)
        return out

    # textual form -----------------------------------------------------
    def as_lists(self) -> list[list[int]]:
        return [list(s) for s in self]

    def dump(self) -> str:
        return "\n".join(" ".join(str(v) for v in s) for s in sorted(self, key=lambda s: (len(s), s)))


def validate_complex(raw: Iterable[Iterable[int]], require_closed: bool = False) -> SimplicialComplex:
    """Closure of a raw simplex list, sorted and deduplicated.

    With ``require_closed`` a missing face raises ``InvalidComplex`` instead
    of being added.
    """
    blocks: dict[int, list[tuple[int, ...]]] = {}
    seen = []
    for s in raw:
        try:
            t = tuple(int(v) for v in s)
        except (TypeError, ValueError) as exc:
            raise InvalidSimplex(f"simplex {s!r} is not a tuple of integers") from exc
        if not t:
            continue
        if len(set(t)) != len(t):
            raise InvalidSimplex(f"simplex {list(t)} repeats a vertex")
        if min(t) < 0:
            raise InvalidSimplex(f"simplex {list(t)} has a negative vertex id")
        t = tuple(sorted(t))
        blocks.setdefault(len(t), []).append(t)
        seen.append(t)
    if not blocks:
        return SimplicialComplex([])
    dim = max(blocks) - 1
    arrays = [np.array(v, dtype=np.int64) for _, v in sorted(blocks.items())]
    K = SimplicialComplex(closure_rows(arrays, dim))
    if require_closed:
        given = set(seen)
        missing = [s for s in K if s not in given]
        if missing:
            raise InvalidComplex(f"not closed under faces: missing {list(missing[0])}")
    return K


def boundary_matrix(K: SimplicialComplex, k: int, ring="gf2") -> np.ndarray:
    """Dense ``(n_{k-1}, n_k)`` boundary matrix in canonical order.

    Over GF(2) entries are 0/1, otherwise (-1)^i for the face omitting vertex i.
    """
    ring = as_ring(ring)
    if k < 1 or k > K.dim:
        raise DegreeError(f"boundary_matrix needs 1 <= k <= {K.dim}, got {k}")
    F = K.faces(k)
    M = np.zeros((K.count(k - 1), K.count(k)), dtype=np.int64)
    cols = np.arange(K.count(k))
    for i in range(k + 1):
        M[F[:, i], cols] = 1 if ring == GF2 else (-1) ** i
    return M


def star_link(K: SimplicialComplex, tau) -> tuple[SimplicialComplex, SimplicialComplex]:
    """Closed star and link of a simplex."""
    k, pos = K.position(tau)
    star = K.star_masks(k, [pos])
    closed = K.closure_masks(star)
    verts = set(int(v) for v in K.simplices(k)[pos])
    flags = K.vertex_flags(verts)
    # faces of cofaces of tau that miss tau: exactly the link
    link_masks = [closed[j] & ~flags[K.simplices(j)].any(axis=1) for j in range(K.dim + 1)]
    return K.subcomplex(closed), K.subcomplex(link_masks)


def link_of(K: SimplicialComplex, tau) -> SimplicialComplex:
    return star_link(K, tau)[1]


def vertex_components(K: SimplicialComplex) -> np.ndarray:
    """Component label for every vertex row (labels ordered by least vertex id)."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components as cc

    n = K.count(0)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    E = K.simplices(1)
    vi = K.index(0, E[:, :1]) if len(E) else np.zeros(0, np.int64)
    vj = K.index(0, E[:, 1:]) if len(E) else np.zeros(0, np.int64)
    g = coo_matrix((np.ones(len(vi)), (vi, vj)), shape=(n, n))
    _, labels = cc(g, directed=False)
    # relabel by first occurrence (vertex rows are sorted by id)
    order = {}
    out = np.empty(n, dtype=np.int64)
    for i, lab in enumerate(labels):
        out[i] = order.setdefault(int(lab), len(order))
    return out


def connected_components(K: SimplicialComplex) -> list[SimplicialComplex]:
    labels = vertex_components(K)
    if len(labels) == 0:
        return []
    ids = K.vertices
    comps = []
    for lab in range(int(labels.max()) + 1):
        flags = K.vertex_flags(ids[labels == lab])
        comps.append(K.induced(flags))
    return comps


class Chain:
    """Formal sum of oriented k-simplices (vertex-sorted tuples) over a ring."""

    __slots__ = ("k", "ring", "terms")

    def __init__(self, k: int, terms: Mapping | None = None, ring="gf2"):
        self.k = int(k)
        self.ring = as_ring(ring)
        acc: dict[tuple[int, ...], object] = {}
        for s, c in (terms or {}).items():
            s, sign = _orient(s)
            if len(s) != self.k + 1:
                raise DegreeError(f"simplex {s} does not have dimension {self.k}")
            c = coerce(c, self.ring)
            if self.ring != GF2:
                c = c * sign
            acc[s] = _add(acc.get(s), c, self.ring)
        self.terms = {s: c for s, c in sorted(acc.items()) if c}

    @classmethod
    def _raw(cls, k, terms, ring):
        ch = cls.__new__(cls)
        ch.k, ch.ring, ch.terms = k, ring, terms
        return ch

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        return (isinstance(other, Chain) and self.k == other.k
                and self.ring == other.ring and self.terms == other.terms)

    def __repr__(self):
        return f"Chain(k={self.k}, ring={self.ring}, n={len(self.terms)})"

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        acc = dict(self.terms)
        for s, c in other.terms.items():
            acc[s] = _add(acc.get(s), c, self.ring)
        return Chain._raw(self.k, {s: c for s, c in sorted(acc.items()) if c}, self.ring)

    def __neg__(self):
        if self.ring == GF2:
            return self
        return Chain._raw(self.k, {s: -c for s, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Chain":
        c = coerce(c, self.ring)
        if self.ring == GF2:
            return self if c else Chain(self.k, {}, self.ring)
        return Chain._raw(self.k, {s: v * c for s, v in self.terms.items() if v * c}, self.ring)

    def _check(self, other):
        if self.k != other.k or self.ring != other.ring:
            raise DegreeError("chains of different degree or ring")

    def boundary(self) -> "Chain":
        if self.k == 0:
            return Chain._raw(-1, {}, self.ring)
        acc: dict = {}
        for s, c in self.terms.items():
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                v = c if self.ring == GF2 or i % 2 == 0 else -c
                acc[f] = _add(acc.get(f), v, self.ring)
        return Chain._raw(self.k - 1, {f: c for f, c in sorted(acc.items()) if c}, self.ring)

    def is_cycle(self) -> bool:
        return self.k == 0 or not self.boundary()

    def support(self) -> list[tuple[int, ...]]:
        return list(self.terms)

    def augmentation(self):
        if self.k != 0:
            raise DegreeError("augmentation is defined on 0-chains")
        total = sum(self.terms.values())
        return total % 2 if self.ring == GF2 else total

    def to_json(self):
        return {"k": self.k, "ring": self.ring,
                "terms": [[list(s), _fmt(c)] for s, c in self.terms.items()]}


def _orient(s) -> tuple[tuple[int, ...], int]:
    t = [int(v) for v in s]
    sign = 1
    for i in range(len(t)):
        for j in range(len(t) - 1 - i):
            if t[j] > t[j + 1]:
                t[j], t[j + 1] = t[j + 1], t[j]
                sign = -sign
    if len(set(t)) != len(t):
        raise InvalidSimplex(f"simplex {list(s)} repeats a vertex")
    return tuple(t), sign


def _add(a, b, ring):
    if a is None:
        return b
    if ring == GF2:
        return (a + b) % 2
    return a + b


def _fmt(c):
    if isinstance(c, Fraction):
        return str(c) if c.denominator != 1 else int(c.numerator)
    return int(c)


__all__ = [
    "SimplicialComplex", "Chain", "validate_complex", "boundary_matrix", "star_link",
    "link_of", "connected_components", "vertex_components", "lookup", "unique_rows",
    "closure_rows", "GF2", "Q", "Z",
]
