"""Homology groups with explicit cycle bases, induced maps and subgroups.

Every computation runs on the Morse complex of a ``FilteredReduction``; cycles
of the original complex enter through the flow (``project``) and basis cycles
leave through ``lift``.  The sublevel complexes F_m of a filtered reduction
share that machinery, which is what the fc pipelines use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import rings
from .complex import Chain, SimplicialComplex
from .errors import DegreeError, InvalidMap, ShapeError
from .morse import FilteredReduction
from .rings import GF2, Q, Z, as_ring


def reduction_of(K: SimplicialComplex) -> FilteredReduction:
    """Unfiltered reduction, cached on the complex."""
    red = K._cache.get("reduction")
    if red is None:
        red = FilteredReduction(K)
        K._cache["reduction"] = red
    return red


# ---------------------------------------------------------------- chains <-> arrays

def chain_to_array(K: SimplicialComplex, chain: Chain, offsets=None) -> np.ndarray:
    """Global coefficient array (ints, or Fractions in an object array for Q)."""
    off = K.offsets() if offsets is None else offsets
    n = int(off[-1])
    k = chain.k
    if chain.ring == Q:
        out = np.zeros(n, dtype=object)
        out[:] = Fraction(0)
    else:
        out = np.zeros(n, dtype=np.int64)
    if not chain.terms:
        return out
    rows = np.array(list(chain.terms), dtype=np.int64).reshape(len(chain.terms), k + 1)
    pos = K.index(k, rows)
    if (pos < 0).any():
        bad = rows[np.nonzero(pos < 0)[0][0]]
        raise ShapeError(f"simplex {bad.tolist()} is not in the complex")
    for p, c in zip(pos, chain.terms.values()):
        out[off[k] + p] = c
    return out


def array_to_chain(K: SimplicialComplex, k: int, arr: np.ndarray, ring: str, offsets=None) -> Chain:
    off = K.offsets() if offsets is None else offsets
    seg = arr[off[k]:off[k + 1]]
    nz = [i for i in range(len(seg)) if seg[i]] if seg.dtype == object else np.nonzero(seg)[0]
    rows = K.simplices(k)
    terms = {}
    for i in nz:
        c = seg[i]
        c = int(c) % 2 if ring == GF2 else (Fraction(c) if ring == Q else int(c))
        if c:
            terms[tuple(int(v) for v in rows[i])] = c
    return Chain._raw(k, terms, ring)


def _scale_to_int(arr) -> tuple[np.ndarray, int]:
    if arr.dtype != object:
        return arr.astype(np.int64), 1
    den = 1
    for x in arr:
        if x:
            den = math.lcm(den, Fraction(x).denominator)
    return np.array([int(Fraction(x) * den) for x in arr], dtype=np.int64), den


# ---------------------------------------------------------------- groups

class HomologyGroup:
    """H_k (or reduced H_0) of the sublevel complex ``F_level`` of a reduction."""

    def __init__(self, red: FilteredReduction, k: int, ring="gf2", level: int | None = None,
                 reduced: bool = False):
        ring = as_ring(ring)
        if k < 0 or k > max(red.dim, 0):
            raise DegreeError(f"homology degree {k} outside 0..{red.dim}")
        self.reduction = red
        self.complex = red.complex
        self.k = k
        self.ring = ring
        self.level = level
        self.reduced = bool(reduced and k == 0)
        self.cells = red.critical_cells(k, level)
        self._col = {int(c): i for i, c in enumerate(self.cells)}
        lower = red.critical_cells(k - 1, level) if k > 0 else np.zeros(0, np.int64)
        upper = red.critical_cells(k + 1, level) if k < red.dim else np.zeros(0, np.int64)
        self._lower = {int(c): i for i, c in enumerate(lower)}
        Dk = self._matrix(red.morse_boundary(k) if k > 0 else {}, self._lower, self.cells)
        if self.reduced:
            Dk = [[1] * len(self.cells)] if len(self.cells) else []
        Dk1 = self._matrix(red.morse_boundary(k + 1) if len(upper) else {}, self._col, upper)
        self._boundary_cols = [[Dk1[i][j] for i in range(len(self.cells))] for j in range(len(upper))]
        n = len(self.cells)
        if ring == Z:
            self._init_z(Dk, n)
        else:
            self._init_field(Dk, n)
        self._basis_chains = None

    def _conv(self, x):
        x = int(x)
        return x % 2 if self.ring == GF2 else (Fraction(x) if self.ring == Q else x)

    def _matrix(self, mbd, row_index, cols):
        M = [[self._conv(0)] * len(cols) for _ in range(len(row_index))]
        for j, c in enumerate(cols):
            for r, v in mbd.get(int(c), {}).items():
                i = row_index.get(r)
                if i is not None:
                    M[i][j] = self._conv(v)
        return M

    # field ----------------------------------------------------------
    def _vec(self, dense):
        if self.ring == GF2:
            out = 0
            for i, x in enumerate(dense):
                if int(x) % 2:
                    out |= 1 << i
            return out
        return {i: Fraction(x) for i, x in enumerate(dense) if x}

    def _init_field(self, Dk, n):
        cycles = rings.kernel_basis(Dk, self.ring, n) if Dk else (
            [[rings.one(self.ring) if i == j else rings.zero(self.ring) for i in range(n)]
             for j in range(n)])
        elim = rings.Eliminator(self.ring)
        tag = 0
        for col in self._boundary_cols:
            elim.add(self._vec(col), tag)
            tag += 1
        self._nb = tag
        gens = []
        for z in cycles:
            if elim.add(self._vec(z), tag):
                gens.append((tag, z))
            tag += 1
        self._elim = elim
        self._gen_tags = [t for t, _ in gens]
        self.generators = [list(z) for _, z in gens]
        self.rank = len(gens)
        self.torsion: list[int] = []

    # integers ---------------------------------------------------------
    def _init_z(self, Dk, n):
        Zb = rings.kernel_basis(Dk, Z, n) if Dk else [[int(i == j) for i in range(n)] for j in range(n)]
        self._zb = Zb
        nz = len(Zb)
        Bz = [[Zb[j][i] for j in range(nz)] for i in range(n)]  # n x nz
        A = []
        for col in self._boundary_cols:
            a = rings.solve(Bz, [int(x) for x in col], Z, nz) if nz else []
            if a is None:
                raise ArithmeticError("boundary outside the cycle lattice")
            A.append(a)
        A = [[A[j][i] for j in range(len(A))] for i in range(nz)]  # nz x nb
        if nz and A and A[0]:
            snf = rings.smith_normal_form(A)
            U, Uinv, diag, r = snf.U, snf.Uinv, snf.diag, snf.rank
        else:
            U = Uinv = [[int(i == j) for j in range(nz)] for i in range(nz)]
            diag, r = [], 0
        W = rings.matmul(Bz, Uinv, Z) if nz else []
        cols = [[W[i][j] for i in range(n)] for j in range(nz)]
        tors = [(i, d) for i, d in enumerate(diag) if d > 1]
        self._Bz, self._U, self._r, self._tors = Bz, U, r, tors
        self.generators = cols[r:] + [cols[i] for i, _ in tors]
        self.rank = nz - r
        self.torsion = [d for _, d in tors]

    # public -------------------------------------------------------------
    @property
    def size(self) -> int:
        return self.rank + len(self.torsion)

    def morse_coordinates(self, dense) -> tuple:
        """Coordinates of a Morse cycle given on ``self.cells``."""
        if len(dense) != len(self.cells):
            raise ShapeError("vector length does not match the Morse chain group")
        if self.ring == Z:
            nz = len(self._zb)
            y = rings.solve(self._Bz, [int(x) for x in dense], Z, nz) if nz else []
            if y is None:
                raise ShapeError("not a cycle")
            w = [sum(u * v for u, v in zip(row, y)) for row in self._U] if nz else []
            return tuple(w[self._r:]) + tuple(w[i] % d for i, d in self._tors)
        res, combo = self._elim.reduce(self._vec(dense))
        if res:
            raise ShapeError("not a cycle")
        cc = rings.combo_coeffs(combo, self.ring)
        return tuple(self._conv(0) + cc.get(t, 0) if self.ring == Q else cc.get(t, 0)
                     for t in self._gen_tags)

    def project_array(self, arr) -> list:
        """Flow a global chain array onto this group's Morse cells."""
        red = self.reduction
        if self.ring == GF2:
            img = red.project(self.k, np.asarray(arr, dtype=np.int64) % 2, modulus=2)
            return [int(img[c]) for c in self.cells]
        ints, den = _scale_to_int(np.asarray(arr))
        img = red.project(self.k, ints)
        if self.ring == Q:
            return [Fraction(int(img[c]), den) for c in self.cells]
        return [int(img[c]) for c in self.cells]

    def coordinates(self, cycle) -> tuple:
        """Coordinates of a cycle (Chain or global array) in the stored basis."""
        if isinstance(cycle, Chain):
            if cycle.k != self.k:
                raise DegreeError("cycle degree does not match the group")
            if cycle.ring != self.ring:
                cycle = Chain(cycle.k, cycle.terms, self.ring)
            if self.k > 0 and not cycle.is_cycle():
                raise ShapeError("chain is not a cycle")
            if self.reduced and cycle.terms and cycle.augmentation() != 0:
                raise ShapeError("0-chain with nonzero augmentation has no reduced class")
            cycle = chain_to_array(self.complex, cycle, self.reduction.offsets)
        if self.level is not None:
            lev = self.reduction.level
            nz = np.nonzero(np.asarray([bool(x) for x in cycle]) if np.asarray(cycle).dtype == object
                            else np.asarray(cycle))[0]
            if len(nz) and lev[nz].max() > self.level:
                raise ShapeError("cycle leaves the sublevel complex")
        return self.morse_coordinates(self.project_array(cycle))

    def lift_array(self, dense) -> np.ndarray:
        red = self.reduction
        g = np.zeros(red.n, dtype=object if self.ring == Q else np.int64)
        if self.ring == Q:
            g[:] = Fraction(0)
        for c, x in zip(self.cells, dense):
            g[c] = x
        if self.ring == GF2:
            return red.lift(self.k, g % 2, modulus=2)
        ints, den = _scale_to_int(g)
        out = red.lift(self.k, ints)
        if self.ring == Q:
            res = np.zeros(red.n, dtype=object)
            res[:] = Fraction(0)
            for i in np.nonzero(out)[0]:
                res[i] = Fraction(int(out[i]), den)
            return res
        return out

    def basis_array(self, i: int) -> np.ndarray:
        return self.lift_array(self.generators[i])

    @property
    def basis(self) -> list[Chain]:
        if self._basis_chains is None:
            self._basis_chains = [array_to_chain(self.complex, self.k, self.basis_array(i), self.ring,
                                                 self.reduction.offsets)
                                  for i in range(self.size)]
        return self._basis_chains

    def combine(self, coords) -> np.ndarray:
        """Global cycle array representing the class with the given coordinates."""
        dense = [self._conv(0)] * len(self.cells)
        for c, gen in zip(coords, self.generators):
            if c:
                dense = [a + self._conv(c) * b for a, b in zip(dense, gen)]
        if self.ring == GF2:
            dense = [x % 2 for x in dense]
        return self.lift_array(dense)

    def __repr__(self):
        t = f", torsion={self.torsion}" if self.torsion else ""
        return f"HomologyGroup(k={self.k}, ring={self.ring}, rank={self.rank}{t})"


def homology(K: SimplicialComplex, k: int, ring="gf2", reduced: bool = False) -> HomologyGroup:
    if K.dim < 0:
        raise DegreeError("empty complex has no homology groups")
    if k < 0 or k > K.dim:
        raise DegreeError(f"homology degree {k} outside 0..{K.dim}")
    return HomologyGroup(reduction_of(K), k, ring, None, reduced)


def betti_numbers(K: SimplicialComplex, ring="gf2", reduced: bool = False) -> list[int]:
    if K.dim < 0:
        return []
    return [homology(K, k, ring, reduced and k == 0).rank for k in range(K.dim + 1)]


# ---------------------------------------------------------------- maps

@dataclass(frozen=True, eq=False)
class SimplicialMap:
    """Vertex map between complexes; ``vertex_map=None`` means an inclusion."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: dict | None = None

    def array(self) -> np.ndarray:
        n = int(self.source.vertices.max(initial=-1)) + 1
        vm = np.arange(n, dtype=np.int64)
        if self.vertex_map is not None:
            vm = np.full(n, -1, dtype=np.int64)
            for a, b in self.vertex_map.items():
                if 0 <= int(a) < n:
                    vm[int(a)] = int(b)
            if (vm[self.source.vertices] < 0).any():
                raise InvalidMap("vertex map is not defined on every source vertex")
        return vm

    def validate(self) -> "SimplicialMap":
        vm = self.array()
        for k in range(self.source.dim + 1):
            push_rows(self.source.simplices(k), vm, self.target)
        return self

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """``self ∘ first``."""
        a, b = first.array(), self.array()
        return SimplicialMap(first.source, self.target,
                             {int(v): int(b[a[v]]) for v in first.source.vertices})


def push_rows(rows: np.ndarray, vm: np.ndarray, target: SimplicialComplex):
    """Images of simplices: (positions in target by image dim, signs, keep mask).

    Returns (image_dim, position, sign) arrays; degenerate images get position -1.
    """
    img = vm[rows]
    width = rows.shape[1]
    inv = np.zeros(len(rows), dtype=np.int64)
    for i in range(width):
        for j in range(i + 1, width):
            inv += img[:, i] > img[:, j]
    srt = np.sort(img, axis=1)
    degenerate = (srt[:, 1:] == srt[:, :-1]).any(axis=1) if width > 1 else np.zeros(len(rows), bool)
    pos = np.full(len(rows), -1, dtype=np.int64)
    ok = ~degenerate
    if ok.any():
        pos[ok] = target.index(width - 1, srt[ok])
        if (pos[ok] < 0).any():
            bad = srt[ok][np.nonzero(pos[ok] < 0)[0][0]]
            raise InvalidMap(f"image {bad.tolist()} is not a simplex of the target")
    # collapsed images: check their vertex sets are simplices too
    if degenerate.any():
        for r in srt[degenerate]:
            face = tuple(sorted(set(int(v) for v in r)))
            if face not in target:
                raise InvalidMap(f"image {list(face)} is not a simplex of the target")
    sign = np.where(inv % 2 == 0, 1, -1)
    return pos, sign


def push_array(smap: SimplicialMap, k: int, arr, ring: str) -> np.ndarray:
    """Push a global k-chain array of the source to a global array of the target."""
    src, tgt = smap.source, smap.target
    so, to = src.offsets(), tgt.offsets()
    seg = np.asarray(arr)[so[k]:so[k + 1]]
    nz = np.array([i for i in range(len(seg)) if seg[i]], dtype=np.int64) if seg.dtype == object \
        else np.nonzero(seg)[0]
    out = np.zeros(int(to[-1]), dtype=object if ring == Q else np.int64)
    if ring == Q:
        out[:] = Fraction(0)
    if len(nz) == 0:
        return out
    pos, sign = push_rows(src.simplices(k)[nz], smap.array(), tgt)
    for p, s, i in zip(pos, sign, nz):
        if p < 0:
            continue
        c = seg[i] if ring != GF2 else int(seg[i]) % 2
        out[to[k] + p] += c * (1 if ring == GF2 else int(s))
    if ring == GF2:
        out %= 2
    return out


@dataclass(eq=False)
class InducedMap:
    source: HomologyGroup
    target: HomologyGroup
    matrix: list = field(default_factory=list)  # rows = target basis, cols = source basis

    @property
    def ring(self):
        return self.source.ring

    def image_rank(self) -> int:
        if not self.matrix or not self.matrix[0]:
            return 0
        return rings.rank(self.matrix, self.ring)

    def is_injective(self) -> bool:
        return self.image_rank() == self.source.size

    def is_surjective(self) -> bool:
        return self.image_rank() == self.target.size


def map_between(source: HomologyGroup, target: HomologyGroup, smap: SimplicialMap | None = None) -> InducedMap:
    cols = []
    for i in range(source.size):
        arr = source.basis_array(i)
        if smap is not None:
            arr = push_array(smap, source.k, arr, source.ring)
        cols.append(target.coordinates(arr))
    matrix = [[cols[j][i] for j in range(source.size)] for i in range(target.size)]
    return InducedMap(source, target, matrix)


def induced_map(smap: SimplicialMap, k: int, ring="gf2", reduced: bool = False) -> InducedMap:
    """Matrix of the map induced on H_k in the stored bases."""
    smap.validate()
    src = homology(smap.source, k, ring, reduced)
    if k > smap.target.dim:
        raise DegreeError("target has no homology in this degree")
    tgt = homology(smap.target, k, ring, reduced)
    return map_between(src, tgt, smap)


# ---------------------------------------------------------------- subgroups

@dataclass(eq=False)
class PresentedSubgroup:
    """Subgroup of ``ambient`` generated by coordinate vectors (kept reduced)."""

    ambient: HomologyGroup | None
    generators: list
    ring: str = GF2
    dim: int = 0

    def __post_init__(self):
        if self.ambient is not None:
            self.ring, self.dim = self.ambient.ring, self.ambient.size
        self.generators = _reduce_generators(self.generators, self.ring, self.dim)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def contains(self, vector) -> bool:
        return membership(self, vector)[0]

    def cycles(self) -> list[np.ndarray]:
        return [self.ambient.combine(g) for g in self.generators]


def _reduce_generators(gens, ring, dim):
    gens = [list(g) for g in gens if any(g)]
    if not gens:
        return []
    if ring == Z:
        return rings.hermite_rows(gens)
    R, _ = rings.rref([[rings.coerce(x, ring) for x in g] for g in gens], ring, dim)
    return [r for r in R if any(r)]


def kernel_subgroup(f: InducedMap) -> PresentedSubgroup:
    n = f.source.size
    if f.source.ring == Z and f.target.torsion:
        # relations of the torsion part of the target enter as extra columns
        r = f.target.rank
        rel_cols = [[d if i == r + t else 0 for i in range(f.target.size)]
                    for t, d in enumerate(f.target.torsion)]
        M = [row + [c[i] for c in rel_cols] for i, row in enumerate(f.matrix)]
        K = rings.kernel_basis(M, Z, n + len(rel_cols))
        gens = [v[:n] for v in K]
    elif not f.matrix:
        gens = [[rings.one(f.ring) if i == j else rings.zero(f.ring) for i in range(n)] for j in range(n)]
    else:
        gens = rings.kernel_basis(f.matrix, f.ring, n)
    return PresentedSubgroup(f.source, gens)


def membership(sub: PresentedSubgroup, vector):
    """(is member, coordinates on the subgroup generators or None)."""
    vector = list(vector)
    if len(vector) != sub.dim:
        raise ShapeError(f"vector has length {len(vector)}, ambient has rank {sub.dim}")
    ring = sub.ring
    vec = [rings.coerce(x, ring) for x in vector]
    if ring == GF2:
        vec = [x % 2 for x in vec]
    if not any(vec):
        return True, tuple(rings.zero(ring) for _ in sub.generators)
    if not sub.generators:
        return False, None
    A = [[g[i] for g in sub.generators] for i in range(sub.dim)]
    extra = 0
    if ring == Z and sub.ambient is not None and sub.ambient.torsion:
        r = sub.ambient.rank
        for t, d in enumerate(sub.ambient.torsion):
            for i in range(sub.dim):
                A[i].append(d if i == r + t else 0)
            extra += 1
    x = rings.solve(A, vec, ring, len(sub.generators) + extra)
    if x is None:
        return False, None
    return True, tuple(x[:len(sub.generators)])
