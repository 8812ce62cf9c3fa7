"""Fast-contracting homology through the boundary-depth filtration.

A cell of sd^s(K) with j vertices at r = 0 has level j - 1, so F_m (cells of
level <= m) is the set of simplices whose trace at r = 0 has dimension <= m,
and F_{-1} is the complement complex C.  The group of degree k and drop
delta is the kernel of H_k(C) -> H_k(F_{k - delta}).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rings
from .complex import Chain, SimplicialComplex
from .errors import ClampWarning, DegreeError, NoRepresentative, NotFc, ShapeError
from .homology import (HomologyGroup, PresentedSubgroup, SimplicialMap, array_to_chain,
                       chain_to_array, membership, push_array)
from .model import GermMorphismSpec, StrictTransformModel, subdivided_morphism, validate_morphism
from .morse import FilteredReduction
from .rings import GF2, Q, Z, as_ring


class DepthFiltration:
    """F_{-1} ⊂ F_0 ⊂ ... on the working subdivision of a model."""

    def __init__(self, model: StrictTransformModel):
        self.model = model
        K = model.complex
        self.complex = K
        self.levels = [model.zero_counts(k) - 1 for k in range(K.dim + 1)]
        self.max_level = max(model.boundary.dim, -1)
        self._reduction = None
        self._groups: dict = {}

    @property
    def reduction(self) -> FilteredReduction:
        if self._reduction is None:
            self._reduction = FilteredReduction(self.complex, self.levels)
        return self._reduction

    def masks(self, m: int) -> list[np.ndarray]:
        return [lev <= m for lev in self.levels]

    def subcomplex(self, m: int) -> SimplicialComplex:
        return self.complex.subcomplex(self.masks(m))

    @property
    def complement(self) -> SimplicialComplex:
        return self.subcomplex(-1)

    def group(self, k: int, ring: str, level: int) -> HomologyGroup:
        """H_k(F_level) (reduced in degree 0), cached."""
        level = min(level, self.max_level)
        key = (k, ring, level)
        if key not in self._groups:
            self._groups[key] = HomologyGroup(self.reduction, k, ring, level, reduced=(k == 0))
        return self._groups[key]


def depth_filtration(model: StrictTransformModel, s: int = 2) -> DepthFiltration:
    sd = model.subdivided(s)
    filt = sd._cache.get("filtration")
    if filt is None:
        filt = DepthFiltration(sd)
        sd._cache["filtration"] = filt
    return filt


# ---------------------------------------------------------------- groups

@dataclass(eq=False)
class FcGroup:
    k: int
    delta: int
    ring: str
    level: int  # index m of the filtration term the cycles must bound in
    ambient: HomologyGroup  # H_k(C)
    subgroup: PresentedSubgroup
    filtration: DepthFiltration

    @property
    def rank(self) -> int:
        return self.subgroup.rank

    @property
    def generators(self) -> list:
        return self.subgroup.generators

    def cycle(self, i: int) -> np.ndarray:
        """Global cycle array (in the working subdivision) of generator i."""
        return self.ambient.combine(self.generators[i])

    def chain(self, i: int) -> Chain:
        return array_to_chain(self.filtration.complex, self.k, self.cycle(i), self.ring,
                              self.filtration.reduction.offsets)

    def contains(self, coords) -> bool:
        return membership(self.subgroup, coords)[0]


def _target_level(k: int, delta: int) -> int:
    m = k - delta
    if m < -1:
        warnings.warn(f"drop {delta} exceeds what degree {k} allows; using the complement itself",
                      ClampWarning, stacklevel=3)
        m = -1
    return m


def _embed(src: HomologyGroup, dst: HomologyGroup, dense) -> list:
    """Morse vector on src cells re-indexed onto dst cells (src cells ⊂ dst cells)."""
    out = [dst._conv(0)] * len(dst.cells)
    for c, x in zip(src.cells, dense):
        out[dst._col[int(c)]] = x
    return out


def fc_group_of(filt: DepthFiltration, k: int, delta: int, ring="gf2") -> FcGroup:
    ring = as_ring(ring)
    d = filt.complex.dim
    if k < 0 or k > d:
        raise DegreeError(f"degree {k} outside 0..{d}")
    if delta < 1:
        warnings.warn("drop must be at least 1; using 1", ClampWarning, stacklevel=3)
        delta = 1
    m = _target_level(k, delta)
    H = filt.group(k, ring, -1)
    if m == -1:
        return FcGroup(k, delta, ring, m, H, PresentedSubgroup(H, []), filt)
    T = filt.group(k, ring, m)
    cols = [T.morse_coordinates(_embed(H, T, g)) for g in H.generators]
    matrix = [[cols[j][i] for j in range(H.size)] for i in range(T.size)]
    n = H.size
    if n == 0:
        gens = []
    elif T.size == 0:
        gens = [[rings.one(ring) if i == j else rings.zero(ring) for i in range(n)] for j in range(n)]
    elif ring == Z and T.torsion:
        r = T.rank
        rel = [[dd if i == r + t else 0 for i in range(T.size)] for t, dd in enumerate(T.torsion)]
        M = [row + [c[i] for c in rel] for i, row in enumerate(matrix)]
        gens = [v[:n] for v in rings.kernel_basis(M, Z, n + len(rel))]
    else:
        gens = rings.kernel_basis(matrix, ring, n)
    return FcGroup(k, delta, ring, m, H, PresentedSubgroup(H, gens), filt)


def fc_group(model: StrictTransformModel, k: int, delta: int = 1, ring="gf2", s: int = 2) -> FcGroup:
    return fc_group_of(depth_filtration(model, s), k, delta, ring)


def fc_rank_table(model: StrictTransformModel, ring="gf2", s: int = 2) -> dict[tuple[int, int], int]:
    """rank of the group for every 1 <= delta <= k <= d - 1."""
    filt = depth_filtration(model, s)
    out = {}
    for k in range(1, model.dim):
        for delta in range(1, k + 1):
            out[(k, delta)] = fc_group_of(filt, k, delta, ring).rank
    return out


def class_vector(group: HomologyGroup, cls) -> tuple:
    if isinstance(cls, (Chain, np.ndarray)):
        return group.coordinates(cls)
    cls = tuple(cls)
    if len(cls) != group.size:
        raise ShapeError(f"class vector has length {len(cls)}, expected {group.size}")
    return cls


def class_drop(model: StrictTransformModel, k: int, cls, ring="gf2", s: int = 2) -> int:
    """Largest drop delta whose group contains the class."""
    filt = depth_filtration(model, s)
    ring = as_ring(ring)
    H = filt.group(k, ring, -1)
    vec = class_vector(H, cls)
    if not any(vec):
        return k
    best = 0
    for delta in range(1, k + 1):
        if fc_group_of(filt, k, delta, ring).contains(vec):
            best = delta
        else:
            break
    if best == 0:
        raise NotFc("the class does not bound a chain that is thin at the origin")
    return best


def bounding_chain(filt: DepthFiltration, k: int, cycle, level: int, ring="gf2") -> np.ndarray | None:
    """A (k+1)-chain supported in F_level with boundary ``cycle``, or None.

    Direct elimination on the subdivided complex; intended for small models.
    """
    ring = as_ring(ring)
    K = filt.complex
    off = K.offsets()
    if ring == Z:
        raise NotImplementedError("bounding chains are computed over fields")
    cyc = np.asarray(cycle)
    seg = cyc[off[k]:off[k + 1]]
    elim = rings.Eliminator(ring)
    if k + 1 <= K.dim:
        rows = K.simplices(k + 1)
        faces = K.faces(k + 1)
        keep = np.nonzero(filt.levels[k + 1] <= level)[0]
        for j in keep:
            if ring == GF2:
                v = 0
                for f in faces[j]:
                    v ^= 1 << int(f)
            else:
                v = {}
                for i, f in enumerate(faces[j]):
                    v[int(f)] = Fraction((-1) ** i)
            elim.add(v, int(j))
    if ring == GF2:
        target = 0
        for i in np.nonzero(np.asarray([int(x) % 2 for x in seg]))[0]:
            target |= 1 << int(i)
    else:
        target = {int(i): Fraction(seg[i]) for i in range(len(seg)) if seg[i]}
    res, combo = elim.reduce(target)
    if res:
        return None
    coeffs = rings.combo_coeffs(combo, ring)
    out = np.zeros(int(off[-1]), dtype=object if ring == Q else np.int64)
    if ring == Q:
        out[:] = Fraction(0)
    for j, c in coeffs.items():
        out[off[k + 1] + j] = c if ring == Q else 1
    return out


# ---------------------------------------------------------------- maps

@dataclass(eq=False)
class FcMap:
    source: FcGroup
    target: FcGroup
    matrix: list  # rows = target generators, cols = source generators

    def image_rank(self) -> int:
        if not self.matrix or not self.matrix[0]:
            return 0
        return rings.rank(self.matrix, self.source.ring)

    def is_injective(self) -> bool:
        return self.image_rank() == self.source.rank

    def is_surjective(self) -> bool:
        return self.image_rank() == self.target.rank


def map_fc_groups(src: FcGroup, tgt: FcGroup, smap: SimplicialMap | None) -> FcMap:
    cols = []
    for i in range(src.rank):
        arr = src.cycle(i)
        if smap is not None:
            arr = push_array(smap, src.k, arr, src.ring)
        vec = tgt.ambient.coordinates(arr)
        ok, coords = membership(tgt.subgroup, vec)
        if not ok:
            raise ArithmeticError("image of an fc class is not fc; the map does not preserve depth")
        cols.append(coords)
    matrix = [[cols[j][i] for j in range(src.rank)] for i in range(tgt.rank)]
    return FcMap(src, tgt, matrix)


def induced_fc_map(spec: GermMorphismSpec, k: int, delta: int = 1, ring="gf2", s: int = 2) -> FcMap:
    spec = validate_morphism(spec)
    sub = subdivided_morphism(spec, s)
    src = fc_group(spec.source, k, delta, ring, s)
    tgt = fc_group(spec.target, k, delta, ring, s)
    smap = SimplicialMap(sub.source.complex, sub.target.complex, sub.vertex_map)
    return map_fc_groups(src, tgt, smap)


def sub_filtration_map(sub_model: StrictTransformModel, model: StrictTransformModel, k: int,
                       delta: int = 1, ring="gf2") -> FcMap:
    """Map induced by a subcomplex inclusion of models on the same vertex ids."""
    src = fc_group(sub_model, k, delta, ring, 0)
    tgt = fc_group(model, k, delta, ring, 0)
    return map_fc_groups(src, tgt, SimplicialMap(sub_model.complex, model.complex))


def localize_class(model: StrictTransformModel, sub_model: StrictTransformModel, k: int, cls,
                   ring="gf2", delta: int = 1) -> Chain:
    """A cycle of the sub-model's complement representing the given fc class of the model.

    Both models live on the same working subdivision (``sub_model`` is a
    subcomplex of ``model`` with the same vertex ids).
    """
    ring = as_ring(ring)
    f = sub_filtration_map(sub_model, model, k, delta, ring)
    tgt = f.target
    vec = class_vector(tgt.ambient, cls)
    ok, coords = membership(tgt.subgroup, vec)
    if not ok:
        raise NotFc("class is not fast contracting")
    if not any(vec):
        return Chain._raw(k, {}, ring)
    if not f.matrix or not f.matrix[0]:
        raise NoRepresentative("the sub-germ carries no fast-contracting classes")
    x = rings.solve(f.matrix, list(coords), ring, f.source.rank)
    if x is None:
        raise NoRepresentative("class is not in the image of the sub-germ")
    src = f.source
    dense = [src.ambient._conv(0)] * len(src.ambient.cells)
    for c, g in zip(x, src.generators):
        if c:
            dense = [a + src.ambient._conv(c) * b for a, b in zip(dense, g)]
    if ring == GF2:
        dense = [v % 2 for v in dense]
    arr = src.ambient.lift_array(dense)
    return array_to_chain(sub_model.complex, k, arr, ring, sub_model.complex.offsets())
