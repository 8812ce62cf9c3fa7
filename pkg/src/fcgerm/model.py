"""Strict-transform models of germs in direction x radius coordinates."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex import SimplicialComplex, vertex_components
from .errors import (InvalidComplex, InvalidMap, InvalidRadius,
                     NotAMorphism, NotAStrictTransform)
from .geometry import GeometricComplex, Subdivision, subdivide_with_steps
from .homology import SimplicialMap, push_rows

THICK, THIN = "THICK", "THIN"


@dataclass(frozen=True, eq=False)
class StrictTransformModel:
    """Geometric complex whose last coordinate is the radius r >= 0.

    Vertices at r = 0 span the tangent link ``boundary``.
    """

    geometry: GeometricComplex
    name: str = ""
    non_simple_override: tuple | None = None
    subdivision: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def complex(self) -> SimplicialComplex:
        return self.geometry.complex

    @property
    def dim(self) -> int:
        return self.complex.dim

    @property
    def ambient_dim(self) -> int:
        return self.geometry.ambient_dim - 1

    @property
    def n_vertices(self) -> int:
        return len(self.geometry.numer)

    @property
    def radius_numer(self) -> np.ndarray:
        return self.geometry.numer[:, -1]

    def radius(self, v: int) -> Fraction:
        return Fraction(int(self.geometry.numer[v, -1]), self.geometry.denom)

    def direction(self, v: int) -> tuple[Fraction, ...]:
        return self.geometry.point(v)[:-1]

    @property
    def zero_flags(self) -> np.ndarray:
        f = self._cache.get("zero")
        if f is None:
            f = np.asarray(self.radius_numer == 0, dtype=bool)
            f.setflags(write=False)
            self._cache["zero"] = f
        return f

    @property
    def zero_vertices(self) -> np.ndarray:
        return np.nonzero(self.zero_flags)[0]

    @property
    def boundary_masks(self) -> list[np.ndarray]:
        m = self._cache.get("bmasks")
        if m is None:
            m = self.complex.vertex_masks(self.zero_flags, "all")
            self._cache["bmasks"] = m
        return m

    @property
    def boundary(self) -> SimplicialComplex:
        b = self._cache.get("boundary")
        if b is None:
            b = self.complex.subcomplex(self.boundary_masks)
            self._cache["boundary"] = b
        return b

    def zero_counts(self, k: int) -> np.ndarray:
        """Number of r = 0 vertices of every k-simplex."""
        key = ("zc", k)
        if key not in self._cache:
            self._cache[key] = self.zero_flags[self.complex.simplices(k)].sum(axis=1).astype(np.int64)
        return self._cache[key]

    def subdivided(self, s: int) -> "StrictTransformModel":
        """The model on sd^s(K) (cached); r = 0 vertices are barycenters of ∂K simplices."""
        return subdivided_model(self, s)[0]

    def blow_down(self, v: int) -> tuple[Fraction, ...]:
        r = self.radius(v)
        return tuple(r * x for x in self.direction(v))


def build_model(geometry: GeometricComplex, name: str = "", non_simple_override=None,
                check_geometry: bool = True) -> StrictTransformModel:
    K = geometry.complex
    if K.dim < 0:
        raise InvalidComplex("empty complex")
    if geometry.ambient_dim < 2:
        raise InvalidComplex("need at least one direction coordinate besides the radius")
    n = len(geometry.numer)
    verts = K.vertices
    if len(verts) != n or (n and int(verts[-1]) != n - 1):
        raise InvalidComplex("vertex ids must be dense 0..n-1 and every vertex must lie in a simplex")
    rad = geometry.numer[:, -1]
    neg = np.nonzero(np.array([int(x) < 0 for x in rad]))[0]
    if len(neg):
        raise InvalidRadius(f"vertex {int(neg[0])} has negative radius")
    model = StrictTransformModel(geometry, name,
                                 None if non_simple_override is None
                                 else tuple(tuple(sorted(int(v) for v in s)) for s in non_simple_override))
    masks = model.boundary_masks
    top = K.maximal()
    for k in range(K.dim + 1):
        hit = np.nonzero(top[k] & masks[k])[0]
        if len(hit):
            s = K.simplices(k)[hit[0]].tolist()
            raise NotAStrictTransform(f"maximal simplex {s} lies entirely at r = 0")
    if len(np.unique(vertex_components(K))) > 1:
        raise InvalidComplex("the complex is not connected")
    if model.non_simple_override is not None:
        B = model.boundary
        for s in model.non_simple_override:
            if s not in B:
                raise InvalidComplex(f"override simplex {list(s)} is not in the tangent link")
    if check_geometry:
        geometry.check_nondegenerate()
    return model


def model_from_points(simplices, points, name: str = "", non_simple_override=None) -> StrictTransformModel:
    """``points[v]`` = (u_1, ..., u_N, r)."""
    K = SimplicialComplex.from_simplices(simplices)
    return build_model(GeometricComplex.from_points(K, points), name, non_simple_override)


# ---------------------------------------------------------------- tangent link

@dataclass(frozen=True, eq=False)
class TangentLink:
    complex: SimplicialComplex
    dim: int
    verdict: str


def tangent_link(model: StrictTransformModel) -> TangentLink:
    B = model.boundary
    verdict = THICK if B.dim == model.dim - 1 else THIN
    return TangentLink(B, B.dim, verdict)


def thinness_report(model: StrictTransformModel, S: SimplicialComplex) -> dict:
    """Dimension of S, of its trace at r = 0, thinness and dimension drop."""
    flags = model.zero_flags
    trace_dim = -1
    for k in range(S.dim, -1, -1):
        rows = S.simplices(k)
        if len(rows) and flags[rows].all(axis=1).any():
            trace_dim = k
            break
    touches = trace_dim >= 0
    rep = {"dim": S.dim, "trace_dim": trace_dim, "touches_origin": touches}
    if touches:
        rep["thin"] = trace_dim <= S.dim - 2
        rep["dimension_drop"] = S.dim - (trace_dim + 1)
    else:
        rep["thin"] = False
        rep["dimension_drop"] = None
    return rep


# ---------------------------------------------------------------- subdivision

def subdivided_model(model: StrictTransformModel, s: int) -> tuple[StrictTransformModel, list[Subdivision]]:
    if s == 0:
        return model, []
    key = ("sd", s)
    if key not in model._cache:
        gc, steps = subdivide_with_steps(model.geometry, s)
        sub = StrictTransformModel(gc, model.name, None, model.subdivision + s)
        sub._cache["parent"] = (model, steps)
        model._cache[key] = (sub, steps)
    return model._cache[key]


def carrier_masks(steps: list[Subdivision], parent_masks: list[np.ndarray]) -> list[np.ndarray]:
    """Masks in sd^s of the subdivision of a parent subcomplex."""
    masks = parent_masks
    for st in steps:
        masks = st.sub_masks(masks)
    return masks


@dataclass(frozen=True, eq=False)
class ComplementComplex:
    """Simplices of sd^s(K) with no vertex at r = 0."""

    complex: SimplicialComplex
    model: StrictTransformModel  # the subdivided model that contains it
    masks: list

    def inclusion(self) -> SimplicialMap:
        return SimplicialMap(self.complex, self.model.complex)


def complement_complex(model: StrictTransformModel, s: int = 2) -> ComplementComplex:
    if s < 0:
        raise ValueError("subdivision level must be >= 0")
    sd = model.subdivided(s)
    masks = sd.complex.vertex_masks(~sd.zero_flags, "all")
    return ComplementComplex(sd.complex.subcomplex(masks), sd, masks)


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True, eq=False)
class GermMorphismSpec:
    source: StrictTransformModel
    target: StrictTransformModel
    vertex_map: dict
    epi: bool | None = None
    mono: bool | None = None

    def simplicial_map(self) -> SimplicialMap:
        return SimplicialMap(self.source.complex, self.target.complex, self.vertex_map)

    def compose(self, first: "GermMorphismSpec") -> "GermMorphismSpec":
        """``self ∘ first``."""
        m = first.simplicial_map().array()
        return GermMorphismSpec(first.source, self.target,
                                {int(v): int(self.vertex_map[int(m[v])]) for v in first.source.complex.vertices})


def identity_morphism(model: StrictTransformModel) -> GermMorphismSpec:
    return GermMorphismSpec(model, model, {int(v): int(v) for v in model.complex.vertices})


def validate_morphism(spec: GermMorphismSpec) -> GermMorphismSpec:
    src, tgt = spec.source, spec.target
    smap = spec.simplicial_map()
    vm = smap.array()
    if vm.max(initial=-1) >= tgt.n_vertices:
        raise InvalidMap("vertex map sends a vertex outside the target")
    smap.validate()
    zs, zt = src.zero_flags, tgt.zero_flags
    vs = src.complex.vertices
    bad = vs[zs[vs] != zt[vm[vs]]]
    if len(bad):
        v = int(bad[0])
        raise NotAMorphism(f"vertex {v} (r {'=' if zs[v] else '>'} 0) maps to vertex {int(vm[v])} "
                           f"(r {'=' if zt[vm[v]] else '>'} 0)")
    B, Bt = src.boundary, tgt.boundary
    epi = mono = True
    images: set = set()
    for k in range(B.dim + 1):
        rows = B.simplices(k)
        img = np.sort(vm[rows], axis=1)
        degenerate = (img[:, 1:] == img[:, :-1]).any(axis=1) if k else np.zeros(len(rows), bool)
        keys = {tuple(sorted(set(r.tolist()))) for r in img}
        if degenerate.any() or len({tuple(r) for r in img[~degenerate]}) < len(rows):
            mono = False
        images |= keys
    for k in range(Bt.dim + 1):
        for r in Bt.simplices(k):
            if tuple(int(x) for x in r) not in images:
                epi = False
                break
    return GermMorphismSpec(src, tgt, dict(spec.vertex_map), epi, mono)


def subdivide_map(smap_array: np.ndarray, step_src: Subdivision, step_tgt: Subdivision) -> np.ndarray:
    """Vertex map between one-step subdivisions: barycenter of σ ↦ barycenter of f(σ)."""
    P, T = step_src.parent, step_tgt.parent
    out = np.full(int(step_src.result.vertices.max(initial=-1)) + 1, -1, dtype=np.int64)
    for k in range(P.dim + 1):
        rows = P.simplices(k)
        img = np.sort(smap_array[rows], axis=1)
        width = 1 + (img[:, 1:] != img[:, :-1]).sum(axis=1) if k else np.ones(len(rows), np.int64)
        for w in np.unique(width):
            sel = np.nonzero(width == w)[0]
            sub = img[sel]
            uniq = np.array([np.unique(r) for r in sub], dtype=np.int64).reshape(len(sel), w)
            pos = T.index(w - 1, uniq)
            if (pos < 0).any():
                raise InvalidMap("image of a simplex is not a simplex of the target")
            out[step_src.offsets[k] + sel] = step_tgt.offsets[w - 1] + pos
    return out


def subdivided_morphism(spec: GermMorphismSpec, s: int) -> GermMorphismSpec:
    """The morphism between sd^s models induced by subdividing alongside."""
    src, ssteps = subdivided_model(spec.source, s)
    tgt, tsteps = subdivided_model(spec.target, s)
    vm = spec.simplicial_map().array()
    for a, b in zip(ssteps, tsteps):
        vm = subdivide_map(vm, a, b)
    return GermMorphismSpec(src, tgt, {int(v): int(vm[v]) for v in src.complex.vertices},
                            spec.epi, spec.mono)


def sub_model(model: StrictTransformModel, masks: list[np.ndarray], name: str = "") -> StrictTransformModel:
    """Subcomplex of a model as a model on the same vertex ids (unused ids allowed)."""
    sub = model.complex.subcomplex(masks)
    out = StrictTransformModel(GeometricComplex(sub, model.geometry.numer, model.geometry.denom),
                               name or model.name, None, model.subdivision)
    return out


def inclusion_morphism(sub: StrictTransformModel, model: StrictTransformModel) -> GermMorphismSpec:
    return GermMorphismSpec(sub, model, {int(v): int(v) for v in sub.complex.vertices})


def blow_down_points(model: StrictTransformModel) -> list[tuple[Fraction, ...]]:
    return [model.blow_down(v) for v in range(model.n_vertices)]
