"""Non-simple tangent directions, conicalness, thin zone and thick components."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .complex import SimplicialComplex, connected_components, vertex_components
from .errors import InconclusiveLocus
from .geometry import GeometricComplex
from .model import StrictTransformModel, carrier_masks, sub_model, subdivided_model, thinness_report

SIMPLE, NON_SIMPLE, UNKNOWN = "SIMPLE", "NON_SIMPLE", "UNKNOWN"
CONIC, NOT_CONIC = "CONIC", "NOT_CONIC"
EXACT, OVERRIDE = "exact-low-dim", "override"


# ---------------------------------------------------------------- recognition

def _edges_of(L: SimplicialComplex):
    return [tuple(int(x) for x in r) for r in L.simplices(1)] if L.dim >= 1 else []


def _degrees(L: SimplicialComplex) -> dict[int, int]:
    deg = {int(v): 0 for v in L.vertices}
    for a, b in _edges_of(L):
        deg[a] += 1
        deg[b] += 1
    return deg


def _connected(L: SimplicialComplex) -> bool:
    return len(L.vertices) > 0 and len(np.unique(vertex_components(L))) == 1


def is_path(L: SimplicialComplex) -> tuple[bool, set]:
    """(is an arc, its endpoints)."""
    if L.dim != 1 or not L.is_pure() or not _connected(L):
        return False, set()
    deg = _degrees(L)
    ends = {v for v, d in deg.items() if d == 1}
    if any(d > 2 for d in deg.values()) or len(ends) != 2:
        return False, set()
    return True, ends


def is_cycle_graph(L: SimplicialComplex) -> bool:
    if L.dim != 1 or not L.is_pure() or not _connected(L):
        return False
    return all(d == 2 for d in _degrees(L).values())


def _surface_boundary(L: SimplicialComplex):
    """(is a surface possibly with boundary, boundary complex) for a 2-complex."""
    if L.dim != 2 or not L.is_pure():
        return False, None
    count = defaultdict(int)
    for t in L.simplices(2):
        a, b, c = (int(x) for x in t)
        for e in ((a, b), (a, c), (b, c)):
            count[e] += 1
    if any(n > 2 for n in count.values()):
        return False, None
    bd = [e for e, n in count.items() if n == 1]
    # vertex links must be arcs or circles
    nbr = defaultdict(list)
    for t in L.simplices(2):
        a, b, c = (int(x) for x in t)
        nbr[a].append((b, c))
        nbr[b].append((a, c))
        nbr[c].append((a, b))
    for v, es in nbr.items():
        lk = SimplicialComplex.from_simplices(es)
        if not (is_cycle_graph(lk) or is_path(lk)[0]):
            return False, None
    return True, SimplicialComplex.from_simplices(bd) if bd else SimplicialComplex.empty()


def is_sphere(L: SimplicialComplex, n: int) -> str:
    """SIMPLE-style tri-state answer: 'yes', 'no' or 'unknown'."""
    if n == -1:
        return "yes" if L.dim < 0 else "no"
    if n == 0:
        return "yes" if L.dim == 0 and len(L.vertices) == 2 else "no"
    if n == 1:
        return "yes" if is_cycle_graph(L) else "no"
    if n == 2:
        if L.dim != 2 or not _connected(L):
            return "no"
        ok, bd = _surface_boundary(L)
        return "yes" if ok and bd.dim < 0 and L.euler_characteristic() == 2 else "no"
    return "unknown"


def ball_boundary(L: SimplicialComplex, n: int):
    """('yes', boundary) if L is a PL n-ball, ('no', None) or ('unknown', None)."""
    if n == 0:
        return ("yes", SimplicialComplex.empty()) if L.dim == 0 and len(L.vertices) == 1 else ("no", None)
    if n == 1:
        ok, ends = is_path(L)
        return ("yes", SimplicialComplex.from_simplices([(v,) for v in sorted(ends)])) if ok else ("no", None)
    if n == 2:
        if L.dim != 2 or not _connected(L):
            return "no", None
        ok, bd = _surface_boundary(L)
        if not ok or bd.dim < 0 or L.euler_characteristic() != 1 or not is_cycle_graph(bd):
            return "no", None
        return "yes", bd
    return "unknown", None


def _same(A: SimplicialComplex, B: SimplicialComplex) -> bool:
    return set(A) == set(B)


def _is_codim0_ball_in(A: SimplicialComplex, S: SimplicialComplex, n: int) -> bool:
    """A is an n-ball contained in the n-sphere S."""
    if not set(A) <= set(S):
        return False
    return ball_boundary(A, n)[0] == "yes"


# ---------------------------------------------------------------- local links

class LocalLinks:
    """Links of simplices computed from maximal-simplex incidence."""

    def __init__(self, K: SimplicialComplex, zero_flags: np.ndarray):
        self.K = K
        self.zero = zero_flags
        self.d = K.dim
        self.inc: dict[int, list[tuple]] = defaultdict(list)
        for s in K.maximal_simplices():
            for v in s:
                self.inc[v].append(s)

    def star_tops(self, tau) -> list[tuple]:
        tau = tuple(int(v) for v in tau)
        cand = self.inc.get(tau[0], [])
        ts = set(tau)
        return [s for s in cand if ts <= set(s)]

    def link(self, tau) -> tuple[SimplicialComplex, bool]:
        """(Lk(tau), star is pure of dimension d)."""
        ts = set(int(v) for v in tau)
        tops = self.star_tops(tau)
        pure = all(len(s) == self.d + 1 for s in tops)
        faces = [tuple(v for v in s if v not in ts) for s in tops]
        faces = [f for f in faces if f]
        return (SimplicialComplex.from_simplices(faces) if faces else SimplicialComplex.empty()), pure

    def boundary_link(self, L: SimplicialComplex) -> SimplicialComplex:
        """Lk(tau, ∂K) as the part of Lk(tau, K) spanned by r = 0 vertices."""
        if L.dim < 0:
            return L
        return L.induced(self._flags_for(L))

    def _flags_for(self, L):
        n = int(L.vertices.max(initial=-1)) + 1
        return np.asarray(self.zero[:n], dtype=bool)


def simplex_verdict(links: LocalLinks, tau, relaxed: bool = False) -> tuple[str, dict]:
    """SIMPLE iff the star is pure and Lk(tau) is a ball with boundary Lk(tau, ∂K).

    With ``relaxed`` the trace may also be a codimension-0 ball inside the
    boundary sphere (corner points of a collar).
    """
    L, pure = links.link(tau)
    n = links.d - (len(tau) - 1) - 1
    ev = {"link_f_vector": list(L.f_vector), "pure_star": pure, "link_dim": n}
    if not pure:
        return NON_SIMPLE, ev
    ans, bd = ball_boundary(L, n)
    ev["ball"] = ans
    if ans == "unknown":
        return UNKNOWN, ev
    if ans == "no":
        return NON_SIMPLE, ev
    B = links.boundary_link(L)
    if _same(bd, B):
        return SIMPLE, ev
    if relaxed and B.dim == n - 1 and _is_codim0_ball_in(B, bd, n - 1):
        ev["corner"] = True
        return SIMPLE, ev
    if relaxed and n - 1 == 0 and len(B.vertices) == 1 and set(B) <= set(bd):
        ev["corner"] = True
        return SIMPLE, ev
    ev["boundary_mismatch"] = True
    return NON_SIMPLE, ev


# ---------------------------------------------------------------- Σns

@dataclass(eq=False)
class NonSimpleLocus:
    model: StrictTransformModel
    complex: SimplicialComplex  # Σns ⊂ ∂K (base ids)
    verdicts: dict  # simplex tuple -> verdict
    evidence: dict
    method: str
    inconsistencies: list = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return self.complex.dim < 0

    @property
    def dim(self) -> int:
        return self.complex.dim

    @property
    def unknown(self) -> list:
        return [s for s, v in self.verdicts.items() if v == UNKNOWN]

    def masks(self) -> list[np.ndarray]:
        return self.model.complex.masks_of(self.complex)

    def subdivided_masks(self, s: int) -> list[np.ndarray]:
        _, steps = subdivided_model(self.model, s)
        return carrier_masks(steps, self.masks())


def detect_non_simple(model: StrictTransformModel, allow_unknown: bool = False) -> NonSimpleLocus:
    B = model.boundary
    verdicts: dict = {}
    evidence: dict = {}
    if model.non_simple_override is not None:
        bad = set(model.non_simple_override)
        for s in B:
            verdicts[s] = NON_SIMPLE if s in bad else SIMPLE
        sigma = SimplicialComplex.from_simplices(sorted(bad)) if bad else SimplicialComplex.empty()
        return NonSimpleLocus(model, sigma, verdicts, evidence, OVERRIDE)
    links = LocalLinks(model.complex, model.zero_flags)
    for s in B:
        v, ev = simplex_verdict(links, s)
        verdicts[s] = v
        evidence[s] = ev
    unknown = [s for s, v in verdicts.items() if v == UNKNOWN]
    if unknown and not allow_unknown:
        raise InconclusiveLocus(
            f"{len(unknown)} tangent-link simplices have links of dimension >= 3; "
            "supply non_simple_override", "unknown_locus",
            unknown=[list(s) for s in unknown[:20]],
            non_simple=[list(s) for s, v in verdicts.items() if v == NON_SIMPLE])
    bad = [s for s, v in verdicts.items() if v == NON_SIMPLE]
    sigma = SimplicialComplex.from_simplices(bad) if bad else SimplicialComplex.empty()
    closed = set(sigma)
    inconsistent = [s for s, v in verdicts.items() if v == SIMPLE and s in closed]
    return NonSimpleLocus(model, sigma, verdicts, evidence, EXACT, inconsistent)


def is_closed_manifold(L: SimplicialComplex) -> str:
    """'yes' / 'no' / 'unknown' via links of every simplex."""
    n = L.dim
    if n < 0:
        return "yes"
    if not L.is_pure():
        return "no"
    links = LocalLinks(L, np.zeros(int(L.vertices.max()) + 1, dtype=bool))
    unknown = False
    for tau in L:
        lk, _ = links.link(tau)
        ans = is_sphere(lk, n - len(tau))
        if ans == "no":
            return "no"
        if ans == "unknown":
            unknown = True
    return "unknown" if unknown else "yes"


@dataclass(frozen=True)
class Conicalness:
    verdict: str
    link_manifold: str
    flags: tuple = ()


def conicalness(model: StrictTransformModel, locus: NonSimpleLocus) -> Conicalness:
    man = is_closed_manifold(model.boundary)
    flags = []
    if locus.unknown:
        return Conicalness(UNKNOWN, man, ("unknown_verdicts",))
    if man == "no":
        flags.append("tangent_link_not_manifold")
    if not locus.empty or man == "no":
        return Conicalness(NOT_CONIC, man, tuple(flags))
    if man == "unknown":
        return Conicalness(UNKNOWN, man, ("manifold_check_unknown",))
    return Conicalness(CONIC, man, ())


# ---------------------------------------------------------------- thin zone

@dataclass(eq=False)
class ThinZone:
    model: StrictTransformModel | None  # sub-model of the working subdivision
    ambient: StrictTransformModel  # the subdivided model
    masks: list | None
    s: int

    @property
    def empty(self) -> bool:
        return self.model is None

    @property
    def boundary(self) -> SimplicialComplex:
        return SimplicialComplex.empty() if self.model is None else self.model.boundary


def _sigma_vertex_flags(locus: NonSimpleLocus, s: int) -> np.ndarray:
    sd = locus.model.subdivided(s)
    masks = locus.subdivided_masks(s)
    flags = np.zeros(sd.n_vertices, dtype=bool)
    flags[sd.complex.simplices(0)[masks[0]][:, 0]] = True
    return flags


def thin_zone(model: StrictTransformModel, locus: NonSimpleLocus, s: int = 2) -> ThinZone:
    sd = model.subdivided(s)
    if locus.empty:
        return ThinZone(None, sd, None, s)
    K = sd.complex
    flags = _sigma_vertex_flags(locus, s)
    star = K.vertex_masks(flags, "any")
    masks = K.closure_masks(star)
    return ThinZone(sub_model(sd, masks, f"{model.name}_thin_zone"), sd, masks, s)


@dataclass(eq=False)
class ThickComponent:
    model: StrictTransformModel
    thick: bool
    trace_dim: int
    verdict: str
    failures: list


def thick_components(model: StrictTransformModel, locus: NonSimpleLocus, s: int = 2) -> list[ThickComponent]:
    """Components of the collar of ∂K away from Σns, each checked for conicalness."""
    sd = model.subdivided(s)
    K = sd.complex
    d = K.dim
    zero = sd.zero_flags
    sig = _sigma_vertex_flags(locus, s) if not locus.empty else np.zeros(sd.n_vertices, bool)
    tops = K.simplices(d)
    keep = zero[tops].any(axis=1) & ~sig[tops].any(axis=1)
    masks = [np.zeros(K.count(k), bool) for k in range(d + 1)]
    masks[d] = keep
    Y = K.subcomplex(K.closure_masks(masks))
    out = []
    if Y.dim < 0:
        return out
    for comp in connected_components(Y):
        sub = StrictTransformModel(GeometricComplex(comp, sd.geometry.numer, sd.geometry.denom),
                                   f"{model.name}_component", None, sd.subdivision)
        rep = thinness_report(sd, comp)
        thick = rep["trace_dim"] == d - 1
        links = LocalLinks(comp, zero)
        fails = []
        unknown = False
        for tau in sub.boundary:
            v, _ = simplex_verdict(links, tau, relaxed=True)
            if v == NON_SIMPLE:
                fails.append(tau)
            elif v == UNKNOWN:
                unknown = True
        verdict = NOT_CONIC if fails else (UNKNOWN if unknown else CONIC)
        out.append(ThickComponent(sub, thick, rep["trace_dim"], verdict, fails))
    return out
