"""Federer-Fleming pushing of PL 1-cycles in a rational polyhedron.

A cycle is a list of straight cells with exact rational endpoints, each
carried by the smallest simplex of Γ containing it.  A step picks a simplex σ
and a point x0 inside it and projects the cells carried by σ radially from x0
onto ∂σ.  The cells are first cut by the fan of cones from x0 over the facets
so each fragment lands on one facet; the swept prisms form the homotopy.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import rings
from .enclosure import DEFAULT_BITS, MAX_BITS, Enclosure, fmt_rational, sqrt_enclosure
from .errors import DegreeError, Inconclusive, InvalidCycle, NotInterior, PointInSupport, RingError
from .geometry import GeometricComplex

Point = tuple  # tuple of Fractions


# ---------------------------------------------------------------- exact geometry

def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _lerp(a, b, t):
    return tuple(x + t * (y - x) for x, y in zip(a, b))


def _gram_det(vectors) -> Fraction:
    n = len(vectors)
    G = [[_dot(vectors[i], vectors[j]) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if G[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            G[c], G[p] = G[p], G[c]
            det = -det
        det *= G[c][c]
        for r in range(c + 1, n):
            f = G[r][c] / G[c][c]
            if f:
                G[r] = [x - f * y for x, y in zip(G[r], G[c])]
    return det


def volume_sq(points) -> Fraction:
    """Squared volume of the simplex spanned by ``points`` (Gram determinant / (m!)^2)."""
    m = len(points) - 1
    if m <= 0:
        return Fraction(1)
    E = [_sub(p, points[0]) for p in points[1:]]
    fact = 1
    for i in range(2, m + 1):
        fact *= i
    return _gram_det(E) / (fact * fact)


def barycentric(verts, p) -> tuple | None:
    """Barycentric coordinates of ``p`` in the affine hull of ``verts``, or None."""
    m = len(verts) - 1
    if m == 0:
        return (Fraction(1),) if tuple(p) == tuple(verts[0]) else None
    E = [_sub(v, verts[0]) for v in verts[1:]]
    rhs = _sub(p, verts[0])
    # normal equations; the edge vectors are independent for nondegenerate simplices
    G = [[_dot(E[i], E[j]) for j in range(m)] for i in range(m)]
    b = [_dot(E[i], rhs) for i in range(m)]
    x = rings.solve(G, b, rings.Q, m)
    if x is None:
        return None
    x = [Fraction(v) for v in x]
    back = tuple(sum((x[i] * E[i][c] for i in range(m)), Fraction(0)) for c in range(len(rhs)))
    if back != rhs:
        return None
    return (1 - sum(x, Fraction(0)),) + tuple(x)


def _point_of(verts, bary):
    return tuple(sum((w * v[c] for w, v in zip(bary, verts)), Fraction(0)) for c in range(len(verts[0])))


def _dist_sq_to_segment(x, a, b) -> Fraction:
    d = _sub(b, a)
    t = _dot(_sub(x, a), d) / _dot(d, d)
    t = min(max(t, Fraction(0)), Fraction(1))
    q = _lerp(a, b, t)
    r = _sub(x, q)
    return _dot(r, r)


def _collinear(a, b, c) -> bool:
    return _gram_det([_sub(b, a), _sub(c, a)]) == 0


def length_enclosure(a, b, bits: int = DEFAULT_BITS) -> Enclosure:
    d = _sub(b, a)
    return sqrt_enclosure(_dot(d, d), bits)


# ---------------------------------------------------------------- Lipschitz bound

def _check_interior(verts, x0):
    lam = barycentric(verts, x0)
    if lam is None or any(l <= 0 for l in lam):
        raise NotInterior("projection point is not strictly inside the simplex")
    return lam


def lipschitz_squared(verts, x0) -> Fraction:
    """diam(σ)^2 / dist(x0, ∂σ)^2, exact.

    dist(x0, ∂σ) is the least of λ_i h_i, where h_i is the height of vertex i
    over the opposite facet.
    """
    verts = [tuple(Fraction(c) for c in v) for v in verts]
    x0 = tuple(Fraction(c) for c in x0)
    m = len(verts) - 1
    if m < 1:
        raise NotInterior("a vertex has no interior")
    lam = _check_interior(verts, x0)
    diam_sq = max(_dot(_sub(a, b), _sub(a, b)) for a, b in itertools.combinations(verts, 2))
    vol = volume_sq(verts)
    dist_sq = None
    for i in range(m + 1):
        facet = verts[:i] + verts[i + 1:]
        h_sq = vol * m * m / volume_sq(facet)
        cand = lam[i] * lam[i] * h_sq
        dist_sq = cand if dist_sq is None else min(dist_sq, cand)
    return diam_sq / dist_sq


def lipschitz_bound(verts, x0, bits: int = DEFAULT_BITS) -> Fraction:
    """Certified rational upper bound on diam(σ) / dist(x0, ∂σ)."""
    return sqrt_enclosure(lipschitz_squared(verts, x0), bits).hi


def barycenter(verts) -> Point:
    n = len(verts)
    return tuple(sum((Fraction(v[c]) for v in verts), Fraction(0)) / n for c in range(len(verts[0])))


# ---------------------------------------------------------------- threshold

@dataclass(frozen=True)
class Threshold:
    k: int
    epsilon: Enclosure
    min_volume: Enclosure
    lipschitz: Fraction
    exponent: int


def triviality_threshold(gc: GeometricComplex, k: int, points: dict | None = None,
                         bits: int = DEFAULT_BITS) -> Threshold:
    """ε* = min k-volume / L^((d-k)k) with L the largest bound over simplices of dimension > k.

    ``points`` maps simplex tuples to projection points; barycenters by default.
    """
    K = gc.complex
    d = K.dim
    if k < 0 or k > d or K.count(k) == 0:
        raise DegreeError(f"no {k}-simplices")
    points = points or {}
    vol = None
    for s in K.simplices(k):
        v = sqrt_enclosure(volume_sq(gc.points(s)), bits) if k > 0 else Enclosure.exact(1)
        vol = v if vol is None or v.lo < vol.lo else vol
    L = Fraction(1)
    for j in range(k + 1, d + 1):
        for s in K.simplices(j):
            verts = gc.points(s)
            x0 = points.get(tuple(int(v) for v in s)) or barycenter(verts)
            L = max(L, lipschitz_bound(verts, x0, bits))
    e = (d - k) * k
    denom = L ** e
    eps = Enclosure(vol.lo / denom, vol.hi / denom)
    return Threshold(k, eps, vol, L, e)


# ---------------------------------------------------------------- cycles

def _ring_coeff(c, ring):
    if ring == rings.GF2:
        return int(c) % 2
    return Fraction(c)


@dataclass(frozen=True)
class PLCell:
    points: tuple  # k + 1 points
    carrier: tuple  # sorted vertex ids of the smallest simplex of Γ containing the cell
    coeff: object


@dataclass(frozen=True)
class PLCycle:
    k: int
    cells: tuple
    ring: str = rings.GF2

    @property
    def empty(self) -> bool:
        return not self.cells

    def volume(self, bits: int = DEFAULT_BITS) -> Enclosure:
        return cells_volume(self.cells, bits)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "ring": self.ring,
            "cells": [{"points": [[fmt_rational(x) for x in p] for p in c.points],
                       "carrier": list(c.carrier),
                       "coeff": int(c.coeff) if Fraction(c.coeff).denominator == 1 else fmt_rational(c.coeff)}
                      for c in self.cells],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PLCycle":
        try:
            k = int(data["k"])
            ring = rings.as_ring(data.get("ring", "gf2"))
            cells = tuple(PLCell(tuple(tuple(Fraction(x) for x in p) for p in c["points"]),
                                 tuple(sorted(int(v) for v in c["carrier"])),
                                 _ring_coeff(Fraction(c.get("coeff", 1)), ring))
                          for c in data["cells"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidCycle(f"malformed cycle: {exc}") from exc
        if ring == rings.Z:
            raise RingError("PL cycles use gf2 or q coefficients")
        return cls(k, cells, ring)


def cells_volume(cells, bits: int = DEFAULT_BITS) -> Enclosure:
    tot = Enclosure.exact(0)
    for c in cells:
        if c.coeff:
            tot = tot + length_enclosure(c.points[0], c.points[1], bits).scale(c.coeff)
    return tot


def minimal_carrier(gc: GeometricComplex, carrier, pts) -> tuple:
    """Smallest face of ``carrier`` containing every point; raises if a point lies outside."""
    verts = gc.points(carrier)
    support = set()
    for p in pts:
        lam = barycentric(verts, p)
        if lam is None or any(l < 0 for l in lam):
            raise InvalidCycle(f"point {[str(x) for x in p]} is not in simplex {list(carrier)}")
        support.update(i for i, l in enumerate(lam) if l != 0)
    return tuple(carrier[i] for i in sorted(support))


def validate_cycle(gc: GeometricComplex, cycle: PLCycle) -> PLCycle:
    """Check carriers, degeneracy and ∂ = 0; returns the cycle with minimal carriers."""
    K = gc.complex
    k = cycle.k
    if k != 1 and cycle.cells:
        raise DegreeError("PL cycles are supported in degree 1")
    width = gc.ambient_dim
    cells = []
    for c in cycle.cells:
        if len(c.points) != k + 1 or any(len(p) != width for p in c.points):
            raise InvalidCycle("cell has the wrong number of points or coordinates")
        if tuple(c.carrier) not in K:
            raise InvalidCycle(f"carrier {list(c.carrier)} is not a simplex")
        if c.points[0] == c.points[1]:
            raise InvalidCycle("degenerate cell")
        car = minimal_carrier(gc, c.carrier, c.points)
        cells.append(PLCell(c.points, car, _ring_coeff(c.coeff, cycle.ring)))
    bd: dict = {}
    for c in cells:
        a, b = c.points
        bd[b] = bd.get(b, 0) + c.coeff
        bd[a] = bd.get(a, 0) - c.coeff
    if any(_ring_coeff(v, cycle.ring) for v in bd.values()):
        raise InvalidCycle("the cells do not form a cycle")
    return PLCycle(k, tuple(cells), cycle.ring)


# ---------------------------------------------------------------- 1-chain normal form

def _line_key(a, b):
    d = _sub(b, a)
    j = next(i for i, x in enumerate(d) if x != 0)
    d = tuple(x / d[j] for x in d)
    base = tuple(x - a[j] * y for x, y in zip(a, d))
    return (d, base), j


def normalize_segments(segments, ring) -> list:
    """Canonical form of a 1-chain given as (a, b, coeff): maximal oriented pieces of constant density."""
    lines: dict = {}
    for a, b, c in segments:
        c = _ring_coeff(c, ring)
        if not c or a == b:
            continue
        key, j = _line_key(a, b)
        ta, tb = a[j], b[j]
        if ta > tb:
            ta, tb, c = tb, ta, -c
        lines.setdefault(key, []).append((ta, tb, c))
    out = []
    for (d, base), segs in sorted(lines.items()):
        cuts = sorted({t for s in segs for t in s[:2]})
        pieces = []
        for t0, t1 in zip(cuts, cuts[1:]):
            dens = sum((c for a, b, c in segs if a <= t0 and t1 <= b), 0)
            dens = _ring_coeff(dens, ring)
            if pieces and pieces[-1][1] == t0 and pieces[-1][2] == dens:
                pieces[-1] = (pieces[-1][0], t1, dens)
            else:
                pieces.append((t0, t1, dens))
        for t0, t1, dens in pieces:
            if dens:
                p0 = tuple(x + t0 * y for x, y in zip(base, d))
                p1 = tuple(x + t1 * y for x, y in zip(base, d))
                out.append((p0, p1, dens))
    return out


def triangle_boundary(tri, coeff):
    p, q, r = tri
    return [(q, r, coeff), (p, r, -coeff), (p, q, coeff)]


def _canonical_cells(gc: GeometricComplex, cells, ring) -> tuple:
    groups: dict = {}
    for c in cells:
        groups.setdefault(c.carrier, []).append((c.points[0], c.points[1], c.coeff))
    out = []
    for car in sorted(groups):
        for a, b, c in normalize_segments(groups[car], ring):
            out.append(PLCell((a, b), minimal_carrier(gc, car, (a, b)), c))
    out.sort(key=lambda c: (len(c.carrier), c.carrier, c.points))
    return tuple(out)


# ---------------------------------------------------------------- pushing

@dataclass(frozen=True)
class HomotopyCell:
    points: tuple  # three points
    carrier: tuple
    coeff: object


@dataclass(frozen=True)
class PushResult:
    cycle: PLCycle
    homotopy: tuple
    pre: tuple  # affected cells
    post: tuple  # their projections


def _fan_breaks(mu_a, mu_b, lam):
    """Parameters in (0, 1) where the exit facet of the segment changes."""
    n = len(lam)
    da = [a / l for a, l in zip(mu_a, lam)]
    db = [(b - a) / l for a, b, l in zip(mu_a, mu_b, lam)]
    out = set()
    for i in range(n):
        for j in range(i + 1, n):
            den = db[i] - db[j]
            if den != 0:
                s = (da[j] - da[i]) / den
                if 0 < s < 1:
                    out.add(s)
    return sorted(out)


def _exit(mu, lam) -> int:
    r = [m / l for m, l in zip(mu, lam)]
    return min(range(len(r)), key=lambda i: (r[i], i))


def _project(x0, y, mu, lam, i) -> tuple:
    if mu[i] == 0:
        return tuple(y)
    t = lam[i] / (lam[i] - mu[i])
    return _lerp(x0, y, t)


def push_off(gc: GeometricComplex, cycle: PLCycle, sigma, x0) -> PushResult:
    """Push the cells carried by ``sigma`` radially from ``x0`` onto its boundary.

    On a simplex of dimension <= k the cells must cancel and simply vanish;
    ``x0`` is then unused.
    """
    sigma = tuple(sorted(int(v) for v in sigma))
    verts = gc.points(sigma)
    m = len(sigma) - 1
    ring = cycle.ring
    hit = [c for c in cycle.cells if c.carrier == sigma]
    rest = [c for c in cycle.cells if c.carrier != sigma]
    if not hit:
        return PushResult(cycle, (), (), ())
    if m <= cycle.k:
        if normalize_segments([(c.points[0], c.points[1], c.coeff) for c in hit], ring):
            raise Inconclusive(f"cells on the {m}-simplex {list(sigma)} do not cancel", "growth")
        return PushResult(PLCycle(cycle.k, tuple(rest), ring), (), tuple(hit), ())
    x0 = tuple(Fraction(c) for c in x0)
    lam = _check_interior(verts, x0)
    new, hom = [], []
    for c in hit:
        a, b = c.points
        if _collinear(a, b, x0) and _dist_sq_to_segment(x0, a, b) == 0:
            raise PointInSupport("projection point lies on the cycle")
        mu_a, mu_b = barycentric(verts, a), barycentric(verts, b)
        cuts = [Fraction(0)] + _fan_breaks(mu_a, mu_b, lam) + [Fraction(1)]
        for s0, s1 in zip(cuts, cuts[1:]):
            p, q = _lerp(a, b, s0), _lerp(a, b, s1)
            mp, mq = _lerp(mu_a, mu_b, s0), _lerp(mu_a, mu_b, s1)
            i = _exit(_lerp(mu_a, mu_b, (s0 + s1) / 2), lam)
            fp, fq = _project(x0, p, mp, lam, i), _project(x0, q, mq, lam, i)
            if fp != fq:
                facet = sigma[:i] + sigma[i + 1:]
                new.append(PLCell((fp, fq), minimal_carrier(gc, facet, (fp, fq)), c.coeff))
            for tri, co in (((p, fp, fq), c.coeff), ((p, q, fq), -c.coeff)):
                if not _collinear(*tri):
                    hom.append(HomotopyCell(tri, sigma, _ring_coeff(co, ring)))
    cells = _canonical_cells(gc, rest + new, ring)
    post = _canonical_cells(gc, new, ring)
    return PushResult(PLCycle(cycle.k, cells, ring), tuple(hom), tuple(hit), post)


def _sd2_barycenters(verts) -> list:
    """Barycenters of the top simplices of the second barycentric subdivision."""
    m = len(verts) - 1
    out = set()
    for perm in itertools.permutations(range(m + 1)):
        w = [barycenter([verts[i] for i in perm[:j + 1]]) for j in range(m + 1)]
        for rho in itertools.permutations(range(m + 1)):
            u = [barycenter([w[i] for i in rho[:j + 1]]) for j in range(m + 1)]
            out.add(barycenter(u))
    return sorted(out)


def projection_candidates(verts, cells) -> list:
    """Grid barycenters ordered by decreasing distance to the cells (ties by coordinates)."""
    segs = [c.points for c in cells]
    scored = []
    for x in _sd2_barycenters(verts):
        if any(_collinear(a, b, x) for a, b in segs):
            continue
        dist = min((_dist_sq_to_segment(x, a, b) for a, b in segs), default=Fraction(0))
        scored.append((-dist, x))
    scored.sort()
    return [x for _, x in scored]


def _step_holds(post, pre, L, k, bits, max_bits) -> bool | None:
    """post <= L^k pre, refined until decided; None if undecided at the cap."""
    while bits <= max_bits:
        a = cells_volume(post, bits)
        b = cells_volume(pre, bits).scale(L ** k)
        if a.certainly_le(b):
            return True
        if a.lo > b.hi:
            return False
        bits *= 2
    return None


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class StepRecord:
    simplex: tuple
    x0: Point | None
    lipschitz: Fraction
    pre: Enclosure
    post: Enclosure
    homotopy: tuple
    cycle: PLCycle  # the cycle after this step
    pre_cells: tuple
    post_cells: tuple


@dataclass(frozen=True)
class TrivialityCertificate:
    cycle: PLCycle
    threshold: Threshold | None
    volume: Enclosure
    steps: tuple = field(default_factory=tuple)

    @property
    def final(self) -> PLCycle:
        return self.steps[-1].cycle if self.steps else self.cycle

    def bounding_chain(self) -> list:
        """Sum of the homotopies, negated: its boundary is the input cycle."""
        return [HomotopyCell(h.points, h.carrier, -h.coeff) for s in self.steps for h in s.homotopy]

    def to_dict(self) -> dict:
        def tri(h):
            return {"points": [[fmt_rational(x) for x in p] for p in h.points],
                    "carrier": list(h.carrier), "coeff": fmt_rational(h.coeff)}
        return {
            "input": self.cycle.to_dict(),
            "volume": self.volume.to_json(),
            "threshold": None if self.threshold is None else {
                "epsilon": self.threshold.epsilon.to_json(),
                "min_volume": self.threshold.min_volume.to_json(),
                "lipschitz": fmt_rational(self.threshold.lipschitz),
                "exponent": self.threshold.exponent,
            },
            "steps": [{
                "simplex": list(s.simplex),
                "x0": None if s.x0 is None else [fmt_rational(x) for x in s.x0],
                "lipschitz": fmt_rational(s.lipschitz),
                "pre_volume": s.pre.to_json(),
                "post_volume": s.post.to_json(),
                "homotopy": [tri(h) for h in s.homotopy],
                "cycle": s.cycle.to_dict(),
            } for s in self.steps],
            "final_cycle_empty": self.final.empty,
        }


def _decide_small(vol_fn, eps: Enclosure, bits, max_bits):
    while bits <= max_bits:
        v = vol_fn(bits)
        if v.certainly_lt(eps):
            return v
        if v.certainly_ge(eps):
            raise Inconclusive("cycle volume is not below the triviality threshold", "volume",
                               volume=v.to_json(), epsilon=eps.to_json())
        bits *= 2
    raise Inconclusive("precision cap reached comparing volume with the threshold", "precision")


def certify_trivial(gc: GeometricComplex, cycle: PLCycle, points: dict | None = None,
                    bits: int = DEFAULT_BITS, max_bits: int = MAX_BITS) -> TrivialityCertificate:
    cycle = validate_cycle(gc, cycle)
    if cycle.empty:
        return TrivialityCertificate(cycle, None, Enclosure.exact(0), ())
    k = cycle.k
    thr = triviality_threshold(gc, k, points, bits)
    vol = _decide_small(cycle.volume, thr.epsilon, bits, max_bits)
    K = gc.complex
    steps = []
    current = cycle
    for j in range(K.dim, k - 1, -1):
        for row in K.simplices(j):
            sigma = tuple(int(v) for v in row)
            hit = [c for c in current.cells if c.carrier == sigma]
            if not hit:
                continue
            verts = gc.points(sigma)
            if j <= k:
                res = push_off(gc, current, sigma, None)
                steps.append(StepRecord(sigma, None, Fraction(1), cells_volume(res.pre, bits),
                                        Enclosure.exact(0), (), res.cycle, res.pre, ()))
                current = res.cycle
                continue
            record = None
            for x0 in projection_candidates(verts, hit):
                L = lipschitz_bound(verts, x0, bits)
                res = push_off(gc, current, sigma, x0)
                if _step_holds(res.post, res.pre, L, k, bits, max_bits):
                    record = StepRecord(sigma, x0, L, cells_volume(res.pre, bits),
                                        cells_volume(res.post, bits), res.homotopy, res.cycle,
                                        res.pre, res.post)
                    break
            if record is None:
                raise Inconclusive(f"no projection point in {list(sigma)} satisfies the volume bound",
                                   "growth")
            steps.append(record)
            current = record.cycle
    if not current.empty:
        raise Inconclusive("cycle did not leave the skeleton", "growth")
    return TrivialityCertificate(cycle, thr, vol, tuple(steps))
