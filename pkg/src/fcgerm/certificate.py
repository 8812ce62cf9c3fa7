"""Re-check a triviality certificate without the pushing code.

Distances come from orthogonal projection onto facet hulls, lengths from a
separate square-root bracket, and chain identities from a collinearity-grouped
sweep.  Nothing here imports from ``ff``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import GeometricComplex


def _vsub(a, b):
    return [Fraction(x) - Fraction(y) for x, y in zip(a, b)]


def _vdot(a, b):
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def _gauss_solve(A, b):
    """Unique solution of a square rational system, or None if singular."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _project_to_hull(pts, x):
    """Orthogonal projection of x onto the affine hull of pts, with the affine weights."""
    o = pts[0]
    E = [_vsub(p, o) for p in pts[1:]]
    if not E:
        return [Fraction(v) for v in o], [Fraction(1)]
    G = [[_vdot(e, f) for f in E] for e in E]
    y = _gauss_solve(G, [_vdot(e, _vsub(x, o)) for e in E])
    proj = [Fraction(o[c]) + sum((y[i] * E[i][c] for i in range(len(E))), Fraction(0))
            for c in range(len(o))]
    return proj, [1 - sum(y, Fraction(0))] + y


def _inside(pts, x, strict=False) -> bool:
    proj, w = _project_to_hull(pts, x)
    if proj != [Fraction(v) for v in x]:
        return False
    return all(v > 0 for v in w) if strict else all(v >= 0 for v in w)


def _lipschitz_sq(pts, x0) -> Fraction:
    diam = max(_vdot(_vsub(a, b), _vsub(a, b)) for a in pts for b in pts)
    dist = None
    for i in range(len(pts)):
        proj, _ = _project_to_hull(pts[:i] + pts[i + 1:], x0)
        r = _vsub(x0, proj)
        d = _vdot(r, r)
        dist = d if dist is None else min(dist, d)
    return diam / dist


def _sqrt_bracket(x: Fraction, bits: int):
    num, den = x.numerator, x.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    s = num * den
    r = math.isqrt(s)
    if r * r == s:
        v = Fraction(r, den)
        return v, v
    scale = 1 << bits
    lo = math.isqrt(s * scale * scale)
    return Fraction(lo, scale * den), Fraction(lo + 1, scale * den)


def _total_length(cells, bits):
    lo = hi = Fraction(0)
    for c in cells:
        d = _vsub(c.points[1], c.points[0])
        a, b = _sqrt_bracket(_vdot(d, d), bits)
        w = abs(Fraction(c.coeff))
        lo += w * a
        hi += w * b
    return lo, hi


def _reduce(c, ring):
    return int(c) % 2 if ring == "gf2" else Fraction(c)


def chain_is_zero(segments, ring) -> bool:
    """True iff the 1-chain sum of (a, b, coeff) has zero density everywhere."""
    segs = [([Fraction(x) for x in a], [Fraction(x) for x in b], c) for a, b, c in segments
            if _reduce(c, ring) and list(a) != list(b)]
    groups: list = []
    for s in segs:
        for g in groups:
            a0, b0, _ = g[0]
            d0 = _vsub(b0, a0)
            if all(_collinear_vec(d0, _vsub(p, a0)) for p in (s[0], s[1])):
                g.append(s)
                break
        else:
            groups.append([s])
    for g in groups:
        a0, b0, _ = g[0]
        d0 = _vsub(b0, a0)
        n0 = _vdot(d0, d0)
        events = {}
        for a, b, c in g:
            ta, tb = _vdot(_vsub(a, a0), d0) / n0, _vdot(_vsub(b, a0), d0) / n0
            if ta > tb:
                ta, tb, c = tb, ta, -c
            events[ta] = events.get(ta, 0) + c
            events[tb] = events.get(tb, 0) - c
        run = 0
        for t in sorted(events):
            run += events[t]
            if _reduce(run, ring):
                return False
    return True


def _collinear_vec(u, v) -> bool:
    # |u|^2 |v|^2 - (u.v)^2 = 0
    return _vdot(u, u) * _vdot(v, v) == _vdot(u, v) ** 2


def _cycle_segments(cycle, sign=1):
    return [(c.points[0], c.points[1], sign * c.coeff) for c in cycle.cells]


def _tri_boundary(h, sign=1):
    p, q, r = h.points
    c = sign * h.coeff
    return [(q, r, c), (p, r, -c), (p, q, c)]


@dataclass
class VerificationReport:
    ok: bool
    steps_checked: int
    failures: list = field(default_factory=list)


def verify_certificate(gc: GeometricComplex, cert, bits: int = 64, max_bits: int = 2048) -> VerificationReport:
    ring = cert.cycle.ring
    k = cert.cycle.k
    fails = []
    prev = cert.cycle
    for n, step in enumerate(cert.steps):
        sigma = tuple(step.simplex)
        if sigma not in gc.complex:
            fails.append(f"step {n}: {list(sigma)} is not a simplex")
            continue
        pts = [list(p) for p in gc.points(sigma)]
        for c in step.cycle.cells:
            if not _inside([list(p) for p in gc.points(c.carrier)], c.points[0]) or \
                    not _inside([list(p) for p in gc.points(c.carrier)], c.points[1]):
                fails.append(f"step {n}: a cell leaves its carrier")
                break
        for h in step.homotopy:
            if not all(_inside(pts, p) for p in h.points):
                fails.append(f"step {n}: a homotopy cell leaves the simplex")
                break
        pre_cells = [c for c in prev.cells if tuple(c.carrier) == sigma]
        if step.x0 is not None:
            if not _inside(pts, step.x0, strict=True):
                fails.append(f"step {n}: projection point is not interior")
            elif Fraction(step.lipschitz) ** 2 < _lipschitz_sq(pts, step.x0):
                fails.append(f"step {n}: recorded Lipschitz bound is too small")
            post_cells = [c for c in step.post_cells]
            b = bits
            while True:
                plo, phi = _total_length(post_cells, b)
                qlo, qhi = _total_length(pre_cells, b)
                lk = Fraction(step.lipschitz) ** k
                if phi <= lk * qlo:
                    break
                if plo > lk * qhi or b >= max_bits:
                    fails.append(f"step {n}: volume inequality fails")
                    break
                b *= 2
            # projected cells must appear in the next cycle (up to cancellation with others)
            moved = _cycle_segments(step.cycle) + _cycle_segments(prev, -1)
            moved += [(c.points[0], c.points[1], c.coeff) for c in pre_cells]
            if not chain_is_zero(moved + [(c.points[0], c.points[1], -c.coeff) for c in post_cells], ring):
                fails.append(f"step {n}: recorded projection does not match the cycle change")
        elif step.homotopy:
            fails.append(f"step {n}: collapse step carries a homotopy")
        seg = [s for h in step.homotopy for s in _tri_boundary(h)]
        seg += _cycle_segments(step.cycle, -1) + _cycle_segments(prev)
        if not chain_is_zero(seg, ring):
            fails.append(f"step {n}: boundary of the homotopy is not the cycle difference")
        prev = step.cycle
    if prev.cells:
        fails.append("final cycle is not empty")
    total = [s for st in cert.steps for h in st.homotopy for s in _tri_boundary(h, -1)]
    if not chain_is_zero(total + _cycle_segments(cert.cycle, -1), ring):
        fails.append("summed homotopy does not bound the input cycle")
    return VerificationReport(not fails, len(cert.steps), fails)
