import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from fcgerm.certificate import chain_is_zero, verify_certificate
from fcgerm.complex import SimplicialComplex
from fcgerm.enclosure import Enclosure, sqrt_enclosure
from fcgerm.errors import DegreeError, Inconclusive, InvalidCycle, NotInterior, PointInSupport
from fcgerm.ff import (PLCell, PLCycle, certify_trivial, lipschitz_bound, lipschitz_squared, push_off,
                       triviality_threshold, validate_cycle)
from fcgerm.gallery import link_octahedron
from fcgerm.geometry import GeometricComplex


def octahedron():
    tris, pts = link_octahedron()
    return GeometricComplex.from_points(SimplicialComplex.from_simplices(tris), pts)


def loop(points, carrier, ring="gf2"):
    n = len(points)
    cells = tuple(PLCell((tuple(map(F, points[i])), tuple(map(F, points[(i + 1) % n]))), tuple(carrier), 1)
                  for i in range(n))
    return PLCycle(1, cells, ring)


def in_face(t, weights):
    """Point of face (0, 2, 4) with the given barycentric weights, shrunk by t toward its center."""
    verts = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    c = F(1, 3)
    weights = [F(w, sum(weights)) for w in weights]
    return tuple(c + t * (sum(F(w) * v[i] for w, v in zip(weights, verts)) - c) for i in range(3))


SMALL = [in_face(F(1, 14), w) for w in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]


def test_lipschitz_examples():
    assert lipschitz_bound([(0,), (1,)], (F(1, 2),)) == 2
    s2 = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    L = lipschitz_bound(s2, (F(1, 3),) * 3)
    assert abs(float(L) - 6 / math.sqrt(3)) < 1e-9
    assert L >= 6 / math.sqrt(3)
    assert lipschitz_squared(s2, (F(1, 3),) * 3) == 12


def test_lipschitz_grows_toward_vertex():
    prev = 0
    for n in (3, 10, 100, 1000):
        x = (F(1, n), F(1, n), 1 - F(2, n))
        L = lipschitz_bound([(1, 0, 0), (0, 1, 0), (0, 0, 1)], x)
        assert L > prev
        prev = L


def test_lipschitz_on_boundary_rejected():
    with pytest.raises(NotInterior):
        lipschitz_bound([(0,), (1,)], (F(0),))


def test_octahedron_threshold():
    thr = triviality_threshold(octahedron(), 1)
    assert thr.exponent == 1
    assert abs(float(thr.epsilon) - math.sqrt(2) / (6 / math.sqrt(3))) < 1e-9
    assert thr.min_volume.contains(F(14142135623, 10 ** 10)) or thr.min_volume.lo < math.sqrt(2) < thr.min_volume.hi


def test_one_dimensional_threshold_is_min_edge():
    gc = GeometricComplex.from_points(SimplicialComplex.from_simplices([(0, 1), (1, 2)]), [(0,), (3,), (5,)])
    thr = triviality_threshold(gc, 1)
    assert thr.exponent == 0 and thr.epsilon == Enclosure.exact(2)


def test_square_threshold():
    gc = GeometricComplex.from_points(SimplicialComplex.from_simplices([(0, 1, 2), (0, 2, 3)]),
                                      [(0, 0), (1, 0), (1, 1), (0, 1)])
    thr = triviality_threshold(gc, 1)
    assert thr.epsilon == Enclosure.exact(F(1, 6))


def test_threshold_needs_simplices():
    gc = GeometricComplex.from_points(SimplicialComplex.from_simplices([(0,)]), [(0, 0)])
    with pytest.raises(DegreeError):
        triviality_threshold(gc, 1)


def test_push_small_loop_to_face_boundary():
    gc = octahedron()
    cyc = validate_cycle(gc, loop(SMALL, (0, 2, 4)))
    res = push_off(gc, cyc, (0, 2, 4), in_face(F(1, 2), (1, 1, 0)))
    # from outside the loop the projected image folds back onto itself
    assert res.homotopy and not res.post
    assert res.cycle.empty
    segs = [s for h in res.homotopy for s in _tri(h)]
    segs += [(c.points[0], c.points[1], -c.coeff) for c in res.cycle.cells]
    segs += [(c.points[0], c.points[1], c.coeff) for c in cyc.cells]
    assert chain_is_zero(segs, "gf2")


def test_push_from_inside_covers_face_boundary():
    gc = octahedron()
    cyc = validate_cycle(gc, loop(SMALL, (0, 2, 4)))
    res = push_off(gc, cyc, (0, 2, 4), (F(1, 3),) * 3)
    assert sorted(c.carrier for c in res.cycle.cells) == [(0, 2), (0, 4), (2, 4)]


def _tri(h):
    p, q, r = h.points
    return [(q, r, h.coeff), (p, r, -h.coeff), (p, q, h.coeff)]


def test_push_without_cells_is_identity():
    gc = octahedron()
    cyc = validate_cycle(gc, loop(SMALL, (0, 2, 4)))
    res = push_off(gc, cyc, (1, 3, 5), (F(-1, 3),) * 3)
    assert res.cycle == cyc and not res.homotopy


def test_point_in_support_rejected():
    gc = octahedron()
    cyc = validate_cycle(gc, loop(SMALL, (0, 2, 4)))
    mid = tuple((a + b) / 2 for a, b in zip(SMALL[0], SMALL[1]))
    with pytest.raises(PointInSupport):
        push_off(gc, cyc, (0, 2, 4), mid)


def test_segment_through_center_splits():
    # a chain (not a cycle) is enough to exercise the fan split
    gc = octahedron()
    a, b = in_face(F(1, 2), (1, 0, 0)), in_face(F(1, 2), (0, 1, 1))
    cyc = PLCycle(1, (PLCell((a, b), (0, 2, 4), 1),), "q")
    x0 = in_face(F(1, 4), (0, 1, 0))
    res = push_off(gc, cyc, (0, 2, 4), x0)
    assert len(res.post) >= 2
    assert len({c.carrier for c in res.post}) >= 2


def test_certify_small_loop():
    gc = octahedron()
    for ring in ("gf2", "q"):
        cert = certify_trivial(gc, loop(SMALL, (0, 2, 4), ring))
        assert cert.final.empty
        assert len(cert.steps) == 1
        rep = verify_certificate(gc, cert)
        assert rep.ok, rep.failures


def test_equator_is_inconclusive():
    gc = octahedron()
    eq = [(1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)]
    cells = []
    for i in range(4):
        a, b = eq[i], eq[(i + 1) % 4]
        carrier = tuple(sorted(v for v in range(6) if link_octahedron()[1][v] in (a, b)))
        cells.append(PLCell((tuple(map(F, a)), tuple(map(F, b))), carrier, 1))
    with pytest.raises(Inconclusive) as exc:
        certify_trivial(gc, PLCycle(1, tuple(cells)))
    assert exc.value.reason == "volume"


def test_empty_cycle_certificate():
    cert = certify_trivial(octahedron(), PLCycle(1, ()))
    assert cert.steps == () and cert.final.empty
    assert verify_certificate(octahedron(), cert).ok


def test_skeletal_cycle_only_uses_edges():
    gc = octahedron()
    a = (F(19, 20), F(1, 20), F(0))
    b = (F(9, 10), F(1, 10), F(0))
    cyc = PLCycle(1, (PLCell((a, b), (0, 2), 1), PLCell((b, a), (0, 2), 1)), "q")
    cert = certify_trivial(gc, cyc)
    assert [len(s.simplex) for s in cert.steps] == [2]
    assert verify_certificate(gc, cert).ok


def test_tampered_certificate_fails():
    gc = octahedron()
    cert = certify_trivial(gc, loop(SMALL, (0, 2, 4)))
    step = cert.steps[0]
    bad = type(step)(step.simplex, step.x0, step.lipschitz, step.pre, step.post, step.homotopy[1:],
                     step.cycle, step.pre_cells, step.post_cells)
    forged = type(cert)(cert.cycle, cert.threshold, cert.volume, (bad,))
    assert not verify_certificate(gc, forged).ok


def test_invalid_cycles():
    gc = octahedron()
    with pytest.raises(InvalidCycle):
        validate_cycle(gc, loop(SMALL[:2] + [(F(1, 3), F(1, 3), F(1, 2))], (0, 2, 4)))
    open_chain = PLCycle(1, (PLCell((SMALL[0], SMALL[1]), (0, 2, 4), 1),))
    with pytest.raises(InvalidCycle):
        validate_cycle(gc, open_chain)


def test_certificate_json_round_trip():
    gc = octahedron()
    cert = certify_trivial(gc, loop(SMALL, (0, 2, 4)))
    d = cert.to_dict()
    assert d["final_cycle_empty"] is True
    assert PLCycle.from_dict(cert.cycle.to_dict()) == cert.cycle


@st.composite
def small_triangles(draw):
    # three points of face (0, 2, 4) inside a disc much smaller than the threshold
    c = [draw(st.integers(1, 8)) for _ in range(3)]
    center = [F(x, sum(c)) for x in c]
    pts = []
    for _ in range(3):
        w = [draw(st.integers(-4, 4)) for _ in range(2)]
        delta = (F(w[0], 200), F(w[1], 200), -F(w[0] + w[1], 200))
        pts.append(tuple(a + b for a, b in zip(center, delta)))
    return pts


@settings(max_examples=25)
@given(small_triangles(), st.sampled_from(["gf2", "q"]))
def test_random_small_loops_certify(pts, ring):
    a, b, c = pts
    ab = tuple(y - x for x, y in zip(a, b))
    ac = tuple(y - x for x, y in zip(a, c))
    cross = (ab[1] * ac[2] - ab[2] * ac[1], ab[2] * ac[0] - ab[0] * ac[2])
    if cross == (0, 0) or any(x <= 0 for p in pts for x in p):
        return
    gc = octahedron()
    cert = certify_trivial(gc, loop(pts, (0, 2, 4), ring))
    assert cert.final.empty
    rep = verify_certificate(gc, cert)
    assert rep.ok, rep.failures


@given(st.fractions(min_value=0, max_value=1000), st.integers(8, 80))
def test_sqrt_enclosure_brackets(x, bits):
    e = sqrt_enclosure(x, bits)
    assert e.lo * e.lo <= x <= e.hi * e.hi
    assert e.width <= F(1, 2 ** bits)


@given(st.fractions(-50, 50), st.fractions(-50, 50), st.fractions(0, 5), st.fractions(0, 5))
def test_enclosure_arithmetic_contains(a, b, wa, wb):
    A, B = Enclosure(a, a + wa), Enclosure(b, b + wb)
    assert (A + B).contains(a + b)
    assert (A * B).contains((a + wa) * b)
