import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fcgerm.complex import (SimplicialComplex, boundary_matrix, connected_components, star_link,
                            validate_complex)
from fcgerm.errors import DegenerateSimplex, DegreeError, InvalidSimplex, NotFound
from fcgerm.gallery import link_octahedron
from fcgerm.geometry import GeometricComplex, barycentric_subdivide, simplex_volume_sq
from fcgerm.homology import betti_numbers
from fcgerm.rings import rank

from helpers import naive_betti


def octahedron():
    tris, pts = link_octahedron()
    return GeometricComplex.from_points(SimplicialComplex.from_simplices(tris), pts)


def test_closure_of_one_triangle():
    K = validate_complex([[0, 1, 2]])
    assert K.f_vector == (3, 3, 1)
    assert K.dim == 2


def test_hollow_triangle():
    K = validate_complex([[0, 1], [1, 2], [0, 2]])
    assert K.dim == 1
    assert K.count(1) == 3


def test_repeated_vertex_rejected():
    with pytest.raises(InvalidSimplex):
        validate_complex([[0, 0, 1]])


def test_boundary_hollow_triangle_rank_two():
    M = boundary_matrix(validate_complex([[0, 1], [1, 2], [0, 2]]), 1, "gf2")
    assert M.shape == (3, 3)
    assert rank(M.tolist(), "gf2") == 2


def test_boundary_sign_convention():
    M = boundary_matrix(validate_complex([[0, 1, 2]]), 2, "z")
    assert M[:, 0].tolist() == [1, -1, 1]


def test_boundary_degree_out_of_range():
    with pytest.raises(DegreeError):
        boundary_matrix(validate_complex([[0, 1, 2]]), 3, "gf2")


@given(st.lists(st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=6),
       st.sampled_from(["gf2", "q", "z"]))
def test_boundary_squares_to_zero(raw, ring):
    K = validate_complex(raw)
    for k in range(2, K.dim + 1):
        P = boundary_matrix(K, k - 1, ring).astype(np.int64) @ boundary_matrix(K, k, ring).astype(np.int64)
        if ring == "gf2":
            P %= 2
        assert not P.any()


def test_subdivision_counts():
    tri = GeometricComplex.from_points(validate_complex([[0, 1, 2]]), [(0, 0), (1, 0), (0, 1)])
    sd = barycentric_subdivide(tri, 1)
    assert sd.complex.count(2) == 6 and sd.complex.count(0) == 7
    hollow = GeometricComplex.from_points(validate_complex([[0, 1], [1, 2], [0, 2]]), [(0, 0), (1, 0), (0, 1)])
    sd = barycentric_subdivide(hollow, 1)
    assert sd.complex.count(1) == 6 and sd.complex.count(0) == 6


@pytest.mark.parametrize("s", [0, 1, 2])
def test_subdivision_preserves_euler_and_betti(s):
    sd = barycentric_subdivide(octahedron(), s)
    assert sd.complex.euler_characteristic() == 2
    assert betti_numbers(sd.complex, "q") == [1, 0, 1]


def test_subdivision_coordinates_are_barycenters():
    sd = barycentric_subdivide(octahedron(), 1)
    pts = {tuple(sd.point(v)) for v in sd.complex.vertices}
    assert (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)) in pts
    assert (Fraction(1, 2), Fraction(1, 2), Fraction(0)) in pts


def test_star_link_examples():
    K = octahedron().complex
    _, lk = star_link(K, (0,))
    assert lk.f_vector == (4, 4)
    assert betti_numbers(lk, "gf2") == [1, 1]
    _, lk = star_link(validate_complex([[0, 1], [1, 2], [0, 2]]), (0,))
    assert lk.as_lists() == [[1], [2]]
    _, lk = star_link(validate_complex([[0, 1, 2]]), (0, 1))
    assert lk.as_lists() == [[2]]
    with pytest.raises(NotFound):
        star_link(K, (0, 1))  # antipodal vertices are not joined


def test_vertex_links_of_sphere_are_circles():
    K = octahedron().complex
    for v in K.vertices:
        st_, lk = star_link(K, (int(v),))
        assert int(v) not in set(lk.vertices.tolist())
        assert naive_betti(lk.maximal_simplices()) == [1, 1]


def test_components():
    assert len(connected_components(validate_complex([[0, 1, 2], [3, 4, 5]]))) == 2
    assert len(connected_components(validate_complex([[0, 1], [1, 2], [0, 2]]))) == 1
    assert connected_components(SimplicialComplex.empty()) == []


def test_volume_examples():
    seg = GeometricComplex.from_points(validate_complex([[0, 1]]), [(0,), (1,)])
    assert simplex_volume_sq(seg, (0, 1)) == 1
    tri = GeometricComplex.from_points(validate_complex([[0, 1, 2]]), [(0, 0), (1, 0), (0, 1)])
    assert simplex_volume_sq(tri, (0, 1, 2)) == Fraction(1, 4)
    assert simplex_volume_sq(octahedron(), (0, 2, 4)) == Fraction(3, 4)


def test_degenerate_volume():
    g = GeometricComplex.from_points(validate_complex([[0, 1, 2]]), [(0, 0), (1, 1), (2, 2)])
    with pytest.raises(DegenerateSimplex):
        simplex_volume_sq(g, (0, 1, 2))


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)), min_size=3, max_size=3,
                unique=True),
       st.permutations([0, 1, 2]), st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)))
def test_volume_invariant_under_reorder_and_motion(pts, perm, shift):
    K = validate_complex([[0, 1, 2]])
    g = GeometricComplex.from_points(K, pts)
    try:
        v = simplex_volume_sq(g, (0, 1, 2))
    except DegenerateSimplex:
        return
    moved = [pts[i] for i in perm]
    # a signed permutation of the axes plus a translation is a rational rigid motion
    moved = [(-p[1] + shift[0], p[2] + shift[1], p[0] + shift[2]) for p in moved]
    assert simplex_volume_sq(GeometricComplex.from_points(K, moved), (0, 1, 2)) == v


def test_dump_is_sorted():
    K = validate_complex([[2, 1, 0]])
    assert K.dump().splitlines() == ["0", "1", "2", "0 1", "0 2", "1 2", "0 1 2"]


def test_full_triangle_faces_in_order():
    K = validate_complex([[0, 1, 2, 3]])
    assert [tuple(r) for r in K.simplices(2).tolist()] == list(itertools.combinations(range(4), 3))
