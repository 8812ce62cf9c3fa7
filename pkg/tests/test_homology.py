from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fcgerm import rings
from fcgerm.complex import Chain, SimplicialComplex, validate_complex
from fcgerm.errors import DegreeError, InvalidMap, ShapeError
from fcgerm.gallery import gallery_models, link_octahedron, link_torus
from fcgerm.homology import (PresentedSubgroup, SimplicialMap, betti_numbers, homology, induced_map,
                             kernel_subgroup, membership, push_array)

from helpers import naive_betti, random_complexes

HOLLOW = [[0, 1], [1, 2], [0, 2]]
# six-vertex real projective plane
RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5), (1, 2, 4), (2, 4, 5), (2, 3, 5), (1, 3, 5), (1, 3, 4)]


def hexagon(n=6):
    return validate_complex([[i, (i + 1) % n] for i in range(n)])


def test_hollow_triangle_circle():
    assert homology(validate_complex(HOLLOW), 1, "gf2").rank == 1


def test_octahedron_sphere():
    K = SimplicialComplex.from_simplices(link_octahedron()[0])
    assert homology(K, 1, "q").rank == 0
    assert homology(K, 2, "q").rank == 1


def test_torus_rank_two():
    K = SimplicialComplex.from_simplices(link_torus()[0])
    assert homology(K, 1, "q").rank == 2
    assert naive_betti(K.maximal_simplices(), "q") == betti_numbers(K, "q")


def test_degree_out_of_range():
    with pytest.raises(DegreeError):
        homology(validate_complex(HOLLOW), 2, "gf2")
    with pytest.raises(DegreeError):
        homology(validate_complex(HOLLOW), -1, "gf2")


def test_integer_torsion_of_projective_plane():
    K = SimplicialComplex.from_simplices(RP2)
    H1 = homology(K, 1, "z")
    assert (H1.rank, H1.torsion) == (0, [2])
    assert homology(K, 2, "z").rank == 0
    assert homology(K, 1, "gf2").rank == 1
    assert homology(K, 1, "q").rank == 0


def test_torsion_only_over_integers():
    K = SimplicialComplex.from_simplices(RP2)
    assert homology(K, 1, "gf2").torsion == []
    assert homology(K, 1, "q").torsion == []


@pytest.mark.parametrize("ring", ["gf2", "q", "z"])
def test_basis_cycles_are_cycles_with_unit_coordinates(ring):
    K = SimplicialComplex.from_simplices(link_torus()[0])
    H = homology(K, 1, ring)
    for i, c in enumerate(H.basis):
        assert c.is_cycle()
        coords = H.coordinates(c)
        assert [int(x) for x in coords] == [1 if j == i else 0 for j in range(H.size)]


def test_reduced_degree_zero():
    K = validate_complex([[0, 1], [2, 3]])
    assert homology(K, 0, "gf2").rank == 2
    assert homology(K, 0, "gf2", reduced=True).rank == 1


def test_oracle_exhaustive_random_suite():
    for raw in random_complexes(100):
        K = SimplicialComplex.from_simplices(raw)
        for ring in ("gf2", "q"):
            assert betti_numbers(K, ring) == naive_betti(raw, ring), (raw, ring)


@pytest.mark.parametrize("name", sorted(gallery_models()))
def test_euler_characteristic_matches_betti(name, models):
    K = models[name].complex
    b = betti_numbers(K, "q")
    assert K.euler_characteristic() == sum((-1) ** i * x for i, x in enumerate(b))


# ---------------------------------------------------------------- maps

def test_inclusion_hollow_into_solid_is_zero():
    f = induced_map(SimplicialMap(validate_complex(HOLLOW), validate_complex([[0, 1, 2]])), 1, "gf2")
    assert f.matrix == [] or not any(any(r) for r in f.matrix)
    assert f.image_rank() == 0


def test_identity_is_identity():
    K = SimplicialComplex.from_simplices(link_torus()[0])
    f = induced_map(SimplicialMap(K, K), 1, "q")
    assert f.matrix == [[1, 0], [0, 1]]


@pytest.mark.parametrize("ring,expected", [("q", [[2]]), ("z", [[2]]), ("gf2", [[0]])])
def test_degree_two_map_of_circle(ring, expected):
    # 12-gon wrapping twice around the hexagon: i -> i mod 6 is simplicial
    f = induced_map(SimplicialMap(hexagon(12), hexagon(6), {i: i % 6 for i in range(12)}), 1, ring)
    assert [[abs(int(x)) for x in r] for r in f.matrix] == expected


def test_non_simplicial_map_rejected():
    with pytest.raises(InvalidMap):
        induced_map(SimplicialMap(hexagon(6), hexagon(6), {i: (2 * i) % 6 for i in range(6)}), 1, "gf2")


def test_functoriality_of_nested_inclusions():
    A = validate_complex(HOLLOW)
    B = validate_complex(HOLLOW + [[2, 3], [0, 3]])
    C = validate_complex([[0, 1, 2], [2, 3], [0, 3]])
    ab = induced_map(SimplicialMap(A, B), 1, "q")
    bc = induced_map(SimplicialMap(B, C), 1, "q")
    ac = induced_map(SimplicialMap(A, C), 1, "q")
    assert rings.matmul(bc.matrix, ab.matrix, "q") == ac.matrix


def test_functoriality_of_composed_vertex_maps():
    big, mid, small = hexagon(12), hexagon(6), hexagon(3)
    f = SimplicialMap(big, mid, {i: i % 6 for i in range(12)})
    g = SimplicialMap(mid, small, {i: i % 3 for i in range(6)})
    gf = induced_map(g.compose(f), 1, "q")
    prod = rings.matmul(induced_map(g, 1, "q").matrix, induced_map(f, 1, "q").matrix, "q")
    assert gf.matrix == prod
    assert [[abs(x) for x in r] for r in prod] == [[4]]


def test_degenerate_images_push_to_zero():
    # collapse the circle onto an edge: the edge [1, 2] degenerates and the cycle dies
    smap = SimplicialMap(validate_complex(HOLLOW), validate_complex([[0, 1]]), {0: 0, 1: 1, 2: 1})
    H = homology(smap.source, 1, "q")
    img = push_array(smap, 1, H.basis_array(0), "q")
    assert not any(img)
    assert induced_map(smap, 1, "q").image_rank() == 0


def test_kernel_examples():
    f = induced_map(SimplicialMap(validate_complex(HOLLOW), validate_complex([[0, 1, 2]])), 1, "gf2")
    assert kernel_subgroup(f).rank == 1
    K = SimplicialComplex.from_simplices(link_torus()[0])
    assert kernel_subgroup(induced_map(SimplicialMap(K, K), 1, "gf2")).rank == 0
    gens = rings.kernel_basis([[1, 1], [0, 0]], "gf2", 2)
    assert gens == [[1, 1]]


def test_membership_examples():
    sub = PresentedSubgroup(None, [[1, 1], [0, 2]], "z", 2)
    ok, coords = membership(sub, [2, 0])
    assert ok and list(coords) == [2, -1]
    assert membership(sub, [0, 0])[0]
    assert not membership(sub, [1, 0])[0]
    trivial = PresentedSubgroup(None, [], "q", 2)
    assert not membership(trivial, [1, 0])[0]
    assert membership(trivial, [0, 0])[0]
    with pytest.raises(ShapeError):
        membership(sub, [1, 2, 3])


def _det(M):
    return rings.det_int(M)


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_normal_form(M):
    S = rings.smith_normal_form(M)
    D = rings.matmul(rings.matmul(S.U, M, "z"), S.V, "z")
    m, n = len(M), len(M[0])
    for i in range(m):
        for j in range(n):
            assert D[i][j] == (S.diag[i] if i == j and i < len(S.diag) else 0)
    assert abs(_det(S.U)) == 1 and abs(_det(S.V)) == 1
    nz = [d for d in S.diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert S.rank == len(nz)


@given(st.lists(st.lists(st.integers(0, 1), min_size=4, max_size=4), min_size=1, max_size=5),
       st.sampled_from(["gf2", "q"]))
def test_kernel_basis_is_kernel(M, ring):
    K = rings.kernel_basis(M, ring, 4)
    assert len(K) == 4 - rings.rank(M, ring)
    for v in K:
        prod = [sum(Fraction(a) * Fraction(b) for a, b in zip(row, v)) for row in M]
        if ring == "gf2":
            prod = [int(x) % 2 for x in prod]
        assert not any(prod)


def test_chain_arithmetic():
    a = Chain(1, {(0, 1): 1, (1, 0): 1}, "q")
    assert not a
    b = Chain(1, {(1, 0): 1}, "q")
    assert b.terms == {(0, 1): Fraction(-1)}
    c = Chain(1, {(0, 1): 1, (1, 2): 1}, "gf2")
    assert (c + c).terms == {}
