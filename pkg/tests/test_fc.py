import warnings

import numpy as np
import pytest

from fcgerm.complex import SimplicialComplex
from fcgerm.errors import ClampWarning, DegreeError, NotFc
from fcgerm.fc import (bounding_chain, class_drop, depth_filtration, fc_group, fc_rank_table,
                       induced_fc_map, localize_class, sub_filtration_map)
from fcgerm.gallery import cone_over_link, link_hexagon
from fcgerm.homology import chain_to_array
from fcgerm.locus import detect_non_simple, thin_zone
from fcgerm.model import GermMorphismSpec, identity_morphism, thinness_report


def _levels(filt, k):
    return filt.levels[k]


def test_annulus_filtration_levels(models):
    m = models["cone_over_hexagon"]
    filt = depth_filtration(m, 0)
    K = filt.complex
    for k in range(K.dim + 1):
        zc = m.zero_counts(k)
        assert np.array_equal(filt.levels[k], zc - 1)
    assert filt.subcomplex(1) == K
    assert filt.subcomplex(-1).count(0) == 6  # the r = 1 hexagon


def test_beta_horn_filtration_collapses(models):
    filt = depth_filtration(models["beta_horn"], 2)
    assert filt.max_level == 0
    assert filt.subcomplex(0) == filt.complex


@pytest.mark.parametrize("ring", ["gf2", "q"])
def test_cone_has_trivial_groups(ring, models):
    assert fc_group(models["cone_over_hexagon"], 1, 1, ring).rank == 0


@pytest.mark.parametrize("ring", ["gf2", "q"])
def test_pinched_handle_ranks(ring, models):
    m = models["pinched_handle"]
    assert fc_group(m, 1, 1, ring).rank == 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClampWarning)
        assert fc_group(m, 1, 2, ring).rank == 0


def test_beta_horn_groups_equal_complement_homology(models):
    m = models["beta_horn"]
    for k in range(m.dim):
        g = fc_group(m, k, 1, "gf2")
        assert g.rank == g.ambient.rank


def test_degree_out_of_range(models):
    with pytest.raises(DegreeError):
        fc_group(models["cone_over_hexagon"], 5, 1)
    with pytest.raises(DegreeError):
        fc_group(models["cone_over_hexagon"], -1, 1)


def test_drop_clamps_warn(models):
    m = models["pinched_handle"]
    with pytest.warns(ClampWarning):
        low = fc_group(m, 1, 0)
    assert low.delta == 1 and low.rank == 1
    with pytest.warns(ClampWarning):
        high = fc_group(m, 1, 3)
    assert high.level == -1 and high.rank == 0


def test_nesting_on_gallery(models):
    for name, m in models.items():
        filt_groups = {}
        for k in range(1, m.dim):
            prev = None
            for delta in range(k, 0, -1):
                g = fc_group(m, k, delta, "gf2")
                if prev is not None:
                    for gen in prev.generators:
                        assert g.contains(gen), (name, k, delta)
                prev = g
            filt_groups[k] = prev


def test_rank_table_keys(models):
    table = fc_rank_table(models["bridge_germ"])
    assert sorted(table) == [(1, 1), (2, 1), (2, 2)]


def test_membrane_loop_drop(models):
    m = models["pinched_handle"]
    g = fc_group(m, 1, 1)
    assert class_drop(m, 1, g.cycle(0)) == 1
    assert class_drop(m, 1, g.ambient.coordinates(g.cycle(0))) == 1


def test_zero_class_drop_is_maximal(models):
    m = models["pinched_handle"]
    H = fc_group(m, 1, 1).ambient
    assert class_drop(m, 1, (0,) * H.size) == 1
    assert class_drop(models["bridge_germ"], 2, (0,) * fc_group(models["bridge_germ"], 2, 1).ambient.size) == 2


def test_beta_horn_classes_have_maximal_drop(models):
    m = models["beta_horn"]
    H = fc_group(m, 1, 1).ambient
    assert H.rank == 1
    assert class_drop(m, 1, (1,)) == 1


def test_non_fc_class_rejected(models):
    m = models["cone_over_hexagon"]
    H = fc_group(m, 1, 1).ambient
    assert H.rank == 1
    with pytest.raises(NotFc):
        class_drop(m, 1, (1,))


def test_generators_bound_thin_chains(models):
    for name in ("pinched_handle", "bridge_germ"):
        m = models[name]
        filt = depth_filtration(m, 2)
        for k in range(1, m.dim):
            for delta in range(1, k + 1):
                g = fc_group(m, k, delta)
                for i in range(g.rank):
                    eta = bounding_chain(filt, k, g.cycle(i), k - delta)
                    assert eta is not None
                    off = filt.complex.offsets()
                    idx = np.nonzero(eta[off[k + 1]:off[k + 2]])[0]
                    S = SimplicialComplex.from_simplices(filt.complex.simplices(k + 1)[idx].tolist())
                    rep = thinness_report(filt.model, S)
                    assert rep["dimension_drop"] >= delta


def test_identity_induces_identity(models):
    m = models["pinched_handle"]
    f = induced_fc_map(identity_morphism(m), 1)
    assert f.matrix == [[1]]


def test_functoriality_on_identities(models):
    m = models["pinched_handle"]
    ident = identity_morphism(m)
    f = induced_fc_map(ident, 1)
    gf = induced_fc_map(ident.compose(ident), 1)
    assert gf.matrix == f.matrix


def test_rescaling_isomorphism_on_trivial_groups():
    simplices, points = link_hexagon()
    a = cone_over_link(simplices, points, "a", layers=(0, 1))
    b = cone_over_link(simplices, points, "b", layers=(0, 3))
    f = induced_fc_map(GermMorphismSpec(a, b, {v: v for v in range(12)}), 1)
    assert f.source.rank == f.target.rank == 0
    assert f.is_injective() and f.is_surjective()


def test_thin_zone_inclusion_is_surjective(models):
    m = models["pinched_handle"]
    zone = thin_zone(m, detect_non_simple(m))
    f = sub_filtration_map(zone.model, zone.ambient, 1)
    assert f.target.rank == 1
    assert f.is_surjective()


@pytest.mark.parametrize("name", ["pinched_handle", "bridge_germ"])
def test_localize_generators(name, models):
    m = models[name]
    zone = thin_zone(m, detect_non_simple(m))
    for k in range(1, m.dim):
        f = sub_filtration_map(zone.model, zone.ambient, k)
        tgt = f.target
        for i in range(tgt.rank):
            rep = localize_class(zone.ambient, zone.model, k, tgt.cycle(i))
            assert rep.is_cycle()
            C_sub = depth_filtration(zone.model, 0).complement
            assert all(tuple(s) in C_sub for s in rep.terms)
            arr = chain_to_array(zone.ambient.complex, rep)
            assert tuple(tgt.ambient.coordinates(arr)) == tuple(tgt.ambient.coordinates(tgt.cycle(i)))


def test_localize_zero_class(models):
    m = models["pinched_handle"]
    zone = thin_zone(m, detect_non_simple(m))
    H = sub_filtration_map(zone.model, zone.ambient, 1).target.ambient
    rep = localize_class(zone.ambient, zone.model, 1, (0,) * H.size)
    assert not rep
