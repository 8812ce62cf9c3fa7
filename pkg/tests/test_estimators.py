import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from fcgerm.errors import InputError
from fcgerm.estimators import (FcHomology, GermAnalyzer, NonSimpleLocusDetector, SeparatingSetAnalyzer,
                               check_model)
from fcgerm.io import model_to_dict


def test_check_model_accepts_all_forms(models, tmp_path):
    m = models["cone_over_hexagon"]
    path = tmp_path / "m.json"
    import json
    path.write_text(json.dumps(model_to_dict(m)))
    out = check_model([m, model_to_dict(m), str(path), path])
    assert len(out) == 4 and all(x.complex == m.complex for x in out)
    assert check_model(m)[0] is m
    with pytest.raises(InputError):
        check_model([])
    with pytest.raises(InputError):
        check_model(3)
    with pytest.raises(InputError):
        check_model([1.5])


def test_params_round_trip():
    est = FcHomology(ring="q", s=3, max_degree=2)
    assert est.get_params() == {"ring": "q", "s": 3, "max_degree": 2}
    assert clone(est).get_params() == est.get_params()
    est.set_params(s=2)
    assert est.s == 2


@pytest.mark.parametrize("est", [FcHomology(), NonSimpleLocusDetector(), SeparatingSetAnalyzer(),
                                 GermAnalyzer()])
def test_not_fitted(est, models):
    method = getattr(est, "transform", None) or est.predict
    with pytest.raises(NotFittedError):
        method([models["cone_over_hexagon"]])


def test_fc_homology_transform(models):
    X = [models["cone_over_hexagon"], models["pinched_handle"]]
    est = FcHomology(max_degree=1)
    Y = est.fit_transform(X)
    assert Y.tolist() == [[0], [1]]
    assert est.get_feature_names_out().tolist() == ["fc_k1_d1"]


def test_fc_homology_rejects_bad_params(models):
    with pytest.raises(InputError):
        FcHomology(s=-1).fit(models["cone_over_hexagon"])
    with pytest.raises(InputError):
        FcHomology(ring="reals").fit(models["cone_over_hexagon"])


def test_locus_detector(models):
    X = [models["cone_over_hexagon"], models["pinched_handle"]]
    det = NonSimpleLocusDetector().fit(X)
    assert det.predict(X).tolist() == ["CONIC", "NOT_CONIC"]
    assert det.loci_[0].empty and not det.loci_[1].empty


def test_separating_analyzer(models):
    X = [models["bridge_germ"], models["book_germ"]]
    est = SeparatingSetAnalyzer().fit(X)
    assert est.predict(X).tolist() == [True, False]
    assert est.witnesses_[0] is not None and est.witnesses_[1] is None


def test_germ_analyzer(models):
    reports = GermAnalyzer(skip=("stability",)).fit_transform([models["pinched_handle"]])
    assert reports[0]["status"] == "ok"
    assert reports[0]["fc_ranks"][0]["rank"] == 1
