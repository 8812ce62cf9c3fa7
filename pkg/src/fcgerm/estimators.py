"""Estimator-style wrappers: fit on germ models, then read off ranks or verdicts.

Inputs are models, model dicts (the JSON schema) or paths to model files,
either one at a time or as a sequence.
"""
from __future__ import annotations

from os import PathLike

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analysis import AnalysisOptions, run_analysis
from .errors import InputError
from .fc import fc_rank_table
from .locus import conicalness, detect_non_simple, thin_zone
from .model import StrictTransformModel
from .rings import as_ring
from .separating import check_sc, find_separating_set, test_fc_injectivity


def check_model(X) -> list[StrictTransformModel]:
    """Normalize the accepted input kinds into a list of models."""
    from .io import model_from_dict, parse_model
    if isinstance(X, (StrictTransformModel, dict, str, PathLike)):
        X = [X]
    try:
        items = list(X)
    except TypeError as exc:
        raise InputError(f"expected a model or a sequence of models, got {type(X).__name__}") from exc
    out = []
    for x in items:
        if isinstance(x, StrictTransformModel):
            out.append(x)
        elif isinstance(x, dict):
            out.append(model_from_dict(x).model)
        elif isinstance(x, (str, PathLike)):
            out.append(parse_model(x).model)
        else:
            raise InputError(f"cannot read a model from {type(x).__name__}")
    if not out:
        raise InputError("no models given")
    return out


def _check_s(s):
    if not isinstance(s, (int, np.integer)) or s < 0:
        raise InputError(f"subdivision level must be a non-negative integer, got {s!r}")


class FcHomology(TransformerMixin, BaseEstimator):
    """Ranks of the fast-contracting groups for 1 <= delta <= k <= max_degree."""

    def __init__(self, ring="gf2", s=2, max_degree=3):
        self.ring = ring
        self.s = s
        self.max_degree = max_degree

    def _pairs(self):
        return [(k, d) for k in range(1, self.max_degree + 1) for d in range(1, k + 1)]

    def fit(self, X, y=None):
        as_ring(self.ring)
        _check_s(self.s)
        self.tables_ = [fc_rank_table(m, self.ring, self.s) for m in check_model(X)]
        self.pairs_ = self._pairs()
        return self

    def transform(self, X):
        check_is_fitted(self, "tables_")
        tables = [fc_rank_table(m, self.ring, self.s) for m in check_model(X)]
        return np.array([[t.get(p, 0) for p in self.pairs_] for t in tables], dtype=np.int64)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "pairs_")
        return np.array([f"fc_k{k}_d{d}" for k, d in self.pairs_], dtype=object)


class NonSimpleLocusDetector(BaseEstimator):
    """Fits the non-simple locus; ``predict`` returns the conicalness verdict per model."""

    def __init__(self, allow_unknown=False):
        self.allow_unknown = allow_unknown

    def fit(self, X, y=None):
        models = check_model(X)
        self.loci_ = [detect_non_simple(m, self.allow_unknown) for m in models]
        self.locus_ = self.loci_[0]
        return self

    def predict(self, X):
        check_is_fitted(self, "loci_")
        out = []
        for m in check_model(X):
            out.append(conicalness(m, detect_non_simple(m, self.allow_unknown)).verdict)
        return np.array(out, dtype=object)


class SeparatingSetAnalyzer(BaseEstimator):
    """Condition (SC), a verified separating set and the injectivity test in degree d - 2."""

    def __init__(self, s=2, ring="gf2"):
        self.s = s
        self.ring = ring

    def _one(self, m):
        locus = detect_non_simple(m)
        sc = check_sc(m, locus, self.s)
        w = find_separating_set(m, locus, self.s, sc)
        zone = thin_zone(m, locus, self.s)
        k = max(m.dim - 2, 1)
        return sc, w, test_fc_injectivity(m, zone, k, self.ring, w)

    def fit(self, X, y=None):
        as_ring(self.ring)
        _check_s(self.s)
        res = [self._one(m) for m in check_model(X)]
        self.sc_ = [r[0] for r in res]
        self.witnesses_ = [r[1] for r in res]
        self.injectivity_ = [r[2] for r in res]
        return self

    def predict(self, X):
        """True where condition (SC) holds."""
        check_is_fitted(self, "sc_")
        return np.array([check_sc(m, detect_non_simple(m), self.s).value for m in check_model(X)])


class GermAnalyzer(TransformerMixin, BaseEstimator):
    """Runs the full pipeline; ``transform`` yields one report dict per model."""

    def __init__(self, ring="gf2", s=2, degrees=None, skip=()):
        self.ring = ring
        self.s = s
        self.degrees = degrees
        self.skip = skip

    def _options(self):
        _check_s(self.s)
        try:
            return AnalysisOptions(self.ring, self.s,
                                   None if self.degrees is None else tuple(self.degrees),
                                   frozenset(self.skip))
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    def fit(self, X, y=None):
        opts = self._options()
        self.reports_ = [run_analysis(m, opts) for m in check_model(X)]
        return self

    def transform(self, X):
        check_is_fitted(self, "reports_")
        opts = self._options()
        return [run_analysis(m, opts).to_dict() for m in check_model(X)]
