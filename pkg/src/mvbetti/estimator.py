"""A scikit-learn style wrapper: spaces in, rows of Betti numbers out."""

from __future__ import annotations

from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .pipelines import run_pipeline
from .validation import check_cover_mode, check_ell, check_pipeline, check_space


class BettiEstimator(TransformerMixin, BaseEstimator):
    """Betti numbers ``b_0..b_ell`` of finite simplicial complexes.

    There is nothing to learn; ``fit`` computes the numbers for one space
    and keeps the intermediate objects for inspection, ``transform`` maps a
    sequence of spaces to an ``(n_spaces, ell + 1)`` integer array.

    Parameters
    ----------
    ell : int
        Highest Betti index.
    pipeline : str
        ``"recursive"`` (default), ``"mv"``, ``"nerve"``, ``"betti01"`` or ``"oracle"``.
    cover : str
        ``"star"`` (greedy sub-family of vertex stars), ``"full-star"`` or
        ``"explicit"`` (covers given in the input file).
    check : bool
        Validate every complex and map built by the recursion.

    Examples
    --------
    >>> from mvbetti import BettiEstimator, load_example
    >>> BettiEstimator(ell=2).fit(load_example("torus")).betti_
    [1, 2, 1]
    """

    def __init__(self, ell: int = 2, pipeline: str = "recursive", cover: str = "star", check: bool = False):
        self.ell = ell
        self.pipeline = pipeline
        self.cover = cover
        self.check = check

    def _validate_params(self):
        check_ell(self.ell)
        check_pipeline(self.pipeline)
        check_cover_mode(self.cover)

    def _run(self, x):
        return run_pipeline(check_space(x), self.pipeline, self.ell, self.cover, self.check)

    def fit(self, X, y=None):
        self._validate_params()
        result = self._run(X)
        self.result_ = result
        self.betti_ = result.betti
        self.dag_ = result.dag
        self.store_ = result.store
        self.n_features_out_ = len(result.betti)
        return self

    def transform(self, X: Iterable) -> np.ndarray:
        self._validate_params()
        rows = [self._run(x).betti for x in X]
        width = len(rows[0]) if rows else check_ell(self.ell) + 1
        return np.asarray(rows, dtype=np.int64).reshape(len(rows), width)

    def fit_transform(self, X, y=None, **fit_params) -> np.ndarray:
        X = list(X)
        if X:
            self.fit(X[0])
        return self.transform(X)

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        n = len(self.betti_) if hasattr(self, "betti_") else check_ell(self.ell) + 1
        return np.asarray([f"b{i}" for i in range(n)], dtype=object)
