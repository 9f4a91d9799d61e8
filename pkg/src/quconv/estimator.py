"""scikit-learn style front end: batches of encoders in, flag arrays out."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analysis import ANCILLA_MODES, Budgets, classify, finite_memory_group, flags, zero_cycle_group
from .encoder import SymplecticEncoder, require_valid

FEATURES = ("catastrophic", "recursive", "finite_memory_size", "zero_cycle_size")


def check_encoders(X) -> list[SymplecticEncoder]:
    """Accept one encoder or an iterable of encoders; every one must be symplectic."""
    if isinstance(X, SymplecticEncoder):
        X = [X]
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected an encoder or an iterable of encoders, got {type(X).__name__}") from None
    for i, E in enumerate(items):
        if not isinstance(E, SymplecticEncoder):
            raise TypeError(f"item {i} is {type(E).__name__}, not SymplecticEncoder")
        require_valid(E)
    if not items:
        raise ValueError("no encoders given")
    return items


class EncoderAnalyzer(BaseEstimator, TransformerMixin):
    """Classify encoders.

    ``fit`` runs the full classification on every encoder and keeps the
    results in ``classifications_``.  ``transform`` maps encoders to rows of
    :data:`FEATURES`; ``predict`` flags recursive, non-catastrophic encoders.
    Neither needs the fitted state, but both follow the usual fitted check.
    """

    def __init__(self, max_len=None, repetition_budget=None, criterion=False, ancilla_mode="standard"):
        self.max_len = max_len
        self.repetition_budget = repetition_budget
        self.criterion = criterion
        self.ancilla_mode = ancilla_mode

    def _budgets(self) -> Budgets:
        return Budgets.from_env(max_len=self.max_len, repetition_budget=self.repetition_budget)

    def fit(self, X, y=None):
        if self.ancilla_mode not in ANCILLA_MODES:
            raise ValueError(f"ancilla_mode must be one of {ANCILLA_MODES}")
        encoders = check_encoders(X)
        budgets = self._budgets()
        self.classifications_ = [classify(E, budgets, criterion=self.criterion) for E in encoders]
        self.n_encoders_ = len(encoders)
        self.params_ = sorted({E.params.astuple() for E in encoders})
        return self

    def transform(self, X):
        check_is_fitted(self, "classifications_")
        rows = []
        for E in check_encoders(X):
            cat, rec = flags(E, self.ancilla_mode)
            rows.append((cat, rec, len(finite_memory_group(E)), len(zero_cycle_group(E))))
        return np.array(rows, dtype=np.int64)

    def predict(self, X):
        check_is_fitted(self, "classifications_")
        out = [flags(E, self.ancilla_mode) for E in check_encoders(X)]
        return np.array([rec and not cat for cat, rec in out], dtype=bool)
