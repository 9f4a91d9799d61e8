import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from quconv.encoder import CodeParams, SymplecticEncoder
from quconv.estimator import FEATURES, EncoderAnalyzer, check_encoders
from quconv.exceptions import InvalidEncoder

from .conftest import leaky_encoder, quiet_encoder, sample_encoders


def test_check_encoders():
    E = quiet_encoder(2)
    assert check_encoders(E) == [E]
    with pytest.raises(TypeError):
        check_encoders(3)
    with pytest.raises(TypeError):
        check_encoders([E, "x"])
    with pytest.raises(ValueError):
        check_encoders([])
    bad = np.eye(6, dtype=np.int64)
    bad[0, 3] = 1
    bad[1, 0] = 1
    with pytest.raises(InvalidEncoder):
        check_encoders([SymplecticEncoder(CodeParams(2, 1, 2, 1), bad)])


def test_fit_transform_predict():
    X = [quiet_encoder(3), leaky_encoder(3)]
    est = EncoderAnalyzer(max_len=6)
    Z = est.fit_transform(X)
    assert Z.shape == (2, len(FEATURES))
    assert Z[:, 0].tolist() == [0, 1]
    assert est.n_encoders_ == 2 and est.params_ == [(3, 1, 2, 1)]
    assert est.classifications_[1].catastrophic
    assert est.predict(X).tolist() == [False, False]


def test_not_fitted():
    with pytest.raises(NotFittedError):
        EncoderAnalyzer().predict([quiet_encoder(2)])


def test_params_roundtrip():
    est = EncoderAnalyzer(max_len=5, ancilla_mode="impulse")
    assert est.get_params()["ancilla_mode"] == "impulse"
    c = clone(est)
    assert c.get_params() == est.get_params()
    with pytest.raises(ValueError):
        EncoderAnalyzer(ancilla_mode="other").fit(quiet_encoder(2))


def test_transform_matches_classify():
    X = sample_encoders(CodeParams(2, 2, 2, 1), 8, seed=3)
    est = EncoderAnalyzer().fit(X)
    Z = est.transform(X)
    for row, c in zip(Z, est.classifications_):
        assert tuple(row) == (c.catastrophic, c.recursive, len(c.finite_memory), len(c.zero_cycle))
