import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quconv.exceptions import DimensionMismatch, IndexOutOfRange, ParseError, ScaleGuard
from quconv.pauli import (
    PauliOp,
    commutator,
    compose,
    from_text,
    index_to_pauli,
    is_z_type,
    matrix_oracle,
    pauli_to_index,
    to_text,
    weight,
)


def random_pauli(rng, n, p):
    return PauliOp(p, tuple(rng.integers(0, p, n)), tuple(rng.integers(0, p, n)))


def oracle_phase(P, Q):
    """Exponent e with M(P) M(Q) = ω^e M(Q) M(P), found by trying every e."""
    A, B = matrix_oracle(P), matrix_oracle(Q)
    omega = np.exp(2j * np.pi / P.p)
    hits = [e for e in range(P.p) if np.allclose(A @ B, omega**e * (B @ A), atol=1e-9)]
    assert len(hits) == 1
    return hits[0]


def paulis(n, p):
    vec = st.lists(st.integers(0, p - 1), min_size=n, max_size=n).map(tuple)
    return st.builds(lambda x, z: PauliOp(p, x, z), vec, vec)


def test_commutator_x_then_z():
    X = PauliOp(3, (1,), (0,))
    Z = PauliOp(3, (0,), (1,))
    # (X^a Z^b)(X^c Z^d) = ω^{bc-ad} ... with a=1, b=0, c=0, d=1
    assert commutator(X, Z) == (0 * 0 - 1 * 1) % 3 == 2
    assert oracle_phase(X, Z) == 2


def test_self_commutation(rng):
    for p in (2, 3, 5, 7):
        P = random_pauli(rng, 3, p)
        assert commutator(P, P) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2])
def test_commutator_matches_dense_oracle(p, n, rng):
    for _ in range(40):
        P, Q = random_pauli(rng, n, p), random_pauli(rng, n, p)
        assert commutator(P, Q) == oracle_phase(P, Q)


def test_commutator_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        commutator(PauliOp.identity(1, 3), PauliOp.identity(2, 3))
    with pytest.raises(DimensionMismatch):
        commutator(PauliOp.identity(1, 3), PauliOp.identity(1, 5))


@settings(max_examples=80, deadline=None)
@given(data=st.data(), p=st.sampled_from([2, 3, 5, 7]), n=st.integers(1, 4))
def test_antisymmetry_and_bilinearity(data, p, n):
    P, P2, Q = (data.draw(paulis(n, p)) for _ in range(3))
    assert (commutator(P, Q) + commutator(Q, P)) % p == 0
    assert commutator(compose(P, P2), Q) == (commutator(P, Q) + commutator(P2, Q)) % p


@settings(max_examples=40, deadline=None)
@given(data=st.data(), p=st.sampled_from([2, 3, 5, 11]), n=st.integers(1, 3))
def test_order_p(data, p, n):
    P = data.draw(paulis(n, p))
    acc = PauliOp.identity(n, p)
    for _ in range(p):
        acc = compose(acc, P)
    assert acc.is_identity()


def test_compose_examples():
    P = PauliOp(5, (1, 2), (3, 4))
    assert compose(P, PauliOp.identity(2, 5)) == P
    X = PauliOp(3, (1,), (0,))
    assert compose(compose(X, X), X).is_identity()


@pytest.mark.parametrize("p", [3, 5])
def test_compose_matches_matrix_product_up_to_phase(p, rng):
    for _ in range(30):
        P, Q = random_pauli(rng, 2, p), random_pauli(rng, 2, p)
        prod = matrix_oracle(P) @ matrix_oracle(Q)
        ref = matrix_oracle(compose(P, Q))
        # align global phase on the first nonzero entry
        i = np.flatnonzero(np.abs(ref) > 0.5)[0]
        phase = prod.flat[i] / ref.flat[i]
        assert abs(abs(phase) - 1) < 1e-9
        assert np.allclose(prod, phase * ref, atol=1e-9)


def test_weight_examples():
    assert weight(PauliOp.identity(4, 3)) == 0
    assert weight(PauliOp(2, (0, 1, 0), (0, 0, 0))) == 1
    assert weight(PauliOp(3, (1, 0, 2), (0, 0, 1))) == 2


def test_is_z_type():
    assert is_z_type(PauliOp.identity(2, 3))
    assert is_z_type(PauliOp(3, (0,), (2,)))
    assert not is_z_type(PauliOp(3, (1,), (0,)))


def test_index_examples():
    assert pauli_to_index(PauliOp.identity(3, 5)) == 0
    assert pauli_to_index(PauliOp(3, (1,), (0,))) == 1


@pytest.mark.parametrize("n,p", [(1, 2), (2, 3), (1, 5), (2, 2)])
def test_index_round_trip_exhaustive(n, p):
    seen = set()
    for i in range(p ** (2 * n)):
        P = index_to_pauli(i, n, p)
        assert pauli_to_index(P) == i
        seen.add(P)
    assert len(seen) == p ** (2 * n)


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        index_to_pauli(9, 1, 3)
    with pytest.raises(IndexOutOfRange):
        index_to_pauli(-1, 1, 3)


def test_oracle_examples():
    assert np.allclose(matrix_oracle(PauliOp.identity(1, 3)), np.eye(3))
    X = matrix_oracle(PauliOp(3, (1,), (0,)))
    for j in range(3):
        e = np.zeros(3)
        e[j] = 1
        assert np.allclose(X @ e, np.eye(3)[(j + 1) % 3])
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(matrix_oracle(PauliOp(3, (0,), (1,))), np.diag([1, w, w**2]))


def test_oracle_scale_guard():
    with pytest.raises(ScaleGuard):
        matrix_oracle(PauliOp.identity(5, 2))
    with pytest.raises(ScaleGuard):
        matrix_oracle(PauliOp.identity(1, 7))


def test_text_round_trip(rng):
    assert to_text(PauliOp(3, (1, 0, 0), (2, 0, 1))) == "X1Z2 . I . Z1"
    for p in (2, 3, 13):
        for _ in range(20):
            P = random_pauli(rng, 3, p)
            assert from_text(to_text(P), p) == P


@pytest.mark.parametrize("bad", ["X1Y1", "Q", "X1 . . I", "Z7"])
def test_text_parse_errors(bad):
    with pytest.raises(ParseError):
        from_text(bad, 5)
