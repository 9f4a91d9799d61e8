import itertools

import numpy as np
import pytest

from quconv import oracles
from quconv.encoder import CodeParams, SymplecticEncoder
from quconv.exceptions import EnumerationBudgetExceeded
from quconv.pauli import PauliOp, pauli_to_index
from quconv.state_diagram import (
    ALL_EDGES,
    IDENTITY_LOGICAL,
    NO_EDGES,
    ZERO_PHYSICAL,
    ZERO_PHYSICAL_IDENTITY_LOGICAL,
    EdgeTable,
    ancilla_pauli,
    edge_table,
    edges_from,
    enumerate_finite_standard_paths,
    enumerate_simple_cycles,
    loop_vertices,
    reachable,
    scc,
    tarjan,
)

from .conftest import leaky_encoder, quiet_encoder, sample_encoders

SMALL = [CodeParams(2, 1, 2, 1), CodeParams(2, 2, 2, 1)]
FILTERS = [ALL_EDGES, ZERO_PHYSICAL, IDENTITY_LOGICAL, ZERO_PHYSICAL_IDENTITY_LOGICAL]


def closure(n, pairs):
    """Reflexive-transitive closure by Floyd-Warshall."""
    R = np.eye(n, dtype=bool)
    for u, w in pairs:
        R[u, w] = True
    for k in range(n):
        R |= R[:, k : k + 1] & R[k : k + 1, :]
    return R


def test_out_degree_qutrit(qutrit_121):
    E = sample_encoders(qutrit_121, 1)[0]
    for v in (0, 5, 8):
        assert len(list(edges_from(E, v))) == 27


def test_identity_self_edge(qutrit_121):
    for E in sample_encoders(qutrit_121, 5, seed=3):
        e = next(edges_from(E, 0))
        assert (e.source, e.target) == (0, 0)
        assert e.physical.is_identity() and e.logical.is_identity() and e.ancilla.is_identity()


def test_ancilla_paulis_are_z_type():
    params = CodeParams(3, 1, 3, 1)
    seen = {ancilla_pauli(s, params) for s in range(9)}
    assert len(seen) == 9
    assert all(not any(S.x) for S in seen)


@pytest.mark.parametrize("f", FILTERS)
def test_filters_respected(qubit_121, f):
    E = sample_encoders(qubit_121, 1, seed=7)[0]
    for v in range(E.params.num_vertices):
        for e in edges_from(E, v, f):
            if f.require_zero_physical:
                assert e.physical_weight == 0
            if f.require_identity_logical:
                assert e.logical_weight == 0
    assert list(edges_from(E, 0, NO_EDGES)) == []


@pytest.mark.parametrize("params", [CodeParams(2, 1, 2, 1), CodeParams(3, 1, 2, 1), CodeParams(2, 2, 2, 1)])
def test_edge_table_matches_direct_edges(params):
    for E in sample_encoders(params, 3, seed=11):
        t = EdgeTable(E)
        direct = [e for v in range(params.num_vertices) for e in edges_from(E, v)]
        assert t.size == len(direct)
        assert t.src.tolist() == [e.source for e in direct]
        assert t.dst.tolist() == [e.target for e in direct]
        assert t.logical_weight.tolist() == [e.logical_weight for e in direct]
        assert t.phys_zero.tolist() == [e.physical_weight == 0 for e in direct]
        for i in (0, t.size // 3, t.size - 1):
            assert t.edge(i) == direct[i]


def test_edge_table_cached(qubit_121):
    E = sample_encoders(qubit_121, 1)[0]
    assert edge_table(E) is edge_table(E)


def test_tarjan_small():
    succ = {0: [1], 1: [2], 2: [0, 3], 3: [3], 4: []}
    comps = sorted(sorted(c) for c in tarjan(succ))
    assert comps == [[0, 1, 2], [3], [4]]


@pytest.mark.parametrize("f", FILTERS)
@pytest.mark.parametrize("params", SMALL)
def test_scc_matches_closure(params, f):
    for E in sample_encoders(params, 4, seed=5):
        D = oracles.BruteDiagram(E)
        pairs = [(e.source, e.target) for e in D.edges if f.accepts(e)]
        R = closure(D.num_vertices, pairs)
        mutual = R & R.T
        comps = scc(E, f)
        label = {v: root for root, members in comps.items() for v in members}
        for u, w in itertools.product(range(D.num_vertices), repeat=2):
            assert (label[u] == label[w]) == mutual[u, w]


def test_scc_large_graph_path():
    # p^{2m} = 729 vertices pushes the zero-physical subgraph past the small-graph cutoff
    params = CodeParams(3, 3, 1, 1)
    E = sample_encoders(params, 1, seed=2)[0]
    comps = scc(E, ALL_EDGES)
    assert sum(len(c) for c in comps.values()) == 729
    assert all(min(c) == root for root, c in comps.items())


@pytest.mark.parametrize("f", [ZERO_PHYSICAL, ZERO_PHYSICAL_IDENTITY_LOGICAL])
@pytest.mark.parametrize("params", SMALL)
def test_loop_vertices_match_brute(params, f):
    for E in sample_encoders(params, 6, seed=9):
        D = oracles.BruteDiagram(E)
        assert set(loop_vertices(E, f)) == oracles.cycle_vertices(D, f.accepts)


@pytest.mark.parametrize("params", SMALL)
def test_reachable_matches_brute(params):
    for E in sample_encoders(params, 4, seed=13):
        D = oracles.BruteDiagram(E)
        for start in ({0}, {1, 3}):
            assert set(reachable(E, IDENTITY_LOGICAL, start)) == oracles.reachable(D, IDENTITY_LOGICAL.accepts, start)


def test_quiet_encoder_loops():
    E = quiet_encoder(3)
    assert loop_vertices(E, ZERO_PHYSICAL_IDENTITY_LOGICAL) == frozenset(range(9))
    assert list(enumerate_finite_standard_paths(E)) == []


@pytest.mark.parametrize("params", SMALL)
def test_cycles_match_brute(params):
    for E in sample_encoders(params, 4, seed=17):
        D = oracles.BruteDiagram(E)
        brute = {cyc for cyc in oracles.simple_cycles(D, oracles.zero_physical, 16) if cyc[0] == min(cyc)}
        fast = list(enumerate_simple_cycles(E, ZERO_PHYSICAL, 16))
        assert {c.vertices for c in fast} == brute
        assert len(fast) == len(brute)
        for c in fast:
            assert all(e.physical_weight == 0 for e in c.edges)
            closes = zip(c.edges, c.edges[1:] + c.edges[:1])
            assert all(a.target == b.source for a, b in closes)


def test_cycle_budget():
    E = quiet_encoder(3)
    with pytest.raises(EnumerationBudgetExceeded):
        list(enumerate_simple_cycles(E, ALL_EDGES, budget=5))


def test_leaky_self_loop_with_logical_weight():
    E = leaky_encoder(3)
    x = pauli_to_index(PauliOp(3, (1,), (0,)))
    loops = [e for e in edges_from(E, x, ZERO_PHYSICAL) if e.target == x and e.logical_weight]
    assert loops


@pytest.mark.parametrize("params", SMALL)
def test_finite_paths_match_brute(params):
    for E in sample_encoders(params, 6, seed=19):
        D = oracles.BruteDiagram(E)
        fast = list(enumerate_finite_standard_paths(E, 6))
        assert len(fast) == len(set(fast))
        assert set(fast) == oracles.terminating_paths(D, 6)


def test_finite_path_budget(qubit_121):
    E = sample_encoders(qubit_121, 1, seed=19)[0]
    total = len(list(enumerate_finite_standard_paths(E, 16)))
    if total > 1:
        with pytest.raises(EnumerationBudgetExceeded):
            list(enumerate_finite_standard_paths(E, 16, budget=total - 1))


def test_deterministic(qubit_121):
    E1 = sample_encoders(qubit_121, 1, seed=23)[0]
    E2 = SymplecticEncoder(E1.params, E1.matrix)
    assert [c.vertices for c in enumerate_simple_cycles(E1, ZERO_PHYSICAL)] == [
        c.vertices for c in enumerate_simple_cycles(E2, ZERO_PHYSICAL)
    ]
    assert list(enumerate_finite_standard_paths(E1, 8)) == list(enumerate_finite_standard_paths(E2, 8))
