"""Definition-level brute-force checks.

These build every edge one at a time through :func:`~quconv.encoder.transition`
and search explicit vertex sequences.  They share nothing with the vectorised
edge table or the component-based classifiers, which makes them usable as
independent oracles for the fast paths.  Only practical for a few dozen
vertices.
"""

from __future__ import annotations

from collections import defaultdict

from .encoder import SymplecticEncoder
from .pauli import commutator, index_to_pauli
from .state_diagram import Edge, edges_from


class BruteDiagram:
    """All edges of a state diagram, grouped by ordered vertex pair."""

    def __init__(self, E: SymplecticEncoder):
        self.encoder = E
        self.num_vertices = E.params.num_vertices
        self.edges: list[Edge] = []
        self.by_pair: dict[tuple[int, int], list[Edge]] = defaultdict(list)
        for v in range(self.num_vertices):
            for e in edges_from(E, v):
                self.edges.append(e)
                self.by_pair[(e.source, e.target)].append(e)

    def successors(self, pred) -> dict[int, list[int]]:
        out: dict[int, set] = defaultdict(set)
        for (u, w), es in self.by_pair.items():
            if any(pred(e) for e in es):
                out[u].add(w)
        return {u: sorted(ws) for u, ws in out.items()}

    def has(self, u: int, w: int, pred) -> bool:
        return any(pred(e) for e in self.by_pair.get((u, w), ()))

    def pick(self, u: int, w: int, pred) -> Edge | None:
        for e in self.by_pair.get((u, w), ()):
            if pred(e):
                return e
        return None


def zero_physical(e: Edge) -> bool:
    return e.physical_weight == 0


def identity_logical(e: Edge) -> bool:
    return e.logical_weight == 0


def quiet(e: Edge) -> bool:
    return e.physical_weight == 0 and e.logical_weight == 0


def simple_cycles(D: BruteDiagram, pred, max_len: int):
    """Vertex sequences of simple cycles (each rotation listed), length <= max_len."""
    succ = D.successors(pred)
    for s in range(D.num_vertices):
        stack = [[s]]
        while stack:
            path = stack.pop()
            for w in succ.get(path[-1], ()):
                if w == s:
                    yield tuple(path)
                elif w not in path and len(path) < max_len:
                    stack.append(path + [w])


def cycle_vertices(D: BruteDiagram, pred, max_len: int | None = None) -> set[int]:
    max_len = max_len or D.num_vertices
    out: set[int] = set()
    for cyc in simple_cycles(D, pred, max_len):
        out.update(cyc)
    return out


def catastrophic(E: SymplecticEncoder, max_len: int | None = None, diagram: BruteDiagram | None = None):
    """Search simple zero-physical cycles for a step that can carry nonzero logical weight.

    Returns ``(flag, witness_edges)``.
    """
    D = diagram or BruteDiagram(E)
    max_len = max_len or D.num_vertices
    for cyc in simple_cycles(D, zero_physical, max_len):
        steps = list(zip(cyc, cyc[1:] + cyc[:1]))
        for i, (u, w) in enumerate(steps):
            e = D.pick(u, w, lambda e: zero_physical(e) and e.logical_weight > 0)
            if e is not None:
                rest = [D.pick(a, b, zero_physical) for a, b in steps[i + 1 :] + steps[:i]]
                return True, [e] + rest
    return False, None


def check_catastrophic_witness(E: SymplecticEncoder, witness) -> bool:
    """Recompute each witness edge from the encoder and check it closes a zero-physical cycle."""
    from .encoder import transition
    from .pauli import pauli_to_index

    if not witness:
        return False
    params = E.params
    for e in witness:
        P, M2 = transition(E, index_to_pauli(e.source, params.m, params.p), e.ancilla, e.logical)
        if pauli_to_index(M2) != e.target or P != e.physical or e.physical_weight:
            return False
    closes = all(a.target == b.source for a, b in zip(witness, list(witness[1:]) + [witness[0]]))
    return closes and any(e.logical_weight for e in witness)


def _walk_hits_quiet_loop(D: BruteDiagram, start: int, length: int) -> bool:
    """Does some walk of <= ``length`` identity-logical steps from ``start`` contain a quiet loop?"""
    succ = D.successors(identity_logical)
    stack = [(start,)]
    while stack:
        walk = stack.pop()
        if len(walk) > 1:
            last = walk[-1]
            # a quiet loop closes at the last vertex if every step since an earlier visit is quiet
            for i in range(len(walk) - 2, -1, -1):
                if not D.has(walk[i], walk[i + 1], quiet):
                    break
                if walk[i] == last:
                    return True
        if len(walk) - 1 < length:
            for w in succ.get(walk[-1], ()):
                stack.append(walk + (w,))
    return False


def recursive(E: SymplecticEncoder, path_len: int = 8, diagram: BruteDiagram | None = None):
    """Check the recursive definition path by path.

    For every vertex on a zero-physical cycle and every edge of logical weight
    one out of it that is not itself on a zero-physical cycle, walks of up to
    ``path_len`` edges (the weight-one edge included) are enumerated; any walk
    that contains a zero-physical loop is a counterexample.  Returns
    ``(flag, counterexample)`` with the counterexample as ``(edge, None)``.
    """
    D = diagram or BruteDiagram(E)
    V = D.num_vertices
    loops = cycle_vertices(D, zero_physical, V)
    zero_succ = D.successors(zero_physical)

    def on_zero_cycle(e: Edge) -> bool:
        if not zero_physical(e):
            return False
        seen, stack = {e.target}, [e.target]
        while stack:
            u = stack.pop()
            if u == e.source:
                return True
            for w in zero_succ.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    for v in sorted(loops):
        for e in (e for e in D.edges if e.source == v and e.logical_weight == 1):
            if on_zero_cycle(e):
                continue
            if _walk_hits_quiet_loop(D, e.target, path_len - 1):
                return False, e
    return True, None


def finite_memory(E: SymplecticEncoder, diagram: BruteDiagram | None = None) -> set[int]:
    """Vertices with a standard path to the identity, by forward search from every vertex."""
    D = diagram or BruteDiagram(E)
    succ = D.successors(identity_logical)
    out = set()
    for v in range(D.num_vertices):
        seen, stack = {v}, [v]
        while stack:
            u = stack.pop()
            if u == 0:
                out.add(v)
                break
            for w in succ.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return out


def centralizer_scan(members, m: int, p: int) -> set[int]:
    """Memory Paulis commuting with every listed member, by direct scan."""
    ms = [index_to_pauli(v, m, p) for v in members]
    out = set()
    for v in range(p ** (2 * m)):
        P = index_to_pauli(v, m, p)
        if all(commutator(P, Q) == 0 for Q in ms):
            out.add(v)
    return out


def reachable(D: BruteDiagram, pred, start) -> set[int]:
    succ = D.successors(pred)
    seen = set(start)
    stack = list(start)
    while stack:
        u = stack.pop()
        for w in succ.get(u, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def terminating_paths(D: BruteDiagram, max_len: int) -> set[tuple[int, ...]]:
    """Simple non-identity standard paths whose next step can land on the identity."""
    succ = D.successors(identity_logical)
    out = set()
    stack = [(v,) for v in range(1, D.num_vertices)]
    while stack:
        path = stack.pop()
        if 0 in succ.get(path[-1], ()):
            out.add(path)
        if len(path) < max_len:
            for w in succ.get(path[-1], ()):
                if w != 0 and w not in path:
                    stack.append(path + (w,))
    return out
