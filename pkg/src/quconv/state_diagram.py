"""The state diagram of a convolutional encoder and the graph searches over it.

Vertices are the ``p^{2m}`` memory Paulis, numbered by
:func:`~quconv.pauli.pauli_to_index`.  From every vertex ``M`` there is one
edge per pair ``(S, L)`` with ``S`` a Z-type ancilla Pauli and ``L`` any
logical Pauli; the edge goes to ``M'`` and is labelled with the physical
output ``P`` where ``U|M, S, L> = |P, M'>``.

:func:`edges_from` computes edges one at a time from the encoder.  The
whole-graph algorithms work on an :class:`EdgeTable`, a vectorised copy of
every edge built on first use and cached on the encoder.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .encoder import CodeParams, SymplecticEncoder, require_valid, transition
from .exceptions import EnumerationBudgetExceeded, ScaleGuard
from .pauli import PauliOp, index_to_pauli, pauli_to_index, weight

MAX_VERTICES = 1_000_000
MAX_EDGES = 4_000_000
DEFAULT_CYCLE_BUDGET = 20_000
DEFAULT_PATH_BUDGET = 20_000


@dataclass(frozen=True)
class EdgeFilter:
    require_zero_physical: bool = False
    require_identity_logical: bool = False
    reject_all: bool = False

    @property
    def require_zero_physical_and_identity_logical(self) -> bool:
        return self.require_zero_physical and self.require_identity_logical

    def accepts(self, edge: "Edge") -> bool:
        if self.reject_all:
            return False
        if self.require_zero_physical and edge.physical_weight:
            return False
        if self.require_identity_logical and edge.logical_weight:
            return False
        return True

    def mask(self, table: "EdgeTable") -> np.ndarray:
        if self.reject_all:
            return np.zeros(table.size, dtype=bool)
        keep = np.ones(table.size, dtype=bool)
        if self.require_zero_physical:
            keep &= table.phys_zero
        if self.require_identity_logical:
            keep &= table.logical_weight == 0
        return keep


ALL_EDGES = EdgeFilter()
NO_EDGES = EdgeFilter(reject_all=True)
ZERO_PHYSICAL = EdgeFilter(require_zero_physical=True)
IDENTITY_LOGICAL = EdgeFilter(require_identity_logical=True)
ZERO_PHYSICAL_IDENTITY_LOGICAL = EdgeFilter(require_zero_physical=True, require_identity_logical=True)


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    ancilla: PauliOp
    logical: PauliOp
    physical: PauliOp

    @property
    def physical_weight(self) -> int:
        return weight(self.physical)

    @property
    def logical_weight(self) -> int:
        return weight(self.logical)


def vertex_pauli(v: int, params: CodeParams) -> PauliOp:
    return index_to_pauli(v, params.m, params.p)


def ancilla_pauli(s: int, params: CodeParams) -> PauliOp:
    """The ``s``-th Z-type ancilla Pauli (``z`` digits of ``s`` in base p)."""
    a = params.ancilla
    zs = []
    for _ in range(a):
        s, d = divmod(s, params.p)
        zs.append(d)
    return PauliOp(params.p, (0,) * a, tuple(zs))


def logical_pauli(l: int, params: CodeParams) -> PauliOp:
    return index_to_pauli(l, params.k, params.p)


def edges_from(E: SymplecticEncoder, v: int, filter: EdgeFilter = ALL_EDGES) -> Iterator[Edge]:
    """Edges leaving ``v`` in ``(S, L)`` index order, computed directly from ``E``."""
    require_valid(E)
    params = E.params
    M = vertex_pauli(v, params)
    for s in range(params.p**params.ancilla):
        S = ancilla_pauli(s, params)
        for l in range(params.p ** (2 * params.k)):
            L = logical_pauli(l, params)
            P, M2 = transition(E, M, S, L)
            edge = Edge(v, pauli_to_index(M2), S, L, P)
            if filter.accepts(edge):
                yield edge


# -- vectorised edge table -----------------------------------------------------


def _digits(values: np.ndarray, count: int, p: int) -> np.ndarray:
    out = np.empty((values.size, count), dtype=np.int64)
    v = np.array(values, dtype=np.int64)
    for j in range(count):
        out[:, j] = v % p
        v //= p
    return out


@dataclass(frozen=True)
class _Template:
    vertex_inputs: np.ndarray  # V x 2N
    drive_inputs: np.ndarray  # (S*L) x 2N, ancilla and logical part of the input
    s_idx: np.ndarray
    l_idx: np.ndarray
    logical_weight: np.ndarray  # per (S, L)
    add: np.ndarray  # add[a, b] = index of vertex(a) * vertex(b)
    edge_src: np.ndarray
    edge_s: np.ndarray
    edge_l: np.ndarray
    edge_lw: np.ndarray


@lru_cache(maxsize=32)
def _template(params: CodeParams) -> _Template:
    p, m, n, k = params.astuple()
    a = params.ancilla
    N = params.qudits
    V, S, L = p ** (2 * m), p**a, p ** (2 * k)
    if V * S * L > MAX_EDGES:
        raise ScaleGuard(f"state diagram has {V * S * L} edges, above the guard of {MAX_EDGES}")
    vd = _digits(np.arange(V), 2 * m, p)
    Xv = np.zeros((V, 2 * N), dtype=np.int64)
    Xv[:, 0:m] = vd[:, :m]
    Xv[:, N : N + m] = vd[:, m:]
    s_idx, l_idx = np.divmod(np.arange(S * L, dtype=np.int64), L)
    Xd = np.zeros((S * L, 2 * N), dtype=np.int64)
    if a:
        Xd[:, N + m : N + m + a] = _digits(s_idx, a, p)
    if k:
        ld = _digits(l_idx, 2 * k, p)
        Xd[:, m + a : N] = ld[:, :k]
        Xd[:, N + m + a : 2 * N] = ld[:, k:]
        lw = ((ld[:, :k] != 0) | (ld[:, k:] != 0)).sum(axis=1)
    else:
        lw = np.zeros(S * L, dtype=np.int64)
    weights = p ** np.arange(2 * m, dtype=np.int64)
    add = (((vd[:, None, :] + vd[None, :, :]) % p) @ weights) if V <= 1024 else None
    D = S * L
    cols = [np.repeat(np.arange(V, dtype=np.int64), D), np.tile(s_idx, V), np.tile(l_idx, V), np.tile(lw, V)]
    for arr in cols + [Xv, Xd]:
        arr.setflags(write=False)
    return _Template(Xv, Xd, s_idx, l_idx, lw, add, *cols)


class EdgeTable:
    """Every edge of the state diagram as parallel arrays, in :func:`edges_from` order.

    Edge ``(M, S, L)`` has row index ``(M * p^{n-k} + s) * p^{2k} + l``.  Because
    the encoder is linear, the output splits into a vertex part and an
    ``(S, L)`` part; the table is assembled from the two without forming the
    full ``edges x 2(m+n)`` product.
    """

    def __init__(self, E: SymplecticEncoder):
        require_valid(E)
        params = E.params
        if params.num_vertices > MAX_VERTICES:
            raise ScaleGuard(f"{params.num_vertices} vertices exceeds the guard of {MAX_VERTICES}")
        p, m, n, _ = params.astuple()
        N = params.qudits
        V = params.num_vertices
        tpl = _template(params)
        D = tpl.drive_inputs.shape[0]
        Mt = E.matrix.T
        out_v = (tpl.vertex_inputs @ Mt) % p
        out_d = (tpl.drive_inputs @ Mt) % p
        wm = p ** np.arange(2 * m, dtype=np.int64)
        wn = p ** np.arange(2 * n, dtype=np.int64)

        def mem(o):
            return np.concatenate([o[:, n:N], o[:, N + n :]], axis=1)

        def phys(o):
            return np.concatenate([o[:, :n], o[:, N : N + n]], axis=1)

        if tpl.add is not None:
            self.dst = tpl.add[(mem(out_v) @ wm)[:, None], (mem(out_d) @ wm)[None, :]].ravel()
        else:
            self.dst = (((mem(out_v)[:, None, :] + mem(out_d)[None, :, :]) % p) @ wm).ravel()
        phys_v = phys(out_v) @ wn
        neg_phys_d = ((-phys(out_d)) % p) @ wn
        self.phys_zero = (phys_v[:, None] == neg_phys_d[None, :]).ravel()
        self.encoder = E
        self.params = params
        self.num_vertices = V
        self.src = tpl.edge_src
        self.s_idx = tpl.edge_s
        self.l_idx = tpl.edge_l
        self.logical_weight = tpl.edge_lw
        self.size = V * D

    def edge(self, i: int) -> Edge:
        """Materialise row ``i`` as an :class:`Edge` (physical label recomputed from the encoder)."""
        params = self.params
        v, S, L = int(self.src[i]), ancilla_pauli(int(self.s_idx[i]), params), logical_pauli(int(self.l_idx[i]), params)
        P, M2 = transition(self.encoder, vertex_pauli(v, params), S, L)
        return Edge(v, pauli_to_index(M2), S, L, P)

    def adjacency(self, mask: np.ndarray) -> csr_matrix:
        V = self.num_vertices
        data = np.ones(int(mask.sum()), dtype=np.int32)
        return csr_matrix((data, (self.src[mask], self.dst[mask])), shape=(V, V))

    def successors(self, mask: np.ndarray) -> list[list[int]]:
        """Sorted, de-duplicated successor lists of the filtered subgraph."""
        succ: list[set] = [set() for _ in range(self.num_vertices)]
        for u, w in zip(self.src[mask].tolist(), self.dst[mask].tolist()):
            succ[u].add(w)
        return [sorted(s) for s in succ]

    def first_edge(self, mask: np.ndarray) -> dict[tuple[int, int], int]:
        """Lowest-index filtered edge for each ordered vertex pair."""
        rows = np.nonzero(mask)[0]
        pairs = {}
        for i, u, w in zip(rows.tolist(), self.src[rows].tolist(), self.dst[rows].tolist()):
            pairs.setdefault((u, w), i)
        return pairs


def edge_table(E: SymplecticEncoder) -> EdgeTable:
    table = E.__dict__.get("_edge_table")
    if table is None:
        table = EdgeTable(E)
        E.__dict__["_edge_table"] = table
    return table


def _as_table(G) -> EdgeTable:
    return G if isinstance(G, EdgeTable) else edge_table(G)


# -- component structure ------------------------------------------------------


SMALL_SUBGRAPH = 4096


def tarjan(succ: dict[int, list[int]]) -> list[list[int]]:
    """Strongly connected components of a sparse graph given as successor lists (iterative Tarjan)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in sorted(succ):
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work and low[v] < low[work[-1][0]]:
                    low[work[-1][0]] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(comp)
    return comps


def scc_labels(table: EdgeTable, mask: np.ndarray) -> np.ndarray:
    """Component id of every vertex; ids are the smallest vertex in each component."""
    V = table.num_vertices
    labels = np.arange(V, dtype=np.int64)
    src, dst = table.src[mask], table.dst[mask]
    if src.size <= SMALL_SUBGRAPH:
        succ: dict[int, list[int]] = {}
        for u, w in zip(src.tolist(), dst.tolist()):
            if u != w:
                succ.setdefault(u, []).append(w)
        for comp in tarjan(succ):
            if len(comp) > 1:
                labels[comp] = min(comp)
        return labels
    _, raw = connected_components(table.adjacency(mask), directed=True, connection="strong")
    smallest = np.full(raw.max() + 1, V, dtype=np.int64)
    np.minimum.at(smallest, raw, labels)
    return smallest[raw]


def scc(G, filter: EdgeFilter = ALL_EDGES) -> dict[int, list[int]]:
    """Strongly connected components keyed by their smallest vertex."""
    table = _as_table(G)
    labels = scc_labels(table, filter.mask(table))
    comps: dict[int, list[int]] = {}
    for v, c in enumerate(labels.tolist()):
        comps.setdefault(c, []).append(v)
    return comps


def loop_mask(table: EdgeTable, mask: np.ndarray, labels: np.ndarray | None = None) -> np.ndarray:
    """Vertices lying on at least one cycle of the filtered subgraph."""
    if labels is None:
        labels = scc_labels(table, mask)
    sizes = np.bincount(labels, minlength=table.num_vertices)
    on = sizes[labels] >= 2
    src, dst = table.src[mask], table.dst[mask]
    on[src[src == dst]] = True
    return on


def loop_vertices(G, filter: EdgeFilter = ALL_EDGES) -> frozenset[int]:
    table = _as_table(G)
    return frozenset(np.nonzero(loop_mask(table, filter.mask(table)))[0].tolist())


def closure_mask(table: EdgeTable, mask: np.ndarray, start: np.ndarray, backward: bool = False) -> np.ndarray:
    """Vertices reachable from (or, if ``backward``, reaching) ``start`` via filtered edges."""
    src, dst = table.src[mask], table.dst[mask]
    if backward:
        src, dst = dst, src
    seen = start.copy()
    frontier = start.copy()
    while frontier.any():
        hit = frontier[src]
        new = np.zeros_like(seen)
        new[dst[hit]] = True
        new &= ~seen
        seen |= new
        frontier = new
    return seen


def reachable(G, filter: EdgeFilter, start) -> frozenset[int]:
    table = _as_table(G)
    s = np.zeros(table.num_vertices, dtype=bool)
    s[list(start)] = True
    return frozenset(np.nonzero(closure_mask(table, filter.mask(table), s))[0].tolist())


def shortest_path(table: EdgeTable, mask: np.ndarray, source: int, targets) -> list[int] | None:
    """Edge row indices of a shortest filtered path from ``source`` into ``targets`` (BFS)."""
    targets = set(targets)
    if source in targets:
        return []
    first = table.first_edge(mask)
    succ: dict[int, list[tuple[int, int]]] = {}
    for (u, w), i in sorted(first.items()):
        succ.setdefault(u, []).append((w, i))
    parent = {source: None}
    queue = [source]
    for u in queue:
        for w, i in succ.get(u, ()):
            if w in parent:
                continue
            parent[w] = (u, i)
            if w in targets:
                path = []
                while parent[w] is not None:
                    u2, i2 = parent[w]
                    path.append(i2)
                    w = u2
                return path[::-1]
            queue.append(w)
    return None


# -- bounded enumeration -----------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __len__(self):
        return len(self.vertices)

    def repeated(self, times: int) -> "Cycle":
        return Cycle(self.vertices * times, self.edges * times)


def enumerate_simple_cycles(
    G,
    filter: EdgeFilter = ALL_EDGES,
    max_len: int | None = None,
    budget: int = DEFAULT_CYCLE_BUDGET,
) -> Iterator[Cycle]:
    """Simple cycles of length <= ``max_len``, each once, starting at its smallest vertex.

    Each step is represented by the lowest-index filtered edge between the two
    vertices.  Raises :class:`EnumerationBudgetExceeded` after ``budget`` cycles.
    """
    table = _as_table(G)
    mask = filter.mask(table)
    if max_len is None:
        max_len = table.num_vertices
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    succ = table.successors(mask)
    first = table.first_edge(mask)
    count = 0
    for s in range(table.num_vertices):
        stack = [(s, iter(w for w in succ[s] if w >= s))]
        path = [s]
        on_path = {s}
        while stack:
            u, it = stack[-1]
            w = next(it, None)
            if w is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if w == s:
                count += 1
                if count > budget:
                    raise EnumerationBudgetExceeded(f"more than {budget} simple cycles")
                verts = tuple(path)
                edges = tuple(
                    table.edge(first[(verts[i], verts[(i + 1) % len(verts)])]) for i in range(len(verts))
                )
                yield Cycle(verts, edges)
            elif w not in on_path and len(path) < max_len:
                path.append(w)
                on_path.add(w)
                stack.append((w, iter(x for x in succ[w] if x >= s)))


def enumerate_finite_standard_paths(
    G,
    max_len: int | None = None,
    budget: int = DEFAULT_PATH_BUDGET,
) -> Iterator[tuple[int, ...]]:
    """Memory sequences ``(M_0, ..., M_{t-1})`` of terminating standard paths.

    Every step follows an identity-logical edge, the step after ``M_{t-1}``
    lands on the identity vertex, no listed state is the identity and no state
    repeats.  Enumerated backwards from the identity vertex.
    """
    table = _as_table(G)
    if max_len is None:
        max_len = table.num_vertices
    mask = IDENTITY_LOGICAL.mask(table)
    A = table.adjacency(mask).T.tocsr()
    A.sum_duplicates()
    A.sort_indices()
    preds = [[u for u in A.indices[A.indptr[v] : A.indptr[v + 1]].tolist() if u != 0] for v in range(table.num_vertices)]
    count = 0
    path: list[int] = []
    on_path: set[int] = set()
    stack = [iter(preds[0])]
    while stack:
        u = next(stack[-1], None)
        if u is None:
            stack.pop()
            if path:
                on_path.discard(path.pop())
            continue
        if u in on_path:
            continue
        path.append(u)
        on_path.add(u)
        count += 1
        if count > budget:
            raise EnumerationBudgetExceeded(f"more than {budget} finite standard paths")
        yield tuple(reversed(path))
        if len(path) < max_len:
            stack.append(iter(preds[u]))
        else:
            on_path.discard(path.pop())

