"""Catastrophic / recursive classification and the memory subgroups behind it.

The decision procedures run on the vectorised :class:`~quconv.state_diagram.EdgeTable`:

* catastrophic: some zero-physical edge with nonzero logical weight has both
  endpoints in one strongly connected component of the zero-physical
  subgraph;
* non-recursive: from a vertex on a zero-physical loop, an admissible edge of
  logical weight exactly one leads (through identity-logical edges) to a
  vertex on a zero-physical, identity-logical loop.

Everything here is deterministic for a fixed encoder and budget set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import prime_field as pf
from .encoder import SymplecticEncoder, require_valid, transition
from .exceptions import EnumerationBudgetExceeded, InvalidSequence, MaxStepsExceeded, ScaleGuard
from .pauli import PauliOp, commutator, index_to_pauli, pauli_to_index
from .state_diagram import (
    DEFAULT_CYCLE_BUDGET,
    DEFAULT_PATH_BUDGET,
    MAX_VERTICES,
    ZERO_PHYSICAL,
    Cycle,
    Edge,
    EdgeTable,
    _digits,
    closure_mask,
    edge_table,
    edges_from,
    enumerate_finite_standard_paths,
    enumerate_simple_cycles,
    loop_mask,
    scc_labels,
    shortest_path,
    vertex_pauli,
)

ANCILLA_MODES = ("standard", "impulse")
DEFAULT_PAIR_BUDGET = 200_000


@dataclass(frozen=True)
class Budgets:
    """Enumeration limits.  ``None`` lengths default to ``p^{2m}``, ``None`` repetitions to ``p``."""

    max_len: int | None = None
    repetition_budget: int | None = None
    cycle_budget: int = DEFAULT_CYCLE_BUDGET
    path_budget: int = DEFAULT_PATH_BUDGET
    pair_budget: int = DEFAULT_PAIR_BUDGET

    @classmethod
    def from_env(cls, **overrides) -> "Budgets":
        """Defaults overridable through ``QUCONV_MAX_LEN``, ``QUCONV_REPETITION_BUDGET``,
        ``QUCONV_CYCLE_BUDGET``, ``QUCONV_PATH_BUDGET`` and ``QUCONV_PAIR_BUDGET``."""
        values = {}
        for name in ("max_len", "repetition_budget", "cycle_budget", "path_budget", "pair_budget"):
            raw = os.environ.get(f"QUCONV_{name.upper()}")
            if raw:
                values[name] = int(raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def resolve(self, E: SymplecticEncoder) -> "Budgets":
        return Budgets(
            max_len=self.max_len if self.max_len is not None else E.params.num_vertices,
            repetition_budget=self.repetition_budget if self.repetition_budget is not None else E.p,
            cycle_budget=self.cycle_budget,
            path_budget=self.path_budget,
            pair_budget=self.pair_budget,
        )


# -- shared structure ---------------------------------------------------------


@dataclass
class _Structure:
    table: EdgeTable
    zero_phys: np.ndarray  # edge mask
    labels: np.ndarray  # SCC ids of the zero-physical subgraph
    in_zero_scc: np.ndarray  # edge mask: zero-physical edge inside one zero-physical SCC
    loop: np.ndarray  # vertex mask, on a zero-physical loop
    walk: np.ndarray  # edge mask followed after the weight-one edge
    quiet_loop: np.ndarray  # vertex mask, on a zero-physical loop made of ``walk`` edges
    reaches_quiet: np.ndarray  # vertex mask, can reach ``quiet_loop`` along ``walk`` edges


def _structure(E, ancilla_mode: str = "standard") -> _Structure:
    if ancilla_mode not in ANCILLA_MODES:
        raise ValueError(f"ancilla_mode must be one of {ANCILLA_MODES}, got {ancilla_mode!r}")
    table = E if isinstance(E, EdgeTable) else edge_table(E)
    key = f"_structure_{ancilla_mode}"
    cached = table.__dict__.get(key)
    if cached is not None:
        return cached
    zp = table.phys_zero
    labels = scc_labels(table, zp)
    in_zero_scc = zp & (labels[table.src] == labels[table.dst])
    loop = loop_mask(table, zp, labels)
    walk = table.logical_weight == 0
    if ancilla_mode == "impulse":
        walk = walk & (table.s_idx == 0)
    quiet = loop_mask(table, zp & walk)
    reaches = closure_mask(table, walk, quiet, backward=True)
    st = _Structure(table, zp, labels, in_zero_scc, loop, walk, quiet, reaches)
    table.__dict__[key] = st
    return st


def _catastrophic_rows(st: _Structure) -> np.ndarray:
    return np.nonzero(st.in_zero_scc & (st.table.logical_weight > 0))[0]


def _counterexample_rows(st: _Structure) -> np.ndarray:
    t = st.table
    ok = st.loop[t.src] & (t.logical_weight == 1) & ~st.in_zero_scc & st.reaches_quiet[t.dst]
    return np.nonzero(ok)[0]


def flags(E, ancilla_mode: str = "standard") -> tuple[bool, bool]:
    """``(catastrophic, recursive)`` without building witnesses."""
    st = _structure(E, ancilla_mode)
    return bool(_catastrophic_rows(st).size), not _counterexample_rows(st).size


def _cycle_through(table: EdgeTable, mask: np.ndarray, u: int) -> list[int]:
    """Edge rows of a shortest filtered cycle through ``u``."""
    rows = np.nonzero(mask & (table.src == u))[0]
    best = None
    for i in rows.tolist():
        w = int(table.dst[i])
        if w == u:
            return [i]
        back = shortest_path(table, mask, w, {u})
        if back is not None and (best is None or len(back) + 1 < len(best)):
            best = [i] + back
    if best is None:
        raise AssertionError(f"vertex {u} is not on a filtered cycle")
    return best


# -- classification ---------------------------------------------------------------


@dataclass(frozen=True)
class RecursiveCounterexample:
    """Weight-one edge out of a zero-physical loop vertex, then a walk into a quiet loop."""

    first_edge: Edge
    approach: tuple[Edge, ...]
    loop: tuple[Edge, ...]

    @property
    def edges(self) -> tuple[Edge, ...]:
        return (self.first_edge,) + self.approach + self.loop


def is_catastrophic(E: SymplecticEncoder, max_len: int | None = None) -> tuple[bool, tuple[Edge, ...] | None]:
    """Decide catastrophicity; the witness is a zero-physical cycle whose first edge has logical weight > 0.

    ``max_len`` is accepted for interface symmetry; the component test is exact
    and the witness is a shortest return path, never longer than ``p^{2m}``.
    """
    require_valid(E)
    st = _structure(E)
    rows = _catastrophic_rows(st)
    if not rows.size:
        return False, None
    t = st.table
    i = int(rows[0])
    back = shortest_path(t, st.zero_phys, int(t.dst[i]), {int(t.src[i])})
    return True, tuple(t.edge(j) for j in [i] + back)


def is_recursive(
    E: SymplecticEncoder, max_len: int | None = None, ancilla_mode: str = "standard"
) -> tuple[bool, RecursiveCounterexample | None]:
    require_valid(E)
    st = _structure(E, ancilla_mode)
    rows = _counterexample_rows(st)
    if not rows.size:
        return True, None
    t = st.table
    i = int(rows[0])
    quiet = set(np.nonzero(st.quiet_loop)[0].tolist())
    approach = shortest_path(t, st.walk, int(t.dst[i]), quiet)
    end = int(t.dst[approach[-1]]) if approach else int(t.dst[i])
    loop = _cycle_through(t, st.zero_phys & st.walk, end)
    return False, RecursiveCounterexample(
        t.edge(i), tuple(t.edge(j) for j in approach), tuple(t.edge(j) for j in loop)
    )


# -- subgroups ----------------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupDescriptor:
    members: tuple[int, ...]
    generators: tuple[int, ...]
    closure_verified: bool
    m: int
    p: int
    name: str = ""

    def __contains__(self, v: int) -> bool:
        return v in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_members_set")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_members_set", s)
        return s

    def __len__(self):
        return len(self.members)

    def paulis(self) -> list[PauliOp]:
        return [index_to_pauli(v, self.m, self.p) for v in self.members]


def vertex_vectors(ids, m: int, p: int) -> np.ndarray:
    """``(x | z)`` vectors of memory vertices, as rows."""
    return _digits(np.asarray(list(ids), dtype=np.int64), 2 * m, p)


def vector_ids(vectors: np.ndarray, p: int) -> np.ndarray:
    vectors = np.atleast_2d(vectors)
    return vectors @ (p ** np.arange(vectors.shape[1], dtype=np.int64))


def describe_subgroup(ids, m: int, p: int, name: str = "") -> SubgroupDescriptor:
    """Wrap a vertex set, pick a greedy basis as generators and check it is a subgroup."""
    members = tuple(sorted(int(v) for v in ids))
    gens: list[int] = []
    basis_rows: list[np.ndarray] = []
    r = 0
    vecs = vertex_vectors(members, m, p) if members else np.zeros((0, 2 * m), dtype=np.int64)
    for v, vec in zip(members, vecs):
        if not vec.any():
            continue
        trial = basis_rows + [vec]
        rr = pf.rank(np.stack(trial), p)
        if rr > r:
            basis_rows, r = trial, rr
            gens.append(v)
    closed = 0 in members and len(members) == p**r
    return SubgroupDescriptor(members, tuple(gens), closed, m, p, name)


def finite_memory_group(E: SymplecticEncoder, max_len: int | None = None) -> SubgroupDescriptor:
    """Memory states from which standard (identity-logical) edges reach the identity vertex."""
    require_valid(E)
    t = edge_table(E)
    start = np.zeros(t.num_vertices, dtype=bool)
    start[0] = True
    ids = np.nonzero(closure_mask(t, t.logical_weight == 0, start, backward=True))[0]
    return describe_subgroup(ids.tolist(), E.params.m, E.p, "finite_memory")


def zero_cycle_group(E: SymplecticEncoder, max_len: int | None = None) -> SubgroupDescriptor:
    """Memory states lying on a zero-physical-weight cycle."""
    require_valid(E)
    st = _structure(E)
    return describe_subgroup(np.nonzero(st.loop)[0].tolist(), E.params.m, E.p, "zero_cycle")


def centralizer(S: SubgroupDescriptor, m: int | None = None, p: int | None = None) -> SubgroupDescriptor:
    """Memory Paulis commuting with every generator of ``S``, via a nullspace over F_p."""
    m = S.m if m is None else m
    p = S.p if p is None else p
    if p ** (2 * m) > MAX_VERTICES:
        raise ScaleGuard(f"centralizer member set of up to {p ** (2 * m)} elements exceeds guard")
    gens = S.generators or tuple(v for v in S.members if v)
    if not gens:
        return describe_subgroup(range(p ** (2 * m)), m, p, "centralizer")
    G = vertex_vectors(gens, m, p)
    # c(v, g) = z_v.x_g - x_v.z_g = (-z_g | x_g) . v
    rows = np.concatenate([-G[:, m:], G[:, :m]], axis=1) % p
    basis = pf.mat_nullspace(rows, p)
    if basis:
        ids = np.unique(vector_ids(pf.span(basis, p), p))
    else:
        ids = np.array([0])
    return describe_subgroup(ids.tolist(), m, p, "centralizer")


def infinite_memory_states(E: SymplecticEncoder) -> tuple[int, ...]:
    """Complement of the finite memory group; no quotient structure is built."""
    fin = set(finite_memory_group(E).members)
    return tuple(v for v in range(E.params.num_vertices) if v not in fin)


# -- commutator criterion ---------------------------------------------------------


@dataclass(frozen=True)
class CriterionRecord:
    f_path: tuple[int, ...]  # m_0^F .. m_{t-1}^F
    p_cycle: tuple[int, ...]  # m_1^P .. m_r^P
    repetitions: int
    sum: int
    doubled_sum: int


@dataclass
class CriterionScan:
    records: list[CriterionRecord]
    criterion_met: bool
    complete: bool
    paths_enumerated: int
    cycles_enumerated: int
    notes: list[str] = field(default_factory=list)

    @property
    def nonzero_records(self) -> list[CriterionRecord]:
        return [r for r in self.records if r.sum]


def criterion_sum(f_path, p_cycle, m: int, p: int) -> int:
    """``Σ_{j=1..t-1} Σ_k c(m_j^F, m_k^P) mod p``, folded through bilinearity of ``c``."""
    inner = list(f_path)[1:]
    if not inner or not len(p_cycle):
        return 0
    f = vertex_vectors(inner, m, p).sum(axis=0) % p
    q = vertex_vectors(p_cycle, m, p).sum(axis=0) % p
    return int((f[m:] @ q[:m] - f[:m] @ q[m:]) % p)


def criterion_scan(E: SymplecticEncoder, budgets: Budgets | None = None) -> CriterionScan:
    """Pair every terminating standard path with every zero-physical cycle (and its repeats)."""
    require_valid(E)
    b = (budgets or Budgets()).resolve(E)
    m, p = E.params.m, E.p
    complete = True
    notes = []
    paths: list[tuple[int, ...]] = []
    try:
        for path in enumerate_finite_standard_paths(E, b.max_len, b.path_budget):
            paths.append(path)
    except EnumerationBudgetExceeded as exc:
        complete = False
        notes.append(str(exc))
    cycles: list[Cycle] = []
    try:
        for cyc in enumerate_simple_cycles(E, ZERO_PHYSICAL, b.max_len, b.cycle_budget):
            cycles.append(cyc)
    except EnumerationBudgetExceeded as exc:
        complete = False
        notes.append(str(exc))
    records = []
    met = False
    for path in paths:
        for cyc in cycles:
            base = criterion_sum(path, cyc.vertices, m, p)
            for q in range(1, b.repetition_budget + 1):
                if len(records) >= b.pair_budget:
                    complete = False
                    notes.append(f"more than {b.pair_budget} criterion pairs")
                    return CriterionScan(records, met, complete, len(paths), len(cycles), notes)
                s = (q * base) % p
                met |= s != 0
                records.append(CriterionRecord(path, cyc.vertices * q, q, s, (2 * s) % p))
    return CriterionScan(records, met, complete, len(paths), len(cycles), notes)


def _has_edge(E, u: int, w: int, zero_physical: bool, identity_logical: bool) -> bool:
    for e in edges_from(E, u):
        if e.target == w and (not zero_physical or e.physical_weight == 0) and (
            not identity_logical or e.logical_weight == 0
        ):
            return True
    return False


def phase_oracle(f_path, p_cycle, E: SymplecticEncoder, check: bool = True) -> int:
    """Total commutation exponent between a terminating path and a zero-physical cycle.

    Bookkeeping is explicit: every memory state of the path on the output side
    (``m_1..m_{t-1}`` then the terminal identity) and on the input side
    (``m_0..m_{t-1}``) is commuted past every state of the cycle, one
    commutator at a time.
    """
    params = E.params
    f = [int(v) for v in f_path]
    q = [int(v) for v in p_cycle]
    if not f or not q:
        raise InvalidSequence("both sequences must be non-empty")
    if check:
        steps = list(zip(f, f[1:] + [0]))
        for u, w in steps:
            if not _has_edge(E, u, w, zero_physical=False, identity_logical=True):
                raise InvalidSequence(f"no standard edge {u} -> {w} on the path")
        for u, w in zip(q, q[1:] + q[:1]):
            if not _has_edge(E, u, w, zero_physical=True, identity_logical=False):
                raise InvalidSequence(f"no zero-physical edge {u} -> {w} on the cycle")
    F = [vertex_pauli(v, params) for v in f]
    Q = [vertex_pauli(v, params) for v in q]
    identity = PauliOp.identity(params.m, params.p)
    outputs = F[1:] + [identity]
    inputs = F
    total = 0
    for a in outputs:
        for b in Q:
            total += commutator(a, b)
    for a in inputs:
        for b in Q:
            total += commutator(a, b)
    return total % params.p


# -- precipitation -----------------------------------------------------------------


@dataclass
class PrecipitationOrbit:
    ancilla_index: int
    exponent: int
    trajectory: list[int]  # memory after each frame, g_1, g_2, ...
    physical: list[PauliOp]  # h_1, h_2, ...
    transient: int | None  # step at which the loop is entered
    loop_length: int | None
    schedule: list[int]  # frames at which Z_i^a is injected
    reinjected_trajectory: list[int]
    steps_to_identity: int
    bound: int
    within_bound: bool


def precipitation_orbit(E: SymplecticEncoder, ancilla_index: int, exponent: int, max_steps: int | None = None) -> PrecipitationOrbit:
    """Follow the memory orbit started by ``Z_i^a`` on ancilla ``i`` (1-based) and force it to the identity.

    If the orbit closes into a loop of length ``l`` entered at step ``t``,
    ``Z_i^a`` is injected again every ``l`` frames, ``p`` injections in all;
    the ``p`` overlapping copies cancel and the memory reaches the identity
    no later than ``t + p*l`` frames.
    """
    require_valid(E)
    params = E.params
    p, m = params.p, params.m
    if not 1 <= ancilla_index <= params.ancilla:
        raise ValueError(f"ancilla index {ancilla_index} outside [1, {params.ancilla}]")
    if not 0 <= exponent < p:
        raise ValueError(f"exponent {exponent} outside [0, {p})")
    if max_steps is None:
        max_steps = params.num_vertices + 1
    a_count = params.ancilla
    kick = PauliOp.single(a_count, p, ancilla_index - 1, z=exponent)
    quiet_s = PauliOp.identity(a_count, p)
    quiet_l = PauliOp.identity(params.k, p)
    zero_m = PauliOp.identity(m, p)

    if exponent == 0:
        return PrecipitationOrbit(ancilla_index, 0, [], [], None, None, [], [], 0, 0, True)

    traj, phys = [], []
    seen: dict[int, int] = {}
    M, S = zero_m, kick
    for step in range(1, max_steps + 1):
        P, M = transition(E, M, S, quiet_l)
        S = quiet_s
        v = pauli_to_index(M)
        traj.append(v)
        phys.append(P)
        if v == 0:
            return PrecipitationOrbit(ancilla_index, exponent, traj, phys, None, None, [0], traj, step, step, True)
        if v in seen:
            t = seen[v]
            l = step - t
            break
        seen[v] = step
    else:
        raise MaxStepsExceeded(f"no loop or identity within {max_steps} steps", trajectory=traj)

    schedule = [q * l for q in range(p)]
    bound = t + p * l
    inject = set(schedule)
    M = zero_m
    re_traj = []
    steps = None
    for frame in range(bound + l + 1):
        S = kick if frame in inject else quiet_s
        _, M = transition(E, M, S, quiet_l)
        v = pauli_to_index(M)
        re_traj.append(v)
        if v == 0 and frame >= schedule[-1]:
            steps = frame + 1
            break
    if steps is None:
        raise MaxStepsExceeded("reinjection schedule did not return the memory to the identity", trajectory=re_traj)
    return PrecipitationOrbit(ancilla_index, exponent, traj, phys, t, l, schedule, re_traj, steps, bound, steps <= bound)


# -- corollary check ------------------------------------------------------------------


@dataclass
class CorollaryReport:
    p: int
    zero_cycle: SubgroupDescriptor
    finite_memory: SubgroupDescriptor
    centralizer_of_finite: SubgroupDescriptor
    equal: bool
    zero_cycle_in_centralizer: bool
    centralizer_in_zero_cycle: bool
    criterion_met: bool | None = None


def verify_corollary_p0_equals_centralizer(
    E: SymplecticEncoder, max_len: int | None = None, budgets: Budgets | None = None
) -> CorollaryReport:
    require_valid(E)
    P0 = zero_cycle_group(E, max_len)
    F0 = finite_memory_group(E, max_len)
    C = centralizer(F0)
    a, b = set(P0.members), set(C.members)
    met = None
    if E.p > 2:
        met = criterion_scan(E, budgets).criterion_met
    return CorollaryReport(E.p, P0, F0, C, a == b, a <= b, b <= a, met)


# -- bundle ---------------------------------------------------------------------------


@dataclass
class Classification:
    catastrophic: bool
    recursive: bool
    catastrophic_witness: tuple[Edge, ...] | None
    recursive_counterexample: RecursiveCounterexample | None
    recursive_impulse: bool
    budgets: Budgets
    criterion: CriterionScan | None = None
    finite_memory: SubgroupDescriptor | None = None
    zero_cycle: SubgroupDescriptor | None = None
    centralizer_of_finite: SubgroupDescriptor | None = None

    @property
    def criterion_met(self) -> bool | None:
        return None if self.criterion is None else self.criterion.criterion_met

    @property
    def modes_differ(self) -> bool:
        return self.recursive != self.recursive_impulse


def classify(E: SymplecticEncoder, budgets: Budgets | None = None, criterion: bool = True) -> Classification:
    require_valid(E)
    b = (budgets or Budgets()).resolve(E)
    cat, witness = is_catastrophic(E, b.max_len)
    rec, counter = is_recursive(E, b.max_len)
    rec_impulse = flags(E, "impulse")[1]
    F0 = finite_memory_group(E)
    P0 = zero_cycle_group(E)
    return Classification(
        catastrophic=cat,
        recursive=rec,
        catastrophic_witness=witness,
        recursive_counterexample=counter,
        recursive_impulse=rec_impulse,
        budgets=b,
        criterion=criterion_scan(E, b) if criterion else None,
        finite_memory=F0,
        zero_cycle=P0,
        centralizer_of_finite=centralizer(F0),
    )
