"""Convolutional encoders as symplectic matrices over F_p.

Wire convention.  One frame of the encoder acts on ``m + n`` qudits.  Input
qudits are ordered ``[memory (m), ancilla (n-k), logical (k)]`` and output
qudits ``[physical (n), memory (m)]``.  A Pauli is the column vector
``(x_1..x_{m+n} | z_1..z_{m+n})`` and the encoder maps ``v -> E v (mod p)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import prime_field as pf
from .exceptions import DimensionMismatch, InvalidEncoder, ParseError, ShapeMismatch, ValidationError
from .pauli import PauliOp


@dataclass(frozen=True)
class CodeParams:
    p: int
    m: int
    n: int
    k: int

    def __post_init__(self):
        pf.check_prime(self.p)
        if self.m < 1 or self.n < 1:
            raise ValueError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def ancilla(self) -> int:
        return self.n - self.k

    @property
    def qudits(self) -> int:
        return self.m + self.n

    @property
    def dim(self) -> int:
        return 2 * (self.m + self.n)

    @property
    def degenerate(self) -> bool:
        """True when there are no ancilla (stabilizer) qudits per frame."""
        return self.ancilla == 0

    @property
    def num_vertices(self) -> int:
        return self.p ** (2 * self.m)

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.p, self.m, self.n, self.k)


def symplectic_form(qudits: int, p: int) -> np.ndarray:
    """``Ω = [[0, -I], [I, 0]]`` so that ``c(u, v) = u^T Ω v``."""
    I = pf.identity(qudits)
    Z = np.zeros_like(I)
    return np.block([[Z, -I], [I, Z]]) % p


def is_symplectic(M, p: int) -> bool:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        return False
    omega = symplectic_form(M.shape[0] // 2, p)
    return bool(np.array_equal((M.T @ omega @ M) % p, omega))


class SymplecticEncoder:
    """An immutable encoder: code parameters plus its symplectic matrix."""

    def __init__(self, params: CodeParams, matrix, label: str | None = None, seed: int | None = None):
        M = np.array(matrix, dtype=np.int64)
        if M.shape != (params.dim, params.dim):
            raise ShapeMismatch(f"matrix shape {M.shape} does not match 2(m+n) = {params.dim}")
        M %= params.p
        M.setflags(write=False)
        self.params = params
        self.matrix = M
        self.label = label
        self.seed = seed

    @property
    def p(self) -> int:
        return self.params.p

    def __repr__(self):
        p, m, n, k = self.params.astuple()
        return f"SymplecticEncoder(p={p}, m={m}, n={n}, k={k}, label={self.label!r})"

    def __eq__(self, other):
        if not isinstance(other, SymplecticEncoder):
            return NotImplemented
        return self.params == other.params and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.params, self.matrix.tobytes()))

    @cached_property
    def is_valid(self) -> bool:
        return is_symplectic(self.matrix, self.p)

    def __matmul__(self, other: "SymplecticEncoder") -> "SymplecticEncoder":
        if self.params != other.params:
            raise DimensionMismatch("encoders have different parameters")
        return SymplecticEncoder(self.params, pf.mat_mul(self.matrix, other.matrix, self.p))

    @classmethod
    def identity(cls, params: CodeParams) -> "SymplecticEncoder":
        return cls(params, pf.identity(params.dim), label="identity")


def validate(E: SymplecticEncoder) -> bool:
    """True iff ``E^T Ω E = Ω (mod p)``."""
    if E.matrix.shape != (E.params.dim, E.params.dim):
        raise ShapeMismatch(f"matrix shape {E.matrix.shape} does not match parameters")
    return E.is_valid


def require_valid(E: SymplecticEncoder) -> None:
    if not validate(E):
        raise InvalidEncoder("matrix does not preserve the symplectic form (E^T Ω E != Ω mod p)")


def apply_vector(E: SymplecticEncoder, v) -> np.ndarray:
    return (E.matrix @ np.asarray(v, dtype=np.int64)) % E.p


def apply(E: SymplecticEncoder, P: PauliOp) -> PauliOp:
    require_valid(E)
    if P.n != E.params.qudits or P.p != E.p:
        raise DimensionMismatch(f"input acts on {P.n} qudits over p={P.p}; encoder expects {E.params.qudits} over p={E.p}")
    return PauliOp.from_vector(apply_vector(E, P.vector()), E.p)


def join_input(params: CodeParams, memory: PauliOp, ancilla: PauliOp, logical: PauliOp) -> PauliOp:
    if (memory.n, ancilla.n, logical.n) != (params.m, params.ancilla, params.k):
        raise DimensionMismatch(
            f"role sizes {(memory.n, ancilla.n, logical.n)} do not match (m, n-k, k) = "
            f"{(params.m, params.ancilla, params.k)}"
        )
    return memory.tensor(ancilla).tensor(logical)


def split_output(params: CodeParams, out: PauliOp) -> tuple[PauliOp, PauliOp]:
    """Split an output Pauli into ``(physical, memory)``."""
    return out.restrict(0, params.n), out.restrict(params.n, params.qudits)


def transition(E: SymplecticEncoder, memory: PauliOp, ancilla: PauliOp, logical: PauliOp) -> tuple[PauliOp, PauliOp]:
    """One frame: ``U|M, S, L> = |P, M'>``; returns ``(P, M')``."""
    return split_output(E.params, apply(E, join_input(E.params, memory, ancilla, logical)))


def inverse(E: SymplecticEncoder) -> SymplecticEncoder:
    require_valid(E)
    return SymplecticEncoder(E.params, pf.mat_inverse(E.matrix, E.p), label=E.label)


# -- elementary generators ---------------------------------------------------


def _gate_fourier(M, q, N, p):
    xq, zq = M[q].copy(), M[N + q].copy()
    M[q] = (-zq) % p
    M[N + q] = xq


def _gate_multiply(M, q, N, p, c):
    M[q] = (M[q] * c) % p
    M[N + q] = (M[N + q] * pf.fp_inverse(c, p)) % p


def _gate_shear(M, q, N, p):
    M[N + q] = (M[N + q] + M[q]) % p


def _gate_sum(M, a, b, N, p):
    M[b] = (M[b] + M[a]) % p
    M[N + a] = (M[N + a] - M[N + b]) % p


def gate_catalogue(qudits: int, p: int) -> list[tuple]:
    """Every elementary generator as a hashable ``(name, *args)`` tuple."""
    gates: list[tuple] = []
    for q in range(qudits):
        gates.append(("fourier", q))
        gates.extend(("multiply", q, c) for c in range(2, p))
        gates.append(("shear", q))
    for a in range(qudits):
        for b in range(qudits):
            if a != b:
                gates.append(("sum", a, b))
    return gates


def apply_gate(M: np.ndarray, gate: tuple, p: int) -> None:
    """Left-multiply ``M`` in place by the generator ``gate``."""
    N = M.shape[0] // 2
    name = gate[0]
    if name == "fourier":
        _gate_fourier(M, gate[1], N, p)
    elif name == "multiply":
        _gate_multiply(M, gate[1], N, p, gate[2])
    elif name == "shear":
        _gate_shear(M, gate[1], N, p)
    elif name == "sum":
        _gate_sum(M, gate[1], gate[2], N, p)
    else:
        raise ValueError(f"unknown gate {name!r}")


def gate_matrix(gate: tuple, qudits: int, p: int) -> np.ndarray:
    M = pf.identity(2 * qudits)
    apply_gate(M, gate, p)
    return M


def permutation_encoder(params: CodeParams, perm, label: str | None = None) -> SymplecticEncoder:
    """Qudit relabelling: input qudit ``i`` becomes output qudit ``perm[i]``."""
    N = params.qudits
    perm = [int(j) for j in perm]
    if sorted(perm) != list(range(N)):
        raise ValueError(f"perm must be a permutation of range({N}), got {perm}")
    M = np.zeros((2 * N, 2 * N), dtype=np.int64)
    for i, j in enumerate(perm):
        M[j, i] = 1
        M[N + j, N + i] = 1
    return SymplecticEncoder(params, M, label=label)


def random_encoder(params: CodeParams, seed, gate_count: int, label: str | None = None) -> SymplecticEncoder:
    """Product of ``gate_count`` generators drawn uniformly from :func:`gate_catalogue`."""
    if gate_count < 1:
        raise ValueError("gate_count must be >= 1")
    rng = np.random.default_rng(seed)
    gates = gate_catalogue(params.qudits, params.p)
    M = pf.identity(params.dim)
    for g in rng.integers(0, len(gates), size=gate_count):
        apply_gate(M, gates[g], params.p)
    return SymplecticEncoder(params, M, label=label, seed=seed if isinstance(seed, int) else None)


def symplectic_group_order(qudits: int, p: int) -> int:
    """``|Sp(2N, p)| = p^{N^2} Π_{i=1..N} (p^{2i} - 1)``."""
    order = p ** (qudits * qudits)
    for i in range(1, qudits + 1):
        order *= p ** (2 * i) - 1
    return order


def enumerate_symplectic(params: CodeParams, cap: int = 2_000_000):
    """Every element of Sp(2(m+n), p) as an encoder, by breadth-first closure over the generators.

    Yields in a deterministic order (BFS from the identity, generators in
    catalogue order).
    """
    order = symplectic_group_order(params.qudits, params.p)
    if order > cap:
        raise ValueError(f"group order {order} exceeds exhaustive cap {cap}")
    p = params.p
    gens = [gate_matrix(g, params.qudits, p) for g in gate_catalogue(params.qudits, p)]
    start = pf.identity(params.dim)
    seen = {start.tobytes()}
    frontier = [start]
    yield SymplecticEncoder(params, start)
    while frontier:
        nxt = []
        for M in frontier:
            for G in gens:
                P = (G @ M) % p
                key = P.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(P)
                    yield SymplecticEncoder(params, P)
        frontier = nxt


# -- serialization -------------------------------------------------------------


def to_document(E: SymplecticEncoder) -> dict:
    doc = {"p": E.p, "m": E.params.m, "n": E.params.n, "k": E.params.k}
    if E.label is not None:
        doc["label"] = E.label
    if E.seed is not None:
        doc["seed"] = int(E.seed)
    doc["matrix"] = E.matrix.tolist()
    return doc


def serialize(E: SymplecticEncoder) -> str:
    doc = to_document(E)
    rows = doc.pop("matrix")
    head = json.dumps(doc, indent=2)[:-2]
    body = ",\n".join("    " + json.dumps(r) for r in rows)
    return f'{head},\n  "matrix": [\n{body}\n  ]\n}}\n'


def _int_field(doc, name, line=None):
    if name not in doc:
        raise ParseError("missing required field", line=line, field=name)
    v = doc[name]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"expected an integer, got {v!r}", line=line, field=name)
    return v


def from_document(doc: dict) -> SymplecticEncoder:
    if not isinstance(doc, dict):
        raise ParseError("encoder document must be a key/value object")
    p = _int_field(doc, "p")
    try:
        pf.check_prime(p)
    except ValueError as exc:
        raise ParseError(str(exc), field="p") from None
    m, n, k = (_int_field(doc, f) for f in ("m", "n", "k"))
    try:
        params = CodeParams(p, m, n, k)
    except ValueError as exc:
        raise ParseError(str(exc), field="m/n/k") from None
    rows = doc.get("matrix")
    if not isinstance(rows, list):
        raise ParseError("missing or non-list matrix", field="matrix")
    if len(rows) != params.dim:
        raise ParseError(f"expected {params.dim} rows, got {len(rows)}", field="matrix")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != params.dim:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ParseError(f"expected {params.dim} entries, got {got}", field=f"matrix[{i}]")
        for j, a in enumerate(row):
            if isinstance(a, bool) or not isinstance(a, int) or not 0 <= a < p:
                raise ParseError(f"entry {a!r} not an integer in [0, {p})", field=f"matrix[{i}][{j}]")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("label must be a string", field="label")
    seed = doc.get("seed")
    if seed is not None:
        seed = _int_field(doc, "seed")
    E = SymplecticEncoder(params, rows, label=label, seed=seed)
    if not validate(E):
        raise ValidationError("matrix is not symplectic: E^T Ω E != Ω (mod p) with Ω = [[0, -I], [I, 0]]")
    return E


def deserialize(text: str) -> SymplecticEncoder:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    return from_document(doc)


def load(path) -> SymplecticEncoder:
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read())


def save(E: SymplecticEncoder, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(E))
