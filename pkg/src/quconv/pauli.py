"""Phaseless generalized Pauli operators in symplectic form.

A Pauli on ``n`` qudits is ``X^{x_1} Z^{z_1} ⊗ ... ⊗ X^{x_n} Z^{z_n}``, stored as
the exponent vectors ``(x | z)`` over F_p.  Global phases are dropped; the
only phase information ever needed is the commutation exponent returned by
:func:`commutator`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, IndexOutOfRange, ParseError, ScaleGuard


@dataclass(frozen=True)
class PauliOp:
    p: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        x = tuple(int(v) % self.p for v in self.x)
        z = tuple(int(v) % self.p for v in self.z)
        if len(x) != len(z):
            raise DimensionMismatch(f"x has length {len(x)} but z has length {len(z)}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def identity(cls, n: int, p: int) -> "PauliOp":
        return cls(p, (0,) * n, (0,) * n)

    @classmethod
    def from_vector(cls, v, p: int) -> "PauliOp":
        v = [int(a) for a in v]
        if len(v) % 2:
            raise DimensionMismatch("symplectic vector must have even length")
        n = len(v) // 2
        return cls(p, tuple(v[:n]), tuple(v[n:]))

    @classmethod
    def single(cls, n: int, p: int, qudit: int, x: int = 0, z: int = 0) -> "PauliOp":
        """``X^x Z^z`` on one qudit (0-based) and identity elsewhere."""
        xs = [0] * n
        zs = [0] * n
        xs[qudit] = x
        zs[qudit] = z
        return cls(p, tuple(xs), tuple(zs))

    def vector(self) -> np.ndarray:
        return np.array(self.x + self.z, dtype=np.int64)

    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    def tensor(self, other: "PauliOp") -> "PauliOp":
        _check_same_field(self, other)
        return PauliOp(self.p, self.x + other.x, self.z + other.z)

    def restrict(self, start: int, stop: int) -> "PauliOp":
        return PauliOp(self.p, self.x[start:stop], self.z[start:stop])

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return compose(self, other)

    def __pow__(self, k: int) -> "PauliOp":
        return PauliOp(self.p, tuple(k * a for a in self.x), tuple(k * b for b in self.z))

    def __str__(self) -> str:
        return to_text(self)


def _check_same_field(P: PauliOp, Q: PauliOp) -> None:
    if P.p != Q.p:
        raise DimensionMismatch(f"Paulis over different fields: p={P.p} and p={Q.p}")


def _check_pair(P: PauliOp, Q: PauliOp) -> None:
    _check_same_field(P, Q)
    if P.n != Q.n:
        raise DimensionMismatch(f"Paulis act on {P.n} and {Q.n} qudits")


def commutator(P: PauliOp, Q: PauliOp) -> int:
    """Exponent ``c`` with ``PQ = ω^c QP``, i.e. ``z_P·x_Q - x_P·z_Q mod p``."""
    _check_pair(P, Q)
    c = sum(zp * xq - xp * zq for xp, zp, xq, zq in zip(P.x, P.z, Q.x, Q.z))
    return c % P.p


def commutator_vec(u, v, p: int) -> int:
    """:func:`commutator` on raw ``(x | z)`` vectors."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != v.shape or u.shape[-1] % 2:
        raise DimensionMismatch(f"incompatible symplectic vectors {u.shape}, {v.shape}")
    n = u.shape[-1] // 2
    return int((u[n:] @ v[:n] - u[:n] @ v[n:]) % p)


def compose(P: PauliOp, Q: PauliOp) -> PauliOp:
    _check_pair(P, Q)
    return PauliOp(P.p, tuple(a + b for a, b in zip(P.x, Q.x)), tuple(a + b for a, b in zip(P.z, Q.z)))


def weight(P: PauliOp) -> int:
    return sum(1 for a, b in zip(P.x, P.z) if a or b)


def is_z_type(P: PauliOp) -> bool:
    return not any(P.x)


def pauli_to_index(P: PauliOp) -> int:
    """``Σ x_j p^j + Σ z_j p^{n+j}``."""
    idx = 0
    for j, a in enumerate(P.x + P.z):
        idx += a * P.p**j
    return idx


def index_to_pauli(i: int, n: int, p: int) -> PauliOp:
    if not 0 <= i < p ** (2 * n):
        raise IndexOutOfRange(f"index {i} outside [0, {p ** (2 * n)})")
    digits = []
    for _ in range(2 * n):
        i, d = divmod(i, p)
        digits.append(d)
    return PauliOp(p, tuple(digits[:n]), tuple(digits[n:]))


def all_paulis(n: int, p: int):
    for i in range(p ** (2 * n)):
        yield index_to_pauli(i, n, p)


# -- text format ----------------------------------------------------------

_FACTOR = re.compile(r"^(?:I|(?:X(\d+))?(?:Z(\d+))?)$")


def to_text(P: PauliOp) -> str:
    """Render as e.g. ``X1Z2 . I . Z1``; the empty Pauli renders as ``-``."""
    if P.n == 0:
        return "-"
    parts = []
    for a, b in zip(P.x, P.z):
        s = (f"X{a}" if a else "") + (f"Z{b}" if b else "")
        parts.append(s or "I")
    return " . ".join(parts)


def from_text(text: str, p: int) -> PauliOp:
    text = text.strip()
    if text == "-":
        return PauliOp(p, (), ())
    xs, zs = [], []
    for pos, raw in enumerate(text.split(".")):
        tok = raw.strip()
        mt = _FACTOR.match(tok)
        if not tok or mt is None:
            raise ParseError(f"bad Pauli factor {tok!r} at position {pos}")
        a, b = (int(g) if g else 0 for g in mt.groups())
        if a >= p or b >= p:
            raise ParseError(f"exponent out of range for p={p} in factor {tok!r}")
        xs.append(a)
        zs.append(b)
    return PauliOp(p, tuple(xs), tuple(zs))


# -- dense oracle (tests only) ----------------------------------------------

ORACLE_MAX_QUDITS = 4
ORACLE_MAX_PRIME = 5


def single_qudit_matrices(p: int) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic shift ``X|j> = |j+1>`` and clock ``Z|j> = ω^j |j>``."""
    omega = np.exp(2j * np.pi / p)
    X = np.roll(np.eye(p, dtype=complex), 1, axis=0)
    Z = np.diag(omega ** np.arange(p))
    return X, Z


def matrix_oracle(P: PauliOp) -> np.ndarray:
    if P.n > ORACLE_MAX_QUDITS or P.p > ORACLE_MAX_PRIME:
        raise ScaleGuard(f"dense oracle limited to n <= {ORACLE_MAX_QUDITS}, p <= {ORACLE_MAX_PRIME}")
    X, Z = single_qudit_matrices(P.p)
    out = np.eye(1, dtype=complex)
    for a, b in zip(P.x, P.z):
        f = np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b)
        out = np.kron(out, f)
    return out
