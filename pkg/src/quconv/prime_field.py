"""Exact linear algebra over the prime field F_p.

Matrices are plain ``numpy`` integer arrays whose entries are kept reduced
to ``[0, p)``.  Elimination always pivots on the lowest available column and
the first available row, so bases come out identical across runs.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatch, Singular, ZeroInverse

MAX_PRIME = 13

DTYPE = np.int64


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def check_prime(p) -> int:
    """Return ``p`` as an int, raising ``ValueError`` unless it is a supported prime."""
    if isinstance(p, bool) or int(p) != p:
        raise ValueError(f"modulus must be an integer, got {p!r}")
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p > MAX_PRIME:
        raise ValueError(f"modulus {p} exceeds the supported maximum {MAX_PRIME}")
    return p


def fp_inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def as_matrix(A, p: int) -> np.ndarray:
    """Coerce ``A`` to a reduced 2-D integer array."""
    M = np.array(A, dtype=DTYPE)
    if M.ndim == 1:
        M = M.reshape(1, -1) if M.size else M.reshape(0, 0)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got array of shape {M.shape}")
    return M % p


def identity(size: int) -> np.ndarray:
    return np.eye(size, dtype=DTYPE)


def mat_mul(A, B, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=DTYPE)
    B = np.asarray(B, dtype=DTYPE)
    if A.shape[-1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    # entries < 13 and sizes of a few dozen: int64 cannot overflow
    return (A @ B) % p


def row_reduce(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` and its pivot columns."""
    R = as_matrix(A, p).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = (R[r] * fp_inverse(int(R[r, c]), p)) % p
        for j in range(rows):
            if j != r and R[j, c]:
                R[j] = (R[j] - R[j, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, p: int) -> int:
    M = as_matrix(A, p)
    if M.size == 0:
        return 0
    return len(row_reduce(M, p)[1])


def mat_nullspace(A, p: int) -> list[np.ndarray]:
    """Basis of ``{v : A v = 0 (mod p)}``, one vector per free column in ascending order."""
    R, pivots = row_reduce(A, p)
    cols = R.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=DTYPE)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r, f]) % p
        basis.append(v)
    return basis


def mat_inverse(A, p: int) -> np.ndarray:
    M = as_matrix(A, p)
    n, m = M.shape
    if n != m:
        raise DimensionMismatch(f"cannot invert non-square matrix of shape {M.shape}")
    R, pivots = row_reduce(np.hstack([M, identity(n)]), p)
    if pivots[:n] != list(range(n)):
        raise Singular(f"matrix is singular mod {p}")
    return R[:, n:].copy()


def span(basis, p: int) -> np.ndarray:
    """All ``p**len(basis)`` vectors in the span of ``basis``, as rows."""
    basis = [np.asarray(b, dtype=DTYPE) for b in basis]
    if not basis:
        raise ValueError("span of an empty basis needs an explicit length; use zeros")
    B = np.stack(basis)
    k = len(basis)
    coeffs = np.array(np.unravel_index(np.arange(p**k), (p,) * k)).T[:, ::-1]
    return (coeffs @ B) % p
