"""Randomised verification suites for the structural properties of encoders.

Each suite draws encoders from a seeded generator, checks one property and
returns a :class:`SuiteResult` listing any failing instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .analysis import centralizer, describe_subgroup, finite_memory_group, precipitation_orbit, zero_cycle_group
from .encoder import CodeParams, apply, random_encoder, transition
from .pauli import ORACLE_MAX_PRIME, PauliOp, commutator, index_to_pauli, matrix_oracle
from .search import SearchConfig, run_search

DEFAULT_PARAMS = ((1, 2, 1), (2, 2, 1))


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    checks: int
    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures[:20],
            "failure_count": len(self.failures),
            "details": self.details,
        }


def _encoders(primes, trials, seed, shapes=DEFAULT_PARAMS, gates=40):
    for p in primes:
        for m, n, k in shapes:
            params = CodeParams(p, m, n, k)
            for t in range(trials):
                yield random_encoder(params, [seed, p, m, n, k, t], gates, label=f"{p}/{m},{n},{k}/{t}")


def _random_pauli(rng, n, p):
    return PauliOp(p, tuple(rng.integers(0, p, n)), tuple(rng.integers(0, p, n)))


def _finish(name, checks, failures, **details):
    return SuiteResult(name, not failures, checks, failures, details)


def suite_commutation(primes, trials, seed) -> SuiteResult:
    """Encoders keep commutation exponents; small cases also checked on dense matrices."""
    rng = np.random.default_rng([seed, 1])
    checks, failures = 0, []
    for E in _encoders(primes, trials, seed):
        N = E.params.qudits
        P, Q = _random_pauli(rng, N, E.p), _random_pauli(rng, N, E.p)
        checks += 1
        if commutator(apply(E, P), apply(E, Q)) != commutator(P, Q):
            failures.append(f"{E.label}: {P} / {Q}")
    for p in primes:
        if p > ORACLE_MAX_PRIME:
            continue
        omega = np.exp(2j * np.pi / p)
        for _ in range(trials):
            P, Q = _random_pauli(rng, 2, p), _random_pauli(rng, 2, p)
            A, B = matrix_oracle(P), matrix_oracle(Q)
            checks += 1
            if not np.allclose(A @ B, omega ** commutator(P, Q) * (B @ A)):
                failures.append(f"dense p={p}: {P} / {Q}")
    return _finish("commutation", checks, failures)


def suite_conservation(primes, trials, seed) -> SuiteResult:
    """Per frame, c(M1,M2) + c(S1,S2) + c(L1,L2) = c(P1,P2) + c(M1',M2')."""
    rng = np.random.default_rng([seed, 2])
    checks, failures = 0, []
    for E in _encoders(primes, trials, seed):
        pr = E.params
        for _ in range(4):
            ins = []
            for _ in range(2):
                M = _random_pauli(rng, pr.m, pr.p)
                S = PauliOp(pr.p, (0,) * pr.ancilla, tuple(rng.integers(0, pr.p, pr.ancilla)))
                L = _random_pauli(rng, pr.k, pr.p)
                ins.append((M, S, L))
            outs = [transition(E, *x) for x in ins]
            lhs = sum(commutator(a, b) for a, b in zip(*ins)) % pr.p
            rhs = sum(commutator(a, b) for a, b in zip(*outs)) % pr.p
            checks += 1
            if lhs != rhs:
                failures.append(f"{E.label}: {lhs} != {rhs}")
    return _finish("conservation", checks, failures)


def suite_semicomm(primes, trials, seed) -> SuiteResult:
    """Every zero-cycle memory state commutes with every finite-memory state."""
    checks, failures = 0, []
    for E in _encoders(primes, trials, seed):
        m, p = E.params.m, E.p
        F0 = finite_memory_group(E).paulis()
        for v in zero_cycle_group(E).members:
            g = index_to_pauli(v, m, p)
            checks += 1
            bad = [f for f in F0 if commutator(g, f)]
            if bad:
                failures.append(f"{E.label}: {g} vs {bad[0]}")
    return _finish("semicomm", checks, failures)


def suite_precipitation(primes, trials, seed) -> SuiteResult:
    """``Z_i^a`` on an ancilla, re-injected on the loop schedule, clears the memory within ``t + p*l``."""
    checks, failures = 0, []
    loops = 0
    for E in _encoders(primes, trials, seed):
        for i in range(1, E.params.ancilla + 1):
            for a in range(1, E.p):
                orb = precipitation_orbit(E, i, a)
                checks += 1
                loops += orb.loop_length is not None
                if not orb.within_bound or orb.reinjected_trajectory[-1] != 0:
                    failures.append(f"{E.label}: ancilla {i} exponent {a}")
    return _finish("precipitation", checks, failures, looping_orbits=loops)


def suite_centralizer(primes, trials, seed) -> SuiteResult:
    """Nullspace centralizer against a direct scan, on random generated subgroups."""
    rng = np.random.default_rng([seed, 5])
    checks, failures = 0, []
    for p in primes:
        for m in (1, 2):
            if p ** (2 * m) > 1000:
                continue
            for _ in range(trials):
                gens = rng.integers(0, p ** (2 * m), size=int(rng.integers(1, 3))).tolist()
                fast = centralizer(describe_subgroup([0] + gens, m, p), m, p)
                checks += 1
                if set(fast.members) != oracles.centralizer_scan(gens, m, p) or not fast.closure_verified:
                    failures.append(f"p={p} m={m} generators {gens}")
    return _finish("centralizer", checks, failures)


def suite_corollary(primes, trials, seed) -> SuiteResult:
    """Zero-cycle states are exactly the centralizer of the finite-memory group (qubits)."""
    checks, failures = 0, []
    for E in _encoders([p for p in primes if p == 2] or [2], trials, seed):
        a = set(zero_cycle_group(E).members)
        b = set(centralizer(finite_memory_group(E)).members)
        checks += 1
        if a != b:
            failures.append(E.label)
    return _finish("corollary", checks, failures)


def suite_qubit_no_go(primes, trials, seed) -> SuiteResult:
    """No qubit encoder is recursive and non-catastrophic: exhaustive (1,1,1) plus ``trials`` samples at (1,2,1)."""
    ex = run_search(SearchConfig(2, 1, 1, 1, mode="exhaustive"))
    sa = run_search(SearchConfig(2, 1, 2, 1, mode="sampled", samples=max(trials, 1), seed=seed))
    failures = [f"exhaustive witness {w['index']}" for w in ex.witnesses]
    failures += [f"sampled witness {w['index']}" for w in sa.witnesses]
    if ex.examined != 720:
        failures.append(f"exhaustive search examined {ex.examined} encoders, expected 720")
    return _finish(
        "qubit-no-go",
        ex.examined + sa.examined,
        failures,
        exhaustive_examined=ex.examined,
        sampled_examined=sa.examined,
        inconclusive=len(ex.inconclusive) + len(sa.inconclusive),
    )


SUITES = {
    "commutation": suite_commutation,
    "conservation": suite_conservation,
    "semicomm": suite_semicomm,
    "precipitation": suite_precipitation,
    "centralizer": suite_centralizer,
    "corollary": suite_corollary,
    "qubit-no-go": suite_qubit_no_go,
}


def run_suite(name: str, primes=(2, 3, 5), trials: int = 20, seed: int = 0) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](tuple(primes), trials, seed)
