"""Acceptance criteria 1-9, each at its stated scale.

Every test records one PASS/FAIL line; the lines are echoed in the terminal
summary (see ``conftest.py``) so they survive output capture.
"""

import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from quconv import oracles
from quconv.analysis import (
    Budgets,
    centralizer,
    criterion_scan,
    finite_memory_group,
    flags,
    phase_oracle,
    precipitation_orbit,
    zero_cycle_group,
)
from quconv.encoder import CodeParams, enumerate_symplectic, random_encoder, transition
from quconv.pauli import PauliOp, commutator, matrix_oracle
from quconv.search import SearchConfig, run_search

RESULTS: list[str] = []
REPORT_DIR = Path(__file__).resolve().parent.parent / "reports"


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def encoders(params, count, seed, gates=40):
    return [random_encoder(params, [seed, i], gates) for i in range(count)]


def random_pauli(rng, n, p):
    return PauliOp(p, tuple(rng.integers(0, p, n)), tuple(rng.integers(0, p, n)))


def test_criterion_1_commutation_law():
    rng = np.random.default_rng(101)
    worst, checked = 0.0, 0
    for p in (2, 3, 5):
        omega = np.exp(2j * np.pi / p)
        for n in (1, 2):
            for _ in range(1000):
                P, Q = random_pauli(rng, n, p), random_pauli(rng, n, p)
                A, B = matrix_oracle(P), matrix_oracle(Q)
                err = np.abs(A @ B - omega ** commutator(P, Q) * (B @ A)).max()
                worst = max(worst, float(err))
                checked += 1
    record(1, worst < 1e-9, f"{checked} pairs, max entrywise error {worst:.2e}")


def test_criterion_2_conservation():
    rng = np.random.default_rng(102)
    mismatches, checked = 0, 0
    shapes = [CodeParams(p, m, n, k) for p in (2, 3, 5) for m, n, k in ((1, 2, 1), (2, 2, 1), (1, 3, 2))]
    for j in range(200):
        E = random_encoder(shapes[j % len(shapes)], [102, j], 40)
        pr = E.params
        for _ in range(50):
            frames = []
            for _ in range(2):
                S = PauliOp(pr.p, (0,) * pr.ancilla, tuple(rng.integers(0, pr.p, pr.ancilla)))
                frames.append((random_pauli(rng, pr.m, pr.p), S, random_pauli(rng, pr.k, pr.p)))
            outs = [transition(E, *f) for f in frames]
            cin = sum(commutator(a, b) for a, b in zip(*frames)) % pr.p
            cout = sum(commutator(a, b) for a, b in zip(*outs)) % pr.p
            mismatches += cin != cout
            checked += 1
    record(2, mismatches == 0, f"{checked} input pairs over 200 encoders, {mismatches} mismatches")


def test_criterion_3_qubit_no_go():
    ex = run_search(SearchConfig(2, 1, 1, 1, mode="exhaustive"))
    sa = run_search(SearchConfig(2, 1, 2, 1, mode="sampled", samples=100_000, seed=3))
    ok = ex.examined == 720 and not ex.found and sa.examined == 100_000 and not sa.found
    ok = ok and not ex.inconclusive and not sa.inconclusive
    record(
        3,
        ok,
        f"exhaustive (2,1,1,1): {ex.examined} encoders, {ex.witnesses_found} witnesses; "
        f"sampled (2,1,2,1): {sa.examined} encoders, {sa.witnesses_found} witnesses",
    )


def test_criterion_4_divisibility():
    budgets = Budgets(max_len=8, path_budget=2000, cycle_budget=2000, pair_budget=20_000)
    pairs, bad = 0, 0
    for params in (CodeParams(2, 1, 2, 1), CodeParams(2, 2, 2, 1)):
        for E in encoders(params, 50, 104):
            for r in criterion_scan(E, budgets).records:
                pairs += 1
                bad += r.doubled_sum != 0
    record(4, bad == 0 and pairs > 0, f"{pairs} pairs on 100 qubit encoders, {bad} with nonzero doubled sum")


def test_criterion_5_phase_cross_check():
    budgets = Budgets(max_len=6, path_budget=500, cycle_budget=500, pair_budget=5000)
    pairs, bad = 0, 0
    for params in (CodeParams(3, 1, 2, 1), CodeParams(3, 2, 2, 1), CodeParams(5, 1, 2, 1)):
        for E in encoders(params, 30, 105):
            for r in criterion_scan(E, budgets).records[:20]:
                pairs += 1
                bad += phase_oracle(r.f_path, r.p_cycle, E) != (2 * r.sum) % params.p
    record(5, pairs >= 500 and bad == 0, f"{pairs} pairs at p=3,5, {bad} disagreements")


def test_criterion_6_precipitation():
    orbits, bad, looping = 0, 0, 0
    for p in (2, 3, 5):
        shapes = [CodeParams(p, 1, 2, 1), CodeParams(p, 2, 2, 1)]
        for j in range(100):
            E = random_encoder(shapes[j % 2], [106, p, j], 40)
            for i in range(1, E.params.ancilla + 1):
                for a in range(1, p):
                    o = precipitation_orbit(E, i, a)
                    orbits += 1
                    looping += o.loop_length is not None
                    bad += not (o.within_bound and o.reinjected_trajectory[-1] == 0)
    record(6, bad == 0, f"{orbits} orbits ({looping} looping) over 300 encoders, {bad} outside the bound")


def test_criterion_7_corollary():
    bad = 0
    for E in encoders(CodeParams(2, 1, 2, 1), 100, 107):
        bad += set(zero_cycle_group(E).members) != set(centralizer(finite_memory_group(E)).members)
    record(7, bad == 0, f"100 encoders at (2,1,2,1), {bad} with zero-cycle set != centralizer")


def test_criterion_8_oracle_equivalence():
    n, bad = 0, 0
    for E in enumerate_symplectic(CodeParams(2, 1, 1, 1)):
        D = oracles.BruteDiagram(E)
        brute = (oracles.catastrophic(E, 8, D)[0], oracles.recursive(E, 8, D)[0])
        bad += flags(E) != brute
        n += 1
    record(8, n == 720 and bad == 0, f"{n} encoders, {bad} disagreements with brute-force oracles")


HUNT_CONFIGS = [(1, 1, 1, 333_334), (1, 2, 1, 333_333), (2, 2, 1, 333_333)]


def test_criterion_9_qudit_witness_hunt():
    reports = []
    for m, n, k, samples in HUNT_CONFIGS:
        reports.append(run_search(SearchConfig(3, m, n, k, samples=samples, seed=9)))
    total = sum(r.examined for r in reports)
    found = [w for r in reports for w in r.witnesses]

    # determinism: a prefix re-run with a different worker split gives the same report
    probe = SearchConfig(3, 2, 2, 1, samples=5000, seed=9)
    a, b = run_search(probe, chunk=5000), run_search(replace(probe, workers=2), chunk=1250)
    da, db = a.to_dict(), b.to_dict()
    for d in (da, db):
        d.pop("elapsed_seconds")
        d["config"].pop("workers")
    deterministic = da == db

    REPORT_DIR.mkdir(exist_ok=True)
    doc = {"samples": total, "deterministic": deterministic, "runs": [r.to_dict() for r in reports]}
    (REPORT_DIR / "qudit_witness_hunt.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")

    if found:
        ok = all(w["roundtrip_matches"] and w.get("criterion_met") for w in found)
        detail = f"outcome (a): {len(found)} witnesses"
    else:
        ok = all(r.negative_report_valid and not r.inconclusive for r in reports)
        seen = sum(r.recursive_seen for r in reports)
        detail = f"outcome (b): no witness; {seen} recursive encoders, all catastrophic witnesses re-verified"
    ok = ok and total >= 1_000_000 and deterministic
    record(9, ok, f"{total} p=3 samples; {detail}; deterministic={deterministic}")
