"""Searching encoder spaces for a classification pattern.

Two modes.  ``exhaustive`` walks the whole symplectic group for small
parameters.  ``sampled`` draws random generator products; sample ``i`` of a
run with seed ``s`` is always built from the seed pair ``(s, i)``, so the
encoders examined never depend on how the work is split between workers.
Every hit is re-checked from its serialized form and against the
brute-force oracles before it is reported.
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import oracles
from .analysis import Budgets, classify, criterion_scan, flags, is_catastrophic
from .encoder import CodeParams, SymplecticEncoder, deserialize, enumerate_symplectic, random_encoder, serialize, symplectic_group_order
from .exceptions import EnumerationBudgetExceeded, ScaleGuard

log = logging.getLogger(__name__)

TARGETS = {
    "recursive-noncatastrophic": lambda cat, rec: rec and not cat,
    "catastrophic": lambda cat, rec: cat,
    "recursive": lambda cat, rec: rec,
}
MODES = ("exhaustive", "sampled")
EXHAUSTIVE_CAP = 2_000_000
BRUTE_EDGE_LIMIT = 20_000  # brute-force cycle re-verification only below this many edges


@dataclass(frozen=True)
class SearchConfig:
    p: int
    m: int
    n: int
    k: int
    mode: str = "sampled"
    samples: int = 0
    seed: int = 0
    gates: int = 40
    target: str = "recursive-noncatastrophic"
    max_len: int | None = None
    repetition_budget: int | None = None
    workers: int = 1
    max_witnesses: int = 10

    @property
    def params(self) -> CodeParams:
        return CodeParams(self.p, self.m, self.n, self.k)

    def validate(self) -> "SearchConfig":
        params = self.params
        if params.k < 1:
            raise ValueError("k must be >= 1: without logical qudits every encoder is vacuously recursive")
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}; choose from {sorted(TARGETS)}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.mode == "sampled":
            if self.samples < 1:
                raise ValueError("sampled mode needs samples >= 1")
            if self.gates < 1:
                raise ValueError("gates must be >= 1")
        else:
            order = symplectic_group_order(params.qudits, params.p)
            if order > EXHAUSTIVE_CAP:
                raise ValueError(f"group order {order} too large for exhaustive search (cap {EXHAUSTIVE_CAP})")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        return self


@dataclass
class RunReport:
    config: SearchConfig
    examined: int = 0
    counts: Counter = field(default_factory=Counter)  # (catastrophic, recursive) -> count
    witnesses: list[dict] = field(default_factory=list)
    witnesses_found: int = 0
    recursive_seen: int = 0
    recursive_reverified: int = 0
    recursive_failures: list[int] = field(default_factory=list)
    inconclusive: list[int] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.witnesses_found > 0

    @property
    def negative_report_valid(self) -> bool:
        """Every recursive encoder examined had its catastrophic witness re-verified."""
        return not self.found and self.recursive_seen == self.recursive_reverified

    def to_dict(self) -> dict:
        counts = {f"catastrophic={c},recursive={r}": self.counts[(c, r)] for c, r in sorted(self.counts)}
        return {
            "config": asdict(self.config),
            "examined": self.examined,
            "counts": counts,
            "witnesses_found": self.witnesses_found,
            "witnesses": self.witnesses,
            "recursive_seen": self.recursive_seen,
            "recursive_reverified": self.recursive_reverified,
            "recursive_failures": self.recursive_failures,
            "inconclusive": self.inconclusive,
            "negative_report_valid": self.negative_report_valid,
            "elapsed_seconds": round(self.elapsed, 3),
        }


def sample_encoder(config: SearchConfig, index: int) -> SymplecticEncoder:
    return random_encoder(config.params, [config.seed, index], config.gates, label=f"sample-{config.seed}-{index}")


# -- re-verification -----------------------------------------------------------------


def reverify_catastrophic(E: SymplecticEncoder) -> bool:
    """Re-check a catastrophic flag: witness edges recomputed and, when small enough, a brute cycle search."""
    cat, witness = is_catastrophic(E)
    if not cat or not oracles.check_catastrophic_witness(E, witness):
        return False
    p = E.params
    edges = p.num_vertices * p.p ** (p.ancilla + 2 * p.k)
    if edges <= BRUTE_EDGE_LIMIT:
        return oracles.catastrophic(E)[0]
    return True


def reverify_witness(E: SymplecticEncoder, config: SearchConfig) -> dict:
    """Round-trip a hit through its serialized form and re-classify it from scratch."""
    text = serialize(E)
    E2 = deserialize(text)
    budgets = Budgets.from_env(max_len=config.max_len, repetition_budget=config.repetition_budget)
    c = classify(E2, budgets, criterion=False)
    record = {
        "label": E.label,
        "encoder": text,
        "catastrophic": c.catastrophic,
        "recursive": c.recursive,
        "roundtrip_matches": E2 == E and TARGETS[config.target](c.catastrophic, c.recursive),
    }
    p = E.params
    edges = p.num_vertices * p.p ** (p.ancilla + 2 * p.k)
    if edges <= BRUTE_EDGE_LIMIT:
        D = oracles.BruteDiagram(E2)
        record["oracle_matches"] = (oracles.catastrophic(E2, None, D)[0], oracles.recursive(E2, 8, D)[0]) == (
            c.catastrophic,
            c.recursive,
        )
    if E.p > 2 and c.recursive and not c.catastrophic:
        scan = criterion_scan(E2, budgets)
        nz = scan.nonzero_records
        record["criterion_met"] = scan.criterion_met
        record["criterion_example"] = None if not nz else {"f_path": nz[0].f_path, "p_cycle": nz[0].p_cycle, "sum": nz[0].sum}
    return record


# -- workers ---------------------------------------------------------------------------


def _examine(E: SymplecticEncoder, index: int, config: SearchConfig, report: RunReport) -> None:
    try:
        cat, rec = flags(E)
    except (EnumerationBudgetExceeded, ScaleGuard):
        report.inconclusive.append(index)
        return
    report.examined += 1
    report.counts[(cat, rec)] += 1
    if rec:
        report.recursive_seen += 1
        if cat:
            if reverify_catastrophic(E):
                report.recursive_reverified += 1
            else:
                report.recursive_failures.append(index)
    if TARGETS[config.target](cat, rec):
        report.witnesses_found += 1
        if len(report.witnesses) < config.max_witnesses:
            w = reverify_witness(E, config)
            w["index"] = index
            report.witnesses.append(w)


def _sample_range(config: SearchConfig, start: int, stop: int) -> RunReport:
    report = RunReport(config)
    for i in range(start, stop):
        _examine(sample_encoder(config, i), i, config, report)
    return report


def _merge(config: SearchConfig, parts: list[RunReport]) -> RunReport:
    out = RunReport(config)
    for r in parts:
        out.examined += r.examined
        out.counts.update(r.counts)
        out.witnesses_found += r.witnesses_found
        out.witnesses.extend(r.witnesses)
        out.recursive_seen += r.recursive_seen
        out.recursive_reverified += r.recursive_reverified
        out.recursive_failures.extend(r.recursive_failures)
        out.inconclusive.extend(r.inconclusive)
    out.witnesses.sort(key=lambda w: w["index"])
    del out.witnesses[config.max_witnesses :]
    out.recursive_failures.sort()
    out.inconclusive.sort()
    return out


def run_search(config: SearchConfig, chunk: int = 20_000) -> RunReport:
    """Run a search; the result is the same for any worker count."""
    config.validate()
    t0 = time.perf_counter()
    if config.mode == "exhaustive":
        report = RunReport(config)
        for i, E in enumerate(enumerate_symplectic(config.params, cap=EXHAUSTIVE_CAP)):
            _examine(E, i, config, report)
            if (i + 1) % 100_000 == 0:
                log.info("exhaustive: %d examined", i + 1)
    else:
        bounds = [(a, min(a + chunk, config.samples)) for a in range(0, config.samples, chunk)]
        if config.workers == 1:
            parts = []
            for a, b in bounds:
                parts.append(_sample_range(config, a, b))
                log.info("sampled: %d/%d", b, config.samples)
        else:
            with ProcessPoolExecutor(config.workers) as pool:
                parts = list(pool.map(_sample_range, [config] * len(bounds), *zip(*bounds)))
        report = _merge(config, parts)
    report.elapsed = time.perf_counter() - t0
    return report

