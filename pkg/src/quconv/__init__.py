"""Symplectic analysis of qudit convolutional encoders."""

from .analysis import (
    Budgets,
    Classification,
    centralizer,
    classify,
    criterion_scan,
    finite_memory_group,
    flags,
    is_catastrophic,
    is_recursive,
    phase_oracle,
    precipitation_orbit,
    verify_corollary_p0_equals_centralizer,
    zero_cycle_group,
)
from .encoder import CodeParams, SymplecticEncoder, load, permutation_encoder, random_encoder, save
from .estimator import EncoderAnalyzer
from .pauli import PauliOp, commutator
from .search import SearchConfig, run_search

__version__ = "0.1.0"

__all__ = [
    "Budgets",
    "Classification",
    "CodeParams",
    "EncoderAnalyzer",
    "PauliOp",
    "SearchConfig",
    "SymplecticEncoder",
    "centralizer",
    "classify",
    "commutator",
    "criterion_scan",
    "finite_memory_group",
    "flags",
    "is_catastrophic",
    "is_recursive",
    "load",
    "permutation_encoder",
    "phase_oracle",
    "precipitation_orbit",
    "random_encoder",
    "run_search",
    "save",
    "verify_corollary_p0_equals_centralizer",
    "zero_cycle_group",
]
