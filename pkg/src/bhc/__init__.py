"""Balanced colorings of r-uniform r-partite hypergraphs.

A library for balanced independent sets and balanced chromatic numbers of
multipartite hypergraphs: a compact hypergraph data model, seeded samplers
for the sparse Erdos-Renyi multipartite model, exact small-scale oracles,
the constructive coloring procedures (sparse two-coloring, triple-merge
reduction, matching-based coloring, iterative peel-and-color), a faithful
expose-and-merge pipeline, and a Monte Carlo experiment harness with a CLI.
"""
from .core import (
    BalancedColoring,
    BalancedSubset,
    BudgetError,
    CapacityError,
    DegreeSummary,
    InputError,
    PartiteHypergraph,
    ValidationReport,
    VertexRef,
    validate_coloring,
)
from .formats import (
    dump_coloring,
    dump_hpg,
    load_coloring,
    load_hpg,
    read_coloring,
    read_hpg,
    write_coloring,
    write_hpg,
)
from .models import ModelParams, make_rng, sample, sample_count_then_place, trial_seed
from .oracles import (
    AlphaBResult,
    ChiBResult,
    MatchingResult,
    OracleBudget,
    alpha_b_exact,
    chi_b_exact,
    is_balanced_colorable,
    perfect_matching_exists,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
