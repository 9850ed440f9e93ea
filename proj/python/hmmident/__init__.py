"""Identifiability analysis for finite-alphabet hidden Markov models.

Matrices are nested lists of floats; letters are 1-based. Structured results
come back as plain dicts mirroring the CLI's JSON reports.
"""

from ._hmmident import (
    __version__,
    analyze_json,
    analyze_multi,
    analyze_schedule,
    analyze_single,
    equivalent_json,
    inflate,
    krank,
    kron,
    model_info,
    n_star,
    rank,
    recombination,
    row_tensor,
    row_tensor_multi,
    sequence_prob,
    sequence_prob_multi,
    ssh_case,
    ssh_case_multi,
    stationary_distribution,
    vandermonde_witness,
)

__all__ = [
    "__version__",
    "analyze_file",
    "analyze_json",
    "analyze_multi",
    "analyze_schedule",
    "analyze_single",
    "equivalent_json",
    "inflate",
    "krank",
    "kron",
    "model_info",
    "n_star",
    "rank",
    "recombination",
    "row_tensor",
    "row_tensor_multi",
    "sequence_prob",
    "sequence_prob_multi",
    "ssh_case",
    "ssh_case_multi",
    "stationary_distribution",
    "vandermonde_witness",
]


def analyze_file(path, rel_eps=1e-9, abs_eps=1e-12):
    """Analyze a model JSON file (same dispatch as the CLI analyze command)."""
    with open(path, "r", encoding="utf-8") as f:
        return analyze_json(f.read(), rel_eps=rel_eps, abs_eps=abs_eps)
