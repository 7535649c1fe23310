"""Relative root systems and verification of their structural lemmas."""
from .system import ProjectionSpec, RelativeRootSystem, SpecError
from .chains import (
    chain_to_max,
    check_special_chain,
    construct_chain_max,
    dominance_minimal,
    enumerate_special_chains,
    find_special_chain,
    rebase_chain,
)
from .verify import campaign_specs, verify_case, verify_section3

__all__ = [
    "ProjectionSpec", "RelativeRootSystem", "SpecError", "chain_to_max", "check_special_chain",
    "construct_chain_max", "dominance_minimal", "enumerate_special_chains",
    "find_special_chain", "rebase_chain", "campaign_specs",
    "verify_case", "verify_section3",
]
