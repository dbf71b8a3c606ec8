"""Estimators for percolative entropy, spatial mixing and finite-graph entropies."""
from .estimate import Estimate, SsmEntry, SsmProfile
from .glauber import GlauberChain, feasible_init, glauber_sample
from .mixing import default_field_grid, dobrushin_alpha, slot_influences, ssm_profile
from .percolative import percolative_entropy
from .specific import graph_distances, lw_diagnostic, specific_entropy_truncated

__all__ = [
    "Estimate", "SsmEntry", "SsmProfile", "GlauberChain", "feasible_init", "glauber_sample",
    "default_field_grid", "dobrushin_alpha", "slot_influences", "ssm_profile",
    "percolative_entropy", "graph_distances", "lw_diagnostic", "specific_entropy_truncated",
]
