"""Percolative entropy of tree-indexed Gibbs states and their finite-graph approximations."""
__version__ = "0.1.0"

from .group_tree import EvenFree, Involutive, Word, ball, canonical_edge_transversal
from .labeled_graph import LabeledRegularGraph, act, from_permutations, random_graph
from .interaction import InteractionSpec, coloring, hardcore, ising, potts, with_field
from .exact_gibbs import ExactGibbs, build, entropy, percolation_identity_rhs
from .tree_engine import FREE, Clamped, ExtremalAllState, Free, TreeModel
from .estimators import (
    Estimate,
    SsmProfile,
    dobrushin_alpha,
    glauber_sample,
    lw_diagnostic,
    percolative_entropy,
    specific_entropy_truncated,
    ssm_profile,
)
