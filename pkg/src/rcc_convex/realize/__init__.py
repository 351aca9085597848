"""Convex realizations: verification, fragment constructions and the general pipeline."""
from .anchors import atom_sets, realize_anchor_hulls
from .intervals import realize_1d_dc_ntpp, realize_1d_po, realize_1d_tpp
from .lifting import LiftState, embed, lift_condition, lift_ntpp_dc, lift_weak_ec
from .pipeline import (
    DimensionNotAchieved, InconsistentNetworkError, STRATEGIES, cone_search, guaranteed_dim,
    peel_pairs, prepare, realize, realize_2d, realize_core, realize_fragment, realize_small_search,
    retry_budget, weak_search,
)
from .planar import realize_2d_dc_pp, realize_2d_ec_pp, realize_2d_po_pp
from .realization import (
    MAXIMAL_FRAGMENTS, RCC5_FRAGMENTS, FragmentBound, Realization, RealizationError,
    VerificationReport, Violation, classify_fragment, fragment_bound, is_valid, level, levels,
    maximal_oclique_ok, rcc5_bound, verify,
)
from .search import realize_boxes
from .spatial import neighborly_cells, realize_3d_ec_dc_ntpp, realize_3d_ec_dc_po
from .tree4d import TreeConstructionState, normalize_tree, realize_4d_tree

__all__ = [
    "atom_sets", "realize_anchor_hulls", "realize_1d_dc_ntpp", "realize_1d_po", "realize_1d_tpp",
    "LiftState", "embed", "lift_condition", "lift_ntpp_dc", "lift_weak_ec",
    "DimensionNotAchieved", "InconsistentNetworkError", "STRATEGIES", "cone_search", "guaranteed_dim",
    "peel_pairs", "prepare", "realize", "realize_2d", "realize_core", "realize_fragment",
    "realize_small_search", "retry_budget", "weak_search",
    "realize_2d_dc_pp", "realize_2d_ec_pp", "realize_2d_po_pp",
    "MAXIMAL_FRAGMENTS", "RCC5_FRAGMENTS", "FragmentBound", "Realization", "RealizationError",
    "VerificationReport", "Violation", "classify_fragment", "fragment_bound", "is_valid", "level",
    "levels", "maximal_oclique_ok", "rcc5_bound", "verify", "realize_boxes", "neighborly_cells",
    "realize_3d_ec_dc_ntpp", "realize_3d_ec_dc_po", "TreeConstructionState", "normalize_tree",
    "realize_4d_tree",
]
