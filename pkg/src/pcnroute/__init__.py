"""Lowest-fee path planning for payment channel networks."""
from ._backend import BACKEND
from .fees import (
    BARRIER, LINEAR, BarrierFeeMap, FeeMap, LinearFeeMap, MissingFeeError, TabulatedFeeMap,
    amounts_closed_form, amounts_recursive, check_consistency, fee_barrier, fee_linear, hop_amounts,
)
from .graph import ArcPolicy, ChannelGraph, GraphError, build_graph, out_degree, transpose_view
from .search import (
    PathResult, Query, apply_source_fee_zero, brute_force_lowest_fee, plan,
    plan_partial_bidirectional, plan_unidirectional, plan_unidirectional_barrier, reconstruct_path,
)

__version__ = "0.1.0"
