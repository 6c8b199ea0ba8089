"""Brute-force verification of the truncation bound on small instances."""

from .campaign import Instance, InstanceResult, check_gamma, random_instance, run_campaign, run_instance
from .chain import BoundCheck, ChainReport, ModelConsistencyError, check_bound, check_chain
from .channels import (
    apply_channel,
    depolarizing_channel,
    dpi_property,
    identity_channel,
    is_trace_preserving,
    random_channel,
)
from .cq import CqEntry, CqFinalState, cq_trace_distance, gamma_map, ideal_state_dense, random_cq_state
from .distances import mixed_trace_distance, projector, pure_trace_distance
from .source import (
    ResourceLimitError,
    SourceSpec,
    emitted_state,
    kernel_from_epsilon,
    measure_correlation_strength,
)
from .states import GlobalStatePair, build_states, overlap_by_formula
