"""Exact checks of the truncation bound and of each step in its derivation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..budget_planner import trace_distance_budget
from ..corr_model import CorrelationModel, epsilon_at
from .distances import pure_trace_distance
from .source import DEFAULT_DIM_CAP, SourceSpec, emit_batch
from .states import build_states, overlap_by_formula

INEQUALITY_TOL = 1e-10


class ModelConsistencyError(ValueError):
    """Raised when a source kernel does not realize the stated correlation model."""


@dataclass(frozen=True)
class BoundCheck:
    T_exact: float
    d_bound: float
    passed: bool
    overlap_dense: float
    overlap_formula: float

    @property
    def margin(self) -> float:
        return self.d_bound - self.T_exact

    def __iter__(self):
        return iter((self.T_exact, self.d_bound, self.passed))


def check_kernel_realizes(spec: SourceSpec, model: CorrelationModel, N: int, tol: float = INEQUALITY_TOL):
    for l in range(1, N):
        realized = spec.realized_epsilon(l)
        wanted = epsilon_at(model, l)
        if abs(realized - wanted) > tol:
            raise ModelConsistencyError(
                f"kernel gives eps_{l} = {realized:.12g} but the model says {wanted:.12g}"
            )


def check_bound(spec: SourceSpec, model: CorrelationModel, N: int, l_e: int,
                tol: float = INEQUALITY_TOL, cap: int = DEFAULT_DIM_CAP,
                bound_scale: float = 1.0) -> BoundCheck:
    """Compare the exact truncation distance against ``d = sqrt(N) * sqrt_delta``.

    ``bound_scale`` multiplies the bound before comparison; it exists so a
    campaign can be shown to fail when the bound is deliberately broken.
    """
    check_kernel_realizes(spec, model, N)
    pair = build_states(spec, N, l_e, cap=cap)
    T = pure_trace_distance(pair.psi_inf, pair.psi_trunc)
    d, _ = trace_distance_budget(model, N, l_e)
    d *= bound_scale
    return BoundCheck(
        T_exact=T,
        d_bound=d,
        passed=T <= d + tol,
        overlap_dense=pair.overlap,
        overlap_formula=overlap_by_formula(spec, N, l_e, cap=cap),
    )


@dataclass(frozen=True)
class ChainReport:
    """Per-round derivation quantities for one setting sequence and round ``k``.

    ``steps`` holds ``(l, distance, sqrt(eps_l))`` for each hybrid step.
    """

    N: int
    l_e: int
    k: int
    steps: tuple
    telescoped: float
    end_to_end: float
    delta_le: float
    round_overlap: float
    round_overlap_bound: float
    global_overlap: float
    global_bound_factor_count: float
    global_bound_printed: float
    steps_ok: bool
    triangle_ok: bool
    round_overlap_ok: bool
    global_overlap_ok: bool
    printed_exponent_ok: bool

    @property
    def passed(self) -> bool:
        return self.steps_ok and self.triangle_ok and self.round_overlap_ok and self.global_overlap_ok


def _tail_delta(spec: SourceSpec, N: int, l_e: int) -> float:
    top = min(N, spec.memory)
    s = math.fsum(math.sqrt(spec.realized_epsilon(l)) for l in range(l_e + 1, top + 1))
    return s * s


def check_chain(spec: SourceSpec, N: int, l_e: int, k: int, settings,
                global_overlap: float = None, tol: float = INEQUALITY_TOL) -> ChainReport:
    """Walk the hybrid sequence between the truncated and full emission of round ``k``.

    ``settings`` is the chronological sequence ``j_1, j_2, ...`` (at least
    ``k`` entries). Hybrid ``m`` restores the true settings at separations
    ``l_e+1 .. l_e+m`` and keeps the reference setting further back, so
    consecutive hybrids differ in one setting only.
    """
    N, l_e, k = int(N), int(l_e), int(k)
    if not (l_e + 1 < k <= N):
        raise ValueError(f"need l_e + 1 < k <= N, got l_e={l_e}, k={k}, N={N}")
    seq = np.asarray(settings, dtype=np.intp)[:k]
    if seq.size != k:
        raise ValueError(f"settings must have at least k={k} entries")

    n_steps = k - 1 - l_e
    hybrids = np.stack(
        [emit_batch(spec, seq[None, :], truncate_at=l_e + m)[0] for m in range(n_steps + 1)]
    )

    steps = []
    for m in range(1, n_steps + 1):
        l = l_e + m
        dist = pure_trace_distance(hybrids[m - 1], hybrids[m])
        steps.append((l, dist, math.sqrt(spec.realized_epsilon(l))))
    telescoped = math.fsum(s[1] for s in steps)
    end_to_end = pure_trace_distance(hybrids[0], hybrids[-1])
    round_overlap = float(abs(np.vdot(hybrids[0], hybrids[-1])))

    delta = _tail_delta(spec, N, l_e)
    base = max(0.0, 1.0 - delta)
    if global_overlap is None:
        global_overlap = overlap_by_formula(spec, N, l_e)
    factor_count = base ** ((N - l_e - 1) / 2)
    printed = base ** ((N - l_e - 2) / 2)
    round_bound = math.sqrt(base)

    return ChainReport(
        N=N,
        l_e=l_e,
        k=k,
        steps=tuple(steps),
        telescoped=telescoped,
        end_to_end=end_to_end,
        delta_le=delta,
        round_overlap=round_overlap,
        round_overlap_bound=round_bound,
        global_overlap=global_overlap,
        global_bound_factor_count=factor_count,
        global_bound_printed=printed,
        steps_ok=all(dist <= bound + tol for _, dist, bound in steps),
        triangle_ok=end_to_end <= telescoped + tol,
        round_overlap_ok=round_overlap >= round_bound - tol,
        global_overlap_ok=global_overlap >= factor_count - tol,
        printed_exponent_ok=global_overlap >= printed - tol,
    )
