"""Dense global states of the source-replacement picture.

Amplitudes are laid out round-major: ``A_1 (J), S_1 (2), A_2, S_2, ...``.
The setting registers ``A_k`` are classical labels folded into the index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .source import DEFAULT_DIM_CAP, SourceSpec, all_sequences, check_dim, emit_batch


@dataclass(frozen=True, eq=False)
class GlobalStatePair:
    N: int
    l_e: int
    dim: int
    psi_inf: np.ndarray
    psi_trunc: np.ndarray
    phases: tuple  # phases[k-1][prefix index] for round k

    @cached_property
    def overlap(self) -> float:
        return float(abs(np.vdot(self.psi_trunc, self.psi_inf)))


def round_overlaps(spec: SourceSpec, k: int, l_e: int):
    """``<psi_trunc|psi_full>`` for round ``k`` over all setting prefixes ``j_1..j_k``.

    Returns the prefixes and the two emitted-state arrays alongside.
    """
    prefixes = all_sequences(spec.J, k)
    full = emit_batch(spec, prefixes)
    trunc = emit_batch(spec, prefixes, truncate_at=l_e)
    return prefixes, full, trunc, np.sum(trunc.conj() * full, axis=1)


def build_states(spec: SourceSpec, N: int, l_e: int, cap: int = DEFAULT_DIM_CAP) -> GlobalStatePair:
    """Build ``|Psi_inf>`` (full memory, aligning phases) and ``|Psi_le>`` (memory cut at ``l_e``).

    Each round of ``|Psi_inf>`` carries the phase ``-arg<psi_trunc|psi_full>``
    so that every round overlap is real and non-negative.
    """
    N, l_e = int(N), int(l_e)
    if N < 1 or l_e < 0:
        raise ValueError(f"need N >= 1 and l_e >= 0, got N={N}, l_e={l_e}")
    dim = check_dim(spec.J, N, cap)
    J = spec.J
    sqrt_p = np.sqrt(spec.probs)
    amp_inf = np.ones((), dtype=complex)
    amp_trunc = np.ones((), dtype=complex)
    phases = []
    for k in range(1, N + 1):
        prefixes, full, trunc, ov = round_overlaps(spec, k, l_e)
        theta = -np.angle(ov)
        phases.append(theta)
        weight = sqrt_p[prefixes[:, -1]]
        # (J,)*k + (2,) -> interleave singleton S axes for earlier rounds
        shape = (J, 1) * (k - 1) + (J, 2)
        f_inf = ((weight * np.exp(1j * theta))[:, None] * full).reshape(shape)
        f_trunc = (weight[:, None] * trunc).reshape(shape)
        amp_inf = amp_inf[..., None, None] * f_inf
        amp_trunc = amp_trunc[..., None, None] * f_trunc
    return GlobalStatePair(
        N=N,
        l_e=l_e,
        dim=dim,
        psi_inf=amp_inf.reshape(-1),
        psi_trunc=amp_trunc.reshape(-1),
        phases=tuple(phases),
    )


def overlap_by_formula(spec: SourceSpec, N: int, l_e: int, cap: int = DEFAULT_DIM_CAP) -> float:
    """``sum_j p_{j_1}...p_{j_N} prod_k |<psi_trunc|psi_full>_k|`` over all setting sequences."""
    N, l_e = int(N), int(l_e)
    check_dim(spec.J, N, cap)
    weights = np.ones(1)
    for k in range(1, N + 1):
        *_, ov = round_overlaps(spec, k, l_e)
        weights = (weights[:, None] * spec.probs[None, :]).reshape(-1) * np.abs(ov)
    return float(np.sum(weights))
