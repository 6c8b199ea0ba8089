"""A toy correlated qubit source with a tunable memory kernel.

Round ``k`` emits the base state of its own setting, rotated about the Y
axis by ``sum_l g(j_{k-l}) * kernel[l]``. A kernel angle
``2 * arcsin(sqrt(eps_l))`` makes the source saturate the correlation
magnitude ``eps_l`` exactly (for real base states and ``g`` spanning
[0, 1]), which is the worst case for a given profile. An optional phase
kick multiplies the emission by ``exp(i * sum_l g(j_{k-l}) * kick[l])``; it
leaves every ``eps_l`` unchanged but makes the round overlaps complex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..corr_model import CorrelationModel, TabulatedModel, epsilon_at

REFERENCE_SETTING = 0
DEFAULT_DIM_CAP = 2**24

_BB84 = np.array(
    [[1, 0], [0, 1], [1 / np.sqrt(2), 1 / np.sqrt(2)], [1 / np.sqrt(2), -1 / np.sqrt(2)]],
    dtype=complex,
)


class ResourceLimitError(RuntimeError):
    """Raised when a dense construction would exceed the memory cap."""


@dataclass(frozen=True, eq=False)
class SourceSpec:
    """Setting alphabet, probabilities, base emissions and memory kernel.

    ``kernel[l-1]`` is the rotation angle contributed by the setting ``l``
    rounds in the past, and ``weights[j]`` is ``g(j)``.
    """

    probs: np.ndarray
    base_states: np.ndarray
    kernel: np.ndarray
    weights: Optional[np.ndarray] = None
    phase_kick: Optional[np.ndarray] = None
    J: int = field(init=False)

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float).ravel()
        J = probs.size
        if J < 1:
            raise ValueError("the setting alphabet must not be empty")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("setting probabilities must be non-negative and sum to 1")
        base = np.asarray(self.base_states, dtype=complex)
        if base.shape != (J, 2):
            raise ValueError(f"base_states must have shape ({J}, 2), got {base.shape}")
        if np.any(np.abs(np.linalg.norm(base, axis=1) - 1.0) > 1e-12):
            raise ValueError("base states must be unit vectors")
        kernel = np.asarray(self.kernel, dtype=float).ravel()
        if np.any(kernel < 0) or np.any(kernel > np.pi):
            raise ValueError("kernel angles must lie in [0, pi]")
        if self.weights is None:
            weights = np.arange(J) / (J - 1) if J > 1 else np.zeros(1)
        else:
            weights = np.asarray(self.weights, dtype=float).ravel()
        if weights.shape != (J,) or np.any(weights < 0) or np.any(weights > 1):
            raise ValueError(f"weights must be {J} values in [0, 1]")
        kick = None
        if self.phase_kick is not None:
            kick = np.asarray(self.phase_kick, dtype=float).ravel()
            if kick.shape != kernel.shape:
                raise ValueError("phase_kick must have the same length as kernel")
        for name, value in (("probs", probs), ("base_states", base), ("kernel", kernel),
                            ("weights", weights), ("phase_kick", kick)):
            if value is not None:
                value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "J", J)

    @property
    def memory(self) -> int:
        return self.kernel.size

    @classmethod
    def from_model(cls, model: CorrelationModel, J: int, L: int, probs=None,
                   base_states=None, phase_kick=None) -> "SourceSpec":
        """Source whose kernel saturates ``model`` for separations ``1..L``."""
        eps = np.array([epsilon_at(model, l) for l in range(1, L + 1)])
        kernel = kernel_from_epsilon(eps)
        if probs is None:
            probs = np.full(J, 1.0 / J)
        if base_states is None:
            if J > len(_BB84):
                raise ValueError("supply base_states for alphabets larger than 4")
            base_states = _BB84[:J]
        return cls(probs=probs, base_states=base_states, kernel=kernel, phase_kick=phase_kick)

    @classmethod
    def uncorrelated(cls, J: int, L: int, probs=None) -> "SourceSpec":
        return cls.from_model(TabulatedModel((0.0,) * max(L, 1)), J, L, probs=probs)

    def realized_epsilon(self, l: int) -> float:
        """Closed-form correlation magnitude ``sin^2(kernel_l * spread(g) / 2)``.

        Exact for real base states; an upper bound otherwise.
        """
        if not 1 <= l <= self.memory:
            raise ValueError(f"separation {l} outside the kernel range 1..{self.memory}")
        spread = float(self.weights.max() - self.weights.min())
        return float(np.sin(0.5 * self.kernel[l - 1] * spread) ** 2)


def kernel_from_epsilon(eps):
    """Rotation angles ``2 * arcsin(sqrt(eps_l))``."""
    return 2.0 * np.arcsin(np.sqrt(np.asarray(eps, dtype=float)))


def emit_batch(spec: SourceSpec, sequences, truncate_at=None):
    """Emitted qubit states for a batch of chronological setting sequences.

    Row ``m`` of ``sequences`` is ``(j_1, ..., j_k)``; the result row is the
    state emitted in round ``k`` given that history. With ``truncate_at``
    set, settings more than that many rounds back are replaced by the
    reference setting 0 first.
    """
    seq = np.asarray(sequences, dtype=np.intp)
    if seq.ndim != 2 or seq.shape[1] < 1:
        raise ValueError("sequences must be a 2-d array with at least one column")
    if seq.size and (seq.min() < 0 or seq.max() >= spec.J):
        raise ValueError(f"settings must lie in 0..{spec.J - 1}")
    depth = seq.shape[1] - 1
    if depth > spec.memory:
        raise ValueError(f"history of length {depth} exceeds the kernel length {spec.memory}")
    current = seq[:, -1]
    history = seq[:, -2::-1] if depth else np.empty((seq.shape[0], 0), dtype=np.intp)
    if truncate_at is not None and depth > truncate_at:
        history = history.copy()
        history[:, truncate_at:] = REFERENCE_SETTING
    g = spec.weights[history]
    angle = g @ spec.kernel[:depth]
    c, s = np.cos(0.5 * angle), np.sin(0.5 * angle)
    base = spec.base_states[current]
    out = np.empty_like(base)
    out[:, 0] = c * base[:, 0] - s * base[:, 1]
    out[:, 1] = s * base[:, 0] + c * base[:, 1]
    if spec.phase_kick is not None:
        out *= np.exp(1j * (g @ spec.phase_kick[:depth]))[:, None]
    return out


def emitted_state(spec: SourceSpec, j_current: int, history=(), truncate_at=None):
    """State emitted with setting ``j_current`` after ``history``.

    ``history[l-1]`` is the setting chosen ``l`` rounds earlier.
    """
    seq = list(history)[::-1] + [j_current]
    return emit_batch(spec, np.array([seq]), truncate_at)[0]


def all_sequences(J: int, k: int):
    """Every length-``k`` sequence over ``0..J-1``, first entry most significant."""
    if k == 0:
        return np.empty((1, 0), dtype=np.intp)
    return np.indices((J,) * k).reshape(k, -1).T


def check_dim(J: int, N: int, cap: int = DEFAULT_DIM_CAP) -> int:
    dim = (2 * J) ** N
    if dim > cap:
        raise ResourceLimitError(f"dimension (2J)^N = {dim} exceeds the cap {cap}")
    return dim


def measure_correlation_strength(spec: SourceSpec, l: int, N_probe: int,
                                 cap: int = DEFAULT_DIM_CAP) -> float:
    """Brute-force correlation magnitude at separation ``l``.

    Maximizes ``1 - |<psi(.., a, ..)|psi(.., b, ..)>|^2`` over every
    length-``N_probe`` setting sequence and every pair of values ``(a, b)``
    for the setting ``l`` rounds before the last one.
    """
    if not 1 <= l < N_probe:
        raise ValueError(f"need 1 <= l < N_probe, got l={l}, N_probe={N_probe}")
    check_dim(spec.J, N_probe, cap)
    seqs = all_sequences(spec.J, N_probe)
    pos = N_probe - 1 - l
    seqs = seqs[seqs[:, pos] == 0]
    states = []
    for a in range(spec.J):
        variant = seqs.copy()
        variant[:, pos] = a
        states.append(emit_batch(spec, variant))
    worst = 0.0
    for a, b in itertools.combinations(range(spec.J), 2):
        overlap = np.abs(np.sum(states[a].conj() * states[b], axis=1)) ** 2
        worst = max(worst, float(np.max(1.0 - overlap)))
    return min(1.0, max(0.0, worst))
