"""Classical-quantum final states and the map that idealizes their keys.

A final state is a list of classical records ``(K, k_A, k_B)`` with a
weight ``p(K) p(k_A, k_B | K)`` and Eve's conditional state. ``gamma_map``
discards the keys, keeps Eve's ``K``-conditional marginal, and attaches a
uniform identical key of the same length.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .distances import mixed_trace_distance

WEIGHT_TOL = 1e-12
STATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CqEntry:
    K: int
    k_A: int
    k_B: int
    weight: float
    eve_op: np.ndarray


@dataclass(frozen=True, eq=False)
class CqFinalState:
    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise ValueError("a final state needs at least one entry")
        dim = None
        total = 0.0
        for e in entries:
            if e.K < 0 or not (0 <= e.k_A < 2**e.K and 0 <= e.k_B < 2**e.K):
                raise ValueError(f"keys ({e.k_A}, {e.k_B}) out of range for length K={e.K}")
            if e.K == 0 and (e.k_A, e.k_B) != (0, 0):
                raise ValueError("aborted rounds (K=0) must carry k_A = k_B = 0")
            if e.weight < 0:
                raise ValueError("weights must be non-negative")
            op = np.asarray(e.eve_op)
            if op.ndim != 2 or op.shape[0] != op.shape[1]:
                raise ValueError("Eve operators must be square matrices")
            if dim is None:
                dim = op.shape[0]
            elif op.shape[0] != dim:
                raise ValueError("all Eve operators must share one dimension")
            if np.max(np.abs(op - op.conj().T)) > STATE_TOL or abs(np.trace(op).real - 1) > STATE_TOL:
                raise ValueError("Eve operators must be Hermitian with unit trace")
            if np.linalg.eigvalsh(0.5 * (op + op.conj().T))[0] < -STATE_TOL:
                raise ValueError("Eve operators must be positive semidefinite")
            total += e.weight
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights sum to {total!r}, expected 1")
        object.__setattr__(self, "entries", entries)

    @property
    def eve_dim(self) -> int:
        return self.entries[0].eve_op.shape[0]

    def labels(self):
        return sorted({(e.K, e.k_A, e.k_B) for e in self.entries})

    def key_length_distribution(self) -> dict:
        p = defaultdict(float)
        for e in self.entries:
            p[e.K] += e.weight
        return dict(p)

    def blocks(self) -> dict:
        """Unnormalized Eve operator ``weight * eve_op`` summed per classical label."""
        out = defaultdict(lambda: np.zeros((self.eve_dim, self.eve_dim), dtype=complex))
        for e in self.entries:
            out[(e.K, e.k_A, e.k_B)] = out[(e.K, e.k_A, e.k_B)] + e.weight * np.asarray(e.eve_op)
        return dict(out)

    def to_dense(self, labels=None) -> np.ndarray:
        """Block-diagonal density matrix over ``labels`` (default: this state's own) times Eve."""
        labels = self.labels() if labels is None else list(labels)
        blocks = self.blocks()
        d = self.eve_dim
        rho = np.zeros((len(labels) * d, len(labels) * d), dtype=complex)
        for i, label in enumerate(labels):
            if label in blocks:
                rho[i * d:(i + 1) * d, i * d:(i + 1) * d] = blocks[label]
        missing = set(blocks) - set(labels)
        if missing:
            raise ValueError(f"labels {sorted(missing)} are not in the requested layout")
        return rho


def cq_trace_distance(a: CqFinalState, b: CqFinalState) -> float:
    """Trace distance of two final states embedded on their joint label set."""
    if a.eve_dim != b.eve_dim:
        raise ValueError("Eve dimensions differ")
    labels = sorted(set(a.labels()) | set(b.labels()))
    return mixed_trace_distance(a.to_dense(labels), b.to_dense(labels))


def gamma_map(state: CqFinalState) -> CqFinalState:
    """Replace the actual keys by an ideal uniform identical key of the same length."""
    if not isinstance(state, CqFinalState):
        raise TypeError("gamma_map expects a CqFinalState")
    pK = defaultdict(float)
    eve = {}
    for e in state.entries:
        pK[e.K] += e.weight
        eve[e.K] = eve.get(e.K, 0) + e.weight * np.asarray(e.eve_op, dtype=complex)
    entries = []
    for K in sorted(pK):
        if pK[K] == 0.0:
            continue
        marginal = eve[K] / pK[K]
        marginal = 0.5 * (marginal + marginal.conj().T)
        for k in range(2**K):
            entries.append(CqEntry(K, k, k, pK[K] / 2**K, marginal))
    return CqFinalState(tuple(entries))


def ideal_state_dense(state: CqFinalState, labels) -> np.ndarray:
    """Directly assemble ``sum_K p(K) tau_K (x) Tr_keys[rho_K]`` as a dense matrix.

    Independent of :func:`gamma_map`: each ``K`` sector is written out as a
    full ``(2^K * 2^K * d)``-dimensional operator, the key registers are
    traced out of it, and the ideal key state is tensored back on.
    """
    d = state.eve_dim
    index = {label: i for i, label in enumerate(labels)}
    out = np.zeros((len(labels) * d, len(labels) * d), dtype=complex)
    for K in sorted(state.key_length_distribution()):
        nk = 2**K
        sector = np.zeros((nk * nk * d, nk * nk * d), dtype=complex)
        for e in state.entries:
            if e.K != K:
                continue
            r = e.k_A * nk + e.k_B
            sector[r * d:(r + 1) * d, r * d:(r + 1) * d] += e.weight * np.asarray(e.eve_op)
        eve = np.trace(sector.reshape(nk * nk, d, nk * nk, d), axis1=0, axis2=2)
        tau = np.zeros((nk * nk, nk * nk))
        for k in range(nk):
            tau[k * nk + k, k * nk + k] = 1.0 / nk
        ideal = np.kron(tau, eve)
        for kA in range(nk):
            for kB in range(nk):
                r = kA * nk + kB
                block = ideal[r * d:(r + 1) * d, r * d:(r + 1) * d]
                if (K, kA, kB) in index:
                    i = index[(K, kA, kB)]
                    out[i * d:(i + 1) * d, i * d:(i + 1) * d] = block
                elif np.any(block):
                    raise ValueError(f"label {(K, kA, kB)} is missing from the layout")
    return out


def random_density_matrix(dim: int, rng, rank: int = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_cq_state(rng, max_K: int = 3, eve_dim: int = 2, support: int = None) -> CqFinalState:
    """Random final state with key lengths ``0..max_K`` and a random sparse key distribution."""
    pK = rng.dirichlet(np.ones(max_K + 1))
    entries = []
    for K in range(max_K + 1):
        if K == 0:
            pairs = [(0, 0)]
        else:
            nk = 2**K
            size = min(nk * nk, support or int(rng.integers(1, nk * nk + 1)))
            flat = rng.choice(nk * nk, size=size, replace=False)
            pairs = [(int(f) // nk, int(f) % nk) for f in flat]
        cond = rng.dirichlet(np.ones(len(pairs)))
        for (kA, kB), c in zip(pairs, cond):
            rank = int(rng.integers(1, eve_dim + 1))
            entries.append(CqEntry(K, kA, kB, float(pK[K] * c), random_density_matrix(eve_dim, rng, rank)))
    total = sum(e.weight for e in entries)
    entries = [CqEntry(e.K, e.k_A, e.k_B, e.weight / total, e.eve_op) for e in entries]
    return CqFinalState(tuple(entries))
