"""Random quantum channels and the data-processing check."""

from __future__ import annotations

import numpy as np

from .distances import mixed_trace_distance

DPI_TOL = 1e-10


def random_isometry(d_in: int, d_out: int, rng) -> np.ndarray:
    """Haar-random isometry ``V`` with ``V^dag V = 1`` (shape ``(d_out, d_in)``)."""
    if d_out < d_in:
        raise ValueError("an isometry needs d_out >= d_in")
    z = rng.normal(size=(d_out, d_in)) + 1j * rng.normal(size=(d_out, d_in))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_channel(d_in: int, rng, d_out: int = None, d_env: int = None) -> list:
    """Kraus operators of a random trace-preserving CP map.

    An isometry into ``out (x) env`` is drawn and the environment is traced
    out, so each Kraus operator is one environment slice of the isometry.
    """
    d_out = d_in if d_out is None else d_out
    if d_env is None:
        d_env = int(rng.integers(1, d_in * d_out + 1))
    d_env = max(d_env, -(-d_in // d_out))
    V = random_isometry(d_in, d_out * d_env, rng).reshape(d_out, d_env, d_in)
    return [V[:, e, :] for e in range(d_env)]


def identity_channel(dim: int) -> list:
    return [np.eye(dim, dtype=complex)]


def depolarizing_channel(dim: int) -> list:
    """Fully depolarizing map ``rho -> tr(rho) 1/dim`` via the ``dim^2`` operators ``|i><j| / sqrt(dim)``."""
    ops = []
    for i in range(dim):
        for j in range(dim):
            op = np.zeros((dim, dim), dtype=complex)
            op[i, j] = 1.0 / np.sqrt(dim)
            ops.append(op)
    return ops


def apply_channel(kraus, rho) -> np.ndarray:
    rho = np.asarray(rho)
    return sum(K @ rho @ K.conj().T for K in kraus)


def is_trace_preserving(kraus, tol: float = 1e-10) -> bool:
    d_in = kraus[0].shape[1]
    total = sum(K.conj().T @ K for K in kraus)
    return bool(np.allclose(total, np.eye(d_in), atol=tol))


def dpi_property(rho, sigma, channel_seed: int, kraus=None, tol: float = DPI_TOL):
    """``(T(rho, sigma), T(Phi rho, Phi sigma), passed)`` for a channel ``Phi``.

    ``Phi`` is drawn from ``channel_seed`` unless explicit Kraus operators are given.
    """
    rho = np.asarray(rho)
    if kraus is None:
        rng = np.random.default_rng(channel_seed)
        kraus = random_channel(rho.shape[0], rng, d_out=int(rng.integers(1, rho.shape[0] + 1)))
    before = mixed_trace_distance(rho, sigma)
    after = mixed_trace_distance(apply_channel(kraus, rho), apply_channel(kraus, sigma))
    return before, after, after <= before + tol
