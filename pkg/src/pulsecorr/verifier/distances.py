"""Trace distance for pure and mixed states."""

import numpy as np

HERMITIAN_TOL = 1e-10


def pure_trace_distance(psi, phi) -> float:
    """Trace distance between the pure states ``|psi>`` and ``|phi>``.

    Equal to ``sqrt(1 - |<phi|psi>|^2)`` for unit vectors. When the states
    are nearly equal that difference cancels badly, so the norm of the part
    of ``psi`` orthogonal to ``phi`` is used instead.
    """
    psi = np.asarray(psi)
    phi = np.asarray(phi)
    if psi.ndim != 1 or psi.shape != phi.shape:
        raise ValueError(f"need two vectors of equal dimension, got shapes {psi.shape} and {phi.shape}")
    overlap = np.vdot(phi, psi)
    gap = 1.0 - abs(overlap) ** 2
    if gap > 1e-6:
        return float(min(1.0, np.sqrt(gap)))
    residual = psi - overlap * phi
    return float(min(1.0, np.linalg.norm(residual)))


def mixed_trace_distance(rho, sigma) -> float:
    """``0.5 * ||rho - sigma||_1`` for Hermitian matrices of equal shape."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape != sigma.shape:
        raise ValueError(f"need two square matrices of equal shape, got {rho.shape} and {sigma.shape}")
    diff = rho - sigma
    if np.max(np.abs(diff - diff.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise ValueError("inputs must be Hermitian")
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def projector(psi):
    psi = np.asarray(psi)
    return np.outer(psi, psi.conj())
