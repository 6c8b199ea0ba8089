"""Trace-distance budget, effective correlation length and adjusted security parameter.

Truncating the source's memory at ``l_e`` rounds moves the prepared global
state by at most ``d = sqrt(N) * sqrt_delta(l_e)`` in trace distance, and a
key proven ``eps_sec``-secure for the truncated source is then
``(eps_sec + 2d)``-secure for the real one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .corr_model import (
    CorrelationModel,
    ExponentialModel,
    TabulatedModel,
    log_sqrt_delta_exponential,
    sqrt_delta,
)


class UnsupportedModeError(ValueError):
    """Raised when a target-``d`` plan is requested for a non-exponential model."""


@dataclass(frozen=True)
class BudgetRequest:
    N: int
    model: CorrelationModel
    eps_sec: float
    target_d: Optional[float] = None
    l_e: Optional[int] = None

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not (0.0 < self.eps_sec < 1.0):
            raise ValueError(f"eps_sec must lie in (0, 1), got {self.eps_sec!r}")
        if (self.target_d is None) == (self.l_e is None):
            raise ValueError("supply exactly one of target_d or l_e")
        if self.target_d is not None and not (0.0 < self.target_d < 1.0):
            raise ValueError(f"target_d must lie in (0, 1), got {self.target_d!r}")
        if self.l_e is not None and (int(self.l_e) != self.l_e or self.l_e < 0):
            raise ValueError(f"l_e must be a non-negative integer, got {self.l_e!r}")


@dataclass(frozen=True)
class BudgetPlan:
    N: int
    l_e: int
    sqrt_delta_le: float
    d: float
    eps_sec: float
    eps_total: float
    vacuous: bool

    @property
    def has_security_claim(self) -> bool:
        return self.eps_total < 1.0


@dataclass(frozen=True)
class Fig2Curve:
    decay_C: float
    points: tuple  # ((N, l_e), ...)

    @property
    def N(self):
        return [n for n, _ in self.points]

    @property
    def l_e(self):
        return [l for _, l in self.points]


def _log_raw_budget(model, N, l_e):
    """log of sqrt(N) * sqrt_delta, or -inf when the tail is empty."""
    if l_e >= N:
        return -math.inf
    if isinstance(model, ExponentialModel):
        return 0.5 * math.log(N) + log_sqrt_delta_exponential(model, l_e)
    s = sqrt_delta(model, l_e, N)
    return 0.5 * math.log(N) + math.log(s) if s > 0.0 else -math.inf


def trace_distance_budget(model: CorrelationModel, N: int, l_e: int):
    """Return ``(d, vacuous)`` with ``d = min(1, sqrt(N) * sqrt_delta(model, l_e, N))``.

    ``vacuous`` is True when the unclamped value reaches 1, i.e. the bound
    certifies nothing.
    """
    N, l_e = int(N), int(l_e)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if l_e < 0:
        raise ValueError(f"l_e must be >= 0, got {l_e}")
    log_raw = _log_raw_budget(model, N, l_e)
    if log_raw >= 0.0:
        return 1.0, True
    return math.exp(log_raw), False


def effective_length_real(model: ExponentialModel, N: int, target_d: float) -> float:
    """Real-valued ``l_e = ln(N eps_1 / (d^2 (1 - e^{-C/2})^2)) / C`` before rounding."""
    C = model.decay_C
    log_arg = (
        math.log(N)
        + math.log(model.epsilon1)
        - 2.0 * math.log(target_d)
        - 2.0 * math.log(-math.expm1(-0.5 * C))
    )
    return log_arg / C


def solve_effective_length(model: ExponentialModel, N: int, target_d: float) -> int:
    """Smallest non-negative integer ``l_e`` whose budget ``d`` meets ``target_d``.

    Starts from the ceiling of the closed-form real solution (clamped at 0)
    and then walks to the exact minimum by direct evaluation, so rounding in
    the closed form can never return an ``l_e`` that misses the target.
    """
    if not isinstance(model, ExponentialModel):
        raise UnsupportedModeError("solving for l_e needs an exponential correlation model")
    N = int(N)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not (0.0 < target_d < 1.0):
        raise ValueError(f"target_d must lie in (0, 1), got {target_d!r}")

    real = effective_length_real(model, N, target_d)
    # d vanishes once l_e >= N, so N is always feasible
    l_e = min(N, max(0, math.ceil(real)))

    def meets(l):
        return trace_distance_budget(model, N, l)[0] <= target_d

    while not meets(l_e):
        l_e += 1
    while l_e > 0 and meets(l_e - 1):
        l_e -= 1
    return l_e


def adjust_security_parameter(eps_sec: float, d: float) -> float:
    """``eps_sec + 2d``. Values >= 1 carry no security claim."""
    if not (0.0 < eps_sec < 1.0):
        raise ValueError(f"eps_sec must lie in (0, 1), got {eps_sec!r}")
    if not (0.0 <= d <= 1.0):
        raise ValueError(f"d must lie in [0, 1], got {d!r}")
    return eps_sec + 2.0 * d


def plan(request: BudgetRequest) -> BudgetPlan:
    """Run the planning workflow for one request.

    With ``target_d`` the effective length is solved for (exponential models
    only); with a fixed ``l_e`` any model works.
    """
    model, N = request.model, int(request.N)
    if request.target_d is not None:
        if isinstance(model, TabulatedModel):
            raise UnsupportedModeError(
                "unsupported mode: target_d needs an exponential model; use a fixed l_e with tabulated data"
            )
        l_e = solve_effective_length(model, N, request.target_d)
    else:
        l_e = int(request.l_e)
    s = sqrt_delta(model, l_e, N)
    d, vacuous = trace_distance_budget(model, N, l_e)
    return BudgetPlan(
        N=N,
        l_e=l_e,
        sqrt_delta_le=s,
        d=d,
        eps_sec=request.eps_sec,
        eps_total=adjust_security_parameter(request.eps_sec, d),
        vacuous=vacuous,
    )


def fig2_curve(model: ExponentialModel, target_d: float, N_grid) -> Fig2Curve:
    """``l_e`` against ``N`` for one decay rate, one point per grid entry."""
    grid = [int(n) for n in N_grid]
    if not grid:
        raise ValueError("N_grid must not be empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("N_grid must be strictly increasing")
    points = tuple((n, solve_effective_length(model, n, target_d)) for n in grid)
    return Fig2Curve(decay_C=model.decay_C, points=points)


def log_spaced_grid(N_min: float, N_max: float, points_per_decade: int) -> list:
    """Integer ``N`` values log-spaced from ``N_min`` to ``N_max`` inclusive, duplicates dropped."""
    if N_min < 1 or N_max < N_min or points_per_decade < 1:
        return []
    lo, hi = math.log10(N_min), math.log10(N_max)
    steps = int(math.floor((hi - lo) * points_per_decade + 1e-9))
    grid = [int(round(10 ** (lo + i / points_per_decade))) for i in range(steps + 1)]
    if grid[-1] != int(round(N_max)):
        grid.append(int(round(N_max)))
    out = []
    for n in grid:
        if not out or n > out[-1]:
            out.append(n)
    return out
