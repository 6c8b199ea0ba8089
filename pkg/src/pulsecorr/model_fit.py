"""Fit the exponential correlation profile to measured magnitudes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corr_model import ExponentialModel, read_correlation_csv

DEFAULT_MAX_LOG_RESIDUAL = math.log(2.0)


class InsufficientDataError(ValueError):
    pass


class NonDecayingModelError(ValueError):
    """The fitted decay rate is not positive; a tabulated model is needed instead."""


class PoorFitError(ValueError):
    """The exponential fit misses some sample by more than the allowed log residual."""


@dataclass(frozen=True)
class SampleSet:
    samples: tuple  # ((l, eps_l), ...)

    def __post_init__(self):
        samples = tuple((int(l), float(e)) for l, e in self.samples)
        ls = [l for l, _ in samples]
        if len(set(ls)) != len(ls):
            raise ValueError("separations l must be distinct")
        for l, e in samples:
            if l < 1:
                raise ValueError(f"separation l={l} must be >= 1")
            if e == 0.0:
                raise ValueError(
                    f"eps_{l} = 0 cannot enter a log-linear fit; use a tabulated model for exact zeros"
                )
            if not (0.0 < e <= 1.0):
                raise ValueError(f"eps_{l} = {e!r} is outside (0, 1]")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_csv(cls, path) -> "SampleSet":
        return cls(tuple(read_correlation_csv(path)))


@dataclass(frozen=True)
class FitResult:
    epsilon1: float
    decay_C: float
    max_log_residual: float

    def to_model(self) -> ExponentialModel:
        return ExponentialModel(self.epsilon1, self.decay_C)


def fit_exponential(samples: SampleSet) -> FitResult:
    """Unweighted least-squares line through ``ln eps_l`` against ``l - 1``.

    The slope is ``-C`` and the intercept ``ln eps_1``.

    Raises
    ------
    InsufficientDataError
        Fewer than two samples.
    NonDecayingModelError
        The fitted ``C`` is not positive.
    """
    if len(samples.samples) < 2:
        raise InsufficientDataError(f"need at least 2 samples to fit, got {len(samples.samples)}")
    x = np.array([l - 1 for l, _ in samples.samples], dtype=float)
    y = np.log([e for _, e in samples.samples])
    slope, intercept = np.polyfit(x, y, 1)
    C = -float(slope)
    if not C > 0.0:
        raise NonDecayingModelError(
            f"fitted decay rate C = {C:.6g} is not positive; use a tabulated model instead"
        )
    residual = float(np.max(np.abs(y - (intercept + slope * x))))
    return FitResult(epsilon1=float(math.exp(intercept)), decay_C=C, max_log_residual=residual)


def check_fit(result: FitResult, max_log_residual: float = DEFAULT_MAX_LOG_RESIDUAL) -> FitResult:
    """Reject fits that miss any sample by more than ``max_log_residual`` in log space."""
    if result.max_log_residual > max_log_residual:
        raise PoorFitError(
            f"worst log residual {result.max_log_residual:.6g} exceeds {max_log_residual:.6g}; "
            "the exponential model is unsafe here, use a tabulated model"
        )
    if result.epsilon1 > 1.0:
        raise PoorFitError(f"fitted epsilon1 = {result.epsilon1:.6g} exceeds 1")
    return result
