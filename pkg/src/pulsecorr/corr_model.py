"""Correlation-magnitude profiles for a correlated QKD source.

A profile gives ``eps_l``, the largest drop in squared overlap that the state
emitted in one round can suffer when the setting chosen ``l`` rounds earlier
is changed. Two forms are supported: an exponential decay
``eps_l = eps_1 * exp(-C (l - 1))`` and a finite table measured at
``l = 1..L_max``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np


class CharacterizationRangeError(ValueError):
    """Raised when a pulse separation lies outside the characterized range."""


@dataclass(frozen=True)
class ExponentialModel:
    """``eps_l = epsilon1 * exp(-decay_C * (l - 1))``."""

    epsilon1: float
    decay_C: float

    def __post_init__(self):
        if not (0.0 < self.epsilon1 <= 1.0):
            raise ValueError(f"epsilon1 must lie in (0, 1], got {self.epsilon1!r}")
        if not (self.decay_C > 0.0 and math.isfinite(self.decay_C)):
            raise ValueError(f"decay_C must be a positive finite number, got {self.decay_C!r}")


@dataclass(frozen=True)
class TabulatedModel:
    """Measured ``eps_l`` for ``l = 1..len(eps)``.

    Zeros are allowed. No monotonicity is enforced, and queries past the last
    entry raise instead of assuming the correlations vanish there.
    """

    eps: tuple

    def __post_init__(self):
        values = tuple(float(e) for e in self.eps)
        if not values:
            raise ValueError("a tabulated model needs at least one entry")
        for l, e in enumerate(values, start=1):
            if not (0.0 <= e <= 1.0):
                raise ValueError(f"eps_{l} = {e!r} is outside [0, 1]")
        object.__setattr__(self, "eps", values)

    @property
    def max_separation(self) -> int:
        return len(self.eps)


CorrelationModel = Union[ExponentialModel, TabulatedModel]


def _check_model(model):
    if not isinstance(model, (ExponentialModel, TabulatedModel)):
        raise TypeError(f"expected ExponentialModel or TabulatedModel, got {type(model).__name__}")


def epsilon_at(model: CorrelationModel, l: int) -> float:
    """Correlation magnitude at pulse separation ``l`` (``l >= 1``)."""
    _check_model(model)
    l = int(l)
    if l < 1:
        raise ValueError(f"pulse separation must be >= 1, got {l}")
    if isinstance(model, ExponentialModel):
        # powers of one rounded ratio keep eps_{l+1}/eps_l within a few ulp of e^{-C}
        return model.epsilon1 * math.exp(-model.decay_C) ** (l - 1)
    if l > model.max_separation:
        raise CharacterizationRangeError(
            f"separation l={l} exceeds the characterized range l <= {model.max_separation}"
        )
    return model.eps[l - 1]


def sqrt_delta(model: CorrelationModel, l_e: int, N: int) -> float:
    """Tail aggregate ``sum_{l=l_e+1}^{N} sqrt(eps_l)``.

    For a table the sum is taken directly. For the exponential model the
    infinite tail ``sqrt(eps_1 e^{-C l_e}) / (1 - e^{-C/2})`` is returned,
    which upper-bounds every finite-``N`` sum. An empty range gives 0.

    Raises
    ------
    CharacterizationRangeError
        If a table does not reach separation ``N``.
    """
    _check_model(model)
    l_e, N = int(l_e), int(N)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if l_e < 0:
        raise ValueError(f"l_e must be >= 0, got {l_e}")
    if l_e >= N:
        return 0.0
    if isinstance(model, ExponentialModel):
        return math.exp(log_sqrt_delta_exponential(model, l_e))
    if N > model.max_separation:
        raise CharacterizationRangeError(
            f"the table covers l <= {model.max_separation} but N={N} signals need l up to {N}"
        )
    return math.fsum(math.sqrt(e) for e in model.eps[l_e:N])


def log_sqrt_delta_exponential(model: ExponentialModel, l_e: int) -> float:
    """Natural log of the exponential-model infinite tail, computed without underflow."""
    C = model.decay_C
    # 1 - e^{-C/2} == -expm1(-C/2), accurate for small C
    return 0.5 * (math.log(model.epsilon1) - C * l_e) - math.log(-math.expm1(-0.5 * C))


def load_tabulated_csv(path) -> TabulatedModel:
    """Read a two-column ``l,epsilon_l`` CSV into a :class:`TabulatedModel`.

    The header row is required and ``l`` must run 1, 2, 3, ... without gaps.
    """
    samples = read_correlation_csv(path)
    for expected, (l, _) in enumerate(samples, start=1):
        if l != expected:
            raise ValueError(f"{path}: expected l={expected}, found l={l}; rows must start at 1 without gaps")
    return TabulatedModel(tuple(e for _, e in samples))


def read_correlation_csv(path) -> list:
    """Parse ``l,epsilon_l`` rows, returning ``[(l, eps), ...]``.

    Errors name the file and line. ``l`` must be strictly increasing.
    """
    path = Path(path)
    rows = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty file, expected header 'l,epsilon_l'")
        if [h.strip() for h in header] != ["l", "epsilon_l"]:
            raise ValueError(f"{path}, line 1: expected header 'l,epsilon_l', got {','.join(header)!r}")
        for row in reader:
            lineno = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}, line {lineno}: expected 2 columns, got {len(row)}")
            try:
                l = int(row[0])
                eps = float(row[1])
            except ValueError:
                raise ValueError(f"{path}, line {lineno}: cannot parse {','.join(row)!r}") from None
            if not np.isfinite(eps):
                raise ValueError(f"{path}, line {lineno}: epsilon_l must be finite")
            if rows and l <= rows[-1][0]:
                raise ValueError(f"{path}, line {lineno}: l must be strictly increasing")
            if l < 1:
                raise ValueError(f"{path}, line {lineno}: l must be >= 1")
            rows.append((l, eps))
    return rows
