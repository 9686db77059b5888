"""Vocabulary size versus embedding parameter budget.

All sizes are floored, so a vocabulary never exceeds its budget. Arithmetic is
done on exact rationals; float ratios are read through their shortest decimal
repr, so ``0.3`` means 3/10 rather than the nearest binary fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidArgumentError


def _exact(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _check_ratio(ratio) -> Fraction:
    r = _exact(ratio)
    if not 0 < r < 1:
        raise InvalidArgumentError(f"ratio must lie strictly between 0 and 1, got {ratio}")
    return r


def _check_hidden(hidden) -> int:
    if hidden < 1:
        raise InvalidArgumentError(f"hidden size must be >= 1, got {hidden}")
    return hidden


@dataclass(frozen=True)
class BudgetSpec:
    hidden_size: int
    ratio: float
    total_params: int | None = None
    core_params: int | None = None

    def __post_init__(self):
        _check_hidden(self.hidden_size)
        _check_ratio(self.ratio)
        if (self.total_params is None) == (self.core_params is None):
            raise InvalidArgumentError("give exactly one of total_params and core_params")
        n = self.total_params if self.total_params is not None else self.core_params
        if n <= 0:
            raise InvalidArgumentError(f"parameter count must be positive, got {n}")

    def vocab_size(self) -> int:
        if self.total_params is not None:
            return vocab_size_total(self.total_params, self.ratio, self.hidden_size)
        return vocab_size_fixed_core(self.core_params, self.ratio, self.hidden_size)


def vocab_size_total(total_params, ratio, hidden) -> int:
    """Largest |V| whose embeddings take ``ratio`` of ``total_params``: floor(M*R/H)."""
    r = _check_ratio(ratio)
    _check_hidden(hidden)
    if total_params <= 0:
        raise InvalidArgumentError(f"total_params must be positive, got {total_params}")
    return math.floor(_exact(total_params) * r / hidden)


def vocab_size_fixed_core(core_params, ratio, hidden) -> int:
    """|V| such that V*H / (N + V*H) = R for fixed non-embedding params N.

    Solving gives V = N*R / ((1-R)*H), floored.
    """
    r = _check_ratio(ratio)
    _check_hidden(hidden)
    if core_params <= 0:
        raise InvalidArgumentError(f"core_params must be positive, got {core_params}")
    return math.floor(_exact(core_params) * r / ((1 - r) * hidden))


def embedding_params(vocab_size: int, hidden: int) -> int:
    if vocab_size < 0 or hidden < 0:
        raise InvalidArgumentError("vocab_size and hidden must be nonnegative")
    return vocab_size * hidden


def embedding_ratio(vocab_size: int, hidden: int, total_params) -> float:
    if total_params <= 0:
        raise InvalidArgumentError(f"total_params must be positive, got {total_params}")
    return embedding_params(vocab_size, hidden) / total_params


def format_k(vocab_size: int) -> str:
    """Truncated thousands: 16675 -> '16k', 999 -> '999'."""
    if vocab_size < 0:
        raise InvalidArgumentError(f"vocab_size must be nonnegative, got {vocab_size}")
    if vocab_size < 1000:
        return str(vocab_size)
    return f"{vocab_size // 1000}k"
