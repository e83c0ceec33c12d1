"""Sugeno and Choquet integrals of functions on a finite ground set.

Both integrals only ever look at the capacity on the "top-i" sets of a
function: sort the points by decreasing value and let ``T_i`` be the first
``i`` of them.  With ``v_i`` the ``i``-th largest value,

    Su(mu, f) = max_i  v_i  ^  mu(T_i)
    Ch(mu, f) = sum_i (v_i - v_{i+1}) * mu(T_i)        (v_{n+1} = 0)

Ties are harmless: a partial tie block gives a top-i set contained in the
full level set ``{f >= v_i}``, so its Sugeno candidate is dominated and its
Choquet weight ``v_i - v_{i+1}`` is zero.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .capacity import Capacity, ext_mul, ext_pow, mask_of
from .errors import DomainError, NegativeFunction


@dataclass(frozen=True, eq=False)
class MeasurableFn:
    """A real-valued function on ``{0, ..., n-1}``; supports pointwise arithmetic."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.size == 0:
            raise DomainError("a function needs at least one point")
        if not np.all(np.isfinite(v)):
            raise DomainError("function values must be finite reals")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, n: int) -> MeasurableFn:
        return cls(np.zeros(n))

    @classmethod
    def indicator(cls, n: int, subset, alpha: float = 1.0) -> MeasurableFn:
        m = mask_of(subset)
        return cls(np.array([alpha if m >> i & 1 else 0.0 for i in range(n)]))

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self):
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())

    def __eq__(self, other):
        if not isinstance(other, MeasurableFn):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        return f"MeasurableFn({self.values.tolist()})"

    def _other(self, other) -> np.ndarray:
        v = other.values if isinstance(other, MeasurableFn) else np.asarray(other, dtype=float)
        if v.shape != self.values.shape:
            raise DomainError("functions live on different ground sets")
        return v

    def __add__(self, other):
        return MeasurableFn(self.values + self._other(other))

    def __sub__(self, other):
        return MeasurableFn(self.values - self._other(other))

    def __neg__(self):
        return MeasurableFn(-self.values)

    def __mul__(self, alpha: float):
        return MeasurableFn(self.values * float(alpha))

    __rmul__ = __mul__

    def __abs__(self):
        return MeasurableFn(np.abs(self.values))

    def __pow__(self, r: float):
        return MeasurableFn(np.power(self.values, r))


def values_of(f, n: int | None = None) -> np.ndarray:
    """Coerce a :class:`MeasurableFn` or sequence to a float vector of length ``n``."""
    v = f.values if isinstance(f, MeasurableFn) else np.asarray(f, dtype=float).reshape(-1)
    if n is not None and v.size != n:
        raise DomainError(f"function has {v.size} values, the capacity lives on {n} points")
    return v


def _nonnegative(mu: Capacity, f) -> np.ndarray:
    v = values_of(f, mu.n)
    if (v < 0).any():
        raise NegativeFunction(f"integrand must be nonnegative, got {v.tolist()}")
    return v


def level_mask(v: np.ndarray, t: float, strict: bool = True) -> int:
    sel = v > t if strict else v >= t
    return int(np.dot(sel.astype(np.int64), 1 << np.arange(v.size, dtype=np.int64)))


def top_sets(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values sorted decreasingly and the masks of the matching top-i sets."""
    order = np.argsort(-v, kind="stable")
    masks = np.cumsum(np.left_shift(np.int64(1), order.astype(np.int64)))
    return v[order], masks


def top_sets_many(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise :func:`top_sets` for a 2-D array of functions."""
    order = np.argsort(-rows, axis=1, kind="stable")
    masks = np.cumsum(np.left_shift(np.int64(1), order.astype(np.int64)), axis=1)
    return np.take_along_axis(rows, order, axis=1), masks


def distribution(mu: Capacity, f, t: float, strict: bool = True) -> float:
    """``mu({f > t})``, or ``mu({f >= t})`` when ``strict`` is false."""
    return float(mu.values[level_mask(values_of(f, mu.n), t, strict)])


def _sugeno_sorted(sorted_vals: np.ndarray, mu_top: np.ndarray) -> float:
    if sorted_vals.size == 0:
        return 0.0
    return float(max(0.0, np.max(np.minimum(sorted_vals, mu_top))))


def sugeno_power(mu: Capacity, f, r: float = 1.0) -> float:
    """``Su(mu ** r, f)`` without forming the transformed table."""
    v = _nonnegative(mu, f)
    s, masks = top_sets(v)
    mu_top = mu.values[masks]
    if r != 1.0:
        with np.errstate(over="ignore"):
            mu_top = np.power(mu_top, r)
    return _sugeno_sorted(s, mu_top)


def sugeno_integral(mu: Capacity, f) -> float:
    """``Su(mu, f) = sup_t  t ^ mu({f > t})`` for ``f >= 0``."""
    return sugeno_power(mu, f, 1.0)


def sugeno_many(mu: Capacity, rows: np.ndarray, r: float = 1.0) -> np.ndarray:
    """Sugeno integrals ``Su(mu ** r, row)`` of every row of a 2-D array."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != mu.n:
        raise DomainError("expected an array of shape (m, n)")
    if (rows < 0).any():
        raise NegativeFunction("integrands must be nonnegative")
    s, masks = top_sets_many(rows)
    mu_top = mu.values[masks]
    if r != 1.0:
        with np.errstate(over="ignore"):
            mu_top = np.power(mu_top, r)
    return np.maximum(np.max(np.minimum(s, mu_top), axis=1), 0.0)


def sugeno_bruteforce(mu: Capacity, f, grid_resolution: float, strict: bool = True) -> float:
    """Evaluate ``max_t  t ^ mu({f > t})`` literally on ``t = 0, h, 2h, ..., max f + h``.

    Never exceeds the exact integral and falls short by less than ``h``.  With
    ``strict=False`` the level sets ``{f >= t}`` are used instead, and the
    result is exact whenever every value of ``f`` lies on the grid.
    """
    h = float(grid_resolution)
    if not h > 0:
        raise DomainError("grid resolution must be positive")
    v = _nonnegative(mu, f)
    top = float(v.max())
    ts = np.arange(int(math.floor(top / h)) + 2) * h
    ascending = np.sort(v)
    # points with f > t (resp. f >= t) are the last n - count of the ascending order
    side = "right" if strict else "left"
    counts = np.searchsorted(ascending, ts, side=side)
    order = np.argsort(v, kind="stable")
    bits = np.left_shift(np.int64(1), order.astype(np.int64))
    suffix = np.concatenate([np.cumsum(bits[::-1])[::-1], [0]])
    level_masks = suffix[counts]
    return float(np.max(np.minimum(ts, mu.values[level_masks])))


def choquet_integral(mu: Capacity, f) -> float:
    """``Ch(mu, f) = integral_0^inf mu({f > t}) dt`` for ``f >= 0``.

    Infinite capacity values propagate only across positive gaps.
    """
    v = _nonnegative(mu, f)
    s, masks = top_sets(v)
    gaps = s - np.append(s[1:], 0.0)
    total = 0.0
    for gap, m in zip(gaps, masks):
        total += ext_mul(float(gap), float(mu.values[m]))
    return total


def choquet_power(mu: Capacity, f, r: float = 1.0) -> float:
    """``Ch(mu ** r, f)`` using only the top-set values of ``mu``."""
    v = _nonnegative(mu, f)
    s, masks = top_sets(v)
    gaps = s - np.append(s[1:], 0.0)
    return sum(ext_mul(float(g), ext_pow(float(mu.values[m]), r)) for g, m in zip(gaps, masks))


def as_fn(values: Sequence[float] | np.ndarray | MeasurableFn) -> MeasurableFn:
    return values if isinstance(values, MeasurableFn) else MeasurableFn(np.asarray(values, dtype=float))
