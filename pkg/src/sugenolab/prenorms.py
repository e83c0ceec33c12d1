"""Sugeno-Lorentz, Sugeno and Dunford-Schwartz prenorms and the bounds linking them."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capacity import Capacity, ext_pow
from .errors import CrossCheckMismatch, DomainError
from .integrals import choquet_power, sugeno_many, sugeno_power, top_sets, values_of

CROSS_CHECK_RTOL = 1e-9
CROSS_CHECK_ATOL = 1e-12


@dataclass(frozen=True)
class PrenormParams:
    p: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        for name in ("p", "q"):
            x = getattr(self, name)
            if not (x > 0 and math.isfinite(x)):
                raise DomainError(f"{name} must be a finite positive real, got {x}")

    @property
    def L0(self) -> float:
        return (self.p / self.q) ** (1.0 / self.q)

    @property
    def M0(self) -> float:
        return (self.q / self.p) ** (1.0 / self.q)

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q}


SUGENO = PrenormParams(1.0, 1.0)


def phi(t: float) -> float:
    """``arctan t`` on [0, inf) and ``pi / 2`` at infinity."""
    if math.isinf(t):
        return math.pi / 2
    return math.atan(t)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= max(CROSS_CHECK_ATOL, CROSS_CHECK_RTOL * max(abs(a), abs(b)))


def sugeno_lorentz_routes(mu: Capacity, f, params: PrenormParams = SUGENO) -> tuple[float, float]:
    """The prenorm by its definition and by the ``mu ** (1/p)`` rewriting.

    Returns ``(Su(mu^(q/p), p|f|^q/q) ** (1/q), Su(mu^(1/p), L0 |f|))``.
    """
    a = np.abs(values_of(f, mu.n))
    if not a.any():
        return 0.0, 0.0
    p, q = params.p, params.q
    direct = sugeno_power(mu, p * a**q / q, q / p) ** (1.0 / q)
    rewritten = sugeno_power(mu, params.L0 * a, 1.0 / p)
    return direct, rewritten


def sugeno_lorentz_prenorm(
    mu: Capacity, f, params: PrenormParams = SUGENO, *, legacy: bool = False
) -> float:
    """``(f)_{p,q} = Su(mu^(q/p), p|f|^q / q) ** (1/q)``.

    The returned value is the equal form ``Su(mu^(1/p), L0 |f|)``, which
    never raises ``|f|`` to a power and so cannot underflow or overflow; the
    defining expression is evaluated alongside as a cross-check.  With
    ``legacy=True`` the older variant ``L0 * Su(mu^(q/p), |f|^q) ** (1/q)``
    is returned instead (no cross-check).
    """
    if legacy:
        a = np.abs(values_of(f, mu.n))
        if not a.any():
            return 0.0
        return params.L0 * sugeno_power(mu, a**params.q, params.q / params.p) ** (1.0 / params.q)
    direct, rewritten = sugeno_lorentz_routes(mu, f, params)
    if not _close(direct, rewritten):
        raise CrossCheckMismatch(
            f"prenorm routes disagree: {direct!r} vs {rewritten!r} at p={params.p}, q={params.q}"
        )
    return rewritten


def sugeno_lorentz_many(mu: Capacity, rows: np.ndarray, params: PrenormParams = SUGENO) -> np.ndarray:
    """Prenorms of each row of a 2-D array (rewritten route, for bulk probing)."""
    a = np.abs(np.asarray(rows, dtype=float))
    return sugeno_many(mu, params.L0 * a, 1.0 / params.p)


def sugeno_prenorm(mu: Capacity, f) -> float:
    """``(f)_1 = Su(mu, |f|)``."""
    return sugeno_lorentz_prenorm(mu, f, SUGENO)


def _ds_candidates(mu: Capacity, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    levels = np.unique(np.concatenate([[0.0], a]))
    s, masks = top_sets(a)
    # mu({|f| > v}) for each level v: the top set of all points strictly above v
    counts_above = np.array([(a > v).sum() for v in levels])
    mus = np.array([mu.values[masks[k - 1]] if k else 0.0 for k in counts_above])
    return levels, mus


def dunford_schwartz_prenorm(mu: Capacity, f) -> float:
    """``||f|| = inf_{c > 0} phi(c + mu({|f| > c}))``, computed exactly.

    On each interval between consecutive distinct values of ``|f|`` the
    distribution is constant, so the infimum is taken at the left endpoints;
    the endpoint 0 stands for the limit ``c -> 0+``.
    """
    a = np.abs(values_of(f, mu.n))
    levels, mus = _ds_candidates(mu, a)
    return min(phi(float(c) + float(m)) for c, m in zip(levels, mus))


def dunford_schwartz_bruteforce(mu: Capacity, f, grid: float = 1e-4) -> float:
    """Minimise ``phi(c + mu({|f| > c}))`` over ``c = h, 2h, ..., max|f| + h``."""
    h = float(grid)
    if not h > 0:
        raise DomainError("grid step must be positive")
    a = np.abs(values_of(f, mu.n))
    cs = np.arange(1, int(math.floor(a.max() / h)) + 2) * h
    ascending = np.sort(a)
    order = np.argsort(a, kind="stable")
    bits = np.left_shift(np.int64(1), order.astype(np.int64))
    suffix = np.concatenate([np.cumsum(bits[::-1])[::-1], [0]])
    level = mu.values[suffix[np.searchsorted(ascending, cs, side="right")]]
    with np.errstate(invalid="ignore"):
        vals = np.where(np.isinf(level), math.pi / 2, np.arctan(cs + level))
    return float(vals.min())


def lorentz_choquet_quasinorm(mu: Capacity, f, params: PrenormParams = SUGENO) -> float:
    """``Ch(mu^(q/p), p|f|^q / q) ** (1/q)``; the classical Lorentz quasi-seminorm for additive ``mu``."""
    a = np.abs(values_of(f, mu.n))
    if not a.any():
        return 0.0
    p, q = params.p, params.q
    return ext_pow(choquet_power(mu, p * a**q / q, q / p), 1.0 / q)


def lorentz_quadrature(mu: Capacity, f, params: PrenormParams = SUGENO) -> float:
    """``p^(1/q) (int_0^inf [t mu(|f|>t)^(1/p)]^q dt/t)^(1/q)`` integrated piecewise.

    On ``[a_j, a_{j+1})`` the distribution is a constant ``m_j`` and the
    integrand ``t^(q-1) m_j^(q/p)`` has antiderivative ``t^q m_j^(q/p) / q``.
    """
    a = np.abs(values_of(f, mu.n))
    p, q = params.p, params.q
    levels = np.unique(np.concatenate([[0.0], a]))
    total = 0.0
    for lo, hi in zip(levels[:-1], levels[1:]):
        m = distribution_abs(mu, a, lo)
        if m == 0:
            continue
        if math.isinf(m):
            return math.inf
        total += m ** (q / p) * (hi**q - lo**q) / q
    return float(p ** (1.0 / q) * total ** (1.0 / q))


def distribution_abs(mu: Capacity, a: np.ndarray, t: float) -> float:
    sel = (a > t).astype(np.int64)
    return float(mu.values[int(np.dot(sel, 1 << np.arange(a.size, dtype=np.int64)))])


@dataclass(frozen=True)
class Bound:
    """One side-by-side inequality ``lhs <= rhs``."""

    name: str
    lhs: float
    rhs: float

    def holds(self, slack: float = 1e-12) -> bool:
        return self.lhs <= self.rhs + slack


def est_bounds(mu: Capacity, f, params: PrenormParams) -> tuple[Bound, Bound]:
    """Both comparisons between ``(f)_{p,q}`` and the Sugeno prenorm ``(f)_1``."""
    slp = sugeno_lorentz_prenorm(mu, f, params)
    s1 = sugeno_prenorm(mu, f)
    p = params.p
    up = max(1.0, params.L0) * s1
    down = max(1.0, params.M0) * slp
    return (
        Bound("lorentz_by_sugeno", slp, up ** (1.0 / p) + up),
        Bound("sugeno_by_lorentz", s1 ** (1.0 / p), down ** (1.0 / p) + down),
    )


def comparison_bounds(mu: Capacity, f, params: PrenormParams) -> tuple[Bound, Bound]:
    """Two-sided comparison of the Dunford-Schwartz prenorm with ``(f)_{p,q}``.

    The first bound reads ``min{phi((f)^p), phi(M0 (f))} <= ||f||`` and the
    second ``||f|| <= phi((f)^p + M0 (f))``.
    """
    ds = dunford_schwartz_prenorm(mu, f)
    slp = sugeno_lorentz_prenorm(mu, f, params)
    p, M0 = params.p, params.M0
    return (
        Bound("ds_lower", min(phi(slp**p), phi(M0 * slp)), ds),
        Bound("ds_upper", ds, phi(slp**p + M0 * slp)),
    )


@dataclass(frozen=True)
class ChebyshevBound:
    literal_lhs: float
    derived_lhs: float
    rhs: float

    def derived_holds(self, slack: float = 1e-12) -> bool:
        return self.derived_lhs <= self.rhs + slack

    def literal_holds(self, slack: float = 1e-12) -> bool:
        return self.literal_lhs <= self.rhs + slack


def chebyshev_bound(mu: Capacity, f, params: PrenormParams, eps: float) -> ChebyshevBound:
    """Markov-type lower bounds on ``(f)_{p,q} ** p`` at threshold ``eps``.

    ``derived_lhs = min{eps^p (p/q)^(p/q), mu(|f| > eps)}`` follows from
    ``Su(nu, h) >= t ^ nu(h > t)`` at ``t = L0 eps``.  ``literal_lhs`` uses
    ``eps`` to the first power and is reported for comparison only.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    p, q = params.p, params.q
    a = np.abs(values_of(f, mu.n))
    tail = distribution_abs(mu, a, eps)
    ratio = (p / q) ** (p / q)
    rhs = sugeno_lorentz_prenorm(mu, f, params) ** p
    return ChebyshevBound(min(eps * ratio, tail), min(eps**p * ratio, tail), rhs)
