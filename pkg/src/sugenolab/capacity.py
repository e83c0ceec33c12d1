"""Capacities (nonadditive measures) on finite ground sets.

Subsets of ``{0, ..., n-1}`` are encoded as ``n``-bit integer masks and a
capacity is stored as a read-only float table of length ``2**n`` indexed by
mask.  Extended reals are plain floats with ``math.inf`` as the only infinite
value; ``ext_mul`` carries the ``inf * 0 == 0`` convention.

Because the sigma-field is the full power set of a finite set, a sequence
``mu(B_k) -> 0`` must be eventually null, so every sequential characteristic
of a capacity reduces to a statement about null sets.  The deciders below
test those reductions exhaustively and return a replayable witness on
failure.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    DomainError,
    EmptySetNonzero,
    MonotonicityViolation,
    NegativeValue,
    NegativeWeight,
)

MAX_N = 24
MAX_DECIDER_N = 12

# Ratios within this relative distance of 1 count as subadditive; additive
# tables summed in different orders differ in the last ulp.
SUBADDITIVE_RTOL = 1e-12

FINITE_SPACE_NOTE = "holds (finite space)"

ExtReal = float


def ext_mul(a: float, b: float) -> float:
    """Product on [0, inf] with the convention inf * 0 = 0."""
    if a == 0 or b == 0:
        return 0.0
    return a * b


def ext_pow(a: float, r: float) -> float:
    """``a ** r`` for ``a`` in [0, inf] and ``r > 0`` (inf ** r = inf)."""
    if math.isinf(a):
        return math.inf
    return a**r


def mask_of(subset: Iterable[int] | int) -> int:
    if isinstance(subset, (int, np.integer)):
        return int(subset)
    m = 0
    for i in subset:
        m |= 1 << int(i)
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class FiniteSpace:
    n: int
    point_names: tuple[str, ...] | None = None

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise DomainError(f"ground set size must lie in [1, {MAX_N}], got {self.n}")
        if self.point_names is not None and len(self.point_names) != self.n:
            raise DomainError("point_names must have one label per point")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def size(self) -> int:
        return 1 << self.n


@dataclass(frozen=True, eq=False)
class Capacity:
    """A validated monotone set function with ``mu(empty) = 0``.

    Build instances through :func:`validate_capacity` or one of the
    generators; the constructor trusts its input.
    """

    space: FiniteSpace
    values: np.ndarray
    provenance: str = "explicit-table"
    rule: dict | None = field(default=None)

    @property
    def n(self) -> int:
        return self.space.n

    def __call__(self, subset: Iterable[int] | int) -> float:
        return float(self.values[mask_of(subset)])

    def __eq__(self, other):
        if not isinstance(other, Capacity):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def __repr__(self):
        return f"Capacity(n={self.n}, provenance={self.provenance!r})"

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def null_masks(self) -> np.ndarray:
        return np.flatnonzero(self.values == 0)

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return {tuple(members(m)): float(v) for m, v in enumerate(self.values)}


def _freeze(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


def _table_from_mapping(table: Mapping, n: int | None) -> np.ndarray:
    keys = {mask_of(k): v for k, v in table.items()}
    if n is None:
        top = max(keys) if keys else 0
        n = max(top.bit_length(), 1)
    size = 1 << n
    missing = [m for m in range(size) if m not in keys]
    if missing:
        raise CapacityError(f"table is missing subset {members(missing[0])}")
    if any(m >= size for m in keys):
        raise CapacityError(f"table has subsets outside a ground set of size {n}")
    return np.array([float(keys[m]) for m in range(size)], dtype=float)


def validate_capacity(
    table: Sequence[float] | Mapping | np.ndarray,
    n: int | None = None,
    *,
    provenance: str = "explicit-table",
    point_names: Sequence[str] | None = None,
    rule: dict | None = None,
) -> Capacity:
    """Check a subset-indexed table and wrap it as a :class:`Capacity`.

    ``table`` is either a sequence indexed by subset mask or a mapping from
    subsets (masks or iterables of points) to values.
    """
    if isinstance(table, Mapping):
        values = _table_from_mapping(table, n)
    else:
        values = np.array([float(v) for v in table], dtype=float)
    size = len(values)
    if size < 2 or size & (size - 1):
        raise CapacityError(f"table length {size} is not 2**n for n >= 1")
    n_found = size.bit_length() - 1
    if n is not None and n != n_found:
        raise CapacityError(f"table has {size} entries, expected 2**{n}")
    space = FiniteSpace(n_found, tuple(point_names) if point_names else None)

    if np.isnan(values).any():
        raise CapacityError("table contains NaN")
    neg = np.flatnonzero(values < 0)
    if neg.size:
        m = int(neg[0])
        raise NegativeValue(f"mu({members(m)}) = {values[m]} is negative")
    if values[0] != 0:
        raise EmptySetNonzero(f"mu(empty) = {values[0]}, must be 0")

    masks = np.arange(size)
    for i in range(n_found):
        bit = 1 << i
        lower = masks[(masks & bit) == 0]
        bad = np.flatnonzero(values[lower] > values[lower | bit])
        if bad.size:
            a = int(lower[bad[0]])
            b = a | bit
            raise MonotonicityViolation(
                a, b, f"mu({members(a)}) = {values[a]} > mu({members(b)}) = {values[b]}"
            )
    return Capacity(space, _freeze(values), provenance, rule)


def power_transform(mu: Capacity, r: float) -> Capacity:
    """The capacity ``A -> mu(A) ** r``; monotone since t -> t**r increases."""
    if not r > 0 or math.isinf(r):
        raise DomainError(f"exponent must be a finite positive real, got {r}")
    with np.errstate(over="ignore"):
        values = np.power(mu.values, r)
    return Capacity(mu.space, _freeze(values), f"power({mu.provenance}, {r!r})")


def _subset_sums(weights: np.ndarray) -> np.ndarray:
    n = len(weights)
    out = np.zeros(1 << n)
    for i, w in enumerate(weights):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 1, :] += w
    return out


def from_additive(weights: Sequence[float]) -> Capacity:
    """The additive measure ``mu(A) = sum of weights[i] over i in A``."""
    w = np.array([float(x) for x in weights], dtype=float)
    if np.isnan(w).any() or (w < 0).any():
        raise NegativeWeight(f"weights must be nonnegative, got {list(weights)}")
    space = FiniteSpace(len(w))
    return Capacity(
        space, _freeze(_subset_sums(w)), "additive", {"kind": "additive", "weights": w.tolist()}
    )


def _popcounts(n: int) -> np.ndarray:
    return _subset_sums(np.ones(n)).astype(np.int64)


def counting_dyadic(N: int) -> Capacity:
    """``mu(A) = |A| * sum_{i in A} 2**-i`` on points ``i = 1..N``.

    Point ``k`` of the ground set carries the label ``i = k + 1``.  All table
    entries are exact in binary floating point for ``N <= 24``.
    """
    if not 1 <= N <= MAX_N:
        raise DomainError(f"N must lie in [1, {MAX_N}], got {N}")
    dyadic = _subset_sums(np.array([2.0 ** -(k + 1) for k in range(N)]))
    values = _popcounts(N) * dyadic
    space = FiniteSpace(N, tuple(str(k + 1) for k in range(N)))
    return Capacity(space, _freeze(values), f"counting-dyadic({N})", {"kind": "counting-dyadic", "N": N})


def _masks_by_cardinality(n: int) -> np.ndarray:
    masks = np.arange(1 << n)
    return masks[np.argsort(_popcounts(n), kind="stable")]


def random_capacity(
    n: int,
    seed: int,
    null_set_bias: float = 0.0,
    *,
    zero_increment_prob: float = 0.2,
    infinite_prob: float = 0.0,
) -> Capacity:
    """A random capacity, deterministic in ``seed``.

    Subsets are visited by increasing cardinality; each value is the max over
    its immediate subsets plus a nonnegative increment, so the table is
    monotone by construction.  Each singleton is forced null with
    probability ``null_set_bias``; otherwise singletons get a positive value
    and larger sets a zero increment with probability ``zero_increment_prob``.  With ``infinite_prob > 0`` some nonnull
    sets (and hence all their supersets) get the value ``inf``.
    """
    if not 1 <= n <= MAX_N:
        raise DomainError(f"n must lie in [1, {MAX_N}], got {n}")
    if not 0 <= null_set_bias <= 1:
        raise DomainError("null_set_bias must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    forced_null = rng.random(n) < null_set_bias
    values = np.zeros(1 << n)
    for m in _masks_by_cardinality(n)[1:]:
        m = int(m)
        base = max(values[m ^ (1 << i)] for i in members(m))
        if popcount(m) == 1 and forced_null[members(m)[0]]:
            values[m] = 0.0
            continue
        if popcount(m) > 1 and rng.random() < zero_increment_prob:
            inc = 0.0
        else:
            inc = float(rng.uniform(0.05, 1.0))
        v = base + inc
        if infinite_prob and v > 0 and rng.random() < infinite_prob:
            v = math.inf
        values[m] = v
    return Capacity(FiniteSpace(n), _freeze(values), f"random({seed})", {"kind": "random", "seed": seed})


def collapse_null_core(mu: Capacity, core: Iterable[int] | int) -> Capacity:
    """The capacity ``A -> mu(A minus core)``.

    Every subset of ``core`` becomes null and the result is null-additive
    whenever ``mu`` has no nonempty null set outside ``core``.
    """
    c = mask_of(core)
    masks = np.arange(mu.space.size)
    values = mu.values[masks & ~c]
    return Capacity(mu.space, _freeze(values), f"collapse({mu.provenance}, {members(c)})")


# ---------------------------------------------------------------------------
# deciders


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decider.

    ``witness`` is a pair of subset masks whose meaning depends on the
    property: ``(A, B)`` with both null for weak null-additivity, ``(A, N)``
    with ``N`` null for the null-set characteristics and ``(A, B)`` disjoint
    for subadditivity.
    """

    property: str
    holds: bool
    witness: tuple[int, int] | None = None
    note: str = ""

    def __bool__(self):
        return self.holds

    def witness_sets(self) -> tuple[list[int], list[int]] | None:
        if self.witness is None:
            return None
        return members(self.witness[0]), members(self.witness[1])


def _require_decidable(mu: Capacity):
    if mu.n > MAX_DECIDER_N:
        raise DomainError(f"exhaustive deciders support n <= {MAX_DECIDER_N}, got {mu.n}")


def is_weakly_null_additive(mu: Capacity) -> Verdict:
    _require_decidable(mu)
    nulls = mu.null_masks()
    for a in nulls:
        bad = np.flatnonzero(mu.values[nulls | a] > 0)
        if bad.size:
            return Verdict("weakly_null_additive", False, (int(a), int(nulls[bad[0]])))
    return Verdict("weakly_null_additive", True)


def _null_scan(mu: Capacity, name: str, below: bool) -> Verdict:
    _require_decidable(mu)
    masks = np.arange(mu.space.size)
    for nmask in mu.null_masks()[1:]:
        other = masks & ~nmask if below else masks | nmask
        bad = np.flatnonzero(mu.values[other] != mu.values)
        if bad.size:
            return Verdict(name, False, (int(bad[0]), int(nmask)))
    return Verdict(name, True)


def is_null_additive(mu: Capacity) -> Verdict:
    """``mu(A | N) == mu(A)`` for every ``A`` and every null ``N``."""
    return _null_scan(mu, "null_additive", below=False)


def is_autocontinuous_above(mu: Capacity) -> Verdict:
    """Finite form: ``mu(A | N) == mu(A)`` for all null ``N``."""
    return _null_scan(mu, "autocontinuous_above", below=False)


def is_autocontinuous_below(mu: Capacity) -> Verdict:
    """Finite form: ``mu(A - N) == mu(A)`` for all null ``N``.

    This is also the finite form of monotone autocontinuity from below.
    """
    return _null_scan(mu, "autocontinuous_below", below=True)


def satisfies_pgp(mu: Capacity) -> Verdict:
    v = is_weakly_null_additive(mu)
    return Verdict("pgp", v.holds, v.witness)


@dataclass(frozen=True)
class _RelaxedScan:
    k_min: float | None
    argmax: tuple[int, int] | None
    blocker: tuple[int, int] | None


def _relaxed_scan(mu: Capacity) -> _RelaxedScan:
    _require_decidable(mu)
    vals = mu.values
    masks = np.arange(1, mu.space.size)
    best = 1.0
    argmax = None
    for a in range(1, mu.space.size):
        bs = masks[(masks & a) == 0]
        if bs.size == 0:
            continue
        num = vals[bs | a]
        den = vals[a] + vals[bs]
        blocked = ((den == 0) & (num > 0)) | (np.isinf(num) & np.isfinite(den))
        if blocked.any():
            return _RelaxedScan(None, None, (a, int(bs[np.argmax(blocked)])))
        ok = (den > 0) & np.isfinite(den)
        if not ok.any():
            continue
        ratio = np.where(ok, num / np.where(ok, den, 1.0), 0.0)
        j = int(np.argmax(ratio))
        if ratio[j] > best:
            best = float(ratio[j])
            argmax = (a, int(bs[j]))
    if best <= 1.0 + SUBADDITIVE_RTOL:
        best = 1.0
    return _RelaxedScan(best, argmax if best > 1.0 else None, None)


def minimal_relaxed_constant(mu: Capacity) -> float | None:
    """Smallest ``K >= 1`` with ``mu(A | B) <= K (mu(A) + mu(B))`` for disjoint ``A, B``.

    Returns ``None`` when no such constant exists: some disjoint pair has
    ``mu(A) + mu(B) == 0 < mu(A | B)`` or a finite sum under an infinite
    union.
    """
    return _relaxed_scan(mu).k_min


def is_subadditive(mu: Capacity) -> Verdict:
    scan = _relaxed_scan(mu)
    if scan.k_min is None:
        return Verdict("subadditive", False, scan.blocker)
    if scan.k_min > 1.0:
        return Verdict("subadditive", False, scan.argmax)
    return Verdict("subadditive", True)


def replay_witness(mu: Capacity, verdict: Verdict) -> bool:
    """Re-check a failure witness against the raw definition.

    Returns ``True`` when the witness genuinely exhibits the failure.
    """
    if verdict.witness is None:
        return False
    a, b = verdict.witness
    v = mu.values
    if verdict.property in ("weakly_null_additive", "pgp"):
        return v[a] == 0 and v[b] == 0 and v[a | b] > 0
    if verdict.property in ("null_additive", "autocontinuous_above"):
        return v[b] == 0 and v[a | b] != v[a]
    if verdict.property == "autocontinuous_below":
        return v[b] == 0 and v[a & ~b] != v[a]
    if verdict.property == "subadditive":
        return a & b == 0 and v[a | b] > (v[a] + v[b]) * (1 + SUBADDITIVE_RTOL)
    raise DomainError(f"unknown property {verdict.property!r}")


@dataclass(frozen=True)
class PropertyReport:
    n: int
    weakly_null_additive: Verdict
    null_additive: Verdict
    autocontinuous_above: Verdict
    autocontinuous_below: Verdict
    pgp: Verdict
    subadditive: Verdict
    minimal_relaxed_K: float | None
    order_continuous: str = FINITE_SPACE_NOTE
    continuous_from_above: str = FINITE_SPACE_NOTE
    continuous_from_below: str = FINITE_SPACE_NOTE
    null_continuous: str = FINITE_SPACE_NOTE

    @property
    def verdicts(self) -> list[Verdict]:
        return [
            self.weakly_null_additive,
            self.null_additive,
            self.autocontinuous_above,
            self.autocontinuous_below,
            self.pgp,
            self.subadditive,
        ]

    @property
    def relaxed_subadditive(self) -> bool:
        return self.minimal_relaxed_K is not None

    def to_dict(self) -> dict:
        out: dict = {"n": self.n}
        for v in self.verdicts:
            entry: dict = {"holds": v.holds}
            if v.witness is not None:
                entry["witness"] = [members(v.witness[0]), members(v.witness[1])]
            out[v.property] = entry
        k = self.minimal_relaxed_K
        out["minimal_relaxed_K"] = "none" if k is None else k
        for name in ("order_continuous", "continuous_from_above", "continuous_from_below", "null_continuous"):
            out[name] = getattr(self, name)
        return out


def property_report(mu: Capacity) -> PropertyReport:
    return PropertyReport(
        n=mu.n,
        weakly_null_additive=is_weakly_null_additive(mu),
        null_additive=is_null_additive(mu),
        autocontinuous_above=is_autocontinuous_above(mu),
        autocontinuous_below=is_autocontinuous_below(mu),
        pgp=satisfies_pgp(mu),
        subadditive=is_subadditive(mu),
        minimal_relaxed_K=minimal_relaxed_constant(mu),
    )
