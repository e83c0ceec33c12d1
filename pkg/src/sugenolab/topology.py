"""Witnesses, certificates and convergence checks for the prenorm topologies.

On a finite ground set a sequence converging to a point at prenorm distance
zero can be replaced by the point itself, so the non-open-sphere and
non-closed-ball constructions here emit a single function at distance zero
rather than a sequence.  Convergence of an explicit sequence is only ever
*observed* over a finite prefix; reports say so.
"""
from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .capacity import (
    Capacity,
    is_autocontinuous_above,
    is_autocontinuous_below,
    is_null_additive,
    members,
    minimal_relaxed_constant,
)
from .errors import (
    DomainError,
    InfiniteCase,
    NotNullAdditive,
    NotSeparable,
    PreconditionNotMet,
    SoundnessViolation,
    VerdictDisagreement,
)
from .integrals import MeasurableFn, as_fn, values_of
from .prenorms import (
    SUGENO,
    PrenormParams,
    dunford_schwartz_prenorm,
    sugeno_lorentz_many,
    sugeno_lorentz_prenorm,
    sugeno_prenorm,
)

OBSERVED = "(observed over prefix)"
WITNESS_TOL = 1e-12
# emitted separation radii are shrunk by this relative margin so that points
# at exactly the certified distance cannot round into both spheres
RADIUS_GUARD = 1e-12


@dataclass(frozen=True)
class FnSequence:
    terms: tuple[MeasurableFn, ...]
    rule: str | None = None

    def __post_init__(self):
        terms = tuple(as_fn(t) for t in self.terms)
        if not terms:
            raise DomainError("a sequence needs at least one term")
        if len({t.n for t in terms}) != 1:
            raise DomainError("all terms must live on the same ground set")
        object.__setattr__(self, "terms", terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def n(self) -> int:
        return self.terms[0].n


def tail_start(length: int, tail: int | None = None) -> int:
    """First index of the observed tail: the last half of the prefix by default."""
    if tail is None:
        tail = max(1, length // 2)
    return max(0, length - tail)


# ---------------------------------------------------------------------------
# equivalence and quotient


def are_equivalent(mu: Capacity, f, g) -> bool:
    """``f ~ g``: ``mu({|f - g| > c}) = 0`` for all ``c > 0``, i.e. ``mu({f != g}) = 0``."""
    d = values_of(f, mu.n) - values_of(g, mu.n)
    sel = (d != 0).astype(np.int64)
    return bool(mu.values[int(np.dot(sel, 1 << np.arange(mu.n, dtype=np.int64)))] == 0)


def equivalence_sweep(mu: Capacity, f, g) -> bool:
    """Reference check of ``f ~ g`` sweeping ``c`` below every distinct value of ``|f - g|``."""
    d = np.abs(values_of(f, mu.n) - values_of(g, mu.n))
    bits = 1 << np.arange(mu.n, dtype=np.int64)
    for v in np.unique(d[d > 0]):
        c = v / 2
        if mu.values[int(np.dot((d > c).astype(np.int64), bits))] != 0:
            return False
    return True


@dataclass(frozen=True)
class QuotientRep:
    canonical: MeasurableFn
    null_core: int

    @property
    def null_core_points(self) -> list[int]:
        return members(self.null_core)


def null_core(mu: Capacity) -> int:
    core = 0
    for m in mu.null_masks():
        core |= int(m)
    return core


def quotient_canonical(mu: Capacity, f) -> QuotientRep:
    """Representative of ``[f]``: ``f`` zeroed on the union of all null sets."""
    v = is_null_additive(mu)
    if not v:
        raise NotNullAdditive(f"quotient representatives need a null-additive capacity; witness {v.witness_sets()}")
    core = null_core(mu)
    vals = np.array(values_of(f, mu.n), dtype=float)
    for i in members(core):
        vals[i] = 0.0
    return QuotientRep(MeasurableFn(vals), core)


# ---------------------------------------------------------------------------
# convergence


@dataclass(frozen=True)
class ConvergenceReport:
    mode: str
    tail_sups: dict
    tail_tol: float
    converges: bool
    label: str = OBSERVED

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "tail_sups": {str(k): v for k, v in self.tail_sups.items()},
            "tail_tol": self.tail_tol,
            "converges": self.converges,
            "label": self.label,
        }


def converges_in_measure(
    mu: Capacity,
    seq: FnSequence,
    f,
    eps_list: Sequence[float] = (0.5, 0.1, 0.01),
    tail_tol: float = 0.05,
    tail: int | None = None,
) -> ConvergenceReport:
    """Tail suprema of ``mu({|f_k - f| > eps})`` for each ``eps``."""
    target = values_of(f, mu.n)
    start = tail_start(len(seq), tail)
    bits = 1 << np.arange(mu.n, dtype=np.int64)
    sups = {}
    for eps in eps_list:
        vals = [
            float(mu.values[int(np.dot((np.abs(t.values - target) > eps).astype(np.int64), bits))])
            for t in seq.terms[start:]
        ]
        sups[float(eps)] = max(vals)
    return ConvergenceReport("measure", sups, tail_tol, all(s <= tail_tol for s in sups.values()))


def prenorm_convergence(
    mu: Capacity,
    seq: FnSequence,
    f,
    params: PrenormParams | None = None,
    tail_tol: float = 0.05,
    tail: int | None = None,
) -> ConvergenceReport:
    """Tail supremum of ``(f_k - f)_{p,q}``, or of the Dunford-Schwartz prenorm when ``params`` is None."""
    target = as_fn(f)
    start = tail_start(len(seq), tail)
    if params is None:
        dist = [dunford_schwartz_prenorm(mu, t - target) for t in seq.terms[start:]]
        mode = "dunford-schwartz"
    else:
        dist = [sugeno_lorentz_prenorm(mu, t - target, params) for t in seq.terms[start:]]
        mode = f"sugeno-lorentz(p={params.p}, q={params.q})"
    s = max(dist)
    return ConvergenceReport(mode, {"sup": s}, tail_tol, s <= tail_tol)


DEFAULT_PQ = (
    PrenormParams(1, 1),
    PrenormParams(2, 1),
    PrenormParams(1, 3),
    PrenormParams(2, 3),
)


@dataclass(frozen=True)
class EquivalenceReport:
    reports: tuple[ConvergenceReport, ...]

    @property
    def verdicts(self) -> dict[str, bool]:
        return {r.mode: r.converges for r in self.reports}

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts.values())) == 1

    @property
    def converges(self) -> bool:
        return self.reports[0].converges


def convergence_equivalence_check(
    mu: Capacity,
    seq: FnSequence,
    f,
    params: Iterable[PrenormParams] = DEFAULT_PQ,
    *,
    eps_list: Sequence[float] = (0.5, 0.1, 0.01),
    tail_tol: float = 0.05,
    tail: int | None = None,
    strict: bool = True,
) -> EquivalenceReport:
    """Compare prenorm, Dunford-Schwartz and in-measure convergence verdicts.

    Raises :class:`VerdictDisagreement` when ``strict`` and the verdicts differ.
    """
    reports = [converges_in_measure(mu, seq, f, eps_list, tail_tol, tail)]
    reports.append(prenorm_convergence(mu, seq, f, None, tail_tol, tail))
    for pq in params:
        reports.append(prenorm_convergence(mu, seq, f, pq, tail_tol, tail))
    out = EquivalenceReport(tuple(reports))
    if strict and not out.agree:
        raise VerdictDisagreement(f"convergence verdicts differ: {out.verdicts}")
    return out


# ---------------------------------------------------------------------------
# sphere and ball witnesses


def _within(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol


@dataclass(frozen=True)
class NonOpenSphereWitness:
    """``S(0, radius)`` contains ``inner`` but also reaches ``outsider`` at distance 0 from it."""

    radius: float
    inner: MeasurableFn
    outsider: MeasurableFn
    params: PrenormParams
    base_set: int
    null_set: int

    def relations(self, mu: Capacity) -> dict[str, float]:
        return {
            "inner_norm": sugeno_lorentz_prenorm(mu, self.inner, self.params),
            "outsider_norm": sugeno_lorentz_prenorm(mu, self.outsider, self.params),
            "gap": sugeno_lorentz_prenorm(mu, self.outsider - self.inner, self.params),
        }

    def verify(self, mu: Capacity, tol: float = WITNESS_TOL) -> bool:
        r = self.relations(mu)
        return (
            r["inner_norm"] < self.radius
            and r["outsider_norm"] >= self.radius - tol
            and _within(r["gap"], 0.0, tol)
        )

    def to_dict(self) -> dict:
        return {
            "kind": "open-sphere",
            "radius": self.radius,
            "inner": self.inner.values.tolist(),
            "outsider": self.outsider.values.tolist(),
            "params": self.params.to_dict(),
            "A0": members(self.base_set),
            "N": members(self.null_set),
        }


@dataclass(frozen=True)
class NonClosedBallWitness:
    """``D(0, radius)`` holds ``inside_point`` at distance 0 from ``limit_point`` outside it."""

    radius: float
    limit_point: MeasurableFn
    inside_point: MeasurableFn
    params: PrenormParams
    base_set: int
    null_set: int

    def relations(self, mu: Capacity) -> dict[str, float]:
        return {
            "limit_norm": sugeno_lorentz_prenorm(mu, self.limit_point, self.params),
            "inside_norm": sugeno_lorentz_prenorm(mu, self.inside_point, self.params),
            "gap": sugeno_lorentz_prenorm(mu, self.limit_point - self.inside_point, self.params),
        }

    def verify(self, mu: Capacity, tol: float = WITNESS_TOL) -> bool:
        r = self.relations(mu)
        return (
            r["limit_norm"] > self.radius
            and r["inside_norm"] <= self.radius + tol
            and _within(r["gap"], 0.0, tol)
        )

    def to_dict(self) -> dict:
        return {
            "kind": "closed-ball",
            "radius": self.radius,
            "limit_point": self.limit_point.values.tolist(),
            "inside_point": self.inside_point.values.tolist(),
            "params": self.params.to_dict(),
            "A0": members(self.base_set),
            "N": members(self.null_set),
        }


def non_open_sphere_witness(mu: Capacity, params: PrenormParams = SUGENO) -> NonOpenSphereWitness | None:
    """A sphere ``S(0, r0)`` that is not open, or None when ``mu`` is autocontinuous from above."""
    verdict = is_autocontinuous_above(mu)
    if verdict:
        return None
    a0, nset = verdict.witness
    lo, hi = float(mu.values[a0]), float(mu.values[a0 | nset])
    if math.isinf(lo):
        raise InfiniteCase("mu(A0) is infinite; no finite-radius sphere witness")
    eps0 = 1.0 if math.isinf(hi) else (hi - lo) / 2
    r0 = (lo + eps0) ** (1.0 / params.p)
    amp = params.M0 * r0
    n = mu.n
    return NonOpenSphereWitness(
        r0,
        MeasurableFn.indicator(n, a0, amp),
        MeasurableFn.indicator(n, a0 | nset, amp),
        params,
        a0,
        nset,
    )


def non_closed_ball_witness(mu: Capacity, params: PrenormParams = SUGENO) -> NonClosedBallWitness | None:
    """A ball ``D(0, r0)`` that is not closed, or None when ``mu`` is autocontinuous from below."""
    verdict = is_autocontinuous_below(mu)
    if verdict:
        return None
    a0, nset = verdict.witness
    big, small = float(mu.values[a0]), float(mu.values[a0 & ~nset])
    p, n = params.p, mu.n
    if math.isinf(big):
        r0 = max(small, 1.0) ** (1.0 / p)
        amp = params.M0 * (r0 + 1.0)
    else:
        eps0 = (big - small) / 2
        r0 = (big - eps0) ** (1.0 / p)
        amp = params.M0 * big ** (1.0 / p)
    return NonClosedBallWitness(
        r0,
        MeasurableFn.indicator(n, a0, amp),
        MeasurableFn.indicator(n, a0 & ~nset, amp),
        params,
        a0,
        nset,
    )


# ---------------------------------------------------------------------------
# separation


def two_cover_value(mu: Capacity, region: int) -> tuple[float, int]:
    """``min over partitions E | F of region`` of ``max(mu(E), mu(F))`` and the minimising ``E``."""
    pts = members(region)
    if len(pts) > 20:
        raise DomainError("two-cover enumeration supports at most 20 points")
    best, best_e = math.inf, 0
    vals = mu.values
    # fixing the first point inside E halves the enumeration
    rest = pts[1:]
    for bits in itertools.product((0, 1), repeat=len(rest)):
        e = 1 << pts[0] if pts else 0
        for b, i in zip(bits, rest):
            if b:
                e |= 1 << i
        val = max(vals[e], vals[region & ~e])
        if val < best:
            best, best_e = float(val), e
    return best, best_e


@dataclass(frozen=True)
class SeparationCertificate:
    """Spheres of radius ``r_sep`` around ``f`` and ``g`` are disjoint.

    If ``h`` is in both, ``G = {|f - g| > c}`` is covered by
    ``{|h - f| > c/2}`` and ``{|h - g| > c/2}``, so one of them has capacity
    at least ``partition_value``; the lower bound
    ``(u)_{p,q} >= (L0 c/2) ^ mu(|u| > c/2)^(1/p)`` then puts ``h`` at
    distance ``>= r_sep`` from ``f`` or ``g``.  The stored ``r_sep`` is
    :meth:`implied_radius` shrunk by ``RADIUS_GUARD``.
    """

    f: MeasurableFn
    g: MeasurableFn
    r_sep: float
    c: float
    partition_value: float
    params: PrenormParams
    region: int = 0
    split: int = 0
    candidates: tuple = field(default=(), compare=False)

    def implied_radius(self) -> float:
        return min(self.params.L0 * self.c / 2, self.partition_value ** (1.0 / self.params.p))

    def to_dict(self) -> dict:
        return {
            "f": self.f.values.tolist(),
            "g": self.g.values.tolist(),
            "r_sep": self.r_sep,
            "c": self.c,
            "partition_value": self.partition_value,
            "params": self.params.to_dict(),
            "G": members(self.region),
            "E": members(self.split),
        }


def separation_radius(mu: Capacity, f, g, params: PrenormParams = SUGENO) -> SeparationCertificate:
    """Certify ``S(f, r) & S(g, r) = {}`` for the largest ``r`` this construction reaches."""
    f, g = as_fn(f), as_fn(g)
    if sugeno_lorentz_prenorm(mu, f - g, params) <= 0:
        raise PreconditionNotMet("f and g are at prenorm distance 0")
    d = np.abs(f.values - g.values)
    bits = 1 << np.arange(mu.n, dtype=np.int64)
    best = None
    cands = []
    for v in np.unique(d[d > 0]):
        # G is constant for c in [v_prev, v) and the radius grows with c,
        # so the best threshold is the largest float below v
        thr = float(np.nextafter(v, 0.0))
        region = int(np.dot((d > thr).astype(np.int64), bits))
        if mu.values[region] == 0:
            continue
        m, e = two_cover_value(mu, region)
        r = min(params.L0 * thr / 2, m ** (1.0 / params.p)) if m > 0 else 0.0
        cands.append((thr, m, r))
        if r > 0 and (best is None or r > best[0]):
            best = (r, thr, m, region, e)
    if best is None:
        raise NotSeparable("every threshold region splits into two null halves")
    r, thr, m, region, e = best
    return SeparationCertificate(f, g, r * (1 - RADIUS_GUARD), thr, m, params, region, e, tuple(cands))


@dataclass(frozen=True)
class ProbeReport:
    probes: int
    hits: int
    radius: float
    first_hit: list | None = None

    @property
    def passed(self) -> bool:
        return self.hits == 0


def probe_points(f: np.ndarray, g: np.ndarray, probes: int, rng: np.random.Generator) -> np.ndarray:
    """Random functions concentrated between ``f`` and ``g``.

    Each coordinate interpolates ``f -> g`` with a weight drawn from
    {0, 1/2, 1} or uniformly, plus occasional small noise.
    """
    n = f.size
    kind = rng.integers(0, 4, size=(probes, n))
    lam = np.where(kind == 3, rng.random((probes, n)), kind / 2.0)
    h = f + lam * (g - f)
    scale = np.abs(g - f).max()
    noisy = rng.random(probes) < 0.3
    h[noisy] += rng.normal(0.0, 0.05 * scale, size=(int(noisy.sum()), n))
    return h


def probe_disjointness(
    mu: Capacity,
    certificate: SeparationCertificate,
    probes: int,
    seed: int,
    *,
    radius_scale: float = 1.0,
    raise_on_hit: bool = True,
) -> ProbeReport:
    """Sample functions and count those lying in both spheres of the certificate."""
    r = certificate.r_sep * radius_scale
    if probes <= 0:
        return ProbeReport(0, 0, r)
    rng = np.random.default_rng(seed)
    f, g = certificate.f.values, certificate.g.values
    h = probe_points(f, g, probes, rng)
    df = sugeno_lorentz_many(mu, h - f, certificate.params)
    dg = sugeno_lorentz_many(mu, h - g, certificate.params)
    both = np.flatnonzero((df < r) & (dg < r))
    first = h[both[0]].tolist() if both.size else None
    if both.size and raise_on_hit:
        raise SoundnessViolation(f"probe {first} lies in both spheres of radius {r}")
    return ProbeReport(probes, int(both.size), r, first)


# ---------------------------------------------------------------------------
# linear operations and the Sugeno pseudometric


@dataclass(frozen=True)
class LinearityReport:
    premises: dict
    conclusions: dict
    K: float
    holds: bool
    label: str = OBSERVED


def sequential_linearity_check(
    mu: Capacity,
    seq_f: FnSequence,
    f,
    seq_g: FnSequence,
    g,
    alphas: Sequence[float],
    params: PrenormParams = SUGENO,
    tail_tol: float = 0.05,
    tail: int | None = None,
) -> LinearityReport:
    """Observed convergence of ``f_k + g_k`` and ``alpha f_k`` given that of ``f_k`` and ``g_k``.

    The conclusions are judged against the tolerances the premises imply:
    ``(2K)^(1/p) * 2 * tail_tol`` for sums and ``max(1, |alpha|) * tail_tol``
    for scalar multiples.
    """
    K = minimal_relaxed_constant(mu)
    if K is None:
        raise PreconditionNotMet("capacity is not relaxed subadditive")
    if len(seq_f) != len(seq_g):
        raise DomainError("sequences must have equal length")
    f, g = as_fn(f), as_fn(g)
    start = tail_start(len(seq_f), tail)
    fs, gs = seq_f.terms[start:], seq_g.terms[start:]

    def sup(terms: Iterable[MeasurableFn]) -> float:
        return max(sugeno_lorentz_prenorm(mu, t, params) for t in terms)

    sf = sup(a - f for a in fs)
    sg = sup(b - g for b in gs)
    premises = {"f": sf, "g": sg}
    conclusions = {}
    ok = True
    if sf <= tail_tol and sg <= tail_tol:
        s_sum = sup((a + b) - (f + g) for a, b in zip(fs, gs))
        tol_sum = (2 * K) ** (1.0 / params.p) * 2 * tail_tol
        conclusions["sum"] = (s_sum, tol_sum)
        ok &= s_sum <= tol_sum
    if sf <= tail_tol:
        for alpha in alphas:
            s_a = sup(a * alpha - f * alpha for a in fs)
            tol_a = max(1.0, abs(alpha)) * tail_tol
            conclusions[f"scalar({alpha})"] = (s_a, tol_a)
            ok &= s_a <= tol_a
    return LinearityReport(premises, conclusions, K, bool(ok))


@dataclass(frozen=True)
class PseudometricReport:
    triples: int
    factor: float
    max_excess: float
    violations: int
    zero_diagonal: bool
    symmetric: bool

    @property
    def holds(self) -> bool:
        return self.violations == 0 and self.zero_diagonal and self.symmetric


def pseudometric_check(mu: Capacity, triples: Iterable[tuple], slack: float = 1e-12) -> PseudometricReport:
    """Check ``d(f, g) = (f - g)_1`` is a pseudometric on the given triples.

    For a subadditive capacity the plain triangle inequality is tested; for a
    ``K``-relaxed one the ``2K``-relaxed version.
    """
    K = minimal_relaxed_constant(mu)
    if K is None:
        raise PreconditionNotMet("capacity is not relaxed subadditive")
    factor = 1.0 if K <= 1.0 else 2 * K
    count = violations = 0
    worst = -math.inf
    diag = sym = True
    for f, g, h in triples:
        f, g, h = as_fn(f), as_fn(g), as_fn(h)
        dfg = sugeno_prenorm(mu, f - g)
        excess = dfg - factor * (sugeno_prenorm(mu, f - h) + sugeno_prenorm(mu, h - g))
        worst = max(worst, excess)
        violations += excess > slack
        diag &= sugeno_prenorm(mu, f - f) == 0
        sym &= dfg == sugeno_prenorm(mu, g - f)
        count += 1
    return PseudometricReport(count, factor, worst, violations, diag, sym)
