"""Seeded random instances and the invariant sweeps run by ``sugenolab check``."""
from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass, field

import numpy as np

from . import capacity as cap
from .capacity import Capacity, collapse_null_core, from_additive, random_capacity, replay_witness
from .errors import NotSeparable
from .integrals import (
    MeasurableFn,
    choquet_integral,
    distribution,
    sugeno_bruteforce,
    sugeno_integral,
)
from .prenorms import (
    PrenormParams,
    chebyshev_bound,
    comparison_bounds,
    dunford_schwartz_bruteforce,
    dunford_schwartz_prenorm,
    est_bounds,
    phi,
    sugeno_lorentz_prenorm,
    sugeno_lorentz_routes,
)
from .topology import (
    FnSequence,
    convergence_equivalence_check,
    non_closed_ball_witness,
    non_open_sphere_witness,
    probe_disjointness,
    pseudometric_check,
    separation_radius,
)

SLACK = 1e-12
REL = 1e-9


def rel_close(a: float, b: float, rtol: float = REL, atol: float = SLACK) -> bool:
    if a == b:
        return True
    return abs(a - b) <= max(atol, rtol * max(abs(a), abs(b)))


# ---------------------------------------------------------------------------
# generators


def random_function(rng: np.random.Generator, n: int, scale: float = 2.0, nonneg: bool = False) -> MeasurableFn:
    """Random values with deliberate ties and zeros."""
    v = rng.normal(0.0, scale, size=n)
    palette = rng.normal(0.0, scale, size=2)
    tie = rng.random(n) < 0.25
    v[tie] = rng.choice(palette, size=int(tie.sum()))
    v[rng.random(n) < 0.15] = 0.0
    if nonneg:
        v = np.abs(v)
    return MeasurableFn(v)


def random_params(rng: np.random.Generator) -> PrenormParams:
    return PrenormParams(float(rng.uniform(0.3, 4.0)), float(rng.uniform(0.3, 4.0)))


def subadditive_capacity(seed: int, n: int) -> Capacity:
    """Concave images and maxima of additive measures, all subadditive."""
    rng = np.random.default_rng(seed)
    kind = seed % 4
    w = rng.uniform(0.0, 1.5, size=n)
    base = from_additive(w)
    if kind == 0:
        values = base.values
    elif kind == 1:
        values = np.sqrt(base.values)
    elif kind == 2:
        values = np.minimum(base.values, rng.uniform(0.3, 1.5))
    else:
        other = from_additive(rng.uniform(0.0, 1.5, size=n))
        values = np.maximum(base.values, other.values)
    return cap.validate_capacity(values, provenance=f"subadditive({seed})")


def relaxed_capacity(seed: int, n: int) -> Capacity:
    """Capacities that are relaxed subadditive but usually not subadditive."""
    rng = np.random.default_rng(seed)
    kind = seed % 3
    if kind == 0:
        w = rng.uniform(0.05, 1.5, size=n)
        return cap.power_transform(from_additive(w), float(rng.uniform(1.2, 3.0)))
    if kind == 1:
        return cap.counting_dyadic(n)
    return random_capacity(n, seed, 0.0)


def null_additive_capacity(seed: int, n: int) -> Capacity:
    """A null-additive capacity with a nonempty null core when ``n > 1``."""
    rng = np.random.default_rng(seed)
    base = random_capacity(n, seed, 0.0, zero_increment_prob=0.0)
    core = int(rng.integers(1, 1 << n)) if n > 1 else 0
    if core == (1 << n) - 1:
        core &= ~1
    return collapse_null_core(base, core)


def instances(seed: int, count: int, n_max: int = 6, bias: float = 0.3) -> Iterator[tuple[int, Capacity, np.random.Generator]]:
    for k in range(count):
        s = seed * 100003 + k
        rng = np.random.default_rng(s)
        n = int(rng.integers(1, n_max + 1))
        if k % 5 == 4:
            mu = null_additive_capacity(s, n)
        else:
            mu = random_capacity(n, s, bias, infinite_prob=0.05 if k % 7 == 3 else 0.0)
        yield s, mu, rng


def example43_rows(n_max: int, params: PrenormParams) -> list[dict]:
    """Prenorms of ``f = M0 chi_{1}`` and ``f_n = M0 chi_{1, n+1}`` on ``counting_dyadic(n_max + 2)``."""
    N = n_max + 2
    mu = cap.counting_dyadic(N)
    M0 = params.M0
    f = MeasurableFn.indicator(N, [0], M0)
    rows = []
    for n in range(1, n_max + 1):
        fn = MeasurableFn.indicator(N, [0, n], M0)
        rows.append(
            {
                "n": n,
                "f": sugeno_lorentz_prenorm(mu, f, params),
                "f_n": sugeno_lorentz_prenorm(mu, fn, params),
                "f_n_minus_f": sugeno_lorentz_prenorm(mu, fn - f, params),
            }
        )
    return rows


def indicator_family(seed: int, length: int = 24) -> tuple[Capacity, FnSequence, MeasurableFn, bool]:
    """A sequence ``f_k = f + a chi_{B_k}`` whose limiting behaviour is known.

    Returns the capacity, the sequence, the candidate limit and whether the
    sequence converges in measure.
    """
    rng = np.random.default_rng(seed)
    kind = seed % 5
    amp = float(rng.uniform(1.0, 3.0))
    if kind in (0, 1):
        # geometric mass: B_k = {k+1} under the dyadic counting capacity
        N = 24
        mu = cap.counting_dyadic(N)
        f = random_function(rng, N)
        if kind == 0:
            sets = [1 << min(k + 1, N - 1) for k in range(length)]
            conv = True
        else:
            fixed = int(rng.integers(0, 3))
            sets = [(1 << fixed) | (1 << min(k + 1, N - 1)) for k in range(length)]
            conv = False
    elif kind == 2:
        # additive weights 2^-k: convergent
        N = 20
        mu = from_additive([2.0 ** -(k + 1) for k in range(N)])
        f = random_function(rng, N)
        sets = [1 << min(k, N - 1) for k in range(length)]
        conv = True
    else:
        # small random capacity: the tail lives in a null set or a fixed nonnull set
        n = int(rng.integers(2, 7))
        mu = null_additive_capacity(seed, n)
        # normalise so the non-convergent branch has sets well above tail_tol
        mu = cap.validate_capacity(mu.values / mu.values[-1], provenance=mu.provenance)
        f = random_function(rng, n)
        nulls = [int(m) for m in mu.null_masks()]
        heavy = [m for m in range(1, 1 << n) if mu.values[m] >= 0.25]
        head = [int(rng.integers(1, 1 << n)) for _ in range(length // 2)]
        if kind == 3 and len(nulls) > 1:
            tail = [nulls[int(rng.integers(0, len(nulls)))] for _ in range(length - len(head))]
            conv = True
        else:
            tail = [heavy[int(rng.integers(0, len(heavy)))] for _ in range(length - len(head))]
            conv = False
        sets = head + tail
    n = f.n
    terms = tuple(f + MeasurableFn.indicator(n, s, amp) for s in sets)
    return mu, FnSequence(terms, rule=f"indicator-family({kind})"), f, conv


# ---------------------------------------------------------------------------
# suites


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: int = 0
    first_failure: str | None = None

    def record(self, ok: bool, detail: Callable[[], str] | str = ""):
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = detail() if callable(detail) else detail

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  first failure: {self.first_failure}" if self.first_failure else ""
        return f"[{status}] {self.name}: {self.cases - self.failures}/{self.cases}{extra}"


@dataclass
class SuiteRun:
    results: dict[str, CheckResult] = field(default_factory=dict)

    def get(self, name: str) -> CheckResult:
        return self.results.setdefault(name, CheckResult(name))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())


def suite_capacity(seed: int, count: int, run: SuiteRun) -> None:
    for s, mu, rng in instances(seed, count, n_max=6, bias=0.5):
        rep = cap.property_report(mu)
        for v in rep.verdicts:
            if not v.holds:
                run.get("witness replay").record(replay_witness(mu, v), f"seed {s}: {v}")
        K = rep.minimal_relaxed_K
        chain = [
            (not rep.subadditive.holds) or (K is not None and K <= 1.0),
            K is None or rep.pgp.holds,
            (not rep.pgp.holds) or rep.weakly_null_additive.holds,
            (not rep.autocontinuous_above.holds) or rep.null_additive.holds,
            (not rep.autocontinuous_below.holds) or rep.null_additive.holds,
            (not rep.null_additive.holds) or rep.weakly_null_additive.holds,
        ]
        run.get("implication chain").record(all(chain), f"seed {s}: {chain}")
        r = float(rng.uniform(0.2, 3.0))
        pt = cap.power_transform(mu, r)
        ok = True
        try:
            cap.validate_capacity(pt.values)
        except cap.CapacityError:
            ok = False
        run.get("power transform monotone").record(ok, f"seed {s}, r={r}")


def suite_integrals(seed: int, count: int, run: SuiteRun) -> None:
    for s, mu, rng in instances(seed, count, n_max=6):
        f = random_function(rng, mu.n, nonneg=True)
        su = sugeno_integral(mu, f)
        h = 1e-3
        bf = sugeno_bruteforce(mu, f, h)
        run.get("sugeno vs grid oracle").record(bf <= su + SLACK and su - bf <= h + SLACK, f"seed {s}: {su} vs {bf}")
        for p in (0.5, 1.0, 2.0, 3.0):
            lhs = sugeno_integral(mu, f**p)
            rhs = sugeno_integral(cap.power_transform(mu, 1.0 / p), f) ** p
            run.get("exponentiation").record(rel_close(lhs, rhs), f"seed {s}, p={p}: {lhs} vs {rhs}")
        alpha = float(rng.uniform(0.0, 3.0))
        run.get("truncated subhomogeneity").record(
            sugeno_integral(mu, f * alpha) <= max(1.0, alpha) * su + SLACK, f"seed {s}"
        )
        g = MeasurableFn(f.values + np.abs(rng.normal(size=mu.n)) * (rng.random(mu.n) < 0.5))
        run.get("monotonicity").record(su <= sugeno_integral(mu, g) + SLACK, f"seed {s}")
        ts = rng.uniform(0.0, float(f.values.max()) + 1.0, size=10)
        run.get("integrability bound").record(
            all(su <= max(t, distribution(mu, f, t)) + SLACK for t in ts), f"seed {s}"
        )
        K = cap.minimal_relaxed_constant(mu)
        if K is not None and mu.is_finite:
            run.get("relaxed subadditivity of Su").record(
                sugeno_integral(mu, f + g) <= K * (su + sugeno_integral(mu, g)) + SLACK, f"seed {s}, K={K}"
            )
        c = float(rng.uniform(0.1, 3.0))
        run.get("choquet homogeneity").record(
            rel_close(choquet_integral(mu, f * c), c * choquet_integral(mu, f)), f"seed {s}"
        )


def suite_prenorms(seed: int, count: int, run: SuiteRun) -> None:
    for s, mu, rng in instances(seed, count, n_max=6):
        f = random_function(rng, mu.n)
        pq = random_params(rng)
        a, b = sugeno_lorentz_routes(mu, f, pq)
        run.get("prenorm route cross-check").record(rel_close(a, b), f"seed {s}: {a} vs {b}")
        slp = sugeno_lorentz_prenorm(mu, f, pq)
        for bound in est_bounds(mu, f, pq) + comparison_bounds(mu, f, pq):
            run.get(f"bound {bound.name}").record(bound.holds(SLACK), f"seed {s}: {bound}")
        eps = float(rng.uniform(0.01, 2.0))
        run.get("chebyshev (derived form)").record(chebyshev_bound(mu, f, pq, eps).derived_holds(SLACK), f"seed {s}")
        alpha = float(rng.normal(0, 2))
        run.get("prenorm truncated subhomogeneity").record(
            sugeno_lorentz_prenorm(mu, f * alpha, pq) <= max(1.0, abs(alpha)) * slp + SLACK, f"seed {s}"
        )
        m = int(rng.integers(0, 1 << mu.n))
        alpha = float(rng.normal(0, 2))
        ind = sugeno_lorentz_prenorm(mu, MeasurableFn.indicator(mu.n, m, alpha), pq)
        expected = min(abs(alpha) * pq.L0, cap.ext_pow(float(mu.values[m]), 1.0 / pq.p))
        run.get("indicator formula").record(rel_close(ind, expected), f"seed {s}: {ind} vs {expected}")
        if mu.is_finite:
            ds = dunford_schwartz_prenorm(mu, f)
            grid = dunford_schwartz_bruteforce(mu, f, 1e-3)
            run.get("dunford-schwartz vs grid").record(
                ds <= grid + SLACK and grid - ds <= phi(1e-3) + SLACK, f"seed {s}: {ds} vs {grid}"
            )


def suite_topology(seed: int, count: int, run: SuiteRun, probes: int = 2000) -> None:
    for s, mu, rng in instances(seed, count, n_max=5, bias=0.5):
        pq = random_params(rng)
        above = cap.is_autocontinuous_above(mu)
        below = cap.is_autocontinuous_below(mu)
        w = non_open_sphere_witness(mu, pq)
        run.get("open-sphere duality").record((w is None) == above.holds and (w is None or w.verify(mu)), f"seed {s}")
        b = non_closed_ball_witness(mu, pq)
        run.get("closed-ball duality").record((b is None) == below.holds and (b is None or b.verify(mu)), f"seed {s}")

        f, g = random_function(rng, mu.n), random_function(rng, mu.n)
        if sugeno_lorentz_prenorm(mu, f - g, pq) > 0:
            try:
                cert = separation_radius(mu, f, g, pq)
            except NotSeparable:
                run.get("separation: NotSeparable only without weak null-additivity").record(
                    not cap.is_weakly_null_additive(mu).holds, f"seed {s}"
                )
            else:
                rep = probe_disjointness(mu, cert, probes, s, raise_on_hit=False)
                run.get("separation soundness").record(rep.passed, f"seed {s}: {rep.first_hit}")

    for k in range(max(1, count // 4)):
        s = seed * 7919 + k
        mu, seq, f, conv = indicator_family(s)
        rep = convergence_equivalence_check(mu, seq, f, strict=False)
        run.get("convergence verdicts agree").record(rep.agree and rep.converges == conv, f"seed {s}: {rep.verdicts}")

    for k in range(max(1, count // 10)):
        s = seed * 104729 + k
        rng = np.random.default_rng(s)
        n = int(rng.integers(1, 6))
        for mu in (subadditive_capacity(s, n), relaxed_capacity(s, n)):
            triples = [tuple(random_function(rng, n) for _ in range(3)) for _ in range(50)]
            rep = pseudometric_check(mu, triples)
            run.get("pseudometric triangle").record(rep.holds, f"seed {s}: excess {rep.max_excess}")


SUITES = {
    "capacity": suite_capacity,
    "integrals": suite_integrals,
    "prenorms": suite_prenorms,
    "topology": suite_topology,
}


def run_suites(names: list[str], seed: int, count: int) -> SuiteRun:
    run = SuiteRun()
    for name in names:
        SUITES[name](seed, count, run)
    return run
