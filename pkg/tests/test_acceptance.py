"""Acceptance gate: eight end-to-end criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import math
import sys

import numpy as np
import pytest

from sugenolab import capacity as cap
from sugenolab.capacity import counting_dyadic, ext_pow, minimal_relaxed_constant, random_capacity
from sugenolab.checks import (
    SLACK,
    example43_rows,
    indicator_family,
    instances,
    null_additive_capacity,
    random_function,
    random_params,
    rel_close,
    relaxed_capacity,
    subadditive_capacity,
)
from sugenolab.errors import NotSeparable
from sugenolab.integrals import MeasurableFn, sugeno_bruteforce, sugeno_integral
from sugenolab.prenorms import (
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
from sugenolab.topology import (
    FnSequence,
    convergence_equivalence_check,
    converges_in_measure,
    non_closed_ball_witness,
    non_open_sphere_witness,
    probe_disjointness,
    pseudometric_check,
    separation_radius,
)

SEED = 20240601


class Tally:
    def __init__(self):
        self.cases = 0
        self.failures: list[str] = []

    def check(self, ok: bool, detail) -> None:
        self.cases += 1
        if not ok and len(self.failures) < 5:
            self.failures.append(detail() if callable(detail) else str(detail))
        elif not ok:
            self.failures.append("")

    @property
    def ok(self) -> bool:
        return not self.failures


def finish(log, number: int, title: str, tally: Tally, extra: str = "") -> None:
    summary = f"{tally.cases - len(tally.failures)}/{tally.cases} checks" + (f", {extra}" if extra else "")
    log(f"[{'PASS' if tally.ok else 'FAIL'}] criterion {number}: {title} ({summary})")
    assert tally.ok, "; ".join(f for f in tally.failures if f)


def test_criterion_1_example_reproduction(acceptance_log):
    t = Tally()
    n_max = 10
    for row in example43_rows(n_max, PrenormParams(1.0, 1.0)):
        n = row["n"]
        t.check(abs(row["f"] - 0.5) <= 1e-12, f"(f) at n={n}: {row['f']}")
        t.check(abs(row["f_n"] - 1.0) <= 1e-12, f"(f_n) at n={n}: {row['f_n']}")
        t.check(abs(row["f_n_minus_f"] - 2.0 ** -(n + 1)) <= 1e-12, f"(f_n - f) at n={n}")
    # p = 2, q = 3: closed forms from the indicator formula, evaluated separately
    params = PrenormParams(2.0, 3.0)
    mu = counting_dyadic(n_max + 2)
    for row in example43_rows(n_max, params):
        n = row["n"]
        amp = params.M0 * params.L0
        want_f = min(amp, mu.values[0b1] ** 0.5)
        want_fn = min(amp, mu.values[0b1 | 1 << n] ** 0.5)
        want_d = min(amp, mu.values[1 << n] ** 0.5)
        t.check(abs(want_f - 0.5**0.5) <= 1e-12 and abs(want_fn - 1) <= 1e-12, "closed form")
        t.check(abs(want_d - 2.0 ** (-(n + 1) / 2)) <= 1e-12, f"closed form n={n}")
        t.check(abs(row["f"] - want_f) <= 1e-9, f"(f) at n={n}, p=2 q=3: {row['f']}")
        t.check(abs(row["f_n"] - want_fn) <= 1e-9, f"(f_n) at n={n}, p=2 q=3: {row['f_n']}")
        t.check(abs(row["f_n_minus_f"] - want_d) <= 1e-9, f"(f_n - f) at n={n}, p=2 q=3")
    finish(acceptance_log, 1, "example reproduction on counting_dyadic(12)", t)


def test_criterion_2_oracle_equivalence(acceptance_log):
    su_t, ds_t = Tally(), Tally()
    h = 1e-4
    for s, mu, rng in instances(SEED, 500, n_max=6):
        f = random_function(rng, mu.n, nonneg=True)
        exact = sugeno_integral(mu, f)
        grid = sugeno_bruteforce(mu, f, h)
        su_t.check(grid <= exact + SLACK and exact - grid <= h + SLACK, lambda: f"seed {s}: {exact} vs {grid}")
    for s, mu, rng in instances(SEED + 1, 200, n_max=6):
        f = random_function(rng, mu.n)
        exact = dunford_schwartz_prenorm(mu, f)
        grid = dunford_schwartz_bruteforce(mu, f, h)
        ds_t.check(grid >= exact - SLACK and grid - exact <= phi(h) + SLACK, lambda: f"seed {s}: {exact} vs {grid}")
    t = Tally()
    t.cases = su_t.cases + ds_t.cases
    t.failures = su_t.failures + ds_t.failures
    finish(acceptance_log, 2, "closed forms vs grid oracles", t, f"Sugeno {su_t.cases}, Dunford-Schwartz {ds_t.cases}")


def test_criterion_3_identities(acceptance_log):
    t = Tally()
    for s, mu, rng in instances(SEED + 2, 500, n_max=6):
        f = random_function(rng, mu.n)
        params = random_params(rng)
        a, b = sugeno_lorentz_routes(mu, f, params)
        t.check(rel_close(a, b), lambda: f"routes, seed {s}: {a} vs {b}")
        g = abs(f)
        r = params.p
        lhs = sugeno_integral(mu, g**r)
        rhs = sugeno_integral(cap.power_transform(mu, 1 / r), g) ** r
        t.check(rel_close(lhs, rhs), lambda: f"exponentiation, seed {s}: {lhs} vs {rhs}")
    rng = np.random.default_rng(SEED + 3)
    for k in range(5):
        n = int(rng.integers(1, 6))
        mu = random_capacity(n, SEED + k, 0.3)
        for m in range(1 << n):
            alpha = float(rng.normal(0, 3))
            params = random_params(rng)
            got = sugeno_lorentz_prenorm(mu, MeasurableFn.indicator(n, m, alpha), params)
            want = min(abs(alpha) * params.L0, ext_pow(float(mu.values[m]), 1 / params.p)) if m else 0.0
            t.check(abs(got - want) <= 1e-12, lambda: f"indicator, mu #{k}, subset {m}: {got} vs {want}")
    finish(acceptance_log, 3, "identity suite", t)


def fatou_sequences(mu, f, rng, length=16):
    """Sequences converging in measure to ``f`` whose integrals settle in the tail.

    Terms agree with ``f`` off a null set; in the tail they carry arbitrary
    nonnegative values on that null set.
    """
    n = mu.n
    nulls = [int(m) for m in mu.null_masks()]
    core = max(nulls, key=cap.popcount)
    head = [MeasurableFn(rng.uniform(0, 4, size=n)) for _ in range(length // 2)]
    tail = []
    for _ in range(length - len(head)):
        bump = np.where([core >> i & 1 for i in range(n)], rng.uniform(0, 6, size=n), f.values)
        tail.append(MeasurableFn(bump))
    return FnSequence(tuple(head + tail))


def fatou_holds(mu, seq, f) -> tuple[bool, bool]:
    tail = [sugeno_integral(mu, g) for g in seq.terms[len(seq) // 2 :]]
    su = sugeno_integral(mu, f)
    return su <= min(tail) + SLACK, max(tail) <= su + SLACK


def test_criterion_4_inequalities(acceptance_log):
    t = Tally()
    controls = 0
    for s, mu, rng in instances(SEED + 4, 500, n_max=6):
        n = mu.n
        f, g = random_function(rng, n), random_function(rng, n)
        params = random_params(rng)
        K = minimal_relaxed_constant(mu) if mu.is_finite else None
        if K is not None:
            af, ag = abs(f), abs(g)
            lhs = sugeno_integral(mu, af + ag)
            t.check(lhs <= K * (sugeno_integral(mu, af) + sugeno_integral(mu, ag)) + SLACK, f"Su relaxed, seed {s}")
            tri = sugeno_lorentz_prenorm(mu, f + g, params)
            bound = (2 * K) ** (1 / params.p) * (
                sugeno_lorentz_prenorm(mu, f, params) + sugeno_lorentz_prenorm(mu, g, params)
            )
            t.check(tri <= bound + SLACK, lambda: f"relaxed triangle, seed {s}: {tri} > {bound}")
        alpha = float(rng.normal(0, 3))
        pf = sugeno_lorentz_prenorm(mu, f, params)
        t.check(sugeno_lorentz_prenorm(mu, f * alpha, params) <= max(1.0, abs(alpha)) * pf + SLACK, f"subhom, seed {s}")
        bigger = MeasurableFn(np.sign(rng.normal(size=n)) * (np.abs(f.values) + rng.uniform(0, 1, size=n)))
        t.check(pf <= sugeno_lorentz_prenorm(mu, bigger, params) + SLACK, f"monotone, seed {s}")
        for b in est_bounds(mu, f, params) + comparison_bounds(mu, f, params):
            t.check(b.holds(SLACK), lambda: f"{b.name}, seed {s}: {b.lhs} > {b.rhs}")
        eps = float(rng.uniform(0.01, 3))
        t.check(chebyshev_bound(mu, f, params, eps).derived_holds(SLACK), f"chebyshev, seed {s}")

        # Fatou pair under a null-additive capacity
        na = null_additive_capacity(s, n)
        h = random_function(rng, n, nonneg=True)
        seq = fatou_sequences(na, h, rng)
        t.check(converges_in_measure(na, seq, h).converges, f"fatou sequence not convergent, seed {s}")
        lower, upper = fatou_holds(na, seq, h)
        t.check(lower and upper, f"fatou, seed {s}: {lower}, {upper}")

        # and the decider's witness breaks one of them when null-additivity fails
        verdict = cap.is_null_additive(mu)
        if not verdict.holds:
            a, nset = verdict.witness
            top = float(mu.values[a | nset])
            c = 1.0 + (top if math.isfinite(top) else float(mu.values[a]))
            base = MeasurableFn.indicator(n, a | nset, c)
            cut = MeasurableFn.indicator(n, a & ~nset, c)
            # cut -> base and base -> cut both converge in measure (difference on a null set)
            lo, _ = fatou_holds(mu, FnSequence((cut,) * 4), base)
            _, hi = fatou_holds(mu, FnSequence((base,) * 4), cut)
            t.check(not (lo and hi), f"fatou control, seed {s}")
            controls += 1
    finish(acceptance_log, 4, "inequality suite", t, f"{controls} Fatou failure controls")


def test_criterion_5_witness_duality(acceptance_log):
    t = Tally()
    witnesses = 0
    for k in range(500):
        s = SEED * 31 + k
        rng = np.random.default_rng(s)
        n = int(rng.integers(1, 6))
        mu = random_capacity(n, s, 0.5)
        params = random_params(rng)
        above = cap.is_autocontinuous_above(mu).holds
        below = cap.is_autocontinuous_below(mu).holds
        w = non_open_sphere_witness(mu, params)
        b = non_closed_ball_witness(mu, params)
        t.check((w is None) == above, f"open-sphere existence, seed {s}")
        t.check((b is None) == below, f"closed-ball existence, seed {s}")
        for x in (w, b):
            if x is not None:
                witnesses += 1
                t.check(x.verify(mu, 1e-12), lambda: f"witness relations, seed {s}: {x.relations(mu)}")
    finish(acceptance_log, 5, "witness duality sweep", t, f"{witnesses} witnesses verified")


def test_criterion_6_convergence_equivalence(acceptance_log):
    t = Tally()
    convergent = 0
    for k in range(50):
        mu, seq, f, conv = indicator_family(SEED + k)
        rep = convergence_equivalence_check(mu, seq, f, strict=False)
        t.check(rep.agree, lambda: f"family {k}: {rep.verdicts}")
        t.check(rep.converges == conv, f"family {k}: verdict {rep.converges}, constructed {conv}")
        convergent += conv
    finish(acceptance_log, 6, "convergence verdicts agree", t, f"{convergent} convergent, {50 - convergent} not")


def test_criterion_7_separation_soundness(acceptance_log):
    t = Tally()
    control_hits = 0
    emitted = attempts = 0
    while emitted < 100:
        s = SEED * 7 + attempts
        attempts += 1
        rng = np.random.default_rng(s)
        n = int(rng.integers(1, 7))
        mu = random_capacity(n, s, 0.3)
        params = random_params(rng)
        f, g = random_function(rng, n), random_function(rng, n)
        if sugeno_lorentz_prenorm(mu, f - g, params) == 0:
            continue
        try:
            cert = separation_radius(mu, f, g, params)
        except NotSeparable:
            continue
        emitted += 1
        rep = probe_disjointness(mu, cert, 10_000, s, raise_on_hit=False)
        t.check(rep.hits == 0, lambda: f"seed {s}: {rep.hits} hits, first {rep.first_hit}")
        doubled = probe_disjointness(mu, cert, 10_000, s, radius_scale=2.0, raise_on_hit=False)
        control_hits += doubled.hits > 0
    rate = control_hits / emitted
    t.check(rate >= 0.9, f"doubled-radius control caught only {rate:.0%}")
    finish(acceptance_log, 7, "separation certificates survive probing", t, f"doubled-radius control hit {rate:.0%}")


def test_criterion_8_pseudometric(acceptance_log):
    t = Tally()
    worst = -math.inf
    for kind, make in (("subadditive", subadditive_capacity), ("relaxed", relaxed_capacity)):
        for k in range(50):
            s = SEED + 1000 * k
            rng = np.random.default_rng(s)
            n = int(rng.integers(1, 7))
            mu = make(s, n)
            triples = [tuple(random_function(rng, n) for _ in range(3)) for _ in range(1000)]
            rep = pseudometric_check(mu, triples, SLACK)
            if kind == "subadditive":
                t.check(rep.factor == 1.0, f"{kind} #{k} not subadditive")
            t.check(rep.holds, lambda: f"{kind} #{k}: {rep.violations} violations, excess {rep.max_excess}")
            worst = max(worst, rep.max_excess)
    finish(acceptance_log, 8, "pseudometric triangle inequality", t, f"max excess {worst:.3g}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
