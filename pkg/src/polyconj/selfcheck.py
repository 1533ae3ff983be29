"""Randomized verification suite behind the command-line selfcheck.

Given a seed, an instance count, and a size profile, this module generates
random polyhedral mappings and runs the full battery of identity checks on
them: conjugate-level sum, chain, and intersection rules with witness
validation; coderivative sum and chain rules as polyhedron equalities;
agreement of the two coderivative membership routes; and agreement of the
simplex support values with the brute-force vertex oracle.

Instance i uses seed*1000003 + i + 1 for its own generator, so runs are
reproducible bit for bit and instances are decorrelated.  The resulting
report contains only counts and violation descriptions, never timing data,
which keeps the rendered output byte-identical across runs.
"""

from __future__ import annotations

from typing import Any

from .calculus import (chain_rule_check_many, coderivative_chain_rule_check,
                       coderivative_sum_rule_check, intersection_rule_check_many,
                       sum_rule_check_many)
from .linalg import Vec, vsub
from .mapping import PolyMap
from .oracle import (InstanceSeed, Profile, RetryExhausted, Xorshift64Star,
                     random_bounded_polyhedron, random_chain_pair,
                     random_polymap_pair, random_vec, sample_graph_points)
from .support import ExtReal, RuleReport, support_eval
from .oracle import vertex_support_oracle

_STRIDE = 1000003


def _witness_attains_sum(F1: PolyMap, F2: PolyMap, v: Vec, rep: RuleReport) -> bool:
    u1, u2 = rep.witness
    c1 = F1.conjugate(u1, v).value
    c2 = F2.conjugate(u2, v).value
    return c1.is_finite and c2.is_finite and ExtReal.of(c1.q + c2.q) == rep.rhs


def _witness_attains_chain(F: PolyMap, G: PolyMap, u: Vec, w: Vec,
                           rep: RuleReport) -> bool:
    (v,) = rep.witness
    c1 = F.conjugate(u, v).value
    c2 = G.conjugate(tuple(-x for x in v), w).value
    return c1.is_finite and c2.is_finite and ExtReal.of(c1.q + c2.q) == rep.rhs


def _witness_attains_intersection(F1: PolyMap, F2: PolyMap,
                                  rep: RuleReport) -> bool:
    (u1, v1), (u2, v2) = rep.witness
    c1 = F1.conjugate(u1, v1).value
    c2 = F2.conjugate(u2, v2).value
    return c1.is_finite and c2.is_finite and ExtReal.of(c1.q + c2.q) == rep.rhs


class _Tally:
    def __init__(self):
        self.counts: dict[str, int] = {}
        self.violations: list[str] = []

    def bump(self, key: str, by: int = 1):
        self.counts[key] = self.counts.get(key, 0) + by

    def violation(self, msg: str):
        self.violations.append(msg)


def _conjugate_rules(tally: _Tally, rng: Xorshift64Star, seed: InstanceSeed,
                     label: str) -> None:
    prof = seed.profile
    n = rng.randint(1, prof.max_dim)
    p = rng.randint(1, prof.max_dim)
    bound = prof.coeff_bound

    F1, F2 = random_polymap_pair(seed, n, p)
    points = [(random_vec(rng, n, bound), random_vec(rng, p, bound))
              for _ in range(3)]
    for rep, (u, v) in zip(sum_rule_check_many(F1, F2, points), points):
        tally.bump("sum_rule_points")
        if rep.applicable:
            tally.bump("sum_rule_applicable")
            if not rep.equal:
                tally.violation(f"{label}: sum rule strict under qualification at {u}, {v}")
            elif rep.lhs.is_finite and not _witness_attains_sum(F1, F2, v, rep):
                tally.violation(f"{label}: sum rule witness does not attain at {u}, {v}")

    q = rng.randint(1, prof.max_dim)
    F, G, _ = random_chain_pair(seed, n, p, q)
    points = [(random_vec(rng, n, bound), random_vec(rng, q, bound))
              for _ in range(3)]
    for rep, (u, w) in zip(chain_rule_check_many(F, G, points), points):
        tally.bump("chain_rule_points")
        if rep.applicable:
            tally.bump("chain_rule_applicable")
            if not rep.equal:
                tally.violation(f"{label}: chain rule strict under qualification at {u}, {w}")
            elif rep.lhs.is_finite and not _witness_attains_chain(F, G, u, w, rep):
                tally.violation(f"{label}: chain rule witness does not attain at {u}, {w}")

    points = [(random_vec(rng, n, bound), random_vec(rng, p, bound))
              for _ in range(3)]
    for rep, (u, v) in zip(intersection_rule_check_many(F1, F2, points), points):
        tally.bump("intersection_rule_points")
        if rep.applicable:
            tally.bump("intersection_rule_applicable")
            if not rep.equal:
                tally.violation(f"{label}: intersection rule strict under qualification at {u}, {v}")
            elif rep.lhs.is_finite and not _witness_attains_intersection(F1, F2, rep):
                tally.violation(f"{label}: intersection witness does not attain at {u}, {v}")


def _coderivative_rules(tally: _Tally, rng: Xorshift64Star, seed: InstanceSeed,
                        label: str) -> None:
    prof = seed.profile
    bound = prof.coeff_bound
    n = rng.randint(1, prof.max_dim)
    p = rng.randint(1, prof.max_dim)

    try:
        F1, F2 = random_polymap_pair(seed, n, p, require_common_domain=True)
    except RetryExhausted:
        tally.bump("coderivative_sum_skipped")
        return
    xbar = F1.domain().intersection(F2.domain()).relative_interior_point()
    y1 = F1.image_at(xbar).relative_interior_point()
    y2 = F2.image_at(xbar).relative_interior_point()
    ystar = random_vec(rng, p, bound)
    rep = coderivative_sum_rule_check(F1, F2, xbar, y1, y2, ystar)
    tally.bump("coderivative_sum_instances")
    if not rep.lhs_includes_rhs:
        tally.violation(f"{label}: coderivative sum rule lost the easy inclusion")
    if not rep.equal:
        tally.violation(f"{label}: coderivative sum rule polyhedra differ")

    q = rng.randint(1, prof.max_dim)
    try:
        F, G, linked = random_chain_pair(seed, n, p, q)
    except RetryExhausted:
        tally.bump("coderivative_chain_skipped")
        return
    base = linked.relative_interior_point()
    xbar, ybar, zbar = base[:n], base[n:n + p], base[n + p:]
    zstar = random_vec(rng, q, bound)
    rep = coderivative_chain_rule_check(F, G, xbar, ybar, zbar, zstar)
    tally.bump("coderivative_chain_instances")
    if not rep.lhs_includes_rhs:
        tally.violation(f"{label}: coderivative chain rule lost the easy inclusion")
    if not rep.equal:
        tally.violation(f"{label}: coderivative chain rule polyhedra differ")


def _membership_routes(tally: _Tally, rng: Xorshift64Star, seed: InstanceSeed,
                       label: str) -> None:
    prof = seed.profile
    bound = prof.coeff_bound
    n = rng.randint(1, prof.max_dim)
    p = rng.randint(1, prof.max_dim)
    F, _ = random_polymap_pair(seed, n, p)
    for pt in sample_graph_points(F, 2, seed):
        xbar, ybar = pt[:n], pt[n:]
        for _ in range(3):
            ystar = random_vec(rng, p, bound)
            xstar = random_vec(rng, n, bound)
            via_gap = F._coderivative_contains_gap(xbar, ybar, ystar, xstar)
            via_cone = F._coderivative_contains_cone(xbar, ybar, ystar, xstar)
            tally.bump("membership_queries")
            if via_gap != via_cone:
                tally.violation(f"{label}: membership routes disagree at {xbar}, {ybar}")


def _oracle_agreement(tally: _Tally, rng: Xorshift64Star, seed: InstanceSeed,
                      label: str) -> None:
    prof = seed.profile
    dim = rng.randint(1, prof.max_dim)
    try:
        P = random_bounded_polyhedron(rng, dim, min(4, prof.max_rows),
                                      prof.coeff_bound, seed_hint=seed.seed)
    except RetryExhausted:
        tally.bump("oracle_skipped")
        return
    for _ in range(3):
        v = random_vec(rng, dim, prof.coeff_bound)
        tally.bump("oracle_directions")
        if support_eval(P, v).value != vertex_support_oracle(P, v):
            tally.violation(f"{label}: simplex and vertex oracle disagree on {v}")


def run_selfcheck(seed: int, count: int, profile: Profile) -> dict[str, Any]:
    """Run the full randomized battery; returns a deterministic report dict."""
    tally = _Tally()
    for i in range(count):
        base = seed * _STRIDE + i + 1
        label = f"instance {i}"
        rng = Xorshift64Star(base)
        inst = InstanceSeed(base, profile)
        try:
            _conjugate_rules(tally, rng, inst, label)
            _coderivative_rules(tally, rng, inst, label)
            _membership_routes(tally, rng, inst, label)
            _oracle_agreement(tally, rng, inst, label)
        except AssertionError as e:
            tally.violation(f"{label}: internal invariant failed: {e}")
        except RetryExhausted as e:
            tally.bump("instances_skipped")
    report = {
        "version": "1",
        "kind": "selfcheck",
        "seed": seed,
        "count": count,
        "profile": {"max_dim": profile.max_dim, "max_rows": profile.max_rows,
                    "coeff_bound": profile.coeff_bound},
        "checks": dict(sorted(tally.counts.items())),
        "violations": tally.violations,
        "all_passed": not tally.violations,
    }
    return report
