"""Calculus of polyhedral set-valued mappings, checked constructively.

Sums, compositions, and intersections of mappings are built as explicit
graph polyhedra (projection does the work), so the left side of every
identity is evaluated on a materialized object.  The right side is always a
single joint LP over the multipliers of both graphs, whose optimal basis
also yields the attaining decomposition.  An independent reduction route,
the support value of the unprojected product-space intersection, is kept as
a cross-check on the projection code.

Every check runs regardless of qualification and reports strictness instead
of raising; the one-sided inequality between the two sides holds with no
hypotheses at all and is asserted on every call.  The coderivative rules
compare polyhedra: the value of the coderivative of a sum or composition
against the combination of the factors' coderivatives (Minkowski sum, or
composition through an intermediate dual variable).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .linalg import Vec, ZERO, concat, dot, vadd, vneg, vsub, zeros
from .mapping import PolyMap
from .polyhedron import Polyhedron, lift, minkowski_sum, ri_meets
from .support import (ExtReal, MINUS_INF, Qualification, RuleReport,
                      _inf_convolution, support_eval)


# ----- graph constructions ----------------------------------------------------

def sum_map(F1: PolyMap, F2: PolyMap) -> PolyMap:
    """Pointwise sum x -> F1(x) + F2(x), graph obtained by projection.

    Works in coordinates (x, y1, y): F1 constrains (x, y1), F2 constrains
    (x, y - y1), and y1 is eliminated.
    """
    if F1.n != F2.n or F1.p != F2.p:
        raise ValueError("sum_map: dimension mismatch")
    n, p = F1.n, F1.p
    rows: list[Vec] = []
    rhs: list[Fraction] = []
    for a, beta in F1.graph.rows():
        rows.append(concat(a[:n], a[n:], zeros(p)))
        rhs.append(beta)
    for a, beta in F2.graph.rows():
        rows.append(concat(a[:n], vneg(a[n:]), a[n:]))
        rhs.append(beta)
    big = Polyhedron(tuple(rows), tuple(rhs), n + 2 * p)
    keep = list(range(n)) + list(range(n + p, n + 2 * p))
    return PolyMap(n, p, big.project(keep))


def compose_map(F: PolyMap, G: PolyMap) -> PolyMap:
    """Composition x -> G(F(x)), graph = projection of the linked triple."""
    if F.p != G.n:
        raise ValueError("compose_map: inner dimensions do not match")
    n, p, q = F.n, F.p, G.p
    amb = n + p + q
    big = lift(F.graph, amb, range(n + p)).intersection(
        lift(G.graph, amb, range(n, amb)))
    keep = list(range(n)) + list(range(n + p, amb))
    return PolyMap(n, q, big.project(keep))


def intersect_map(F1: PolyMap, F2: PolyMap) -> PolyMap:
    """Pointwise intersection; its graph is the intersection of the graphs."""
    if F1.n != F2.n or F1.p != F2.p:
        raise ValueError("intersect_map: dimension mismatch")
    return PolyMap(F1.n, F1.p, F1.graph.intersection(F2.graph))


# ----- product-space reductions (internal cross-checks) -------------------------

def _sum_product_sets(F1: PolyMap, F2: PolyMap) -> tuple[Polyhedron, Polyhedron]:
    n, p = F1.n, F1.p
    amb = n + 2 * p
    O1 = lift(F1.graph, amb, list(range(n)) + list(range(n, n + p)))
    O2 = lift(F2.graph, amb, list(range(n)) + list(range(n + p, amb)))
    return O1, O2


def _chain_product_sets(F: PolyMap, G: PolyMap) -> tuple[Polyhedron, Polyhedron]:
    n, p, q = F.n, F.p, G.p
    amb = n + p + q
    O1 = lift(F.graph, amb, range(n + p))
    O2 = lift(G.graph, amb, range(n, amb))
    return O1, O2


def sum_support_reduction(F1: PolyMap, F2: PolyMap, u: Vec, v: Vec) -> ExtReal:
    """Support of the unprojected sum construction at (u, v, v)."""
    O1, O2 = _sum_product_sets(F1, F2)
    return support_eval(O1.intersection(O2), concat(u, v, v)).value


def chain_support_reduction(F: PolyMap, G: PolyMap, u: Vec, w: Vec) -> ExtReal:
    """Support of the unprojected composition construction at (u, 0, w)."""
    O1, O2 = _chain_product_sets(F, G)
    return support_eval(O1.intersection(O2), concat(u, zeros(F.p), w)).value


# ----- conjugate-level rules ----------------------------------------------------

def _qualification(P: Polyhedron, Q: Polyhedron) -> Qualification:
    return Qualification(ri_condition=ri_meets(P, Q),
                         polyhedral_condition=not P.intersection(Q).is_empty())


def sum_qualification(F1: PolyMap, F2: PolyMap) -> Qualification:
    return _qualification(F1.domain(), F2.domain())


def chain_qualification(F: PolyMap, G: PolyMap) -> Qualification:
    return _qualification(F.range(), G.domain())


def intersection_qualification(F1: PolyMap, F2: PolyMap) -> Qualification:
    return _qualification(F1.graph, F2.graph)


def sum_rule_check_many(F1: PolyMap, F2: PolyMap,
                        points: list[tuple[Vec, Vec]]) -> list[RuleReport]:
    """Sum rule at several dual points, building the sum graph only once."""
    if F1.n != F2.n or F1.p != F2.p:
        raise ValueError("sum rule: dimension mismatch")
    n = F1.n
    S = sum_map(F1, F2)
    O1, O2 = _sum_product_sets(F1, F2)
    qual = sum_qualification(F1, F2)
    out = []
    for u, v in points:
        lhs = S.conjugate(u, v).value
        conv = _inf_convolution(O1, O2, concat(u, v, v))
        witness = None
        if conv.split is not None:
            u1 = conv.split[0][:n]
            witness = (u1, vsub(u, u1))
        if not lhs <= conv.value:
            raise AssertionError("sum rule: lhs > rhs (internal bug)")
        out.append(RuleReport(lhs=lhs, rhs=conv.value, equal=lhs == conv.value,
                              witness=witness, qualification=qual,
                              applicable=qual.holds))
    return out


def sum_rule_check(F1: PolyMap, F2: PolyMap, u: Vec, v: Vec) -> RuleReport:
    """(F1+F2)*(u, v) against inf {F1*(u1, v) + F2*(u2, v) : u1 + u2 = u}.

    The left side is the conjugate of the explicitly built sum graph; the
    right side is the joint multiplier LP; the witness is (u1, u2).
    """
    return sum_rule_check_many(F1, F2, [(u, v)])[0]


def chain_rule_check_many(F: PolyMap, G: PolyMap,
                          points: list[tuple[Vec, Vec]]) -> list[RuleReport]:
    """Chain rule at several dual points with one composition build."""
    if F.p != G.n:
        raise ValueError("chain rule: inner dimensions do not match")
    n, p = F.n, F.p
    C = compose_map(F, G)
    O1, O2 = _chain_product_sets(F, G)
    qual = chain_qualification(F, G)
    out = []
    for u, w in points:
        lhs = C.conjugate(u, w).value
        conv = _inf_convolution(O1, O2, concat(u, zeros(p), w))
        witness = None
        if conv.split is not None:
            witness = (conv.split[0][n:n + p],)
        if not lhs <= conv.value:
            raise AssertionError("chain rule: lhs > rhs (internal bug)")
        out.append(RuleReport(lhs=lhs, rhs=conv.value, equal=lhs == conv.value,
                              witness=witness, qualification=qual,
                              applicable=qual.holds))
    return out


def chain_rule_check(F: PolyMap, G: PolyMap, u: Vec, w: Vec) -> RuleReport:
    """(G o F)*(u, w) against inf_v {F*(u, v) + G*(-v, w)}; witness is v."""
    return chain_rule_check_many(F, G, [(u, w)])[0]


def intersection_rule_check_many(F1: PolyMap, F2: PolyMap,
                                 points: list[tuple[Vec, Vec]]) -> list[RuleReport]:
    if F1.n != F2.n or F1.p != F2.p:
        raise ValueError("intersection rule: dimension mismatch")
    n = F1.n
    I = intersect_map(F1, F2)
    qual = intersection_qualification(F1, F2)
    out = []
    for u, v in points:
        lhs = I.conjugate(u, v).value
        conv = _inf_convolution(F1.graph, F2.graph, concat(u, v))
        witness = None
        if conv.split is not None:
            s1, s2 = conv.split
            witness = ((s1[:n], s1[n:]), (s2[:n], s2[n:]))
        if not lhs <= conv.value:
            raise AssertionError("intersection rule: lhs > rhs (internal bug)")
        out.append(RuleReport(lhs=lhs, rhs=conv.value, equal=lhs == conv.value,
                              witness=witness, qualification=qual,
                              applicable=qual.holds))
    return out


def intersection_rule_map_check(F1: PolyMap, F2: PolyMap, u: Vec, v: Vec) -> RuleReport:
    """(F1 cap F2)*(u, v) against the infimal convolution of the conjugates."""
    return intersection_rule_check_many(F1, F2, [(u, v)])[0]


def qualification_report(kind: str, F1: PolyMap, F2: PolyMap) -> Qualification:
    """Exact qualification flags for a rule kind: sum, chain, or intersection."""
    if kind == "sum":
        return sum_qualification(F1, F2)
    if kind == "chain":
        return chain_qualification(F1, F2)
    if kind == "intersection":
        return intersection_qualification(F1, F2)
    raise ValueError(f"qualification_report: unknown kind {kind!r}")


# ----- coderivative-level rules ---------------------------------------------------

@dataclass(frozen=True)
class CoderivativeRuleReport:
    """Both sides of a coderivative identity as polyhedra in dual space."""

    lhs: Polyhedron
    rhs: Polyhedron
    equal: bool
    lhs_includes_rhs: bool


def coderivative_sum_rule_check(F1: PolyMap, F2: PolyMap, xbar: Vec,
                                ybar1: Vec, ybar2: Vec,
                                ystar: Vec) -> CoderivativeRuleReport:
    """Coderivative of F1+F2 at (xbar, ybar1+ybar2) vs the Minkowski sum of
    the factor coderivatives at the splitting points.

    The inclusion lhs >= rhs holds unconditionally; equality is the sum rule
    and holds here because both mappings are polyhedral and share xbar in
    their domains.
    """
    if not F1.graph.contains(concat(xbar, ybar1)):
        raise ValueError("coderivative sum rule: ybar1 is not in F1(xbar)")
    if not F2.graph.contains(concat(xbar, ybar2)):
        raise ValueError("coderivative sum rule: ybar2 is not in F2(xbar)")
    S = sum_map(F1, F2)
    lhs = S.coderivative(xbar, vadd(ybar1, ybar2), ystar)
    rhs = minkowski_sum(F1.coderivative(xbar, ybar1, ystar),
                        F2.coderivative(xbar, ybar2, ystar))
    inc = lhs.includes(rhs)
    return CoderivativeRuleReport(lhs=lhs, rhs=rhs,
                                  equal=inc and rhs.includes(lhs),
                                  lhs_includes_rhs=inc)


def coderivative_chain_rule_check(F: PolyMap, G: PolyMap, xbar: Vec, ybar: Vec,
                                  zbar: Vec, zstar: Vec) -> CoderivativeRuleReport:
    """Coderivative of G o F at (xbar, zbar) vs the composition of the factor
    coderivatives through the intermediate point ybar.

    The right side is {xs : exists ys in D*G(ybar, zbar)(zs) with
    xs in D*F(xbar, ybar)(ys)}, built from the two normal cones and
    projected onto xs.  The inclusion lhs >= rhs needs no qualification.
    """
    if not F.graph.contains(concat(xbar, ybar)):
        raise ValueError("coderivative chain rule: ybar is not in F(xbar)")
    if not G.graph.contains(concat(ybar, zbar)):
        raise ValueError("coderivative chain rule: zbar is not in G(ybar)")
    n, p = F.n, F.p
    C = compose_map(F, G)
    lhs = C.coderivative(xbar, zbar, zstar)

    NF = F.graph.normal_cone(concat(xbar, ybar))
    NG = G.graph.normal_cone(concat(ybar, zbar))
    rows: list[Vec] = []
    rhs_vals: list[Fraction] = []
    for a in NF.A:  # (xs, -ys) in NF:  alpha . xs - beta . ys <= 0
        rows.append(concat(a[:n], vneg(a[n:])))
        rhs_vals.append(ZERO)
    for a in NG.A:  # (ys, -zs) in NG:  gamma . ys <= delta . zs
        rows.append(concat(zeros(n), a[:p]))
        rhs_vals.append(dot(a[p:], zstar))
    pairs = Polyhedron(tuple(rows), tuple(rhs_vals), n + p)
    rhs = pairs.project(range(n))
    inc = lhs.includes(rhs)
    return CoderivativeRuleReport(lhs=lhs, rhs=rhs,
                                  equal=inc and rhs.includes(lhs),
                                  lhs_includes_rhs=inc)
