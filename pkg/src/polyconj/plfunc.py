"""Piecewise-linear convex functions through their epigraphs.

A function is a finite max of affine pieces restricted to a polyhedral
domain (plus infinity outside), so it is proper, closed, and convex, and its
epigraph is a polyhedron in R^(n+1).  The epigraph, viewed as the graph of
the set-valued mapping x -> [f(x), inf), ties function-level objects to the
mapping-level machinery:

* the conjugate of f at xs is the conjugate of that mapping at (xs, -1),
* the subdifferential at a domain point is the coderivative there applied
  to the scalar 1.

Pointwise evaluation by direct max over pieces is kept deliberately
independent of the epigraph-based routes so the two can cross-check each
other.  The sum rule (conjugates by infimal convolution, subdifferentials
by Minkowski sum) and the chain rule along a linear map are verified
constructively, with attaining witnesses from the joint LPs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .linalg import (Mat, Vec, ZERO, concat, dot, matvec, transpose, vadd,
                     vneg, zeros)
from .mapping import PolyMap
from .polyhedron import Polyhedron, lift, minkowski_sum
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_standard
from .support import ExtReal, MINUS_INF, PLUS_INF, _inf_convolution

Piece = tuple[Vec, Fraction]  # (c, d) encodes the affine piece c . x + d

PRUNE_PIECES_ABOVE = 64


@dataclass(frozen=True)
class PLFunction:
    """max of affine pieces on a polyhedral domain, +inf elsewhere."""

    n: int
    pieces: tuple[Piece, ...]
    dom: Polyhedron

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("PLFunction: at least one affine piece required")
        if any(len(c) != self.n for c, _ in self.pieces):
            raise ValueError("PLFunction: piece gradient has wrong dimension")
        if self.dom.dim != self.n:
            raise ValueError("PLFunction: domain has wrong dimension")

    @classmethod
    def max_affine(cls, pieces, dom: Optional[Polyhedron] = None,
                   n: Optional[int] = None) -> "PLFunction":
        ps = tuple((tuple(Fraction(x) for x in c), Fraction(d)) for c, d in pieces)
        if n is None:
            n = len(ps[0][0])
        if dom is None:
            dom = Polyhedron.universe(n)
        return cls(n, ps, dom)

    def value(self, x: Vec) -> ExtReal:
        """f(x) by direct max over the pieces; +inf outside the domain."""
        if len(x) != self.n:
            raise ValueError("value: point has wrong dimension")
        if not self.dom.contains(x):
            return PLUS_INF
        return ExtReal.of(max(dot(c, x) + d for c, d in self.pieces))

    # ----- epigraph ----------------------------------------------------------

    def epigraph(self) -> Polyhedron:
        """{(x, t) : x in dom, c_i.x + d_i <= t for every piece}."""
        rows = []
        rhs = []
        for a, beta in self.dom.rows():
            rows.append(concat(a, (ZERO,)))
            rhs.append(beta)
        for c, d in self.pieces:
            rows.append(concat(c, (Fraction(-1),)))
            rhs.append(-d)
        return Polyhedron(tuple(rows), tuple(rhs), self.n + 1)

    def epi_mapping(self) -> PolyMap:
        """The mapping x -> [f(x), inf), whose graph is the epigraph."""
        return PolyMap(self.n, 1, self.epigraph())

    # ----- conjugate and subdifferential ---------------------------------------

    def conjugate(self, xstar: Vec) -> ExtReal:
        """f*(xs), evaluated as the epigraph mapping's conjugate at (xs, -1)."""
        return self.epi_mapping().conjugate(xstar, (Fraction(-1),)).value

    def subdifferential(self, xbar: Vec) -> Polyhedron:
        """All subgradients at a domain point, in H-form.

        Equals the coderivative of the epigraph mapping at (xbar, f(xbar))
        applied to 1; every member satisfies the Fenchel-Young equality.
        """
        fx = self.value(xbar)
        if not fx.is_finite:
            raise ValueError("subdifferential: point is outside the domain")
        return self.epi_mapping().coderivative(xbar, (fx.q,), (Fraction(1),))

    # ----- algebra -------------------------------------------------------------

    def add(self, other: "PLFunction") -> "PLFunction":
        """Pointwise sum: all pairwise piece sums on the intersected domain."""
        if self.n != other.n:
            raise ValueError("add: dimension mismatch")
        pieces = tuple((vadd(c1, c2), d1 + d2)
                       for c1, d1 in self.pieces for c2, d2 in other.pieces)
        out = PLFunction(self.n, pieces, self.dom.intersection(other.dom))
        if len(pieces) > PRUNE_PIECES_ABOVE:
            out = out._pruned()
        return out

    def _pruned(self) -> "PLFunction":
        """Drop pieces whose epigraph row is implied by the remaining ones."""
        epi = self.epigraph()
        keep = list(self.pieces)
        i = 0
        while len(keep) > 1 and i < len(keep):
            trial = PLFunction(self.n, tuple(keep[:i] + keep[i + 1:]), self.dom)
            if trial.epigraph().includes(epi):
                keep.pop(i)
            else:
                i += 1
        return PLFunction(self.n, tuple(keep), self.dom)

    def compose_linear(self, A: Mat) -> "PLFunction":
        """x -> f(A x): pieces pick up A^T, the domain pulls back along A."""
        p = len(A)
        if p != self.n or any(len(row) == 0 for row in A):
            raise ValueError("compose_linear: A must map into the function's space")
        m = len(A[0])
        At = transpose(A)
        pieces = tuple((matvec(At, c), d) for c, d in self.pieces)
        rows = tuple(matvec(At, a) for a, _ in self.dom.rows())
        dom = Polyhedron(rows, self.dom.b, m)
        return PLFunction(m, pieces, dom)


@dataclass(frozen=True)
class FunctionRuleReport:
    """Conjugate and subdifferential sides of a function-level identity."""

    conjugate_lhs: ExtReal
    conjugate_rhs: ExtReal
    conjugate_equal: bool
    witness: Optional[tuple]
    subdiff_lhs: Polyhedron
    subdiff_rhs: Polyhedron
    subdiff_equal: bool


def sum_rule_function_check(f1: PLFunction, f2: PLFunction, xstar: Vec,
                            xbar: Vec) -> FunctionRuleReport:
    """(f1+f2)* as infimal convolution, and the subdifferential sum rule.

    Requires intersecting domains, with xbar in both.  The conjugate left
    side is computed on the pairwise-sum pieces, the right side by a joint
    LP over both epigraphs' multipliers; when finite the witness is an
    attaining split (xs1, xs2).
    """
    if f1.n != f2.n:
        raise ValueError("sum_rule_function_check: dimension mismatch")
    n = f1.n
    fsum = f1.add(f2)
    if fsum.dom.is_empty():
        raise ValueError("sum_rule_function_check: domains do not intersect")
    if not (f1.dom.contains(xbar) and f2.dom.contains(xbar)):
        raise ValueError("sum_rule_function_check: xbar must lie in both domains")

    lhs = fsum.conjugate(xstar)
    amb = n + 2
    minus_one = Fraction(-1)
    O1 = lift(f1.epigraph(), amb, list(range(n)) + [n])
    O2 = lift(f2.epigraph(), amb, list(range(n)) + [n + 1])
    conv = _inf_convolution(O1, O2, concat(xstar, (minus_one, minus_one)))
    witness = None
    if conv.split is not None:
        x1 = conv.split[0][:n]
        witness = (x1, tuple(a - b for a, b in zip(xstar, x1)))

    sub_lhs = fsum.subdifferential(xbar)
    sub_rhs = minkowski_sum(f1.subdifferential(xbar), f2.subdifferential(xbar))
    return FunctionRuleReport(
        conjugate_lhs=lhs, conjugate_rhs=conv.value,
        conjugate_equal=lhs == conv.value, witness=witness,
        subdiff_lhs=sub_lhs, subdiff_rhs=sub_rhs,
        subdiff_equal=sub_lhs.equal(sub_rhs))


def linear_chain_check(g: PLFunction, A: Mat, xstar: Vec,
                       xbar: Vec) -> FunctionRuleReport:
    """(g o A)* = inf {g*(ys) : A^T ys = xs} and the chain subdifferential rule.

    The right side of the conjugate identity is one LP over the epigraph
    multipliers of g, constrained so their dual vector ys satisfies
    A^T ys = xs; the witness is an attaining ys.  The subdifferential right
    side is the image of the subdifferential of g at A xbar under A^T,
    computed by projection.
    """
    gA = g.compose_linear(A)
    n = gA.n
    if gA.dom.is_empty():
        raise ValueError("linear_chain_check: the image of A misses dom g")
    if not gA.dom.contains(xbar):
        raise ValueError("linear_chain_check: xbar is outside dom (g o A)")
    if len(xstar) != n:
        raise ValueError("linear_chain_check: xstar has wrong dimension")

    lhs = gA.conjugate(xstar)
    epi = g.epigraph()
    At = transpose(A)
    m = epi.nrows
    p = g.n
    # Column for multiplier i: (A^T times the ys-part, the t-part); rhs (xs, -1).
    cols = []
    for j in range(n):
        cols.append(tuple(dot(At[j], epi.A[i][:p]) for i in range(m)))
    cols.append(tuple(epi.A[i][p] for i in range(m)))
    res = solve_standard(epi.b, tuple(cols), concat(xstar, (Fraction(-1),)))
    if res.status == INFEASIBLE:
        rhs: ExtReal = PLUS_INF
        witness = None
    elif res.status == UNBOUNDED:
        rhs = MINUS_INF
        witness = None
    else:
        rhs = ExtReal.of(res.value)
        ystar = tuple(sum((res.z[i] * epi.A[i][j] for i in range(m)), ZERO)
                      for j in range(p))
        witness = (ystar,)

    sub_lhs = gA.subdifferential(xbar)
    sub_g = g.subdifferential(matvec(A, xbar))
    rows: list[Vec] = []
    rhs_vals: list[Fraction] = []
    for j in range(n):  # xs_j = (A^T ys)_j as paired inequalities
        e = [ZERO] * (n + p)
        e[j] = Fraction(1)
        for t in range(p):
            e[n + t] = -At[j][t]
        rows.append(tuple(e))
        rhs_vals.append(ZERO)
        rows.append(tuple(-c for c in e))
        rhs_vals.append(ZERO)
    for a, beta in sub_g.rows():
        rows.append(concat(zeros(n), a))
        rhs_vals.append(beta)
    sub_rhs = Polyhedron(tuple(rows), tuple(rhs_vals), n + p).project(range(n))
    return FunctionRuleReport(
        conjugate_lhs=lhs, conjugate_rhs=rhs, conjugate_equal=lhs == rhs,
        witness=witness, subdiff_lhs=sub_lhs, subdiff_rhs=sub_rhs,
        subdiff_equal=sub_lhs.equal(sub_rhs))
