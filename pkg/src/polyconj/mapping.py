"""Polyhedral convex set-valued mappings.

A mapping F from R^n into subsets of R^p is stored as its graph, a
polyhedron in R^(n+p) with coordinates ordered (x-block, y-block); that
ordering is fixed package-wide.  The conjugate of F at (xs, ys) is the
support function of the graph, so every conjugate evaluation inherits the
LP certificates of :mod:`polyconj.support`.

The coderivative of F at a graph point maps ys to the set of xs with
(xs, -ys) in the normal cone to the graph; it is materialized in H-form by
slicing the normal cone at the fixed -ys block.  Membership can also be
decided through the conjugate, by testing whether the Fenchel-Young
inequality

    <xs, xbar>  <=  <ys, ybar> + F*(xs, -ys)

holds with equality; both routes are computed and cross-checked on every
membership query.  Subgradients of the conjugate are the support faces of
the graph, and the second conjugate of a polyhedral mapping is the
indicator of its (already closed and convex) graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Mat, Vec, ZERO, concat, dot, matvec, transpose, vneg, zeros
from .polyhedron import Polyhedron
from .simplex import INFEASIBLE, OPTIMAL, solve_standard
from .support import ExtReal, MINUS_INF, SupportEval, support_eval


@dataclass(frozen=True)
class PolyMap:
    """Set-valued mapping with polyhedral graph; F(x) = {y : (x,y) in graph}."""

    n: int
    p: int
    graph: Polyhedron

    def __post_init__(self):
        if self.graph.dim != self.n + self.p:
            raise ValueError("PolyMap: graph must live in R^(n+p)")

    @classmethod
    def from_linear(cls, A: Mat) -> "PolyMap":
        """The single-valued mapping x -> {A x}, graph {(x, y) : A x = y}."""
        p = len(A)
        n = len(A[0]) if p else 0
        rows = []
        rhs = []
        for i in range(p):
            e = [ZERO] * p
            e[i] = Fraction(1)
            rows.append(tuple(A[i]) + tuple(-c for c in e))
            rhs.append(ZERO)
            rows.append(tuple(-c for c in A[i]) + tuple(e))
            rhs.append(ZERO)
        return cls(n, p, Polyhedron(tuple(rows), tuple(rhs), n + p))

    def _check_point(self, xbar: Vec, ybar: Vec) -> Vec:
        pt = concat(xbar, ybar)
        if not self.graph.contains(pt):
            raise ValueError("point is not in the graph of the mapping")
        return pt

    def image_at(self, x: Vec) -> Polyhedron:
        """F(x) as a polyhedron in R^p (the graph sliced at fixed x)."""
        if len(x) != self.n:
            raise ValueError("image_at: wrong source dimension")
        rows = tuple(a[self.n:] for a in self.graph.A)
        rhs = tuple(beta - dot(a[:self.n], x)
                    for a, beta in zip(self.graph.A, self.graph.b))
        return Polyhedron(rows, rhs, self.p)

    # ----- conjugate --------------------------------------------------------

    def conjugate(self, xstar: Vec, ystar: Vec) -> SupportEval:
        """F*(xs, ys) = support of the graph at (xs, ys); -inf iff improper."""
        if len(xstar) != self.n or len(ystar) != self.p:
            raise ValueError("conjugate: dual vector dimensions are wrong")
        return support_eval(self.graph, concat(xstar, ystar))

    def domain(self) -> Polyhedron:
        """Projection of the graph onto the source block."""
        if self.graph.is_empty():
            return Polyhedron.empty(self.n)
        return self.graph.project(range(self.n))

    def range(self) -> Polyhedron:
        """Projection of the graph onto the target block."""
        if self.graph.is_empty():
            return Polyhedron.empty(self.p)
        return self.graph.project(range(self.n, self.n + self.p))

    # ----- Fenchel-Young and coderivatives ------------------------------------

    def fenchel_young_gap(self, xbar: Vec, ybar: Vec, ystar: Vec,
                          xstar: Vec) -> ExtReal:
        """<ys, ybar> + F*(xs, -ys) - <xs, xbar>, always >= 0 on the graph."""
        self._check_point(xbar, ybar)
        conj = self.conjugate(xstar, vneg(ystar)).value
        shift = ExtReal.of(dot(ystar, ybar) - dot(xstar, xbar))
        gap = conj + shift if conj.is_finite else conj
        assert ExtReal.of(ZERO) <= gap
        return gap

    def _coderivative_contains_gap(self, xbar: Vec, ybar: Vec, ystar: Vec,
                                   xstar: Vec) -> bool:
        return self.fenchel_young_gap(xbar, ybar, ystar, xstar) == ExtReal.of(ZERO)

    def _coderivative_contains_cone(self, xbar: Vec, ybar: Vec, ystar: Vec,
                                    xstar: Vec) -> bool:
        """(xs, -ys) in the nonnegative span of the active graph rows?"""
        pt = self._check_point(xbar, ybar)
        act = sorted(self.graph.active_rows(pt))
        target = concat(xstar, vneg(ystar))
        cols = tuple(tuple(self.graph.A[i][j] for i in act)
                     for j in range(self.graph.dim))
        res = solve_standard((ZERO,) * len(act), cols, target)
        return res.status != INFEASIBLE

    def coderivative_contains(self, xbar: Vec, ybar: Vec, ystar: Vec,
                              xstar: Vec) -> bool:
        """Is xstar in the coderivative of F at (xbar, ybar) applied to ystar?

        Decided through the Fenchel-Young equality and, independently,
        through the active-row normal cone; the two answers must agree.
        """
        via_gap = self._coderivative_contains_gap(xbar, ybar, ystar, xstar)
        via_cone = self._coderivative_contains_cone(xbar, ybar, ystar, xstar)
        if via_gap != via_cone:
            raise AssertionError("coderivative membership routes disagree (internal bug)")
        return via_gap

    def coderivative(self, xbar: Vec, ybar: Vec, ystar: Vec) -> Polyhedron:
        """H-representation of the coderivative value at ystar.

        The normal cone to the graph at (xbar, ybar) is a cone in the dual
        pair (xs, us); fixing us = -ys turns each homogeneous row into an
        inequality on xs alone.
        """
        pt = self._check_point(xbar, ybar)
        if len(ystar) != self.p:
            raise ValueError("coderivative: wrong target dimension")
        cone = self.graph.normal_cone(pt)
        rows = tuple(a[:self.n] for a in cone.A)
        rhs = tuple(dot(a[self.n:], ystar) for a in cone.A)
        return Polyhedron(rows, rhs, self.n)

    # ----- conjugate subgradients and the second conjugate --------------------

    def conjugate_subdifferential(self, xstar: Vec, ystar: Vec) -> Polyhedron:
        """The subdifferential of F* at (xs, ys): the argmax face of the graph.

        Requires a finite conjugate value.  A graph point lies in this face
        exactly when xstar belongs to the coderivative at that point applied
        to -ystar.
        """
        if len(xstar) != self.n or len(ystar) != self.p:
            raise ValueError("conjugate_subdifferential: wrong dual dimensions")
        return self.graph.face_argmax(concat(xstar, ystar))

    def biconjugate_contains(self, x: Vec, y: Vec) -> bool:
        """Whether F**(x, y) = 0, i.e. (x, y) is in the closed convex hull of
        the graph; for a polyhedral graph that hull is the graph itself."""
        return self.graph.contains(concat(x, y))


def adjoint_image(A: Mat, ystar: Vec) -> Vec:
    """A^T ystar, the adjoint of x -> A x applied to a dual vector."""
    return matvec(transpose(A), ystar)


def singleton(v: Vec) -> Polyhedron:
    """The one-point polyhedron {v}."""
    n = len(v)
    rows = []
    rhs = []
    for j in range(n):
        e = [ZERO] * n
        e[j] = Fraction(1)
        rows.append(tuple(e))
        rhs.append(v[j])
        rows.append(tuple(-c for c in e))
        rhs.append(-v[j])
    return Polyhedron(tuple(rows), tuple(rhs), n)
