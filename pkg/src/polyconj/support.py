"""Support functions of polyhedra, with duality certificates.

The support value sigma_P(v) = sup {v . x : x in P} is computed by one exact
LP.  A finite value comes back with two independent witnesses: a maximizer
in P and nonnegative row multipliers lam with sum lam_i a_i = v and
sum lam_i b_i equal to the value (the minimizers of the dual program).  An
infinite value carries an improving ray; the supremum over the empty set is
minus infinity by convention, and that convention is propagated everywhere.

The infimal convolution (sigma_P1 [] sigma_P2)(v) is evaluated as a single
joint LP over both sets' multipliers, which yields the attaining split
v = v1 + v2 directly.  :func:`intersection_rule_check` compares it against
sigma of the intersection and reports which qualification conditions hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .linalg import Vec, ZERO, combine_rows, dot, vsub
from .polyhedron import Polyhedron, ri_meets
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_standard


@dataclass(frozen=True)
class ExtReal:
    """An exact extended real: a rational, +infinity, or -infinity."""

    kind: str  # "finite" | "+inf" | "-inf"
    q: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind == "finite":
            if not isinstance(self.q, Fraction):
                raise ValueError("finite ExtReal needs a Fraction value")
        elif self.kind in ("+inf", "-inf"):
            if self.q is not None:
                raise ValueError("infinite ExtReal carries no value")
        else:
            raise ValueError(f"bad ExtReal kind {self.kind!r}")

    @classmethod
    def of(cls, q) -> "ExtReal":
        return cls("finite", Fraction(q))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def _key(self):
        if self.kind == "-inf":
            return (0, ZERO)
        if self.kind == "finite":
            return (1, self.q)
        return (2, ZERO)

    def __lt__(self, other: "ExtReal") -> bool:
        a, b = self._key(), other._key()
        if a[0] == 1 and b[0] == 1:
            return a[1] < b[1]
        return a[0] < b[0]

    def __le__(self, other: "ExtReal") -> bool:
        return self == other or self < other

    def __add__(self, other: "ExtReal") -> "ExtReal":
        kinds = {self.kind, other.kind}
        if kinds == {"+inf", "-inf"}:
            raise ValueError("ExtReal: +inf + -inf is undefined")
        if "+inf" in kinds:
            return PLUS_INF
        if "-inf" in kinds:
            return MINUS_INF
        return ExtReal.of(self.q + other.q)

    def __neg__(self) -> "ExtReal":
        if self.kind == "+inf":
            return MINUS_INF
        if self.kind == "-inf":
            return PLUS_INF
        return ExtReal.of(-self.q)

    def scale(self, t: Fraction) -> "ExtReal":
        """Positive rescaling (t > 0), preserving infinities."""
        if t <= 0:
            raise ValueError("scale expects t > 0")
        return self if not self.is_finite else ExtReal.of(t * self.q)

    def text(self) -> str:
        if self.kind == "finite":
            return str(self.q)
        return self.kind

    @classmethod
    def parse(cls, s: str) -> "ExtReal":
        if s == "+inf":
            return PLUS_INF
        if s == "-inf":
            return MINUS_INF
        return cls.of(Fraction(s))

    def __repr__(self):
        return f"ExtReal({self.text()})"


PLUS_INF = ExtReal("+inf")
MINUS_INF = ExtReal("-inf")


@dataclass(frozen=True)
class SupportEval:
    """A support value plus the LP certificate that proves it.

    finite: multipliers lam >= 0 (one per row) with sum lam_i a_i = v and
            sum lam_i b_i = value, and a maximizer attaining the value;
    +inf:   an unbounded_ray r with A r <= 0 and v . r > 0;
    -inf:   the set is empty (no certificate fields).
    """

    value: ExtReal
    multipliers: Optional[Vec] = None
    maximizer: Optional[Vec] = None
    unbounded_ray: Optional[Vec] = None


@dataclass(frozen=True)
class Qualification:
    """Which qualification conditions hold for a pairwise rule.

    ri_condition is the relative-interior test (both relative interiors
    meet); polyhedral_condition is plain nonempty intersection, which is the
    operative condition in this all-polyhedral setting.  Mixed conditions
    collapse to one of these two here.
    """

    ri_condition: bool
    polyhedral_condition: bool

    @property
    def holds(self) -> bool:
        return self.polyhedral_condition


@dataclass(frozen=True)
class RuleReport:
    """Two sides of a calculus identity, with witness and applicability.

    witness, when present, is the rule-specific attaining decomposition;
    re-evaluating the right-hand side at it reproduces rhs exactly.
    applicable mirrors qualification.holds; when it is False the report
    records how the identity fails rather than raising.
    """

    lhs: ExtReal
    rhs: ExtReal
    equal: bool
    witness: Optional[tuple]
    qualification: Qualification
    applicable: bool


def support_eval(P: Polyhedron, v: Vec) -> SupportEval:
    """sigma_P(v) with certificates, by one exact LP.

    The LP solved is the dual program min {b . lam : lam >= 0, A^T lam = v},
    whose tableau height is the ambient dimension rather than the row count.
    Its solution is the multiplier certificate; the engine's own dual vector
    is a maximizer of v over P; and when v escapes the row cone, the Farkas
    vector for the multiplier system is exactly an improving ray of P.
    """
    if len(v) != P.dim:
        raise ValueError("support_eval: direction has wrong dimension")
    m = P.nrows
    M = tuple(tuple(P.A[i][j] for i in range(m)) for j in range(P.dim))
    res = solve_standard(P.b, M, v)
    if res.status == OPTIMAL:
        return SupportEval(ExtReal.of(res.value), multipliers=res.z,
                           maximizer=res.dual)
    if res.status == UNBOUNDED:
        # The multiplier LP drops to -inf only via a Farkas combination of
        # the rows, i.e. the set is empty.
        return SupportEval(MINUS_INF)
    if P.is_empty():
        return SupportEval(MINUS_INF)
    return SupportEval(PLUS_INF, unbounded_ray=res.dual)


@dataclass(frozen=True)
class _InfConv:
    value: ExtReal
    lam: Optional[Vec] = None   # multipliers on P1's rows
    mu: Optional[Vec] = None    # multipliers on P2's rows
    split: Optional[tuple[Vec, Vec]] = None


def _inf_convolution(P1: Polyhedron, P2: Polyhedron, v: Vec) -> _InfConv:
    """min lam.b1 + mu.b2  s.t.  lam,mu >= 0,  sum lam a1 + sum mu a2 = v.

    Infeasible means +inf (v escapes both multiplier cones); unbounded below
    means -inf, which is exactly what happens when the intersection is empty
    but v stays inside the combined cone.
    """
    if P1.dim != P2.dim or len(v) != P1.dim:
        raise ValueError("inf convolution: dimension mismatch")
    n = P1.dim
    m1, m2 = P1.nrows, P2.nrows
    cols = m1 + m2
    M = tuple(
        tuple(P1.A[i][j] for i in range(m1)) + tuple(P2.A[i][j] for i in range(m2))
        for j in range(n))
    cost = P1.b + P2.b
    res = solve_standard(cost, M, v)
    if res.status == INFEASIBLE:
        return _InfConv(PLUS_INF)
    if res.status == UNBOUNDED:
        return _InfConv(MINUS_INF)
    lam = res.z[:m1]
    mu = res.z[m1:]
    v1 = combine_rows(P1.A, lam) if m1 else (ZERO,) * n
    v2 = vsub(v, v1)
    return _InfConv(ExtReal.of(res.value), lam=lam, mu=mu, split=(v1, v2))


def inf_convolution_support(P1: Polyhedron, P2: Polyhedron,
                            v: Vec) -> tuple[ExtReal, Optional[tuple[Vec, Vec]]]:
    """(sigma_P1 [] sigma_P2)(v) and, when finite, an attaining split."""
    res = _inf_convolution(P1, P2, v)
    return res.value, res.split


def intersection_qualification(P1: Polyhedron, P2: Polyhedron) -> Qualification:
    inter = P1.intersection(P2)
    return Qualification(ri_condition=ri_meets(P1, P2),
                         polyhedral_condition=not inter.is_empty())


def intersection_rule_check(P1: Polyhedron, P2: Polyhedron, v: Vec) -> RuleReport:
    """Compare sigma of the intersection with the infimal convolution at v.

    The one-sided inequality lhs <= rhs holds unconditionally and is
    asserted; equality with an attaining split is expected exactly when the
    intersection is nonempty.
    """
    lhs = support_eval(P1.intersection(P2), v).value
    rhs, split = inf_convolution_support(P1, P2, v)
    if not lhs <= rhs:
        raise AssertionError("support intersection rule: lhs > rhs (internal bug)")
    qual = intersection_qualification(P1, P2)
    return RuleReport(lhs=lhs, rhs=rhs, equal=lhs == rhs, witness=split,
                      qualification=qual, applicable=qual.holds)
