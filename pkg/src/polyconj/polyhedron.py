"""Convex polyhedra in inequality form, with exact predicates.

A :class:`Polyhedron` is the solution set of ``A x <= b`` over the
rationals; zero rows mean all of space and an inconsistent system is the
(first-class) empty polyhedron.  Everything downstream lives here: graphs of
set-valued mappings, epigraphs, normal cones, coderivatives, Minkowski sums.

Projection is Fourier-Motzkin elimination, one coordinate at a time, with
duplicate-row removal after every step and LP-based redundancy pruning once
the row count passes ``PRUNE_THRESHOLD``.  Emptiness, inclusion, support
faces, implicit equalities and relative-interior points are all decided by
exact linear programs; vertex enumeration is deliberately the naive
combinatorial search over row subsets so it can serve as a trusted oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import (Mat, Vec, ZERO, concat, dot, mat, solve_unique, unit,
                     vadd, vec, vneg, zeros)
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, lp_solve, solve_standard

PRUNE_THRESHOLD = 64

Row = tuple[Vec, Fraction]  # (a, beta) encodes  a . x <= beta


def _sigma_dual(A: Mat, b: Vec, dim: int, v: Vec):
    """Support value of {A x <= b} in direction v, via the dual program.

    Solves  min b . lam  s.t.  A^T lam = v,  lam >= 0,  whose tableau has
    only `dim` rows however many constraints there are; ideal for the many
    value-only support queries behind inclusion and redundancy tests.

    Returns ("finite", value), ("pinf", None) when the supremum is +inf, or
    ("empty", None) when the constraint set is infeasible.
    """
    m = len(A)
    M = tuple(tuple(A[i][j] for i in range(m)) for j in range(dim))
    res = solve_standard(b, M, v)
    if res.status == OPTIMAL:
        return ("finite", res.value)
    if res.status == INFEASIBLE:
        # v is outside the cone of the rows: the primal sup is +inf if the
        # set is nonempty (and -inf otherwise, which callers rule out).
        return ("pinf", None)
    return ("empty", None)


def _canon_row(a: Sequence[Fraction], beta: Fraction) -> Optional[Row]:
    """Positive-scale a row to primitive integer coefficients.

    Keeping coefficients integral and coprime stops Fourier-Motzkin products
    from snowballing into huge rationals.  Rows satisfied by every point are
    dropped (None); the contradictory row 0 <= -1 is the canonical witness
    kept for infeasible systems.
    """
    if all(x == 0 for x in a):
        if beta >= 0:
            return None
        return (zeros(len(a)), Fraction(-1))
    scale = _lcm_many([x.denominator for x in a] + [beta.denominator])
    ints = [int(x * scale) for x in a]
    bi = int(beta * scale)
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    g = math.gcd(g, abs(bi))
    return (tuple(Fraction(x // g) for x in ints), Fraction(bi // g))


def _lcm_many(vals: Sequence[int]) -> int:
    out = 1
    for v in vals:
        out = out * v // math.gcd(out, v)
    return out


def _dedup(rows: list[Row]) -> list[Row]:
    """Remove duplicates; among rows with one normal vector keep the tightest."""
    best: dict[Vec, Fraction] = {}
    order: list[Vec] = []
    for a, beta in rows:
        if a not in best:
            best[a] = beta
            order.append(a)
        elif beta < best[a]:
            best[a] = beta
    return [(a, best[a]) for a in order]


@dataclass(frozen=True)
class Polyhedron:
    """H-representation {x in R^dim : A x <= b}."""

    A: Mat
    b: Vec
    dim: int

    def __post_init__(self):
        if len(self.A) != len(self.b):
            raise ValueError("Polyhedron: rows(A) must equal dim(b)")
        if any(len(row) != self.dim for row in self.A):
            raise ValueError("Polyhedron: every row must have length dim")

    @classmethod
    def from_rows(cls, rows: Sequence, b: Sequence, dim: int) -> "Polyhedron":
        return cls(mat(rows), vec(b), dim)

    @classmethod
    def universe(cls, dim: int) -> "Polyhedron":
        return cls((), (), dim)

    @classmethod
    def empty(cls, dim: int) -> "Polyhedron":
        return cls((zeros(dim),), (Fraction(-1),), dim)

    @property
    def nrows(self) -> int:
        return len(self.A)

    def rows(self) -> list[Row]:
        return list(zip(self.A, self.b))

    # ----- basic predicates -------------------------------------------------

    def contains(self, x: Vec) -> bool:
        if len(x) != self.dim:
            raise ValueError("contains: point has wrong dimension")
        return all(dot(a, x) <= beta for a, beta in zip(self.A, self.b))

    def is_empty(self) -> bool:
        return self.emptiness_certificate() is not None

    def emptiness_certificate(self) -> Optional[Vec]:
        """None if nonempty, else a Farkas vector f >= 0, f^T A = 0, f.b < 0.

        The answer is cached on the instance; the value is immutable so this
        is invisible apart from speed.
        """
        if "_empty_cert" not in self.__dict__:
            out = lp_solve(zeros(self.dim), self.A, self.b)
            cert = out.farkas if out.status == INFEASIBLE else None
            object.__setattr__(self, "_empty_cert", cert)
        return self.__dict__["_empty_cert"]

    def active_rows(self, x: Vec) -> frozenset[int]:
        """Indices of constraints tight at x (x must belong to the set)."""
        if not self.contains(x):
            raise ValueError("active_rows: point is not in the polyhedron")
        return frozenset(i for i, (a, beta) in enumerate(self.rows())
                         if dot(a, x) == beta)

    # ----- support machinery ------------------------------------------------

    def support_lp(self, v: Vec):
        """Maximize v . x over the set; raw LP outcome with certificates."""
        if len(v) != self.dim:
            raise ValueError("support_lp: direction has wrong dimension")
        return lp_solve(v, self.A, self.b)

    def face_argmax(self, v: Vec) -> "Polyhedron":
        """The face of maximizers of v, {x in P : v . x = sup}, in H-form."""
        status, s = _sigma_dual(self.A, self.b, self.dim, vec(v))
        if status != "finite":
            raise ValueError("face_argmax: support value is not finite")
        rows = list(self.A) + [vec(v), vneg(v)]
        rhs = list(self.b) + [s, -s]
        return Polyhedron(tuple(rows), tuple(rhs), self.dim)

    # ----- inclusion and equality -------------------------------------------

    def includes(self, other: "Polyhedron") -> bool:
        """True iff other is a subset of self (decided by one LP per row)."""
        if self.dim != other.dim:
            raise ValueError("includes: ambient dimensions differ")
        if other.is_empty():
            return True
        for a, beta in self.rows():
            status, value = _sigma_dual(other.A, other.b, other.dim, a)
            if status == "pinf" or (status == "finite" and value > beta):
                return False
            assert status != "empty"
        return True

    def equal(self, other: "Polyhedron") -> bool:
        """Set equality, insensitive to representation."""
        return self.includes(other) and other.includes(self)

    def intersection(self, other: "Polyhedron") -> "Polyhedron":
        if self.dim != other.dim:
            raise ValueError("intersection: ambient dimensions differ")
        return Polyhedron(self.A + other.A, self.b + other.b, self.dim)

    # ----- projection (Fourier-Motzkin) --------------------------------------

    def project(self, keep: Sequence[int]) -> "Polyhedron":
        """Exact image under coordinate projection, columns ordered by keep.

        keep is a nonempty, duplicate-free list of 0-based coordinate
        indices.
        """
        keep = list(keep)
        if not keep:
            raise ValueError("project: keep must be nonempty")
        if len(set(keep)) != len(keep):
            raise ValueError("project: duplicate indices in keep")
        if any(k < 0 or k >= self.dim for k in keep):
            raise ValueError("project: index out of range")
        base = _dedup([r for r in (_canon_row(a, beta) for a, beta in self.rows())
                       if r is not None])
        # Each row carries the set of base rows it descends from; by
        # Imbert's acceleration theorem a derived row whose ancestry exceeds
        # 1 + (variables eliminated since the cascade started) is implied by
        # the others, so it is dropped without changing the projection.
        rows: list[_HRow] = [(a, beta, frozenset([i]))
                             for i, (a, beta) in enumerate(base)]
        cols = list(range(self.dim))  # original coordinate per current column
        drop = set(range(self.dim)) - set(keep)
        cascade_depth = 0
        while drop:
            # Greedy order: eliminate the coordinate with the fewest
            # positive-negative row pairings first (classic FM heuristic,
            # deterministic via the sort).
            best = None
            for orig in sorted(drop):
                k = cols.index(orig)
                npos = sum(1 for a, _, _ in rows if a[k] > 0)
                nneg = sum(1 for a, _, _ in rows if a[k] < 0)
                score = npos * nneg
                if best is None or score < best[0]:
                    best = (score, orig, k)
            _, orig, k = best
            cascade_depth += 1
            rows = _eliminate(rows, k, max_hist=1 + cascade_depth)
            cols.pop(k)
            drop.remove(orig)
            if len(rows) > PRUNE_THRESHOLD:
                # LP pruning yields a fresh reduced system; later steps
                # treat it as a new cascade base.
                pruned = _prune(rows, len(cols))
                rows = [(a, beta, frozenset([i])) for i, (a, beta) in enumerate(pruned)]
                cascade_depth = 0
        # Reorder columns so position j of the result is original coordinate keep[j].
        pos = {orig: i for i, orig in enumerate(cols)}
        A = tuple(tuple(a[pos[k]] for k in keep) for a, _, _ in rows)
        b = tuple(beta for _, beta, _ in rows)
        return Polyhedron(A, b, len(keep))

    # ----- normal cones -----------------------------------------------------

    def normal_cone(self, x: Vec) -> "Cone":
        """Normal cone at x in H-form: the nonnegative span of active rows.

        Obtained by eliminating the multipliers from
        {(g, lam) : g = sum lam_i a_i, lam >= 0} over the active rows, so the
        result is a polyhedral cone in the dual variable.
        """
        act = sorted(self.active_rows(x))
        n = self.dim
        k = len(act)
        rows: list[Vec] = []
        rhs: list[Fraction] = []
        for j in range(n):
            coeff = [ZERO] * (n + k)
            coeff[j] = Fraction(1)
            for t, i in enumerate(act):
                coeff[n + t] = -self.A[i][j]
            rows.append(tuple(coeff))
            rhs.append(ZERO)
            rows.append(tuple(-c for c in coeff))
            rhs.append(ZERO)
        for t in range(k):
            coeff = [ZERO] * (n + k)
            coeff[n + t] = Fraction(-1)
            rows.append(tuple(coeff))
            rhs.append(ZERO)
        lifted = Polyhedron(tuple(rows), tuple(rhs), n + k)
        proj = lifted.project(range(n)) if k else lifted
        assert all(beta == 0 for beta in proj.b), "cone projection must stay homogeneous"
        return Cone(proj.A, proj.b, proj.dim)

    # ----- interior structure -----------------------------------------------

    def implicit_equalities(self) -> frozenset[int]:
        """Rows that hold with equality on the entire (nonempty) set."""
        if self.is_empty():
            raise ValueError("implicit_equalities: polyhedron is empty")
        implicit = []
        for i, (a, beta) in enumerate(self.rows()):
            status, value = _sigma_dual(self.A, self.b, self.dim, vneg(a))
            if status == "finite" and beta + value == 0:
                implicit.append(i)
        return frozenset(implicit)

    def relative_interior_point(self) -> Optional[Vec]:
        """A point with every non-implicit constraint strictly slack.

        None iff the set is empty.  Found by maximizing a common slack t
        (capped at 1) over {x : a_i.x + t <= b_i off the implicit rows,
        a_i.x = b_i on them}.
        """
        if self.is_empty():
            return None
        implicit = self.implicit_equalities()
        rows: list[Vec] = []
        rhs: list[Fraction] = []
        one = Fraction(1)
        for i, (a, beta) in enumerate(self.rows()):
            if i in implicit:
                rows.append(concat(a, (ZERO,)))
                rhs.append(beta)
                rows.append(concat(vneg(a), (ZERO,)))
                rhs.append(-beta)
            else:
                rows.append(concat(a, (one,)))
                rhs.append(beta)
        rows.append(concat(zeros(self.dim), (one,)))
        rhs.append(one)
        out = lp_solve(unit(self.dim + 1, self.dim), tuple(rows), tuple(rhs))
        assert out.status == OPTIMAL and out.value > 0
        return out.primal[:self.dim]

    # ----- vertices (oracle support) -----------------------------------------

    def is_bounded(self) -> bool:
        """Finite support value in every +-coordinate direction (or empty)."""
        if self.is_empty():
            return True
        for j in range(self.dim):
            for sign in (1, -1):
                d = tuple(Fraction(sign) if t == j else ZERO for t in range(self.dim))
                if _sigma_dual(self.A, self.b, self.dim, d)[0] != "finite":
                    return False
        return True

    def vertices(self) -> tuple[Vec, ...]:
        """All vertices of a bounded polyhedron, each exactly once.

        Every dim-row subsystem with invertible matrix is solved and feasible
        solutions are kept; intentionally brute force.  Raises on unbounded
        input.
        """
        if self.is_empty():
            return ()
        if not self.is_bounded():
            raise ValueError("unbounded polyhedron")
        seen: dict[Vec, None] = {}
        for subset in itertools.combinations(range(self.nrows), self.dim):
            Msub = tuple(self.A[i] for i in subset)
            rsub = tuple(self.b[i] for i in subset)
            x = solve_unique(Msub, rsub)
            if x is not None and self.contains(x):
                seen.setdefault(x)
        return tuple(sorted(seen))


class Cone(Polyhedron):
    """A polyhedral cone: an H-representation with zero right-hand side."""

    def __post_init__(self):
        super().__post_init__()
        if any(beta != 0 for beta in self.b):
            raise ValueError("Cone: right-hand side must be zero")


_HRow = tuple[Vec, Fraction, frozenset]


def _eliminate(rows: list[_HRow], k: int, max_hist: int) -> list[_HRow]:
    """One Fourier-Motzkin step: eliminate coordinate k, dropping its column.

    Derived rows keep the union of their parents' ancestries; unions larger
    than max_hist are redundant (Imbert) and discarded on the spot.
    """
    zero: list[_HRow] = []
    pos: list = []
    neg: list = []
    for a, beta, hist in rows:
        c = a[k]
        shrunk = a[:k] + a[k + 1:]
        if c == 0:
            zero.append((shrunk, beta, hist))
        elif c > 0:
            pos.append((shrunk, beta, c, hist))
        else:
            neg.append((shrunk, beta, c, hist))
    out = list(zero)
    for ap, bp, cp, hp in pos:
        for an, bn, cn, hn in neg:
            hist = hp | hn
            if len(hist) > max_hist:
                continue
            # cp * (neg row) + (-cn) * (pos row): coefficient of x_k cancels.
            a_new = tuple(cp * x - cn * y for x, y in zip(an, ap))
            b_new = cp * bn - cn * bp
            canon = _canon_row(a_new, b_new)
            if canon is not None:
                out.append((canon[0], canon[1], hist))
    return _dedup_hist(out)


def _dedup_hist(rows: list[_HRow]) -> list[_HRow]:
    """Like _dedup but keeps the smallest ancestry for each surviving row."""
    best: dict[Vec, tuple[Fraction, frozenset]] = {}
    order: list[Vec] = []
    for a, beta, hist in rows:
        if a not in best:
            best[a] = (beta, hist)
            order.append(a)
        else:
            b0, h0 = best[a]
            if beta < b0 or (beta == b0 and len(hist) < len(h0)):
                best[a] = (beta, hist)
    return [(a, best[a][0], best[a][1]) for a in order]


def _prune(rows: list[_HRow], dim: int) -> list[Row]:
    """Insertion-style redundancy pruning.

    Candidates are tested, facet-likely rows first (smaller ancestry),
    against the rows kept so far; a support value at or below beta over any
    subset of the final system already proves redundancy, so every drop is
    exact even though no row is ever retested.  Each test is one dual-form
    LP whose tableau height is dim, not the row count.
    """
    order = sorted(range(len(rows)), key=lambda i: (len(rows[i][2]), i))
    kept: list[Row] = []
    for i in order:
        a, beta, _ = rows[i]
        if kept:
            status, value = _sigma_dual(tuple(r[0] for r in kept),
                                        tuple(r[1] for r in kept), dim, vec(a))
            if status == "empty":
                # The kept rows are already inconsistent: the set is empty.
                return [(zeros(dim), Fraction(-1))]
            if status == "finite" and value <= beta:
                continue
        kept.append((a, beta))
    return kept


def lift(P: Polyhedron, ambient: int, coords: Sequence[int]) -> Polyhedron:
    """Embed P's constraints into a larger space.

    Row coefficients of P land on the listed coordinates (in order); all
    other coordinates are unconstrained.
    """
    coords = list(coords)
    if len(coords) != P.dim:
        raise ValueError("lift: need one target coordinate per dimension of P")
    rows = []
    for a, beta in P.rows():
        coeff = [ZERO] * ambient
        for c, idx in zip(a, coords):
            coeff[idx] = c
        rows.append(tuple(coeff))
    return Polyhedron(tuple(rows), P.b, ambient)


def minkowski_sum(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    """Exact Minkowski sum {p + q}, computed by projection.

    Encodes {(s, x) : x in P, s - x in Q} and eliminates x.
    """
    if P.dim != Q.dim:
        raise ValueError("minkowski_sum: ambient dimensions differ")
    n = P.dim
    rows: list[Vec] = []
    rhs: list[Fraction] = []
    for a, beta in P.rows():
        rows.append(concat(zeros(n), a))
        rhs.append(beta)
    for a, beta in Q.rows():
        rows.append(concat(a, vneg(a)))
        rhs.append(beta)
    lifted = Polyhedron(tuple(rows), tuple(rhs), 2 * n)
    return lifted.project(range(n))


def ri_meets(P: Polyhedron, Q: Polyhedron) -> bool:
    """Exact test for ri(P) and ri(Q) sharing a point.

    Both relative interiors are described by implicit-equality splits, and a
    common strictly-slack point is sought by one LP maximizing a shared slack.
    """
    if P.dim != Q.dim:
        raise ValueError("ri_meets: ambient dimensions differ")
    if P.is_empty() or Q.is_empty():
        return False
    one = Fraction(1)
    rows: list[Vec] = []
    rhs: list[Fraction] = []
    for poly in (P, Q):
        implicit = poly.implicit_equalities()
        for i, (a, beta) in enumerate(poly.rows()):
            if i in implicit:
                rows.append(concat(a, (ZERO,)))
                rhs.append(beta)
                rows.append(concat(vneg(a), (ZERO,)))
                rhs.append(-beta)
            else:
                rows.append(concat(a, (one,)))
                rhs.append(beta)
    rows.append(concat(zeros(P.dim), (one,)))
    rhs.append(one)
    out = lp_solve(unit(P.dim + 1, P.dim), tuple(rows), tuple(rhs))
    return out.status == OPTIMAL and out.value > 0
