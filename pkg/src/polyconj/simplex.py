"""Exact two-phase simplex over the rationals.

The public entry point :func:`lp_solve` handles programs of the form

    max / min   c . x    subject to   A x <= b,   x free,

and returns exact optima together with the certificates that downstream
checks rely on:

* optimal: a primal solution and dual multipliers ``lam >= 0`` with
  ``A^T lam = c`` and ``b . lam`` equal to the optimal value (max sense),
* infeasible: a Farkas vector ``f >= 0`` with ``f^T A = 0`` and ``f . b < 0``,
* unbounded: a feasible point plus a ray ``r`` with ``A r <= 0`` and
  ``c . r > 0`` (max sense).

Free variables are split into differences of nonnegative ones and slacks are
added, which reduces everything to the standard form

    min  cost . z   subject to   M z = d,   z >= 0,

solved by :func:`solve_standard`.  Pivoting uses Bland's rule (lowest
eligible index enters; ties in the ratio test go to the lowest basic
variable index), which precludes cycling: the solver terminates on every
input and is fully deterministic.  No floating point is involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .linalg import Mat, Vec, ZERO, dot, vneg

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class StandardResult:
    """Outcome of a standard-form program  min cost.z, M z = d, z >= 0.

    dual semantics by status:
      optimal:    y with M^T y <= cost (componentwise) and d . y = value
      infeasible: y with M^T y <= 0 and d . y > 0 (Farkas-style witness)
    """

    status: str
    z: Optional[Vec] = None
    value: Optional[Fraction] = None
    dual: Optional[Vec] = None
    ray: Optional[Vec] = None


@dataclass(frozen=True)
class LPOutcome:
    """Result of an inequality-form LP, with exact certificates."""

    status: str
    primal: Optional[Vec] = None
    value: Optional[Fraction] = None
    dual: Optional[Vec] = None
    ray: Optional[Vec] = None
    farkas: Optional[Vec] = None


def _pivot(T: list[list[Fraction]], obj: Optional[list[Fraction]],
           basis: list[int], r: int, j: int) -> None:
    piv = T[r][j]
    T[r] = [a / piv for a in T[r]]
    row = T[r]
    for i in range(len(T)):
        if i != r and T[i][j] != 0:
            f = T[i][j]
            T[i] = [a - f * b for a, b in zip(T[i], row)]
    if obj is not None and obj[j] != 0:
        f = obj[j]
        for k in range(len(obj)):
            obj[k] -= f * row[k]
    basis[r] = j


def _reduced_costs(T: list[list[Fraction]], basis: list[int],
                   cost: list[Fraction], ncols: int) -> list[Fraction]:
    obj = list(cost[:ncols]) + [ZERO]
    for r, bj in enumerate(basis):
        cb = cost[bj]
        if cb != 0:
            for k in range(ncols + 1):
                obj[k] -= cb * T[r][k]
    return obj


def _bland_loop(T: list[list[Fraction]], obj: list[Fraction], basis: list[int],
                enter_limit: int) -> Optional[int]:
    """Pivot until optimal (returns None) or unbounded (returns entering col).

    Only columns < enter_limit may enter; Bland's rule throughout.
    """
    while True:
        j_in = next((j for j in range(enter_limit) if obj[j] < 0), None)
        if j_in is None:
            return None
        r_out = None
        best_ratio = None
        best_var = None
        for r in range(len(T)):
            t = T[r][j_in]
            if t > 0:
                ratio = T[r][-1] / t
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[r] < best_var)):
                    best_ratio, best_var, r_out = ratio, basis[r], r
        if r_out is None:
            return j_in
        _pivot(T, obj, basis, r_out, j_in)


def solve_standard(cost: Vec, M: Mat, d: Vec) -> StandardResult:
    """Exact two-phase simplex for  min cost.z  s.t.  M z = d,  z >= 0."""
    nz = len(cost)
    m = len(M)
    if len(d) != m or any(len(row) != nz for row in M):
        raise ValueError("solve_standard: inconsistent dimensions")

    # Sign-normalize rows so the right-hand side is nonnegative; artificial
    # variable i gets column nz + i.
    sigma = [1] * m
    T: list[list[Fraction]] = []
    for i in range(m):
        row, di = list(M[i]), d[i]
        if di < 0:
            row, di, sigma[i] = [-a for a in row], -di, -1
        art = [ZERO] * m
        art[i] = Fraction(1)
        T.append(row + art + [di])
    ncols = nz + m
    cost_full = list(cost) + [ZERO] * m

    # Crash basis: rows whose normalized system already contains a unit
    # column start from it, so phase 1 only works on the leftovers.
    basis = list(range(nz, nz + m))
    used: set[int] = set()
    for i in range(m):
        for j in range(nz):
            if j in used or T[i][j] != 1:
                continue
            if all(T[r][j] == 0 for r in range(m) if r != i):
                basis[i] = j
                used.add(j)
                break
    kept = list(range(m))  # original row index per tableau row

    if any(bj >= nz for bj in basis):
        # Phase 1: minimize the sum of the artificials.
        art_cost = [ZERO] * nz + [Fraction(1)] * m
        obj = _reduced_costs(T, basis, art_cost, ncols)
        j = _bland_loop(T, obj, basis, ncols)
        assert j is None, "phase 1 objective is bounded below by zero"
        val1 = sum((art_cost[basis[r]] * T[r][-1] for r in range(len(T))), ZERO)
        if val1 > 0:
            y = [ZERO] * m
            for k in range(m):
                s = sum((art_cost[basis[r]] * T[r][nz + k] for r in range(len(T))), ZERO)
                y[k] = sigma[k] * s
            return StandardResult(INFEASIBLE, dual=tuple(y))

        # Drive leftover artificials out of the basis; a row with no
        # structural pivot is a redundant equality and is dropped.
        r = 0
        while r < len(T):
            if basis[r] >= nz:
                j_piv = next((j for j in range(nz) if T[r][j] != 0), None)
                if j_piv is None:
                    del T[r], basis[r], kept[r]
                    continue
                _pivot(T, None, basis, r, j_piv)
            r += 1

    # Phase 2 on the true objective; artificial columns may not re-enter.
    obj = _reduced_costs(T, basis, cost_full, ncols)
    j_unb = _bland_loop(T, obj, basis, nz)
    if j_unb is not None:
        ray = [ZERO] * nz
        ray[j_unb] = Fraction(1)
        for r in range(len(T)):
            ray[basis[r]] = -T[r][j_unb]
        z = [ZERO] * nz
        for r in range(len(T)):
            z[basis[r]] = T[r][-1]
        return StandardResult(UNBOUNDED, z=tuple(z), ray=tuple(ray))

    z = [ZERO] * nz
    for r in range(len(T)):
        z[basis[r]] = T[r][-1]
    value = dot(cost, tuple(z))
    y = [ZERO] * m
    for k in kept:
        s = sum((cost_full[basis[r]] * T[r][nz + k] for r in range(len(T))), ZERO)
        y[k] = sigma[k] * s
    return StandardResult(OPTIMAL, z=tuple(z), value=value, dual=tuple(y))


def lp_solve(objective: Vec, A: Mat, b: Vec, sense: str = "max") -> LPOutcome:
    """Solve  max/min objective.x  s.t.  A x <= b  with x free, exactly.

    For sense="max" the dual vector satisfies dual >= 0, A^T dual = objective
    and b . dual = value.  For sense="min" the outcome is obtained by negating
    the objective, so value = -max(-objective) and the dual certifies the
    negated program (A^T dual = -objective, b . dual = -value).
    """
    n = len(objective)
    m = len(A)
    if len(b) != m or any(len(row) != n for row in A):
        raise ValueError("lp_solve: dimension mismatch between objective, A, b")
    if sense == "min":
        res = lp_solve(vneg(objective), A, b, "max")
        value = None if res.value is None else -res.value
        return LPOutcome(res.status, primal=res.primal, value=value,
                         dual=res.dual, ray=res.ray, farkas=res.farkas)
    if sense != "max":
        raise ValueError(f"lp_solve: unknown sense {sense!r}")

    # z = (u, w, s) with x = u - w, slacks s; standard form minimizes -obj.
    cost = tuple(-c for c in objective) + tuple(objective) + (ZERO,) * m
    rows = []
    for i in range(m):
        e = [ZERO] * m
        e[i] = Fraction(1)
        rows.append(tuple(A[i]) + tuple(-a for a in A[i]) + tuple(e))
    res = solve_standard(cost, tuple(rows), b)

    if res.status == INFEASIBLE:
        farkas = tuple(-y for y in res.dual)
        return LPOutcome(INFEASIBLE, farkas=farkas)

    def to_x(z: Vec) -> Vec:
        return tuple(z[j] - z[n + j] for j in range(n))

    if res.status == UNBOUNDED:
        return LPOutcome(UNBOUNDED, primal=to_x(res.z), ray=to_x(res.ray))

    lam = tuple(-y for y in res.dual)
    return LPOutcome(OPTIMAL, primal=to_x(res.z), value=-res.value, dual=lam)
