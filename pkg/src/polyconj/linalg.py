"""Exact rational vectors and matrices.

Every number in this package is a `fractions.Fraction`: arbitrary precision,
always in canonical form (reduced, positive denominator), with the text form
``"p/q"`` (or ``"p"`` for integers) round-tripping exactly.  Vectors are
tuples of Fractions and matrices are tuples of row tuples, so all values are
hashable, immutable, and safe to share across threads.

Floats are rejected everywhere: a single inexact value would silently turn
theorem checks into approximations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction
Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x) -> Fraction:
    """Coerce an int, Fraction, or ``"p/q"`` string to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def format_rat(q: Fraction) -> str:
    """Render as ``"p/q"`` or ``"p"``; inverse of :func:`rat`."""
    return str(q)


def vec(xs: Iterable) -> Vec:
    return tuple(rat(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dot: dimension mismatch {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), ZERO)


def vadd(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    if len(u) != len(v):
        raise ValueError(f"vadd: dimension mismatch {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec:
    if len(u) != len(v):
        raise ValueError(f"vsub: dimension mismatch {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Sequence[Fraction]) -> Vec:
    return tuple(-a for a in u)


def vscale(q: Fraction, u: Sequence[Fraction]) -> Vec:
    return tuple(q * a for a in u)


def concat(*parts: Sequence[Fraction]) -> Vec:
    out: list[Fraction] = []
    for p in parts:
        out.extend(p)
    return tuple(out)


def matvec(A: Mat, x: Sequence[Fraction]) -> Vec:
    return tuple(dot(row, x) for row in A)


def transpose(A: Mat) -> Mat:
    if not A:
        return ()
    return tuple(tuple(A[i][j] for i in range(len(A))) for j in range(len(A[0])))


def combine_rows(rows: Sequence[Sequence[Fraction]], coeffs: Sequence[Fraction]) -> Vec:
    """Nonnegative-combination workhorse: sum of coeffs[i] * rows[i]."""
    if len(rows) != len(coeffs):
        raise ValueError("combine_rows: one coefficient per row required")
    if not rows:
        return ()
    acc = [ZERO] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c == 0:
            continue
        for j, a in enumerate(row):
            acc[j] += c * a
    return tuple(acc)


def _rref(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Reduced row echelon form of [M | rhs] with first-nonzero pivoting.

    Returns (rows, pivots) where pivots maps pivot row -> pivot column.
    """
    m = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(m)]
    n = len(M[0]) if m else 0
    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(n):
        pivot_row = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        pv = aug[r][col]
        aug[r] = [a / pv for a in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append((r, col))
        r += 1
        if r == m:
            break
    return aug, pivots


def solve_linear_system(M: Mat, rhs: Vec) -> Optional[Vec]:
    """Exact solution of M x = rhs, or None if inconsistent.

    When the system is underdetermined, free variables are set to zero, so
    the output is the unique solution picked by Gaussian elimination with
    first-nonzero pivoting (deterministic).
    """
    if len(M) != len(rhs):
        raise ValueError("solve_linear_system: rows(M) must equal dim(rhs)")
    n = len(M[0]) if M else 0
    aug, pivots = _rref(M, rhs)
    rank = len(pivots)
    for i in range(rank, len(M)):
        if aug[i][n] != 0:
            return None
    x = [ZERO] * n
    for r, col in pivots:
        x[col] = aug[r][n]
    return tuple(x)


def solve_unique(M: Mat, rhs: Vec) -> Optional[Vec]:
    """Solve a square system with invertible matrix; None if singular."""
    n = len(rhs)
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError("solve_unique: square matrix required")
    aug, pivots = _rref(M, rhs)
    if len(pivots) < n:
        return None
    x = [ZERO] * n
    for r, col in pivots:
        x[col] = aug[r][n]
    return tuple(x)
