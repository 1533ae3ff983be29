"""Independent brute-force oracles and reproducible random instances.

The vertex oracle recomputes support values of bounded polyhedra by
enumerating vertices, a code path that shares nothing with the simplex
solver, so agreement between the two is strong evidence for both.

Random instances are generated from an explicitly specified xorshift64*
generator (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D), not from the
platform RNG, so identical seeds give bit-identical suites on any machine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .linalg import Vec, dot, vadd, vscale, vec
from .mapping import PolyMap
from .polyhedron import Polyhedron
from .support import ExtReal, MINUS_INF, support_eval

_MASK64 = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_SEED_FILL = 0x9E3779B97F4A7C15  # used when a zero seed would stall the shift register


class Xorshift64Star:
    """xorshift64* PRNG: tiny, fast, fully specified, good enough for fuzzing."""

    def __init__(self, seed: int):
        self.state = (seed & _MASK64) or _SEED_FILL

    def next_u64(self) -> int:
        x = self.state
        x ^= (x >> 12)
        x ^= (x << 25) & _MASK64
        x ^= (x >> 27)
        self.state = x
        return (x * _MULT) & _MASK64

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi] (modulo reduction; bias is irrelevant here)."""
        if hi < lo:
            raise ValueError("randint: empty range")
        return lo + self.next_u64() % (hi - lo + 1)


@dataclass(frozen=True)
class Profile:
    """Size limits for generated instances."""

    max_dim: int = 3
    max_rows: int = 8
    coeff_bound: int = 4


@dataclass(frozen=True)
class InstanceSeed:
    """Seed plus profile; the pair pins the generated instance bit for bit."""

    seed: int
    profile: Profile = field(default_factory=Profile)


class RetryExhausted(RuntimeError):
    """Raised when resampling cannot produce a feasible instance."""

    def __init__(self, what: str, seed: int):
        super().__init__(f"could not generate {what} after bounded retries (seed {seed})")
        self.seed = seed


def random_vec(rng: Xorshift64Star, dim: int, bound: int) -> Vec:
    return vec([rng.randint(-bound, bound) for _ in range(dim)])


def random_polyhedron(rng: Xorshift64Star, dim: int, max_rows: int, bound: int,
                      nonempty: bool = True, retries: int = 64,
                      seed_hint: int = 0) -> Polyhedron:
    """Random integer-coefficient H-form polyhedron, resampled until feasible."""
    for _ in range(retries):
        nrows = rng.randint(1, max_rows)
        rows = []
        rhs = []
        for _ in range(nrows):
            a = random_vec(rng, dim, bound)
            rows.append(a)
            rhs.append(Fraction(rng.randint(-bound, bound)))
        P = Polyhedron(tuple(rows), tuple(rhs), dim)
        if not nonempty or not P.is_empty():
            return P
    raise RetryExhausted("a nonempty polyhedron", seed_hint)


def random_bounded_polyhedron(rng: Xorshift64Star, dim: int, max_rows: int,
                              bound: int, retries: int = 64,
                              seed_hint: int = 0) -> Polyhedron:
    """Nonempty polyhedron made bounded by an explicit surrounding box."""
    for _ in range(retries):
        extra = rng.randint(0, max_rows)
        rows = []
        rhs = []
        B = Fraction(rng.randint(1, bound))
        for j in range(dim):
            e = [Fraction(0)] * dim
            e[j] = Fraction(1)
            rows.append(tuple(e))
            rhs.append(B)
            rows.append(tuple(-c for c in e))
            rhs.append(B)
        for _ in range(extra):
            rows.append(random_vec(rng, dim, bound))
            rhs.append(Fraction(rng.randint(-bound, bound)))
        P = Polyhedron(tuple(rows), tuple(rhs), dim)
        if not P.is_empty():
            return P
    raise RetryExhausted("a nonempty bounded polyhedron", seed_hint)


def random_polymap(seed: InstanceSeed, n: int, p: int) -> PolyMap:
    """Reproducible mapping with a nonempty polyhedral graph in R^(n+p)."""
    prof = seed.profile
    if n > prof.max_dim or p > prof.max_dim:
        raise ValueError("random_polymap: dimensions exceed the profile")
    rng = Xorshift64Star(seed.seed)
    graph = random_polyhedron(rng, n + p, prof.max_rows, prof.coeff_bound,
                              seed_hint=seed.seed)
    return PolyMap(n, p, graph)


def vertex_support_oracle(P: Polyhedron, v: Vec) -> ExtReal:
    """Support value recomputed by brute force over the vertex list.

    Only valid for bounded (or empty) polyhedra; raises on unbounded input.
    """
    verts = P.vertices()
    if not verts:
        return MINUS_INF
    return ExtReal.of(max(dot(v, x) for x in verts))


def sample_graph_points(F: PolyMap, count: int, seed: InstanceSeed) -> list[Vec]:
    """Points of the graph: interior, support maximizers or ray shifts, and
    rational convex combinations; every output is membership-checked."""
    rng = Xorshift64Star(seed.seed)
    g = F.graph
    base = g.relative_interior_point()
    if base is None:
        raise ValueError("sample_graph_points: the graph is empty")
    pool: list[Vec] = [base]
    bound = seed.profile.coeff_bound
    attempts = 0
    while len(pool) < max(count, 2) and attempts < 8 * count + 16:
        attempts += 1
        d = random_vec(rng, g.dim, bound)
        ev = support_eval(g, d)
        if ev.maximizer is not None:
            cand = ev.maximizer
        elif ev.unbounded_ray is not None:
            step = Fraction(rng.randint(1, bound))
            cand = vadd(base, vscale(step, ev.unbounded_ray))
        else:
            continue
        if cand not in pool:
            pool.append(cand)
    out: list[Vec] = []
    i = 0
    while len(out) < count:
        if i < len(pool):
            cand = pool[i]
        else:
            a = pool[rng.randint(0, len(pool) - 1)]
            b = pool[rng.randint(0, len(pool) - 1)]
            t = Fraction(rng.randint(1, 7), 8)
            cand = vadd(vscale(t, a), vscale(1 - t, b))
        i += 1
        assert g.contains(cand)
        out.append(cand)
    return out


def random_polymap_pair(seed: InstanceSeed, n: int, p: int,
                        require_common_domain: bool = False,
                        retries: int = 64) -> tuple[PolyMap, PolyMap]:
    """Two mappings R^n to R^p; optionally with intersecting domains."""
    rng = Xorshift64Star(seed.seed)
    prof = seed.profile
    for _ in range(retries):
        g1 = random_polyhedron(rng, n + p, prof.max_rows, prof.coeff_bound,
                               seed_hint=seed.seed)
        g2 = random_polyhedron(rng, n + p, prof.max_rows, prof.coeff_bound,
                               seed_hint=seed.seed)
        F1, F2 = PolyMap(n, p, g1), PolyMap(n, p, g2)
        if not require_common_domain:
            return F1, F2
        if not F1.domain().intersection(F2.domain()).is_empty():
            return F1, F2
    raise RetryExhausted("mappings with intersecting domains", seed.seed)


def random_chain_pair(seed: InstanceSeed, n: int, p: int, q: int,
                      retries: int = 64) -> tuple[PolyMap, PolyMap, Polyhedron]:
    """Mappings F: n->p and G: p->q whose composition has nonempty graph.

    Also returns the linked set {(x, y, z) : y in F(x), z in G(y)} so callers
    can pick compatible base points.
    """
    from .calculus import _chain_product_sets  # local import avoids a cycle
    rng = Xorshift64Star(seed.seed)
    prof = seed.profile
    for _ in range(retries):
        gF = random_polyhedron(rng, n + p, prof.max_rows, prof.coeff_bound,
                               seed_hint=seed.seed)
        gG = random_polyhedron(rng, p + q, prof.max_rows, prof.coeff_bound,
                               seed_hint=seed.seed)
        F, G = PolyMap(n, p, gF), PolyMap(p, q, gG)
        O1, O2 = _chain_product_sets(F, G)
        linked = O1.intersection(O2)
        if not linked.is_empty():
            return F, G, linked
    raise RetryExhausted("a composable mapping pair", seed.seed)
