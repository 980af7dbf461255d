"""Quivers without loops, admissible automorphisms, and dimension bookkeeping.

Vertices and arrows are referred to by index internally; names are kept
for input files and error messages.  An automorphism is admissible when
it commutes with source/target and every arrow joins two distinct vertex
orbits.  Dimension vectors throughout are automorphism-invariant
(constant on vertex orbits).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd


class QuiverError(ValueError):
    pass


class HasLoop(QuiverError):
    pass


class NotEquivariant(QuiverError):
    pass


class NotAdmissible(QuiverError):
    pass


class DimensionMismatch(QuiverError):
    pass


class GradingMismatch(QuiverError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class QuiverWithAut:
    """Finite quiver (no loops) with an automorphism given as two permutations.

    vertices: names, in canonical (sorted) order.
    arrows: (name, source_index, target_index) triples, sorted by name.
    aut_v / aut_h: images under the automorphism, as index arrays.
    """

    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, int, int], ...]
    aut_v: tuple[int, ...]
    aut_h: tuple[int, ...]

    @classmethod
    def build(cls, vertices, arrows, aut_vertices=None, aut_arrows=None) -> "QuiverWithAut":
        """Construct from names. arrows: iterable of (name, src_name, tgt_name).

        aut_vertices / aut_arrows map names to image names; omitted means
        the identity.  Vertices and arrows are put in sorted-name order so
        equivalent declarations canonicalize identically.
        """
        vnames = tuple(sorted(vertices))
        if len(set(vnames)) != len(vnames):
            raise QuiverError("duplicate vertex names")
        vidx = {n: i for i, n in enumerate(vnames)}
        anames = sorted(a[0] for a in arrows)
        if len(set(anames)) != len(anames):
            raise QuiverError("duplicate arrow names")
        by_name = {a[0]: a for a in arrows}
        arr = []
        for n in anames:
            _, s, t = by_name[n]
            if s not in vidx or t not in vidx:
                raise QuiverError(f"arrow {n}: unknown endpoint {s!r} or {t!r}")
            arr.append((n, vidx[s], vidx[t]))
        aut_vertices = aut_vertices or {}
        aut_arrows = aut_arrows or {}
        av = tuple(vidx[aut_vertices.get(n, n)] for n in vnames)
        aidx = {n: i for i, n in enumerate(anames)}
        ah = tuple(aidx[aut_arrows.get(n, n)] for n in anames)
        if sorted(av) != list(range(len(vnames))):
            raise QuiverError("vertex map is not a permutation")
        if sorted(ah) != list(range(len(anames))):
            raise QuiverError("arrow map is not a permutation")
        return cls(vertices=vnames, arrows=tuple(arr), aut_v=av, aut_h=ah)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def source(self, h: int) -> int:
        return self.arrows[h][1]

    def target(self, h: int) -> int:
        return self.arrows[h][2]

    def order_n(self) -> int:
        """Smallest n >= 1 with both permutations n-th power trivial."""
        n = 1
        for cyc in _cycles(self.aut_v):
            n = _lcm(n, len(cyc))
        for cyc in _cycles(self.aut_h):
            n = _lcm(n, len(cyc))
        return n


def _cycles(perm) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


@dataclass(frozen=True)
class OrbitData:
    """Orbit decomposition of vertices and arrows under the automorphism.

    For a vertex i, rep_v[i] is the least vertex in its orbit and
    shift_v[i] the number of automorphism steps from the rep to i.
    d_v[i] / d_h[h] are orbit sizes.  lcm_n is the lcm of all orbit
    sizes, the ambient extension degree needed to host every subfield.
    """

    quiver: QuiverWithAut
    vertex_orbits: tuple[tuple[int, ...], ...]
    arrow_orbits: tuple[tuple[int, ...], ...]
    rep_v: tuple[int, ...]
    shift_v: tuple[int, ...]
    d_v: tuple[int, ...]
    rep_h: tuple[int, ...]
    d_h: tuple[int, ...]
    lcm_n: int

    @property
    def vertex_reps(self) -> tuple[int, ...]:
        return tuple(o[0] for o in self.vertex_orbits)

    @property
    def arrow_reps(self) -> tuple[int, ...]:
        return tuple(o[0] for o in self.arrow_orbits)

    def orbit_of_vertex(self, i: int) -> int:
        for k, o in enumerate(self.vertex_orbits):
            if i in o:
                return k
        raise IndexError(i)

    def is_invariant(self, nu) -> bool:
        q = self.quiver
        return all(nu[i] == nu[q.aut_v[i]] for i in range(q.n_vertices))


def validate(q: QuiverWithAut) -> OrbitData:
    """Check loops, equivariance and admissibility; compute orbit data."""
    for h, (name, s, t) in enumerate(q.arrows):
        if s == t:
            raise HasLoop(f"arrow {name!r} is a loop")
    for h, (name, s, t) in enumerate(q.arrows):
        h2 = q.aut_h[h]
        if q.aut_v[s] != q.source(h2) or q.aut_v[t] != q.target(h2):
            raise NotEquivariant(f"arrow {name!r}: automorphism does not commute with s,t")

    vcycles = _cycles(q.aut_v)
    vorb = tuple(tuple(sorted(c)) for c in sorted(vcycles, key=min))
    orbit_of = {}
    for k, o in enumerate(vorb):
        for i in o:
            orbit_of[i] = k
    for name, s, t in q.arrows:
        if orbit_of[s] == orbit_of[t]:
            raise NotAdmissible(f"arrow {name!r}: endpoints in the same vertex orbit")

    rep_v = [0] * q.n_vertices
    shift_v = [0] * q.n_vertices
    d_v = [0] * q.n_vertices
    for o in vorb:
        r = min(o)
        j, m = r, 0
        while True:
            rep_v[j] = r
            shift_v[j] = m
            d_v[j] = len(o)
            j = q.aut_v[j]
            m += 1
            if j == r:
                break

    hcycles = _cycles(q.aut_h)
    horb = tuple(tuple(sorted(c)) for c in sorted(hcycles, key=min))
    rep_h = [0] * q.n_arrows
    d_h = [0] * q.n_arrows
    for o in horb:
        r = min(o)
        for j in o:
            rep_h[j] = r
            d_h[j] = len(o)

    for o in horb:
        h = o[0]
        # forced by equivariance; a failure here means the cycle code is wrong
        assert d_h[h] % d_v[q.source(h)] == 0 and d_h[h] % d_v[q.target(h)] == 0

    n = 1
    for o in vorb:
        n = _lcm(n, len(o))
    for o in horb:
        n = _lcm(n, len(o))

    return OrbitData(
        quiver=q,
        vertex_orbits=vorb,
        arrow_orbits=horb,
        rep_v=tuple(rep_v),
        shift_v=tuple(shift_v),
        d_v=tuple(d_v),
        rep_h=tuple(rep_h),
        d_h=tuple(d_h),
        lcm_n=n,
    )


# -- bilinear forms (literal sums over all vertices and arrows) --

def euler_form(q: QuiverWithAut, nu1, nu2) -> int:
    if len(nu1) != q.n_vertices or len(nu2) != q.n_vertices:
        raise DimensionMismatch("dimension vector length does not match quiver")
    tot = sum(a * b for a, b in zip(nu1, nu2))
    for _, s, t in q.arrows:
        tot -= nu1[s] * nu2[t]
    return tot


def symmetric_form(q: QuiverWithAut, a, b) -> int:
    return euler_form(q, a, b) + euler_form(q, b, a)


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def total_dim(a) -> int:
    return sum(a)


def invariant_vectors(orbits: OrbitData, max_total: int):
    """All nonzero automorphism-invariant dimension vectors of total <= max_total."""
    reps = orbits.vertex_reps
    sizes = [orbits.d_v[r] for r in reps]
    n = orbits.quiver.n_vertices
    out = []

    def rec(k, remaining, vals):
        if k == len(reps):
            nu = [0] * n
            for r, v in zip(reps, vals):
                for i in range(n):
                    if orbits.rep_v[i] == r:
                        nu[i] = v
            out.append(tuple(nu))
            return
        for v in range(remaining // sizes[k] + 1):
            rec(k + 1, remaining - v * sizes[k], vals + [v])

    rec(0, max_total, [])
    return sorted(t for t in out if any(t))


def splittings(orbits: OrbitData, nu):
    """Ordered pairs (nu1, nu2) of invariant vectors with nu1 + nu2 = nu."""
    reps = orbits.vertex_reps
    n = orbits.quiver.n_vertices
    ranges = [range(nu[r] + 1) for r in reps]
    out = []
    for vals in itertools.product(*ranges):
        nu1 = [0] * n
        for r, v in zip(reps, vals):
            for i in range(n):
                if orbits.rep_v[i] == r:
                    nu1[i] = v
        nu1 = tuple(nu1)
        out.append((nu1, vec_sub(nu, nu1)))
    return sorted(out)


def enumerate_lambda(orbits: OrbitData, alpha, beta, alpha_p, beta_p):
    """Invariant quadruples (a1, a2, b1, b2) refining both splittings.

    Constraints: a1+a2 = alpha, b1+b2 = beta, a1+b1 = alpha_p,
    a2+b2 = beta_p.  The quadruple is determined by a1, which ranges over
    the invariant vectors with max(0, alpha_p - beta) <= a1 <= min(alpha,
    alpha_p) componentwise; output is in lexicographic order of a1.
    """
    q = orbits.quiver
    if vec_add(alpha, beta) != vec_add(alpha_p, beta_p):
        raise GradingMismatch("alpha + beta != alpha' + beta'")
    for v in (alpha, beta, alpha_p, beta_p):
        if not orbits.is_invariant(v):
            raise GradingMismatch("dimension vector not automorphism-invariant")
    lo = tuple(max(0, alpha_p[i] - beta[i]) for i in range(q.n_vertices))
    hi = tuple(min(alpha[i], alpha_p[i]) for i in range(q.n_vertices))
    reps = orbits.vertex_reps
    out = []
    for vals in itertools.product(*[range(lo[r], hi[r] + 1) for r in reps]):
        a1 = [0] * q.n_vertices
        for r, v in zip(reps, vals):
            for i in range(q.n_vertices):
                if orbits.rep_v[i] == r:
                    a1[i] = v
        a1 = tuple(a1)
        a2 = vec_sub(alpha, a1)
        b1 = vec_sub(alpha_p, a1)
        b2 = vec_sub(beta, b1)
        out.append((a1, a2, b1, b2))
    return sorted(out)


def shift_identity_check(q: QuiverWithAut, alpha, beta, alpha_p, beta_p, lam) -> bool:
    """Whether the dimension-shift bookkeeping closes up for one quadruple.

    With M the combined fiber shift, r' the connected-fiber dimension and
    N the split-side shift, the identity M - 2r' = N - (a2, b1) must hold
    for every refinement quadruple.
    """
    a1, a2, b1, b2 = lam
    arrows = q.arrows
    n = q.n_vertices

    m_shift = sum(alpha[i] * beta[i] for i in range(n))
    for _, s, t in arrows:
        m_shift += alpha[s] * beta[t]
    m_shift -= euler_form(q, alpha_p, beta_p)

    r = sum(a2[i] * b1[i] for i in range(n))
    for _, s, t in arrows:
        r += a1[s] * a2[t] + a1[s] * b2[t] + b1[s] * b2[t]

    r_prime = r
    for _, s, t in arrows:
        r_prime -= a1[s] * a2[t] + b1[s] * b2[t]

    n_shift = -euler_form(q, a1, a2) - euler_form(q, b1, b2)
    n_shift += sum(a1[i] * b1[i] + a2[i] * b2[i] for i in range(n))
    for _, s, t in arrows:
        n_shift += a1[s] * b1[t] + a2[s] * b2[t]

    return m_shift - 2 * r_prime == n_shift - symmetric_form(q, a2, b1)
