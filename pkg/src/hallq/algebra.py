"""The Hall bialgebra over Q[v]/(v^2 - q) with v specialized to -sqrt(q).

Coefficients are exact: a pair (a, b) of rationals standing for a + b*v.
When q is a perfect square, v is a rational number and is folded into
the rational part at construction, so equality stays decidable either
way.  The twisted tensor multiplication carries the symmetric-form
power of v; the comultiplication divides by automorphism-group orders,
also exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from hallq.hall import HallData
from hallq.quiver import euler_form, splittings, symmetric_form, vec_add
from hallq.repspace import ModuleClass


class NonIntegerCartan(ValueError):
    """Symmetrized pairing not divisible by the orbit size; bad input pair."""


class HallCoeff:
    """Exact element a + b*v of Q[v]/(v^2 - q), with v read as -sqrt(q)."""

    __slots__ = ("q", "a", "b")

    def __init__(self, q: int, a=0, b=0):
        a, b = Fraction(a), Fraction(b)
        root = math.isqrt(q)
        if root * root == q and b:
            a, b = a - b * root, Fraction(0)  # v = -sqrt(q) is rational here
        self.q = q
        self.a = a
        self.b = b

    @classmethod
    def v_power(cls, q: int, n: int) -> "HallCoeff":
        # v^n = q^(n//2) * v^(n mod 2), floor division toward -inf
        k = n // 2
        if n % 2 == 0:
            return cls(q, Fraction(q) ** k)
        return cls(q, 0, Fraction(q) ** k)

    def __add__(self, other):
        other = self._coerce(other)
        return HallCoeff(self.q, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return HallCoeff(self.q, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return HallCoeff(
            self.q,
            self.a * other.a + self.b * other.b * self.q,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> "HallCoeff":
        norm = self.a * self.a - self.q * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("non-invertible coefficient")
        return HallCoeff(self.q, self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def _coerce(self, other) -> "HallCoeff":
        if isinstance(other, HallCoeff):
            if other.q != self.q:
                raise ValueError("mixed base fields")
            return other
        return HallCoeff(self.q, other)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.q, self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __repr__(self) -> str:
        return f"({self.render()})"

    def render(self) -> str:
        return f"{self.a} + {self.b}*v"


def _prune(d: dict) -> dict:
    return {k: c for k, c in d.items() if c}


class HallElement:
    """Finitely supported combination of class symbols; may mix gradings."""

    def __init__(self, q: int, terms: dict | None = None):
        self.q = q
        self.terms: dict[ModuleClass, HallCoeff] = _prune(terms or {})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, HallCoeff(self.q)) + c
        return HallElement(self.q, out)

    def __sub__(self, other):
        return self + other.scale(HallCoeff(self.q, -1))

    def scale(self, c: HallCoeff) -> "HallElement":
        return HallElement(self.q, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c!r}*u{list(k.dim)}#{k.orbit}" for k, c in sorted(self.terms.items()))


class TensorElement:
    """Finitely supported combination of pairs of class symbols."""

    def __init__(self, q: int, terms: dict | None = None):
        self.q = q
        self.terms: dict[tuple[ModuleClass, ModuleClass], HallCoeff] = _prune(terms or {})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, HallCoeff(self.q)) + c
        return TensorElement(self.q, out)

    def __sub__(self, other):
        return self + TensorElement(self.q, {k: v * HallCoeff(self.q, -1) for k, v in other.terms.items()})

    def __eq__(self, other) -> bool:
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms


# -- symmetric Gaussian binomials as Laurent polynomials in v --

@lru_cache(maxsize=None)
def gauss_binom(n: int, k: int) -> tuple[tuple[int, int], ...]:
    """Symmetric Gaussian binomial [n choose k] as (exponent, coeff) pairs.

    Satisfies [n,k] = v^k [n-1,k] + v^(k-n) [n-1,k-1] and specializes to
    the ordinary binomial at v = 1.
    """
    if k < 0 or k > n:
        return ()
    if k == 0 or k == n:
        return ((0, 1),)
    out: dict[int, int] = {}
    for e, c in gauss_binom(n - 1, k):
        out[e + k] = out.get(e + k, 0) + c
    for e, c in gauss_binom(n - 1, k - 1):
        out[e + k - n] = out.get(e + k - n, 0) + c
    return tuple(sorted((e, c) for e, c in out.items() if c))


def eval_laurent(q: int, poly, scale: int = 1) -> HallCoeff:
    """Evaluate a Laurent polynomial at v^scale in the coefficient ring."""
    out = HallCoeff(q)
    for e, c in poly:
        out = out + HallCoeff.v_power(q, e * scale) * c
    return out


class HallAlgebra:
    """Multiplication, comultiplication and their compatibility checks."""

    def __init__(self, hd: HallData):
        self.hd = hd
        self.space = hd.space
        self.q = hd.space.q
        self._prod_cache: dict = {}

    def coeff(self, a=0, b=0) -> HallCoeff:
        return HallCoeff(self.q, a, b)

    def v_pow(self, n: int) -> HallCoeff:
        return HallCoeff.v_power(self.q, n)

    def basis(self, M: ModuleClass) -> HallElement:
        return HallElement(self.q, {M: self.coeff(1)})

    def one(self) -> HallElement:
        return self.basis(self.space.zero_class())

    def _basis_product(self, M: ModuleClass, N: ModuleClass) -> HallElement:
        key = (M, N)
        if key in self._prod_cache:
            return self._prod_cache[key]
        sp = self.space
        nu = vec_add(M.dim, N.dim)
        pref = self.v_pow(euler_form(sp.quiver, M.dim, N.dim))
        terms = {}
        for L in sp.classes(nu):
            g = self.hd.hall_number(M, N, L)
            if g:
                terms[L] = pref * g
        out = HallElement(self.q, terms)
        self._prod_cache[key] = out
        return out

    def multiply(self, u: HallElement, w: HallElement) -> HallElement:
        out = HallElement(self.q)
        for M, c in u.terms.items():
            for N, d in w.terms.items():
                out = out + self._basis_product(M, N).scale(c * d)
        return out

    def comultiply(self, u: HallElement) -> TensorElement:
        sp = self.space
        out: dict = {}
        for L, c in u.terms.items():
            aL = sp.aut_order(L)
            for nu1, nu2 in splittings(sp.orbits, L.dim):
                pref = self.v_pow(euler_form(sp.quiver, nu1, nu2)) * c
                for (kq, kn), g in sorted(self.hd.census(L, nu2).items()):
                    M = ModuleClass(nu1, kq)
                    N = ModuleClass(nu2, kn)
                    w = pref * Fraction(g * sp.aut_order(M) * sp.aut_order(N), aL)
                    key = (M, N)
                    out[key] = out.get(key, self.coeff()) + w
        return TensorElement(self.q, out)

    def counit(self, u: HallElement) -> HallCoeff:
        return u.terms.get(self.space.zero_class(), self.coeff())

    def tensor_multiply(self, s: TensorElement, t: TensorElement) -> TensorElement:
        sp = self.space
        out = TensorElement(self.q)
        for (M1, M2), c in s.terms.items():
            for (N1, N2), d in t.terms.items():
                tw = self.v_pow(symmetric_form(sp.quiver, M2.dim, N1.dim)) * c * d
                left = self._basis_product(M1, N1)
                right = self._basis_product(M2, N2)
                terms = {}
                for A, ca in left.terms.items():
                    for B, cb in right.terms.items():
                        terms[(A, B)] = tw * ca * cb
                out = out + TensorElement(self.q, terms)
        return out

    def bialgebra_check(self, M: ModuleClass, N: ModuleClass) -> bool:
        lhs = self.comultiply(self._basis_product(M, N))
        rhs = self.tensor_multiply(self.comultiply(self.basis(M)), self.comultiply(self.basis(N)))
        return lhs == rhs

    # -- composition-subalgebra relations --

    def simple_class(self, orbit_index: int) -> ModuleClass:
        """Semisimple class with dimension the indicator of one vertex orbit."""
        sp = self.space
        nu = [0] * sp.quiver.n_vertices
        for i in sp.orbits.vertex_orbits[orbit_index]:
            nu[i] = 1
        nu = tuple(nu)
        tab = sp.orbit_table(nu)
        return ModuleClass(nu, int(tab.orbit_of_code[0]))

    def serre_check(self, i_orbit: int, j_orbit: int) -> bool:
        """Quantum Serre relation between two vertex-orbit generators.

        With c the Cartan pairing 2(a_i, a_j)/(a_i, a_i) and n = 1 - c,
        checks sum_k (-1)^k [n choose k]_{v^{d_i}} u_i^k u_j u_i^(n-k) = 0.
        """
        sp = self.space
        if i_orbit == j_orbit:
            raise ValueError("orbit pair must be distinct")
        Si = self.simple_class(i_orbit)
        Sj = self.simple_class(j_orbit)
        d_i = len(sp.orbits.vertex_orbits[i_orbit])
        pair_ii = symmetric_form(sp.quiver, Si.dim, Si.dim)
        assert pair_ii == 2 * d_i
        pair_ij = symmetric_form(sp.quiver, Si.dim, Sj.dim)
        if (2 * pair_ij) % pair_ii:
            raise NonIntegerCartan(f"pairing {pair_ij} not divisible by {d_i}")
        c = 2 * pair_ij // pair_ii
        n = 1 - c
        ui = self.basis(Si)
        uj = self.basis(Sj)
        powers = [self.one()]
        for _ in range(n):
            powers.append(self.multiply(powers[-1], ui))
        acc = HallElement(self.q)
        for k in range(n + 1):
            coeff = eval_laurent(self.q, gauss_binom(n, k), scale=d_i)
            if k % 2:
                coeff = -coeff
            term = self.multiply(self.multiply(powers[k], uj), powers[n - k])
            acc = acc + term.scale(coeff)
        return acc.is_zero()
