"""Exact arithmetic in one ambient finite field F_{q^N}, q = p^e.

All subfields F_{q^d} for d | N live inside the single ambient field as
fixed points of the d-th power of the q-Frobenius, so "is z in F_{q^d}"
is one table lookup.  Elements are integer codes in [0, p^(e*N)): the
base-p digits of a code are the coefficients of the residue polynomial,
lowest degree first.  Ascending code order therefore sorts coefficient
sequences lexicographically reading from the highest degree down, and
that fixed order is used everywhere (enumeration, orbit scans, caches).

Multiplication runs on exp/log tables over a generator of the
multiplicative group; addition is digitwise mod p (XOR when p = 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_MAX_FIELD = 1 << 16


class NonPrime(ValueError):
    pass


class FieldTooLarge(ValueError):
    pass


class NoIrreducibleFound(RuntimeError):
    """Exhausted all monic candidates. Mathematically impossible; a search bug."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomial helpers over F_p (used only while building a field) --

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_divmod(prod, mod, p)[1]


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    _poly_trim(a)
    db, lb = len(b) - 1, b[-1]
    inv_lb = pow(lb, p - 2, p)
    quot = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = (a[-1] * inv_lb) % p
        quot[k] = c
        for i in range(db + 1):
            a[k + i] = (a[k + i] - c * b[i]) % p
        _poly_trim(a)
    return quot, a


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    _poly_trim(a)
    _poly_trim(b)
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    return a


def _poly_powmod(base: list[int], exp: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    cur = _poly_divmod(base, mod, p)[1]
    while exp:
        if exp & 1:
            result = _poly_mulmod(result, cur, mod, p)
        cur = _poly_mulmod(cur, cur, mod, p)
        exp >>= 1
    return result


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _is_irreducible(f: list[int], p: int) -> bool:
    # f monic of degree m: irreducible iff x^(p^m) = x mod f and
    # gcd(x^(p^(m/r)) - x, f) = 1 for every prime r | m.
    m = len(f) - 1
    x = [0, 1]
    x_red = _poly_divmod(x, f, p)[1]
    xq = _poly_powmod(x, p**m, f, p)
    if _poly_sub(xq, x_red, p):
        return False
    for r in _prime_factors(m):
        xr = _poly_powmod(x, p ** (m // r), f, p)
        g = _poly_gcd(_poly_sub(xr, x, p), f, p)
        if len(g) - 1 > 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Immutable description of F_{q^N} with q = p^e, plus lookup tables.

    Attributes:
        p, e, n_ext: prime, base extension degree (q = p^e), ambient degree N.
        deg: e * n_ext, degree of the ambient field over F_p.
        size: p ** deg.
        modulus: monic irreducible coefficients, lowest degree first,
            length deg + 1; the one with the smallest integer encoding.
        exp, log: generator power tables for multiplication.
        frob: code -> code table for x -> x^q.
        subfield_elements: d -> sorted codes fixed by the d-fold q-Frobenius.
        subfield_index: d -> array mapping code -> dense index in the
            subfield list (-1 if not a member).
        subfield_fp_basis: d -> an F_p-basis of F_{q^d}, greedily chosen
            in code order.
    """

    p: int
    e: int
    n_ext: int
    deg: int
    size: int
    modulus: tuple[int, ...]
    exp: np.ndarray
    log: np.ndarray
    frob: np.ndarray
    subfield_elements: dict[int, tuple[int, ...]] = field(repr=False)
    subfield_index: dict[int, np.ndarray] = field(repr=False)
    subfield_fp_basis: dict[int, tuple[int, ...]] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    # -- scalar ops on integer codes --

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        r, mult = 0, 1
        while a or b:
            r += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return r

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        r, mult = 0, 1
        while a:
            r += ((p - a % p) % p) * mult
            a //= p
            mult *= p
        return r

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        order = self.size - 1
        return int(self.exp[(int(self.log[a]) + int(self.log[b])) % order])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        order = self.size - 1
        return int(self.exp[(order - int(self.log[a])) % order])

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        order = self.size - 1
        return int(self.exp[(int(self.log[a]) * k) % order])

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(q^k); k-fold q-power Frobenius, k >= 0."""
        a = int(a)
        for _ in range(k % self.n_ext if self.n_ext > 1 else 0):
            a = int(self.frob[a])
        return a

    def in_subfield(self, a: int, d: int) -> bool:
        return int(self.subfield_index[d][a]) >= 0

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Residue coefficients of a code, lowest degree first, fixed length."""
        out = []
        for _ in range(self.deg):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        code = 0
        for c in reversed(list(cs)):
            code = code * self.p + int(c) % self.p
        return code

    def frob_mat(self, codes: np.ndarray, k: int) -> np.ndarray:
        """Entrywise q^k-power of an array of codes."""
        out = np.asarray(codes, dtype=np.int64).copy()
        for _ in range(k % self.n_ext if self.n_ext > 1 else 0):
            out = self.frob[out]
        return out


def gf_init(p: int, e: int, n_ext: int, max_elems: int = DEFAULT_MAX_FIELD) -> FieldSpec:
    """Build F_{q^N}, q = p^e, with verified-irreducible modulus and subfield lists.

    The modulus is the monic irreducible of degree e*N over F_p with the
    smallest integer encoding, found by exhaustive scan, so repeated runs
    agree bit for bit.
    """
    if not _is_prime(p):
        raise NonPrime(f"p = {p} is not prime")
    if e < 1 or n_ext < 1:
        raise ValueError("e and N must be positive")
    deg = e * n_ext
    size = p**deg
    if size > max_elems:
        raise FieldTooLarge(f"p^(e*N) = {size} exceeds bound {max_elems}")

    modulus = None
    for code in range(size):
        cand = [0] * deg
        c = code
        for i in range(deg):
            cand[i] = c % p
            c //= p
        cand.append(1)
        if _is_irreducible(cand, p):
            modulus = cand
            break
    if modulus is None:
        raise NoIrreducibleFound(f"no monic irreducible of degree {deg} over F_{p}")

    def to_code(poly: list[int]) -> int:
        code = 0
        for c in reversed(poly):
            code = code * p + c
        return code

    def from_code(code: int) -> list[int]:
        out = [0] * deg
        for i in range(deg):
            out[i] = code % p
            code //= p
        return out

    # generator of the multiplicative group: smallest code of full order
    order = size - 1
    order_primes = _prime_factors(order)
    gen = None
    for code in range(1, size):
        g = from_code(code)
        if all(
            to_code(_poly_powmod(g, order // r, modulus, p)) != 1
            for r in order_primes
        ):
            gen = g
            break
    assert gen is not None

    exp = np.zeros(order, dtype=np.int64)
    log = np.full(size, -1, dtype=np.int64)
    cur = [1]
    for k in range(order):
        code = to_code(cur)
        exp[k] = code
        log[code] = k
        cur = _poly_mulmod(cur, gen, modulus, p)

    q = p**e
    frob = np.zeros(size, dtype=np.int64)
    for a in range(1, size):
        frob[a] = exp[(int(log[a]) * q) % order]

    subfield_elements: dict[int, tuple[int, ...]] = {}
    subfield_index: dict[int, np.ndarray] = {}
    subfield_fp_basis: dict[int, tuple[int, ...]] = {}
    for d in sorted(k for k in range(1, n_ext + 1) if n_ext % k == 0):
        step = order // (q**d - 1)
        elems = [0] + sorted(int(exp[k]) for k in range(0, order, step))
        if len(elems) != q**d:
            raise AssertionError(f"subfield F_q^{d} has {len(elems)} elements")
        subfield_elements[d] = tuple(elems)
        idx = np.full(size, -1, dtype=np.int32)
        for i, z in enumerate(elems):
            idx[z] = i
        subfield_index[d] = idx
        # greedy F_p-basis in code order, by rank over the digit vectors
        basis: list[int] = []
        rows: list[list[int]] = []
        for z in elems:
            if z == 0:
                continue
            vec = from_code(z)
            red = list(vec)
            for r in rows:
                lead = next(i for i, c in enumerate(r) if c)
                if red[lead]:
                    f = red[lead] * pow(r[lead], p - 2, p) % p
                    red = [(x - f * y) % p for x, y in zip(red, r)]
            if any(red):
                basis.append(z)
                rows.append(red)
                if len(basis) == e * d:
                    break
        assert len(basis) == e * d
        subfield_fp_basis[d] = tuple(basis)

    return FieldSpec(
        p=p,
        e=e,
        n_ext=n_ext,
        deg=deg,
        size=size,
        modulus=tuple(modulus),
        exp=exp,
        log=log,
        frob=frob,
        subfield_elements=subfield_elements,
        subfield_index=subfield_index,
        subfield_fp_basis=subfield_fp_basis,
    )
