"""Fixed-point representation spaces, group actions, and orbit tables.

A point of the space for an invariant dimension vector nu is stored as
one matrix per arrow-orbit representative h, with entries in the
subfield of degree d_h; the matrices at the other arrows of the orbit
are Frobenius translates and are never materialized.  Points are also
addressed by a single integer code (mixed-radix over dense subfield
indices, first entry most significant), so an orbit table is a flat
array mapping code -> orbit id.

The acting group is the product of general linear groups over the
vertex subfields, one factor per vertex-orbit representative; its
orbits on the point set classify isomorphism classes of the folded
quiver representations of dimension nu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from hallq import kernels
from hallq.gf import FieldSpec, gf_init
from hallq.quiver import (
    DimensionMismatch,
    GradingMismatch,
    OrbitData,
    QuiverWithAut,
    euler_form,
    validate,
)


class SpaceTooLarge(RuntimeError):
    def __init__(self, what: str, count: int, bound: int):
        super().__init__(f"{what}: {count} exceeds bound {bound}")
        self.count = count


class NonExactDivision(RuntimeError):
    """Group order not divisible by an orbit size; generator-set bug."""


class NegativeExt(RuntimeError):
    """Hom solver and Euler form disagree; hard failure."""


@dataclass(frozen=True)
class Bounds:
    max_field: int = 1 << 16
    max_points: int = 1 << 22
    max_fiber: int = 1 << 24
    max_combos: int = 1 << 24


class ModuleClass(NamedTuple):
    """Isomorphism-class handle: dimension vector plus orbit id."""

    dim: tuple[int, ...]
    orbit: int


@dataclass(frozen=True)
class Slot:
    arrow: int
    rows: int
    cols: int
    d: int
    radix: int


@dataclass(frozen=True)
class Layout:
    nu: tuple[int, ...]
    slots: tuple[Slot, ...]
    strides: tuple[np.ndarray, ...]  # per slot, shape (rows, cols)
    total: int

    def encode(self, field: FieldSpec, mats) -> int:
        code = 0
        for slot, st, m in zip(self.slots, self.strides, mats):
            idx = field.subfield_index[slot.d][np.asarray(m, dtype=np.int64)]
            if (idx < 0).any():
                raise ValueError("matrix entry outside its arrow subfield")
            code += int((st * idx.astype(np.int64)).sum())
        return code

    def decode(self, field: FieldSpec, code: int):
        mats = []
        for slot, st in zip(self.slots, self.strides):
            idx = (code // st) % slot.radix
            elems = np.asarray(field.subfield_elements[slot.d], dtype=np.int64)
            mats.append(elems[idx])
        return mats


@dataclass
class Point:
    """A point: matrices at arrow-orbit representatives, subfield entries."""

    nu: tuple[int, ...]
    mats: list

    def copy(self) -> "Point":
        return Point(self.nu, [m.copy() for m in self.mats])


@dataclass
class GroupElem:
    """One invertible matrix per vertex-orbit representative (keyed by rep)."""

    nu: tuple[int, ...]
    blocks: dict[int, np.ndarray]


@dataclass(frozen=True)
class OrbitTable:
    nu: tuple[int, ...]
    orbit_of_code: np.ndarray  # int64[total]
    reps: np.ndarray  # least code per orbit
    sizes: np.ndarray
    auts: tuple[int, ...] = field(repr=False)  # exact automorphism-group orders

    @property
    def n_orbits(self) -> int:
        return len(self.reps)


class Space:
    """Everything attached to one quiver-with-automorphism over one base field."""

    def __init__(
        self,
        quiver: QuiverWithAut,
        p: int,
        e: int = 1,
        bounds: Bounds = Bounds(),
        cache=None,
        backend=None,
    ):
        self.quiver = quiver
        self.orbits: OrbitData = validate(quiver)
        self.bounds = bounds
        self.field: FieldSpec = gf_init(p, e, self.orbits.lcm_n, bounds.max_field)
        self.cache = cache
        self._backend = backend if backend is not None else kernels.active_backend()
        self._layouts: dict[tuple, Layout] = {}
        self._tables: dict[tuple, OrbitTable] = {}
        self._hom: dict[tuple, int] = {}

    # -- plumbing --

    @property
    def q(self) -> int:
        return self.field.q

    def _field_args(self):
        f = self.field
        return f.p, f.size - 1, f.exp, f.log

    def check_dim(self, nu) -> tuple[int, ...]:
        nu = tuple(int(x) for x in nu)
        if len(nu) != self.quiver.n_vertices:
            raise DimensionMismatch("dimension vector length does not match quiver")
        if any(x < 0 for x in nu):
            raise DimensionMismatch("negative entry in dimension vector")
        if not self.orbits.is_invariant(nu):
            raise DimensionMismatch(f"dimension vector {nu} is not automorphism-invariant")
        return nu

    def layout(self, nu) -> Layout:
        nu = self.check_dim(nu)
        if nu in self._layouts:
            return self._layouts[nu]
        q = self.quiver
        ob = self.orbits
        slots = []
        for h in ob.arrow_reps:
            r, c = nu[q.target(h)], nu[q.source(h)]
            if r and c:
                slots.append(Slot(arrow=h, rows=r, cols=c, d=ob.d_h[h], radix=self.q ** ob.d_h[h]))
        total = 1
        for s in slots:
            total *= s.radix ** (s.rows * s.cols)
        strides = []
        run = total
        for s in slots:
            st = np.zeros((s.rows, s.cols), dtype=np.int64)
            for i in range(s.rows):
                for j in range(s.cols):
                    run //= s.radix
                    st[i, j] = run
            strides.append(st)
        lay = Layout(nu=nu, slots=tuple(slots), strides=tuple(strides), total=total)
        self._layouts[nu] = lay
        return lay

    def num_points(self, nu) -> int:
        return self.layout(nu).total

    def point(self, nu, code: int) -> Point:
        lay = self.layout(nu)
        return Point(lay.nu, lay.decode(self.field, code))

    def code(self, x: Point) -> int:
        return self.layout(x.nu).encode(self.field, x.mats)

    def enumerate_points(self, nu):
        lay = self.layout(nu)
        if lay.total > self.bounds.max_points:
            raise SpaceTooLarge(f"point space for {lay.nu}", lay.total, self.bounds.max_points)
        for code in range(lay.total):
            yield self.point(nu, code)

    # -- group --

    def group_order(self, nu) -> int:
        nu = self.check_dim(nu)
        ob = self.orbits
        out = 1
        for r in ob.vertex_reps:
            m = nu[r]
            qd = self.q ** ob.d_v[r]
            for j in range(m):
                out *= qd**m - qd**j
        return out

    def identity_elem(self, nu) -> GroupElem:
        nu = self.check_dim(nu)
        ob = self.orbits
        blocks = {
            r: np.eye(nu[r], dtype=np.int64) for r in ob.vertex_reps if nu[r]
        }
        return GroupElem(nu, blocks)

    def mat_mul(self, A, B):
        p, order, exp, log = self._field_args()
        return self._backend.mat_mul(p, order, exp, log, np.asarray(A, np.int64), np.asarray(B, np.int64))

    def rref(self, A):
        """Reduced row echelon form; returns (R, rank, pivot columns)."""
        p, order, exp, log = self._field_args()
        R = np.array(A, dtype=np.int64, copy=True)
        if R.size == 0:
            return R, 0, np.zeros(0, np.int64)
        piv = np.full(R.shape[1], -1, np.int64)
        rank = self._backend.rref(p, order, exp, log, R, piv)
        return R, int(rank), piv[:rank]

    def mat_inv(self, A):
        A = np.asarray(A, np.int64)
        n = A.shape[0]
        if n == 0:
            return A.copy()
        aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
        R, rank, _ = self.rref(aug)
        if rank < n:
            raise ZeroDivisionError("matrix not invertible")
        return R[:, n:].copy()

    def compose(self, g: GroupElem, h: GroupElem) -> GroupElem:
        blocks = {r: self.mat_mul(g.blocks[r], h.blocks[r]) for r in g.blocks}
        return GroupElem(g.nu, blocks)

    def act(self, g: GroupElem, x: Point) -> Point:
        """g.x with the Frobenius-translated blocks at each arrow endpoint."""
        if g.nu != x.nu:
            raise DimensionMismatch("group element and point have different gradings")
        f = self.field
        ob = self.orbits
        q = self.quiver
        lay = self.layout(x.nu)
        out = []
        for slot, m in zip(lay.slots, x.mats):
            s, t = q.source(slot.arrow), q.target(slot.arrow)
            left = f.frob_mat(g.blocks[ob.rep_v[t]], ob.shift_v[t])
            right = f.frob_mat(self.mat_inv(g.blocks[ob.rep_v[s]]), ob.shift_v[s])
            out.append(self.mat_mul(self.mat_mul(left, m), right))
        return Point(x.nu, out)

    # -- generators and orbit tables --

    def _subfield_mult_gen(self, d: int) -> int:
        """Smallest-code generator of the multiplicative group of F_{q^d}."""
        f = self.field
        target = self.q**d - 1
        order = f.size - 1
        for z in f.subfield_elements[d]:
            if z == 0:
                continue
            zo = order // np.gcd(int(f.log[z]), order) if f.log[z] else 1
            if zo == target:
                return int(z)
        raise AssertionError("no multiplicative generator found")

    def generators(self, nu) -> list[GroupElem]:
        """Transvections over a prime-field basis plus one diagonal generator,
        per vertex-orbit representative, embedded as group elements."""
        nu = self.check_dim(nu)
        ob = self.orbits
        f = self.field
        gens = []
        for r in ob.vertex_reps:
            m = nu[r]
            if m == 0:
                continue
            d = ob.d_v[r]
            for j in range(m):
                for k in range(m):
                    if j == k:
                        continue
                    for lam in f.subfield_fp_basis[d]:
                        g = self.identity_elem(nu)
                        g.blocks[r] = g.blocks[r].copy()
                        g.blocks[r][j, k] = lam
                        gens.append(g)
            if self.q**d > 2:
                gamma = self._subfield_mult_gen(d)
                g = self.identity_elem(nu)
                g.blocks[r] = g.blocks[r].copy()
                g.blocks[r][0, 0] = gamma
                gens.append(g)
        return gens

    def orbit_table(self, nu) -> OrbitTable:
        nu = self.check_dim(nu)
        if nu in self._tables:
            return self._tables[nu]
        if self.cache is not None:
            hit = self.cache.load_orbit_table(self, nu)
            if hit is not None:
                self._tables[nu] = hit
                return hit
        tab = self._build_orbit_table(nu)
        self._tables[nu] = tab
        if self.cache is not None:
            self.cache.store_orbit_table(self, tab)
        return tab

    def _build_orbit_table(self, nu) -> OrbitTable:
        lay = self.layout(nu)
        if lay.total > self.bounds.max_points:
            raise SpaceTooLarge(f"point space for {lay.nu}", lay.total, self.bounds.max_points)
        f = self.field
        ob = self.orbits
        q = self.quiver
        n_slots = len(lay.slots)
        maxd = max((max(s.rows, s.cols) for s in lay.slots), default=1)
        rows = np.array([s.rows for s in lay.slots], np.int64).reshape(n_slots)
        cols = np.array([s.cols for s in lay.slots], np.int64).reshape(n_slots)
        radices = np.array([s.radix for s in lay.slots], np.int64).reshape(n_slots)
        max_rad = max((s.radix for s in lay.slots), default=1)
        code_of_idx = np.zeros((n_slots, max_rad), np.int64)
        idx_of_code = np.zeros((n_slots, f.size), np.int64)
        strides = np.zeros((n_slots, maxd, maxd), np.int64)
        for si, (slot, st) in enumerate(zip(lay.slots, lay.strides)):
            elems = f.subfield_elements[slot.d]
            code_of_idx[si, : len(elems)] = elems
            idx_of_code[si] = f.subfield_index[slot.d]
            strides[si, : slot.rows, : slot.cols] = st

        gens = self.generators(nu)
        n_gens = len(gens)
        gen_left = np.zeros((n_gens, n_slots, maxd, maxd), np.int64)
        gen_right = np.zeros((n_gens, n_slots, maxd, maxd), np.int64)
        for gi, g in enumerate(gens):
            for si, slot in enumerate(lay.slots):
                s, t = q.source(slot.arrow), q.target(slot.arrow)
                left = f.frob_mat(g.blocks[ob.rep_v[t]], ob.shift_v[t])
                right = f.frob_mat(self.mat_inv(g.blocks[ob.rep_v[s]]), ob.shift_v[s])
                gen_left[gi, si, : slot.rows, : slot.rows] = left
                gen_right[gi, si, : slot.cols, : slot.cols] = right

        orbit_id = np.full(lay.total, -1, np.int64)
        queue = np.empty(lay.total, np.int64)
        p, order, exp, log = self._field_args()
        n_orbits = self._backend.orbit_fill(
            p,
            order,
            exp,
            log,
            lay.total,
            rows,
            cols,
            radices,
            code_of_idx,
            idx_of_code,
            strides,
            gen_left,
            gen_right,
            orbit_id,
            queue,
        )
        assert (orbit_id >= 0).all()
        _, reps = np.unique(orbit_id, return_index=True)
        sizes = np.bincount(orbit_id, minlength=n_orbits)
        go = self.group_order(nu)
        auts = []
        for k in range(n_orbits):
            sz = int(sizes[k])
            if go % sz:
                raise NonExactDivision(f"orbit size {sz} does not divide group order {go}")
            auts.append(go // sz)
        return OrbitTable(
            nu=lay.nu,
            orbit_of_code=orbit_id,
            reps=reps.astype(np.int64),
            sizes=sizes.astype(np.int64),
            auts=tuple(auts),
        )

    # -- classes --

    def classes(self, nu) -> list[ModuleClass]:
        tab = self.orbit_table(nu)
        return [ModuleClass(tab.nu, k) for k in range(tab.n_orbits)]

    def zero_class(self) -> ModuleClass:
        nu = (0,) * self.quiver.n_vertices
        return ModuleClass(nu, 0)

    def class_of_point(self, x: Point) -> ModuleClass:
        tab = self.orbit_table(x.nu)
        return ModuleClass(tab.nu, int(tab.orbit_of_code[self.code(x)]))

    def rep_point(self, mc: ModuleClass) -> Point:
        tab = self.orbit_table(mc.dim)
        return self.point(mc.dim, int(tab.reps[mc.orbit]))

    def aut_order(self, mc: ModuleClass) -> int:
        return self.orbit_table(mc.dim).auts[mc.orbit]

    # -- Hom and Ext dimensions over the base field --

    def hom_dim(self, M: ModuleClass, N: ModuleClass) -> int:
        key = (M, N)
        if key in self._hom:
            return self._hom[key]
        val = self._hom_dim_impl(M, N)
        self._hom[key] = val
        return val

    def _hom_dim_impl(self, M: ModuleClass, N: ModuleClass) -> int:
        """Base-field dimension of the intertwiner space, by prime-field nullity.

        Unknowns are the matrices at vertex-orbit representatives over
        their subfields, written in a prime-field basis; the intertwining
        equations at arrow-orbit representatives expand digitwise.
        """
        f = self.field
        ob = self.orbits
        q = self.quiver
        xm = {s.arrow: m for s, m in zip(self.layout(M.dim).slots, self.rep_point(M).mats)}
        xn = {s.arrow: m for s, m in zip(self.layout(N.dim).slots, self.rep_point(N).mats)}

        unknowns = []  # (vertex rep, row in N, col in M, basis element index)
        ucols: dict[tuple, int] = {}
        basis_of = {}
        for r in ob.vertex_reps:
            mM, mN = M.dim[r], N.dim[r]
            if mM == 0 or mN == 0:
                continue
            d = ob.d_v[r]
            basis_of[r] = f.subfield_fp_basis[d]
            for i in range(mN):
                for j in range(mM):
                    for b in range(len(basis_of[r])):
                        ucols[(r, i, j, b)] = len(unknowns)
                        unknowns.append((r, i, j, b))
        n_unknowns = len(unknowns)
        if n_unknowns == 0:
            return 0

        rows = []
        for h in ob.arrow_reps:
            s, t = q.source(h), q.target(h)
            ns, nt = M.dim[s], N.dim[t]  # equation block is (N.dim[t], M.dim[s])
            if ns == 0 or nt == 0:
                continue
            rs, ms_ = ob.rep_v[s], ob.shift_v[s]
            rt, mt_ = ob.rep_v[t], ob.shift_v[t]
            for a in range(nt):
                for b in range(ns):
                    coeff = [0] * n_unknowns  # ambient codes
                    if rt in basis_of and h in xm:
                        for k in range(M.dim[t]):
                            xv = int(xm[h][k, b])
                            if xv == 0:
                                continue
                            for bi, lam in enumerate(basis_of[rt]):
                                c = f.mul(f.frobenius(lam, mt_), xv)
                                u = ucols.get((rt, a, k, bi))
                                if u is not None:
                                    coeff[u] = f.add(coeff[u], c)
                    if rs in basis_of and h in xn:
                        for k in range(N.dim[s]):
                            xv = int(xn[h][a, k])
                            if xv == 0:
                                continue
                            for bi, lam in enumerate(basis_of[rs]):
                                c = f.neg(f.mul(xv, f.frobenius(lam, ms_)))
                                u = ucols.get((rs, k, b, bi))
                                if u is not None:
                                    coeff[u] = f.add(coeff[u], c)
                    for dig in range(f.deg):
                        row = [f.coeffs(c)[dig] for c in coeff]
                        if any(row):
                            rows.append(row)
        if not rows:
            nullity = n_unknowns
        else:
            A = np.array(rows, dtype=np.int64)
            _, rank, _ = self.rref(A)
            nullity = n_unknowns - rank
        assert nullity % self.field.e == 0
        return nullity // self.field.e

    def ext_dim(self, M: ModuleClass, N: ModuleClass) -> int:
        val = self.hom_dim(M, N) - euler_form(self.quiver, M.dim, N.dim)
        if val < 0:
            raise NegativeExt(f"ext dimension {val} for {M}, {N}")
        return val
