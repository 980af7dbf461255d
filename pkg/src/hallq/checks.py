"""Verification suites over full sweeps, producing machine-readable reports.

Each check enumerates every instance up to a total-dimension bound in a
fixed order, evaluates both sides of its identity exactly, and reports
per-instance failures with the exact values rendered as "a + b*v".
Instance verdicts are independent, so the outer loop can fan out over
worker threads; the heavy per-grading tables are shared and memoized.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from hallq.algebra import HallAlgebra, HallCoeff
from hallq.functions import FunctionSpace
from hallq.hall import HallData
from hallq.quiver import (
    QuiverWithAut,
    invariant_vectors,
    splittings,
    enumerate_lambda,
    shift_identity_check,
    vec_add,
)
from hallq.repspace import Bounds, ModuleClass, Space

REPORT_FORMAT_VERSION = 1


class Workbench:
    """One quiver with automorphism over one base field, fully wired."""

    def __init__(self, quiver: QuiverWithAut, p: int, e: int = 1, bounds: Bounds = Bounds(), cache=None):
        self.space = Space(quiver, p, e, bounds=bounds, cache=cache)
        self.hall = HallData(self.space)
        self.algebra = HallAlgebra(self.hall)
        self.functions = FunctionSpace(self.hall)

    @property
    def q(self) -> int:
        return self.space.q

    def render(self, x) -> str:
        if isinstance(x, HallCoeff):
            return x.render()
        return HallCoeff(self.q, Fraction(x)).render()

    def gradings(self, max_total):
        return invariant_vectors(self.space.orbits, max_total)

    def pairs_at(self, nu):
        out = []
        for nu1, nu2 in splittings(self.space.orbits, nu):
            for M in self.space.classes(nu1):
                for N in self.space.classes(nu2):
                    out.append((M, N))
        return out

    def all_pairs(self, max_total):
        out = []
        for nu in self.gradings(max_total):
            out.extend(self.pairs_at(nu))
        return out


def _run(instances, verdict, jobs: int):
    """Evaluate verdict over instances, preserving order; returns failures."""
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(verdict, instances))
    else:
        results = [verdict(inst) for inst in instances]
    return [r for r in results if r is not None]


def _report(check: str, bench: Workbench, params: dict, instances: int, failures: list, t0: float) -> dict:
    return {
        "format_version": REPORT_FORMAT_VERSION,
        "check": check,
        "p": bench.space.field.p,
        "e": bench.space.field.e,
        "q": bench.q,
        "params": params,
        "instances": instances,
        "failures": failures,
        "pass": not failures,
        "wall_time_ms": int((time.time() - t0) * 1000),
    }


def _cls(mc: ModuleClass) -> list:
    return [list(mc.dim), mc.orbit]


def check_green(bench: Workbench, max_total: int, jobs: int = 1) -> dict:
    t0 = time.time()
    instances = []
    for nu in bench.gradings(max_total):
        pairs = bench.pairs_at(nu)
        instances.extend(itertools.product(pairs, pairs))

    def verdict(inst):
        (M, N), (Mp, Np) = inst
        lhs, rhs = bench.hall.green_raw_sides(M, N, Mp, Np)
        if lhs == rhs:
            return None
        return {
            "M": _cls(M), "N": _cls(N), "Mp": _cls(Mp), "Np": _cls(Np),
            "lhs": bench.render(lhs), "rhs": bench.render(rhs),
        }

    failures = _run(instances, verdict, jobs)
    return _report("green", bench, {"max_total_dim": max_total}, len(instances), failures, t0)


def check_bialgebra(bench: Workbench, max_total: int, jobs: int = 1) -> dict:
    """Comultiplication of a product against the twisted product of
    comultiplications, and agreement with the raw counting identity."""
    t0 = time.time()
    instances = []
    for nu in bench.gradings(max_total):
        pairs = bench.pairs_at(nu)
        for MN in pairs:
            instances.append((MN, pairs))

    def verdict(inst):
        (M, N), pairs = inst
        via_algebra = bench.algebra.bialgebra_check(M, N)
        via_counting = all(bench.hall.green_raw_check(M, N, Mp, Np) for Mp, Np in pairs)
        if via_algebra and via_counting:
            return None
        return {
            "M": _cls(M), "N": _cls(N),
            "bialgebra": via_algebra, "green": via_counting,
            "verdicts_agree": via_algebra == via_counting,
        }

    failures = _run(instances, verdict, jobs)
    return _report("bialgebra", bench, {"max_total_dim": max_total}, len(instances), failures, t0)


def check_rp(bench: Workbench, max_total: int, jobs: int = 1) -> dict:
    """Riedtmann-Peng for every triple, plus integrality of extension counts."""
    t0 = time.time()
    instances = []
    for nu in bench.gradings(max_total):
        Ls = bench.space.classes(nu)
        for M, N in bench.pairs_at(nu):
            for L in Ls:
                instances.append((M, N, L))

    def verdict(inst):
        M, N, L = inst
        counts = bench.hall.ext_counts(M, N)  # raises on non-integral values
        ok = bench.hall.riedtmann_peng_check(M, N, L)
        if ok:
            return None
        g = bench.hall.hall_number(M, N, L)
        ext_l = counts[L][1] if L in counts else Fraction(0)
        return {
            "M": _cls(M), "N": _cls(N), "L": _cls(L),
            "hall_number": g, "ext_route": bench.render(ext_l),
        }

    failures = _run(instances, verdict, jobs)
    return _report("rp", bench, {"max_total_dim": max_total}, len(instances), failures, t0)


def check_euler(bench: Workbench, max_total: int, jobs: int = 1) -> dict:
    """Hom minus Ext against the form, and the fiber partition identity."""
    from hallq.quiver import euler_form

    t0 = time.time()
    instances = bench.all_pairs(max_total)

    def verdict(inst):
        M, N = inst
        sp = bench.space
        hom = sp.hom_dim(M, N)
        ext = sp.ext_dim(M, N)
        form = euler_form(sp.quiver, M.dim, N.dim)
        counts = bench.hall.fiber_census(M, N)
        fiber = bench.hall.fiber_size(M, N)
        part_ok = int(counts.sum()) == fiber
        ext_sum = sum(v for _, v in bench.hall.ext_counts(M, N).values())
        ext_ok = ext_sum == sp.q**ext
        if hom - ext == form and part_ok and ext_ok:
            return None
        return {
            "M": _cls(M), "N": _cls(N), "hom": hom, "ext": ext, "form": form,
            "fiber_partition": part_ok, "ext_total": ext_ok,
        }

    failures = _run(instances, verdict, jobs)
    return _report("euler", bench, {"max_total_dim": max_total}, len(instances), failures, t0)


def check_phi(bench: Workbench, max_total: int, jobs: int = 1) -> dict:
    """Rescaling compatibility: products and coproducts, both routes."""
    t0 = time.time()
    mult_instances = [("mult", MN) for MN in bench.all_pairs(max_total)]
    comult_instances = [
        ("comult", L) for nu in bench.gradings(max_total) for L in bench.space.classes(nu)
    ]
    instances = mult_instances + comult_instances

    def verdict(inst):
        kind, payload = inst
        if kind == "mult":
            M, N = payload
            if bench.functions.phi_mult_compat(bench.algebra, M, N):
                return None
            return {"scope": "mult", "M": _cls(M), "N": _cls(N)}
        L = payload
        if bench.functions.phi_comult_compat(bench.algebra, L):
            return None
        return {"scope": "comult", "L": _cls(L)}

    failures = _run(instances, verdict, jobs)
    return _report("phi", bench, {"max_total_dim": max_total}, len(instances), failures, t0)


def check_indres(bench: Workbench, max_total: int, jobs: int = 1, oracle_group_bound: int = 1000) -> dict:
    """Cross-checks tying induction and restriction to independent counts.

    Per splitting: the restriction fiber masses, weighted by orbit sizes,
    must partition the direct count of points whose trailing coordinate
    subspace is stable; and on small gradings the literal flag
    enumeration must reproduce hall_number times the group orders.
    """
    t0 = time.time()
    sp = bench.space
    instances = []
    for nu in bench.gradings(max_total):
        for nu1, nu2 in splittings(sp.orbits, nu):
            instances.append((nu, nu1, nu2))

    def verdict(inst):
        nu, nu1, nu2 = inst
        mid_tab = sp.orbit_table(nu)
        # direct scan: points with the trailing graded subspace stable
        direct = [0] * mid_tab.n_orbits
        lay = sp.layout(nu)
        qv = sp.quiver
        for code in range(lay.total):
            mats = lay.decode(sp.field, code)
            ok = True
            for slot, m in zip(lay.slots, mats):
                s, t = qv.source(slot.arrow), qv.target(slot.arrow)
                if m[: nu1[t], nu1[s]:].any():
                    ok = False
                    break
            if ok:
                direct[int(mid_tab.orbit_of_code[code])] += 1
        # fiber route, weighted by orbit sizes of the split classes
        via_fiber = [0] * mid_tab.n_orbits
        for M in sp.classes(nu1):
            szm = int(sp.orbit_table(nu1).sizes[M.orbit])
            for N in sp.classes(nu2):
                szn = int(sp.orbit_table(nu2).sizes[N.orbit])
                counts = bench.hall.fiber_census(M, N)
                for k in range(mid_tab.n_orbits):
                    via_fiber[k] += szm * szn * int(counts[k])
        if direct != via_fiber:
            return {"grading": list(nu), "splitting": [list(nu1), list(nu2)],
                    "direct": direct, "fiber_route": via_fiber}
        # flag oracle on small group gradings
        if sp.group_order(nu1) * sp.group_order(nu2) <= oracle_group_bound:
            for L in sp.classes(nu):
                for M, N, g in bench.hall.submodules(L, nu2):
                    expect = g * sp.group_order(nu1) * sp.group_order(nu2)
                    got = bench.hall.flag_count(L, nu2, M, N)
                    if got != expect:
                        return {"grading": list(nu), "L": _cls(L), "M": _cls(M),
                                "N": _cls(N), "flag_count": got, "expected": expect}
        return None

    failures = _run(instances, verdict, jobs)
    return _report("indres", bench, {"max_total_dim": max_total}, len(instances), failures, t0)


def check_greenfn(bench: Workbench, max_total: int, jobs: int = 1) -> dict:
    """Function-level coproduct of an induction versus the twisted product."""
    t0 = time.time()
    instances = bench.all_pairs(max_total)

    def verdict(inst):
        M, N = inst
        if bench.functions.green_fn_check(M, N):
            return None
        return {"M": _cls(M), "N": _cls(N)}

    failures = _run(instances, verdict, jobs)
    return _report("greenfn", bench, {"max_total_dim": max_total}, len(instances), failures, t0)


def check_serre(bench: Workbench, jobs: int = 1) -> dict:
    t0 = time.time()
    n_orbits = len(bench.space.orbits.vertex_orbits)
    instances = [(i, j) for i in range(n_orbits) for j in range(n_orbits) if i != j]

    def verdict(inst):
        i, j = inst
        if bench.algebra.serre_check(i, j):
            return None
        return {"i_orbit": i, "j_orbit": j}

    failures = _run(instances, verdict, jobs)
    return _report("serre", bench, {}, len(instances), failures, t0)


def check_shift(bench: Workbench, samples: int = 500, seed: int = 0, max_entry: int = 4, jobs: int = 1) -> dict:
    """The dimension-shift identity over random invariant source tuples."""
    t0 = time.time()
    ob = bench.space.orbits
    qv = bench.space.quiver
    rng = random.Random(seed)
    reps = ob.vertex_reps

    def rand_vec(bound_per_orbit=None):
        nu = [0] * qv.n_vertices
        for k, r in enumerate(reps):
            hi = max_entry if bound_per_orbit is None else bound_per_orbit[k]
            v = rng.randint(0, hi)
            for i in range(qv.n_vertices):
                if ob.rep_v[i] == r:
                    nu[i] = v
        return tuple(nu)

    instances = []
    for _ in range(samples):
        alpha = rand_vec()
        beta = rand_vec()
        gamma = vec_add(alpha, beta)
        alpha_p = rand_vec([gamma[r] for r in reps])
        beta_p = tuple(g - a for g, a in zip(gamma, alpha_p))
        instances.append((alpha, beta, alpha_p, beta_p))

    def verdict(inst):
        alpha, beta, alpha_p, beta_p = inst
        lams = enumerate_lambda(ob, alpha, beta, alpha_p, beta_p)
        bad = [lam for lam in lams if not shift_identity_check(qv, alpha, beta, alpha_p, beta_p, lam)]
        if not bad:
            return None
        return {"tuple": [list(v) for v in inst], "failing_lambdas": [[list(x) for x in lam] for lam in bad]}

    failures = _run(instances, verdict, jobs)
    params = {"samples": samples, "seed": seed, "max_entry": max_entry}
    return _report("shift", bench, params, len(instances), failures, t0)


CHECKS = {
    "green": check_green,
    "bialgebra": check_bialgebra,
    "rp": check_rp,
    "euler": check_euler,
    "phi": check_phi,
    "indres": check_indres,
    "greenfn": check_greenfn,
    "serre": check_serre,
    "shift": check_shift,
}
