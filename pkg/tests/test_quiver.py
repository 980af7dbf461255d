import itertools
import random

import pytest

from hallq.quiver import (
    GradingMismatch,
    HasLoop,
    NotAdmissible,
    NotEquivariant,
    QuiverWithAut,
    enumerate_lambda,
    euler_form,
    invariant_vectors,
    shift_identity_check,
    splittings,
    symmetric_form,
    validate,
    vec_add,
)
from conftest import a2_quiver, a3_fold_quiver, kronecker_quiver


def test_a2_validation():
    ob = validate(a2_quiver())
    assert ob.vertex_orbits == ((0,), (1,))
    assert ob.arrow_orbits == ((0,),)
    assert ob.lcm_n == 1


def test_a3_fold_validation():
    ob = validate(a3_fold_quiver())
    assert ob.vertex_orbits == ((0, 2), (1,))
    assert ob.d_v == (2, 1, 2)
    assert len(ob.arrow_orbits) == 1 and ob.d_h[0] == 2
    assert ob.lcm_n == 2
    assert ob.quiver.order_n() == 2


def test_loop_rejected():
    q = QuiverWithAut.build(["1", "2"], [("a", "1", "1")])
    with pytest.raises(HasLoop) as exc:
        validate(q)
    assert "a" in str(exc.value)


def test_equivariance_rejected():
    # swapping vertices but fixing the single arrow cannot commute with s,t
    q = QuiverWithAut.build(["1", "2"], [("a", "1", "2")], {"1": "2", "2": "1"})
    with pytest.raises(NotEquivariant):
        validate(q)


def test_admissibility_rejected():
    # 2-cycle quiver with the flip: equivariant, but endpoints share an orbit
    q = QuiverWithAut.build(
        ["1", "2"],
        [("a", "1", "2"), ("b", "2", "1")],
        {"1": "2", "2": "1"},
        {"a": "b", "b": "a"},
    )
    with pytest.raises(NotAdmissible) as exc:
        validate(q)
    assert "same vertex orbit" in str(exc.value)


def test_euler_form_examples():
    a2 = a2_quiver()
    assert euler_form(a2, (1, 0), (0, 1)) == -1
    a3f = a3_fold_quiver()
    assert euler_form(a3f, (1, 0, 1), (0, 1, 0)) == -2
    assert euler_form(a3f, (2, 3, 2), (0, 0, 0)) == 0


def test_symmetric_form_examples():
    a2 = a2_quiver()
    assert symmetric_form(a2, (1, 0), (0, 1)) == -1
    assert symmetric_form(a2, (1, 0), (1, 0)) == 2
    a3f = a3_fold_quiver()
    # simple orbit vector of size d with no internal arrows pairs to 2d
    assert symmetric_form(a3f, (1, 0, 1), (1, 0, 1)) == 4
    assert symmetric_form(a3f, (0, 0, 0), (1, 1, 1)) == 0


def test_euler_form_bilinear_random():
    rng = random.Random(0)
    q = a3_fold_quiver()
    for _ in range(100):
        u = tuple(rng.randrange(4) for _ in range(3))
        v = tuple(rng.randrange(4) for _ in range(3))
        w = tuple(rng.randrange(4) for _ in range(3))
        assert euler_form(q, vec_add(u, v), w) == euler_form(q, u, w) + euler_form(q, v, w)
        assert euler_form(q, w, vec_add(u, v)) == euler_form(q, w, u) + euler_form(q, w, v)


def test_forms_invariant_under_automorphism():
    q = a3_fold_quiver()

    def act(nu):
        return tuple(nu[q.aut_v[i]] for i in range(3))

    for u in itertools.product(range(3), repeat=3):
        for v in itertools.product(range(3), repeat=3):
            assert euler_form(q, act(u), act(v)) == euler_form(q, u, v)


def lambda_bruteforce(ob, alpha, beta, alpha_p, beta_p):
    """Exhaustive filter over all invariant quadruples below the total."""
    q = ob.quiver
    gamma = vec_add(alpha, beta)
    cands = [t for t in itertools.product(*[range(g + 1) for g in gamma])]
    inv = [t for t in cands if ob.is_invariant(t)]
    out = set()
    for a1 in inv:
        for b1 in inv:
            a2 = tuple(x - y for x, y in zip(alpha, a1))
            b2 = tuple(x - y for x, y in zip(beta, b1))
            if any(x < 0 for x in a2) or any(x < 0 for x in b2):
                continue
            if vec_add(a1, b1) == alpha_p and vec_add(a2, b2) == beta_p:
                out.add((a1, a2, b1, b2))
    return out


def test_lambda_enumeration_a2_example():
    ob = validate(a2_quiver())
    lams = enumerate_lambda(ob, (1, 0), (0, 1), (1, 0), (0, 1))
    assert lams == [((1, 0), (0, 0), (0, 0), (0, 1))]


def test_lambda_zero_case():
    ob = validate(a2_quiver())
    z = (0, 0)
    assert enumerate_lambda(ob, z, z, z, z) == [(z, z, z, z)]


def test_lambda_sum_constraints_and_bruteforce_count():
    rng = random.Random(1)
    for ob in (validate(a2_quiver()), validate(a3_fold_quiver()), validate(kronecker_quiver())):
        reps = ob.vertex_reps
        n = ob.quiver.n_vertices
        for _ in range(25):
            def rvec(hi):
                nu = [0] * n
                for r in reps:
                    v = rng.randint(0, hi)
                    for i in range(n):
                        if ob.rep_v[i] == r:
                            nu[i] = v
                return tuple(nu)

            alpha, beta = rvec(2), rvec(2)
            gamma = vec_add(alpha, beta)
            ap = tuple(rng.randint(0, g) for g in gamma)
            # make the choice orbit-constant
            ap = tuple(ap[ob.rep_v[i]] for i in range(n))
            bp = tuple(g - a for g, a in zip(gamma, ap))
            lams = enumerate_lambda(ob, alpha, beta, ap, bp)
            for a1, a2, b1, b2 in lams:
                assert vec_add(a1, a2) == alpha
                assert vec_add(b1, b2) == beta
                assert vec_add(a1, b1) == ap
                assert vec_add(a2, b2) == bp
                for v in (a1, a2, b1, b2):
                    assert ob.is_invariant(v)
            assert set(lams) == lambda_bruteforce(ob, alpha, beta, ap, bp)


def test_lambda_grading_mismatch():
    ob = validate(a2_quiver())
    with pytest.raises(GradingMismatch):
        enumerate_lambda(ob, (1, 0), (0, 1), (1, 1), (1, 1))


def shift_sides_oracle(q, alpha, beta, alpha_p, beta_p, lam):
    """Literal transcription of the five shift quantities."""
    a1, a2, b1, b2 = lam
    I = range(q.n_vertices)
    H = [(s, t) for _, s, t in q.arrows]
    M = sum(alpha[i] * beta[i] for i in I) + sum(alpha[s] * beta[t] for s, t in H)
    M -= euler_form(q, alpha_p, beta_p)
    r = sum(a1[s] * a2[t] + a1[s] * b2[t] + b1[s] * b2[t] for s, t in H)
    r += sum(a2[i] * b1[i] for i in I)
    rp = r - sum(a1[s] * a2[t] + b1[s] * b2[t] for s, t in H)
    N = -euler_form(q, a1, a2) - euler_form(q, b1, b2)
    N += sum(a1[i] * b1[i] + a2[i] * b2[i] for i in I)
    N += sum(a1[s] * b1[t] + a2[s] * b2[t] for s, t in H)
    return M - 2 * rp, N - symmetric_form(q, a2, b1)


def test_shift_identity_zero_and_a2():
    a2 = a2_quiver()
    z = (0, 0)
    assert shift_identity_check(a2, z, z, z, z, (z, z, z, z))
    lam = ((1, 0), (0, 0), (0, 0), (0, 1))
    assert shift_identity_check(a2, (1, 0), (0, 1), (1, 0), (0, 1), lam)
    lhs, rhs = shift_sides_oracle(a2, (1, 0), (0, 1), (1, 0), (0, 1), lam)
    assert lhs == rhs


def test_shift_identity_random_sweep_a3_fold():
    q = a3_fold_quiver()
    ob = validate(q)
    rng = random.Random(42)
    reps = ob.vertex_reps
    n = q.n_vertices
    checked = 0
    for _ in range(200):
        def rvec(hi):
            nu = [0] * n
            for r in reps:
                v = rng.randint(0, hi)
                for i in range(n):
                    if ob.rep_v[i] == r:
                        nu[i] = v
            return tuple(nu)

        alpha, beta = rvec(3), rvec(3)
        gamma = vec_add(alpha, beta)
        ap = tuple(rng.randint(0, gamma[ob.rep_v[i]]) for i in range(n))
        ap = tuple(ap[ob.rep_v[i]] for i in range(n))
        bp = tuple(g - a for g, a in zip(gamma, ap))
        for lam in enumerate_lambda(ob, alpha, beta, ap, bp):
            assert shift_identity_check(q, alpha, beta, ap, bp, lam)
            checked += 1
    assert checked > 200


def test_invariant_vectors_and_splittings():
    ob = validate(a3_fold_quiver())
    vecs = invariant_vectors(ob, 3)
    assert (1, 0, 1) in vecs and (1, 1, 1) in vecs
    assert all(v[0] == v[2] for v in vecs)
    assert all(sum(v) <= 3 for v in vecs)
    sp = splittings(ob, (1, 1, 1))
    assert ((1, 0, 1), (0, 1, 0)) in sp
    assert len(sp) == 4
