"""The pro-p extended affine Weyl group: group law, lifts, mu, subgroups."""

import itertools
import random

import pytest

from propiwahori.presets import load_preset
from propiwahori.propweyl import PPW
from propiwahori.roots import dot, vscale


def gl2(p=5):
    return load_preset("gl2", p=p).datum


def gl3(p=3):
    return load_preset("gl3", p=p).datum


def pgl2(p=5):
    return load_preset("pgl2", p=p).datum


def random_elements(d, rng, n, lam_range=2):
    out = []
    for _ in range(n):
        t = tuple(rng.randrange(o) for o in d.zk_orders)
        lam = tuple(rng.randrange(-lam_range, lam_range + 1) for _ in range(d.rank))
        w = rng.randrange(d.W.size)
        out.append(PPW(t, lam, w))
    return out


def test_group_law_associative_and_inverse():
    # >= 10^4 random triples across the presets
    for d, triples in ((gl2(), 7000), (gl3(), 3000), (pgl2(), 2000)):
        rng = random.Random(5)
        for _ in range(triples):
            a, b, c = random_elements(d, rng, 3)
            assert d.mul(d.mul(a, b), c) == d.mul(a, d.mul(b, c))
        for a in random_elements(d, rng, 25):
            assert d.mul(a, d.inv(a)) == d.one
            assert d.mul(d.inv(a), a) == d.one


def test_nu_is_homomorphism_killing_torsion():
    d = gl3()
    rng = random.Random(9)
    for a, b in zip(random_elements(d, rng, 20), random_elements(d, rng, 20)):
        ab = d.mul(a, b)
        assert ab.lam == tuple(
            x + y for x, y in zip(a.lam, d.W.act(a.w, b.lam))
        )
    t = d.from_torsion((1, 0, 2))
    assert d.nu(t) == (0, 0, 0)


def test_lengths_invariant():
    d = gl2()
    rng = random.Random(13)
    for a in random_elements(d, rng, 40, lam_range=3):
        assert d.length(a) == d.length(d.inv(a))
        t = d.from_torsion((2, 1))
        assert d.length(d.mul(t, a)) == d.length(a)


def test_ns_squared_gl2():
    d = gl2(p=5)
    ns = d.lift_w(d.W.simple(0))
    sq = d.mul(ns, ns)
    # torsion part (-1,-1): exponent (p-1)/2 on each generator
    assert sq == PPW((2, 2), (0, 0), 0)
    # n_s^4 = (n_s^2)^2 and s-invariance
    assert d.mul(sq, sq) == d._ppw_pow(d.from_torsion(sq.t), 2)
    assert d.act_torsion(d.W.simple(0), sq.t) == sq.t


def test_conjugation_nu_equivariance():
    d = gl2()
    ns = d.lift_w(d.W.simple(0))
    lam = d.from_lattice((1, 0))
    x = d.conj(ns, lam)
    assert x == PPW((0, 0), (0, 1), 0)
    assert d.nu(x) == d.W.act(d.W.simple(0), d.nu(lam))


def test_lift_nw_braid_independence():
    d = gl3()
    W = d.W
    # both reduced words of the longest element give the same lift product
    a = d.one
    for s in (0, 1, 0):
        a = d.mul_simple(a, s)
    b = d.one
    for s in (1, 0, 1):
        b = d.mul_simple(b, s)
    assert a == b == d.lift_w(W.w0)
    assert d.lift_w(0) == d.one
    for wi in range(W.size):
        z = d.one
        for s in W.word[wi]:
            z = d.mul_simple(z, s)
        assert z == d.lift_w(wi)


def test_mu_properties():
    for d in (gl2(), gl3()):
        for s in range(d.datum.nsimple):
            ac = d.datum.coroot(d.datum.simple_roots[s])
            assert d.mu(s, 0) == d.one
            for k in range(-3, 4):
                assert d.nu(d.mu(s, k)) == vscale(ac, k)
            ns = d.lift_w(d.W.simple(s))
            for k in range(0, 4):
                # n_s^{-1}(mu(k)) = mu(-k) for k >= 0
                assert d.conj(d.inv(ns), d.mu(s, k)) == d.mu(s, -k)
            # mu_{n_s^{-1}}(k) = mu_{n_s}(k) n_s^{-2}
            for k in range(-2, 3):
                expect = d.mul(d.mu(s, k), d.inv(d.mul(ns, ns)))
                assert d.mu_inv_lift(s, k) == expect


def test_z_subgroup_gl2():
    d = gl2(p=5)
    gens = d.z_subgroup((1, -1), 0)
    elems = d.subgroup_elements(gens)
    # {(x, x^{-1})}: exponent vectors (a, -a)
    assert sorted(elems) == sorted({(a, (-a) % 4) for a in range(4)})
    # invariance under s (needed for n_s . c_{n_s} = c_{n_s})
    for t in elems:
        assert d.act_torsion(d.W.simple(0), t) in elems


def test_is_M_signed():
    d = gl2()
    assert d.is_M_signed(d.one, set(), "+")
    assert d.is_M_signed(d.one, set(), "-")
    # M = T: lambda=(0,1) pairs to -1 with the positive root => M-positive
    x = d.from_lattice((0, 1))
    assert d.is_M_signed(x, set(), "+")
    assert not d.is_M_signed(x, set(), "-")
    # products of M-negative elements stay M-negative
    rng = random.Random(3)
    d3 = gl3()
    theta = {0}
    negs = [
        a
        for a in random_elements(d3, rng, 200)
        if a.w in d3.W.subgroup_elements(theta) and d3.is_M_signed(a, theta, "-")
    ]
    for a, b in zip(negs, negs[1:]):
        assert d3.is_M_signed(d3.mul(a, b), theta, "-")


def test_bruhat_1_basics():
    d = gl2()
    rng = random.Random(21)
    els = random_elements(d, rng, 15)
    for a in els:
        assert d.bruhat_leq_1(a, a)
    # pure torsion t with t not in Lambda'(1): t <= identity fails
    t = d.from_torsion((1, 0))
    assert not d.lambda_prime_membership(t)
    assert not d.bruhat_leq_1(t, d.one) and not d.bruhat_leq_1(d.one, t)


def test_bruhat_1_closure_under_M_negativity():
    # if w~ in W~_M(1) is M-negative and v~ <= w~ in W~_M(1) then v~ is
    # M-negative; bounded exhaustive check in the Levi's own Bruhat order
    d = gl3(p=3)
    theta = {0}
    sub = d.subsystem(theta)
    wm = set(d.W.subgroup_elements(theta))
    ball = []
    for lam in itertools.product(range(-1, 2), repeat=3):
        for w in wm:
            ball.append(PPW((0, 0, 0), lam, w))
    negs = [x for x in ball if d.is_M_signed(x, theta, "-")]
    for b in negs:
        if sub.length(b) > 3:
            continue
        for a in ball:
            if sub.bruhat_leq_1(a, b):
                assert d.is_M_signed(a, theta, "-")


def test_lambda_prime_membership():
    d = gl2(p=5)
    assert d.lambda_prime_membership(d.one)
    # alpha-check translation with the torsion produced by mu generators
    g = d.mu_inv_lift(0, -1)
    assert d.lambda_prime_membership(d.inv(g))
    assert d.lambda_prime_membership(d.mul(g, g))
    # pure alpha-check translation with trivial torsion: membership depends on
    # whether the residual torsion lies in the generated subgroup
    ac = d.datum.coroot((1, -1))
    lam = d.from_lattice(ac)
    z = d.mul(lam, g)  # g has nu = -alpha-check; z is pure torsion
    assert z.w == 0 and all(v == 0 for v in z.lam)
    gens = d.lambda_prime_s_torsion_gens(0)
    expected = z.t in set(d.subgroup_elements(gens))
    assert d.lambda_prime_membership(lam) == expected
    # pure torsion membership = subgroup membership, by BFS closure oracle
    sub = set(d.subgroup_elements(gens))
    for t in itertools.product(range(4), repeat=2):
        assert d.lambda_prime_membership(d.from_torsion(t)) == (t in sub)


def test_sl2_like_rejected():
    with pytest.raises(ValueError, match="2Z"):
        load_preset("sl2-like", p=5)


def test_length_lemma_bound_and_equality():
    # l(lambda) >= l(mu) + 2 min(k, <nu(lambda),alpha> - k), with the stated
    # equality criterion, swept over small lambda for GL2 and GL3
    for d in (gl2(), gl3()):
        alpha_list = d.datum.positive_roots
        W = d.W
        rng_range = 3 if d.rank == 2 else 2
        for lam in itertools.product(range(-rng_range, rng_range + 1), repeat=d.rank):
            for alpha in alpha_list:
                n = dot(lam, alpha)
                if n <= 0:
                    continue
                ac = d.datum.coroot(alpha)
                for k in range(0, n + 1):
                    mu = tuple(x - k * y for x, y in zip(lam, ac))
                    l_lam = d.length(d.from_lattice(lam))
                    l_mu = d.length(d.from_lattice(mu))
                    gap = l_lam - l_mu - 2 * min(k, n - k)
                    assert gap >= 0
                    simple_case = any(
                        all(dot(W.act(w, lam), a) >= 0 for a in d.datum.simple_roots)
                        and W.act_root(w, alpha) in d.datum.simple_roots
                        for w in range(W.size)
                    )
                    expect_eq = k == 0 or k == n or simple_case
                    assert (gap == 0) == expect_eq
