"""Root datum and Weyl group combinatorics against independent oracles."""

import itertools

from propiwahori.presets import load_preset
from propiwahori.roots import length_by_inversions, length_formula, dot, vneg


def gl(n, p=5):
    return load_preset(f"gl{n}", p=p).datum


def test_act_simple_reflection_negates_root():
    d = gl(3)
    W = d.W
    for s, a in enumerate(d.datum.simple_roots):
        assert W.act_root(W.simple(s), a) == vneg(a)


def test_identity_acts_trivially():
    d = gl(3)
    for v in [(1, 0, 0), (2, -1, 3)]:
        assert d.W.act(0, v) == v


def test_gl3_action_matrix_oracle():
    # s1 s2 (alpha_1) = alpha_2, checked by permutation-matrix arithmetic
    d = gl(3)
    W = d.W
    w = W.from_word((0, 1))  # s1 then s2 (0-indexed simples)
    a1 = d.datum.simple_roots[0]
    # oracle: roots of gl3 are e_i - e_j; w acts by the permutation matrices
    # (1 2) then (2 3); as a composite, e1-e2 -> s1 s2 applied left to right
    perm = {0: 0, 1: 1, 2: 2}
    for t in [(0, 1), (1, 2)][::-1]:
        perm = {k: (t[1] if v == t[0] else t[0] if v == t[1] else v) for k, v in perm.items()}
    vec = [0, 0, 0]
    vec[perm[0]] += 1
    vec[perm[1]] -= 1
    assert W.act_root(w, a1) == tuple(vec) == d.datum.simple_roots[1]


def test_length_zero_and_reduced_words():
    d = gl(3)
    W = d.W
    zero = (0, 0, 0)
    for wi in range(W.size):
        assert length_formula(d.datum, W, zero, wi) == W.length[wi] == len(W.word[wi])


def test_length_formula_vs_inversion_oracle_gl2():
    d = gl(2)
    W = d.W
    assert length_formula(d.datum, W, (1, 0), W.simple(0)) == 0
    assert length_formula(d.datum, W, (1, 0), 0) == 1
    for lam in itertools.product(range(-3, 4), repeat=2):
        for wi in range(W.size):
            assert length_formula(d.datum, W, lam, wi) == length_by_inversions(
                d.datum, W, lam, wi
            )


def test_length_formula_vs_inversion_oracle_gl3():
    d = gl(3, p=3)
    W = d.W
    for lam in itertools.product(range(-2, 3), repeat=3):
        for wi in range(W.size):
            assert length_formula(d.datum, W, lam, wi) == length_by_inversions(
                d.datum, W, lam, wi
            )


def exhaustive_subword_leq(W, a, b):
    """Oracle: a <= b iff some reduced word of a is a subword of word(b)."""
    word_b = W.word[b]
    la = W.length[a]
    for positions in itertools.combinations(range(len(word_b)), la):
        if W.from_word([word_b[i] for i in positions]) == a:
            # the chosen subword must itself be reduced, i.e. of length la
            return True
    return False


def test_bruhat_order_gl3():
    d = gl(3)
    W = d.W
    w0 = W.w0
    s1, s2 = W.simple(0), W.simple(1)
    assert W.bruhat_leq(0, w0)
    assert W.bruhat_leq(s1, w0) and W.bruhat_leq(s2, w0)
    assert not W.bruhat_leq(w0, s1)
    for a in range(W.size):
        for b in range(W.size):
            assert W.bruhat_leq(a, b) == exhaustive_subword_leq(W, a, b)


def test_delta_w():
    d = gl(3)
    W = d.W
    assert W.delta_w(0) == frozenset({0, 1})
    assert W.delta_w(W.w0) == frozenset()
    # s1(alpha_1) < 0, s1(alpha_2) > 0 => Delta_{s1} = {alpha_2}
    assert W.delta_w(W.simple(0)) == frozenset({1})


def test_min_coset_reps():
    d = gl(3)
    W = d.W
    assert W.min_coset_reps({0, 1}) == [0]
    assert len(W.min_coset_reps(set())) == W.size
    reps = W.min_coset_reps({0})
    assert len(reps) == 3
    # minimal lengths are additive across the factorization
    for w1 in reps:
        for w2 in W.subgroup_elements({0}):
            assert W.length[W.mul(w1, w2)] == W.length[w1] + W.length[w2]


def test_longest_elements():
    d = gl(3)
    W = d.W
    assert W.longest_element(set()) == 0
    w_max = W.longest_element({0, 1})
    assert W.length[w_max] == 3 and w_max == W.w0
    # Delta_{w_Delta w_Theta} = Theta
    for theta in [set(), {0}, {1}, {0, 1}]:
        w = W.mul(W.w0, W.longest_element(theta))
        assert W.delta_w(w) == frozenset(theta)
    # maximality of w_Delta w_Theta among {w | Delta_w = Theta}, by exhaustion
    for theta in [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})]:
        top = W.mul(W.w0, W.longest_element(theta))
        for wi in range(W.size):
            if W.delta_w(wi) == theta:
                assert W.bruhat_leq(wi, top)


def test_dominance_facet():
    d = gl(2)
    W = d.W
    w, theta = W.dominance_facet((0, 0))
    assert w == 0 and theta == frozenset({0})
    w, theta = W.dominance_facet((1, 0))
    assert w == 0 and theta == frozenset()
    w, theta = W.dominance_facet((0, 1))
    assert w == W.simple(0) and theta == frozenset()
    d3 = gl(3)
    for v in itertools.product(range(-2, 3), repeat=3):
        w, theta = d3.W.dominance_facet(v)
        x = d3.W.act(d3.W.inverse[w], v)
        assert all(dot(x, a) >= 0 for a in d3.datum.simple_roots)
        assert {s for s, a in enumerate(d3.datum.simple_roots) if dot(x, a) == 0} == set(theta)
