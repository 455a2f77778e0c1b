import itertools

import pytest

import kl_oracle
from multiseg import weyl as W
from multiseg.core import ms


def test_bruhat_basics():
    e = W.identity(3)
    assert all(W.bruhat_leq(e, x) for x in W.all_perms(3))
    assert not W.bruhat_leq(W.simple(1, 3), W.simple(2, 3))
    for x, y in itertools.product(W.all_perms(4), repeat=2):
        if x != y and W.bruhat_leq(x, y):
            assert not W.bruhat_leq(y, x)


def test_kl_matches_oracle_on_S4():
    for x, y in itertools.product(W.all_perms(4), repeat=2):
        assert W.kl_poly(x, y).to_list() == list(kl_oracle.P(x, y))


def test_kl_matches_oracle_on_S5_sample():
    perms = W.all_perms(5)
    top = W.from_word([2, 1, 3, 2, 4, 3, 2], 5)
    for x in perms[::7]:
        assert W.kl_poly(x, top).to_list() == list(kl_oracle.P(x, top))


def test_known_values():
    s2 = W.simple(2, 4)
    y = W.from_word([2, 1, 3, 2], 4)
    assert W.kl_poly(s2, y).to_list() == [1, 1]
    assert W.kl_poly(y, y).to_list() == [1]
    assert W.kl_poly(y, s2).to_list() == []


def test_short_intervals_and_positivity():
    for n in (4, 5):
        for y in W.all_perms(n):
            for x, p in W.kl_column(y).items():
                poly = W.kl_poly(x, y)
                assert poly.nonnegative()
                d = W.length(y) - W.length(x)
                if x != y:
                    assert poly.degree() <= (d - 1) // 2
                if d <= 2:
                    assert poly.to_list() == [1]


def test_min_coset_reps():
    assert len(W.min_coset_reps([], 3)) == 6
    assert W.min_coset_reps([1, 2], 3) == [W.identity(3)]
    reps = W.min_coset_reps([2, 3], 4)
    assert len(reps) == 4 and W.from_word([1, 2], 4) in reps


def test_phi_map_example():
    base = ms("[1,4]+[2,5]+[3,5]+[4,5]")
    w = W.from_word([1, 2], 4)
    assert W.phi_map([2, 3], w, base) == ms("[1,5]+[2,5]+[3,4]+[4,5]")
    assert W.phi_map([2, 3], W.identity(4), base) == base
    with pytest.raises(ValueError):
        W.phi_map([1], w, base)


def test_parabolic_kl_edge_cases():
    J = frozenset([2, 3])
    for w in W.min_coset_reps(J, 4):
        assert W.parabolic_kl(J, w, w).to_list() == [1]
    with pytest.raises(ValueError):
        W.parabolic_kl(J, W.simple(2, 4), W.identity(4))


def test_split_example():
    a = ms("[1,4]+[2,5]+[3,5]+[4,5]")
    J1, J2, a1, a2 = W.parabolic_J_split(a, 5, 1)
    assert a1 == ms("[1,4]+[2,5]+[3,5]+[4,6]")
    assert a2 == ms("[1,4]+[2,4]+[3,5]+[4,5]")
    assert a2.weight() == a.weight().minus(ms("[5]").weight())
    _, _, _, low = W.parabolic_J_split(a, 5, 3)
    assert low.n_ending(5) == 0


def test_theta_identity_pushforward():
    J = frozenset([2, 3])
    for w in W.min_coset_reps(J, 4):
        col = W.theta_column(J, J, w)
        assert {u: p.to_list() for u, p in col.items()} == {w: [1]}


@pytest.mark.parametrize("n", [3, 4])
def test_theta_for_one_reflection_is_mu(n):
    for i in range(1, n):
        J = frozenset([i])
        for v in W.all_perms(n):
            if W.length(W.left_mul_simple(i, v)) < W.length(v):
                continue
            for w in W.min_coset_reps(J, n):
                assert W.theta_at_one(J, frozenset(), w, v) == W.mu(W.left_mul_simple(i, w), v)


def test_theta_is_nonnegative():
    J = frozenset([2, 3])
    J1 = frozenset([3])
    for t in W.min_coset_reps(J1, 4):
        for p in W.theta_column(J, J1, t).values():
            assert p.nonnegative()


def test_perm_text_roundtrip():
    x = (3, 1, 4, 2)
    assert W.parse_perm(W.fmt_perm(x)) == x
    assert W.parse_perm("3,1,4,2") == x
    assert W.parse_J(W.fmt_J([1, 3])) == frozenset([1, 3])
