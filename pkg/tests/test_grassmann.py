import itertools

import pytest

from multiseg import grassmann as G
from multiseg import weyl as W
from multiseg.core import below_set, gamma_truncation, ms, prec_k, sub_multisets, truncate_k

BASE = ms("[1,4]+[2,5]+[3,5]+[4,5]")
SHAPES = [(r, l) for n in range(2, 6) for r in range(1, n) for l in [n - r]]


def test_omega_and_sigma2_examples():
    lam = G.GrPartition.from_omega((1, 0), (2, 1))
    assert lam.parts == (2,) and lam.r == 1 and lam.ell == 3
    assert lam.omega() == ((1, 0), (2, 1))
    assert G.sigma2(lam) == (3,)
    assert G.sigma2(G.GrPartition((0, 0), 2, 3)) == (1, 2)
    assert G.sigma2(G.GrPartition((3, 3), 2, 3)) == (4, 5)


def test_sigma1_examples():
    assert G.sigma1(W.identity(4), 1) == (1,)
    assert G.sigma1(W.from_word([1, 2], 4), 1) == (3,)
    with pytest.raises(ValueError):
        G.sigma1(W.simple(2, 4), 1)


def test_partition_example():
    lam = G.GrPartition((2,), 1, 3)
    assert G.multisegment_of_partition(BASE, lam, 5) == ms("[1,5]+[2,5]+[3,4]+[4,5]")
    assert G.multisegment_of_partition(BASE, G.GrPartition((0,), 1, 3), 5) == BASE


def test_mu_flat_examples():
    mu = G.GrPartition((0, 1), 2, 2)
    assert G.sigma2(mu) == (1, 3)
    assert G.sigma2(G.mu_flat(mu, 1)) == (3,)
    assert G.mu_flat(mu, 2) == mu


@pytest.mark.parametrize("r,l", SHAPES)
def test_sigma2_is_an_order_isomorphism(r, l):
    parts = G.partitions_in_box(l, r)
    idx = [G.sigma2(p) for p in parts]
    assert sorted(idx) == G.row_indices(r, r + l)
    for p, x in zip(parts, idx):
        assert G.sigma2_inverse(x, r + l) == p
    for p, q in itertools.product(parts, repeat=2):
        assert G.partition_leq(p, q) == G.dominates(G.sigma2(q), G.sigma2(p))


@pytest.mark.parametrize("r,l", SHAPES)
def test_phi_matches_row_indexing(r, l):
    gb = G.GrassmannBase.packed(r, l)
    pb = W.ParabolicBase(gb.begins, tuple(s.end for s in sorted(gb.multisegment(), key=lambda s: s.begin)))
    assert pb.J == G.grassmann_J(r, l)
    for w in pb.reps():
        assert pb.phi(w) == gb.of_row_index(G.sigma1(w, r))


@pytest.mark.parametrize("r,l", SHAPES)
def test_below_set_is_an_upper_set_of_partitions(r, l):
    gb = G.GrassmannBase.packed(r, l)
    parts = G.partitions_in_box(l, r)
    for lam in parts:
        want = {gb.of_partition(mu) for mu in parts if G.partition_leq(lam, mu)}
        assert below_set(gb.of_partition(lam)) == want


@pytest.mark.parametrize("r,l", [(1, 2), (1, 3), (2, 2), (2, 3), (1, 4)])
def test_truncations_and_containment(r, l):
    gb = G.GrassmannBase.packed(r, l)
    n = r + l
    for lam in G.partitions_in_box(l, r):
        a = gb.of_partition(lam)
        x = G.sigma2(lam)
        got = {gamma_truncation(a, gb.k, g) for g in sub_multisets(a.ending_at(gb.k))}
        want = {gb.of_row_index(y) for r1 in range(r, n + 1) for y in G.row_indices(r1, n) if G.contains(y, x)}
        assert got == want
        for r1 in range(r, n + 1):
            for y in G.row_indices(r1, n):
                assert prec_k(gb.of_row_index(y), a, gb.k) == G.succeq(y, x, n)


@pytest.mark.parametrize("r,l", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_sharp_lift_truncates_back(r, l):
    gb = G.GrassmannBase.packed(r, l)
    base = gb.multisegment()
    for r0 in range(1, l + 1):
        for mu in G.partitions_in_box(l - r0, r + r0):
            sh = G.sharp_lift(mu, base, gb.k)
            assert truncate_k(sh, gb.k + 1) == gb.of_partition(G.mu_flat(mu, r))
            assert sh.n_ending(gb.k) == r0


def test_running_example_table():
    rows = G.orbit_table(BASE, 5)
    assert len(rows) == 11
    for row in rows:
        assert row.orbit_count >= 1
        assert row.agree, row


@pytest.mark.parametrize("r,l", [(1, 2), (2, 2), (1, 3), (0, 3)])
def test_orbit_count_never_exceeds_coefficient(r, l):
    gb = G.GrassmannBase.packed(r, l)
    for row in G.orbit_table(gb.multisegment(), gb.k):
        assert 1 <= row.orbit_count <= row.derivative


def test_shape_errors():
    with pytest.raises(ValueError):
        G.GrassmannBase.of(ms("[1,3]+[2,5]"), 5)
    with pytest.raises(ValueError):
        G.GrPartition((2, 1), 2, 3)
