import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcchd import ring as rg
from fcchd.errors import BudgetExceeded, ParameterError
from fcchd.ring import Ring, WeightKind, ball_volume, entropy_ball_bound, hom_weight_scalar


def brute_volume(r, d, ring):
    return sum(1 for v in itertools.product(range(ring.q), repeat=r) if rg.weight(v, ring) <= d)


@pytest.mark.parametrize("x,l,expected", [(0, 3, 0), (4, 3, 2), (3, 3, 1), (1, 1, 2)])
def test_scalar_weight_examples(x, l, expected):
    assert hom_weight_scalar(x, Ring(l)) == expected


def test_scalar_weight_rejects_out_of_range():
    with pytest.raises(ParameterError):
        hom_weight_scalar(8, Ring(3))
    with pytest.raises(ParameterError):
        Ring(0)
    with pytest.raises(ParameterError):
        Ring(17)


@pytest.mark.parametrize("l", range(1, 9))
def test_mean_weight_is_one(l):
    ring = Ring(l)
    assert sum(hom_weight_scalar(x, ring) for x in range(ring.q)) == ring.q


def test_vector_weights():
    r3 = Ring(3)
    assert rg.weight((1, 4, 0), r3) == 3
    assert rg.weight((0, 0, 0, 0), Ring(2), "rosenbloom_tsfasman") == 0
    assert rg.weight((1, 0, 2, 0, 0), Ring(2), WeightKind.ROSENBLOOM_TSFASMAN) == 3
    assert rg.weight((1, 0, 2, 0, 0), Ring(2), "hamming") == 2


def test_distance_examples():
    r2 = Ring(2)
    assert rg.distance((0,), (2,), r2) == 2
    # u - v = (3, 2): weights 1 and 2
    assert rg.distance((0, 1), (1, 3), r2) == 3
    with pytest.raises(ParameterError):
        rg.distance((0, 1), (1,), r2)


vec_pair = st.integers(1, 4).flatmap(
    lambda l: st.integers(0, 6).flatmap(
        lambda n: st.tuples(st.just(l),
                            *[st.lists(st.integers(0, 2 ** l - 1), min_size=n, max_size=n) for _ in range(3)])))


@settings(max_examples=300, deadline=None)
@given(vec_pair)
def test_metric_properties(data):
    l, u, v, w = data
    ring = Ring(l)
    d = lambda a, b: rg.distance(a, b, ring)
    assert d(u, v) == d(v, u) >= 0
    assert (d(u, v) == 0) == (tuple(u) == tuple(v))
    assert d(u, w) <= d(u, v) + d(v, w)
    ham = rg.distance(u, v, ring, "hamming")
    assert ham <= d(u, v) <= 2 * ham
    # translation invariance
    assert d(rg.add(u, w, ring), rg.add(v, w, ring)) == d(u, v)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.lists(st.integers(0, 15), min_size=1, max_size=5), st.data())
def test_unit_scaling_preserves_weight(l, coords, data):
    ring = Ring(l)
    u = tuple(c % ring.q for c in coords)
    units = [data.draw(st.sampled_from([x for x in range(ring.q) if x % 2 == 1])) for _ in u]
    assert rg.weight(tuple(a * b % ring.q for a, b in zip(u, units)), ring) == rg.weight(u, ring)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_ball_volume_matches_enumeration(l):
    ring = Ring(l)
    for r in range(0, 4):
        for d in range(-1, 2 * r + 1):
            assert ball_volume(r, d, ring) == brute_volume(r, d, ring), (l, r, d)


def test_ball_volume_examples_and_conventions():
    r2 = Ring(2)
    assert ball_volume(1, 0, r2) == 1
    assert ball_volume(1, 1, r2) == 3
    assert ball_volume(2, 2, r2) == 11
    assert ball_volume(3, -1, r2) == 0
    assert ball_volume(4, 8, r2) == 4 ** 4 == ball_volume(4, 20, r2)
    with pytest.raises(ParameterError):
        ball_volume(2, -2, r2)


def test_ball_volume_large_is_exact():
    ring = Ring(16)
    assert ball_volume(40, 80, ring) == ring.q ** 40
    v = [ball_volume(40, d, ring) for d in range(81)]
    assert all(a <= b for a, b in zip(v, v[1:]))


def test_entropy_bound_examples():
    r2 = Ring(2)
    assert entropy_ball_bound(0, 1.0, 1.0, r2) == 1.0
    assert entropy_ball_bound(1, 1.0, 1.0, r2) == pytest.approx(math.e + 2 + math.exp(-1))
    assert entropy_ball_bound(2, 1.0, 0.0, r2) == pytest.approx(16)
    with pytest.raises(ParameterError):
        entropy_ball_bound(1, 1.0, -0.5, r2)


@pytest.mark.parametrize("l", [2, 3, 4])
def test_entropy_bound_dominates_volume(l):
    ring = Ring(l)
    for r in range(1, 8):
        for d in range(0, 2 * r + 1):
            for lam in (0.0, 0.25, 0.5, 1.0, 2.0):
                assert ball_volume(r, d, ring) <= entropy_ball_bound(r, d / r, lam, ring) * (1 + 1e-12)


@pytest.mark.parametrize("l", [2, 3, 5])
def test_lambda_one_chain_is_monotone(l):
    ring = Ring(l)
    for r in range(1, 10):
        for d in range(0, 2 * r + 1):
            a, b, c = rg.lambda_one_chain(r, d, ring)
            assert ball_volume(r, d, ring) <= a * (1 + 1e-12)
            assert a <= b * (1 + 1e-12) and b <= c * (1 + 1e-12)


def test_index_round_trip_and_order():
    ring = Ring(2)
    vecs = rg.all_vectors(3, ring)
    assert vecs.shape == (64, 3)
    assert tuple(vecs[1]) == (0, 0, 1) and tuple(vecs[4]) == (0, 1, 0)
    assert (rg.vectors_to_index(vecs, ring) == np.arange(64)).all()


def test_vectors_up_to_weight_dense_and_sparse_agree():
    ring = Ring(3)
    dense = rg.vectors_up_to_weight(3, 3, ring)
    rows = []
    rg._extend_sparse(3, 3, ring, rows)
    assert sorted(map(tuple, dense.tolist())) == sorted(rows)
    w = rg.hom_weights(dense, ring)
    assert (np.diff(w) >= 0).all() and w.max() <= 3
    assert len(dense) == ball_volume(3, 3, ring)


def test_sparse_branch_used_for_long_vectors():
    ring = Ring(4)
    out = rg.vectors_up_to_weight(8, 2, ring)
    assert len(out) == ball_volume(8, 2, ring)
    w = rg.hom_weights(out, ring)
    assert (np.diff(w) >= 0).all()


def test_budget_check():
    with pytest.raises(BudgetExceeded) as exc:
        Ring(4).check_budget(7, 24)
    assert exc.value.budget == 24
    Ring(4).check_budget(6, 24)
