from collections import Counter

import numpy as np
import pytest

from fcchd import ring as rg
from fcchd.channel import (ErrorModel, TrialReport, adversarial_error, random_vector_of_weight, run_experiment,
                           sample_error)
from fcchd.encoders import con1_encoder, con2_encoder, strawman_encoder
from fcchd.errors import ParameterError
from fcchd.functions import make_function
from fcchd.ring import Ring


def chi_square(counts, expected):
    return sum((counts.get(k, 0) - e) ** 2 / e for k, e in expected.items())


def test_zero_radius_gives_zero_vector():
    ring = Ring(3)
    rng = np.random.default_rng(0)
    for mode in ("uniform_ball", "fixed_weight"):
        assert sample_error(5, ErrorModel(mode, 0), ring, rng) == (0,) * 5


def test_uniform_ball_single_symbol():
    ring = Ring(2)
    rng = np.random.default_rng(11)
    model = ErrorModel("uniform_ball", 1)
    draws = Counter(sample_error(1, model, ring, rng)[0] for _ in range(10_000))
    assert set(draws) == {0, 1, 3}
    exp = {x: 10_000 / 3 for x in (0, 1, 3)}
    assert chi_square(draws, exp) < 9.21  # 2 degrees of freedom, 1%


def test_fixed_weight_two_on_one_symbol():
    ring = Ring(2)
    rng = np.random.default_rng(0)
    assert {sample_error(1, ErrorModel("fixed_weight", 2), ring, rng) for _ in range(50)} == {(2,)}
    with pytest.raises(ParameterError):
        random_vector_of_weight(1, 3, ring, rng)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_weight_contracts(l):
    ring = Ring(l)
    rng = np.random.default_rng(l)
    for _ in range(300):
        n = int(rng.integers(1, 7))
        t = int(rng.integers(0, 2 * n + 1))
        e = sample_error(n, ErrorModel("uniform_ball", t), ring, rng)
        assert len(e) == n and rg.weight(e, ring) <= t
        w = int(rng.integers(0, 2 * n + 1))
        if l == 1 and w % 2:
            continue
        e = random_vector_of_weight(n, w, ring, rng)
        assert rg.weight(e, ring) == w


def test_uniform_ball_weight_distribution():
    ring = Ring(2)
    n, t = 3, 2
    rng = np.random.default_rng(2024)
    model = ErrorModel("uniform_ball", t)
    N = 100_000
    draws = Counter(rg.weight(sample_error(n, model, ring, rng), ring) for _ in range(N))
    counts = rg.weight_enumerator(n, ring.l)[: t + 1]
    vol = rg.ball_volume(n, t, ring)
    assert [int(c) for c in counts] == [1, 6, 15] and vol == 22
    exp = {w: N * int(c) / vol for w, c in enumerate(counts)}
    assert chi_square(draws, exp) < 13.82  # 2 degrees of freedom, 0.1%


def test_uniform_within_a_weight_class():
    ring = Ring(2)
    rng = np.random.default_rng(7)
    draws = Counter(random_vector_of_weight(2, 2, ring, rng) for _ in range(15_000))
    brute = [v for v in ((a, b) for a in range(4) for b in range(4)) if rg.weight(v, ring) == 2]
    assert set(draws) == set(brute)
    exp = {v: 15_000 / len(brute) for v in brute}
    assert chi_square(draws, exp) < 20.09  # 5 degrees of freedom, 0.1%


def test_sampling_is_deterministic():
    ring = Ring(3)
    model = ErrorModel("uniform_ball", 4, seed=9)
    a = [sample_error(6, model, ring, np.random.default_rng(9)) for _ in range(3)]
    b = [sample_error(6, model, ring, np.random.default_rng(9)) for _ in range(3)]
    assert a == b
    assert sample_error(6, model, ring) == sample_error(6, model, ring)


def test_error_model_validation():
    with pytest.raises(ParameterError):
        ErrorModel("burst", 1)
    with pytest.raises(ParameterError):
        ErrorModel("uniform_ball", -1)
    with pytest.raises(ParameterError):
        sample_error(3, ErrorModel("adversarial_boundary", 1), Ring(2))


def test_adversary_maximises_score():
    ring = Ring(2)
    rng = np.random.default_rng(0)
    e = adversarial_error(3, 2, ring, lambda v: sum(v), rng)
    # largest coordinate sum among weight <= 2 errors: one 3 and one 3 -> (0, 3, 3) style, sum 6
    assert sum(e) == 6 and rg.weight(e, ring) <= 2
    big = adversarial_error(20, 3, Ring(4), lambda v: v.count(8), rng)
    assert rg.weight(big, Ring(4)) <= 3 and big.count(8) >= 1


def test_fcchd_succeeds_on_every_trial():
    enc = con2_encoder(Ring(2), 7, 1, 5)
    for mode in ("uniform_ball", "fixed_weight"):
        rep = run_experiment(enc, ErrorModel(mode, 1, seed=3), 2000)
        assert rep.trials == 2000 and rep.success_rate == 1.0 and not rep.failures


def test_adversarial_errors_against_con1():
    enc = con1_encoder(Ring(2), 3, 1)
    rep = run_experiment(enc, ErrorModel("adversarial_boundary", 1, seed=1), 64, message_source="exhaustive")
    assert rep.success_rate == 1.0


def test_strawman_is_broken_by_adversary():
    f = make_function("hom_weight", Ring(2), 3)
    rep = run_experiment(strawman_encoder(f, 1), ErrorModel("adversarial_boundary", 1, seed=0), 40)
    assert rep.success_rate < 1.0
    msg, err, got, want = rep.failures[0]
    assert got != want and rg.weight(err, Ring(2)) <= 1


def test_zero_error_budget_always_decodes():
    f = make_function("hom_weight", Ring(2), 3)
    rep = run_experiment(strawman_encoder(f, 0), ErrorModel("uniform_ball", 0), 500)
    assert rep.success_rate == 1.0


def test_exhaustive_source_and_merge():
    enc = con1_encoder(Ring(2), 2, 1)
    a = run_experiment(enc, ErrorModel("uniform_ball", 1, seed=1), 16, message_source="exhaustive")
    b = run_experiment(enc, ErrorModel("uniform_ball", 1, seed=2), 10, decode_mode="exhaustive")
    m = a.merge(b)
    assert m.trials == 26 and m.successes == 26
    assert m.lines()[:4] == ["trials: 26", "successes: 26", "failures: 0", "success_rate: 1.0"]
    assert TrialReport().success_rate == 1.0
    with pytest.raises(ParameterError):
        run_experiment(enc, ErrorModel("uniform_ball", 1), 5, message_source="stream")
    with pytest.raises(ParameterError):
        run_experiment(enc, ErrorModel("uniform_ball", 1), -1)


def test_experiment_is_reproducible():
    f = make_function("hom_weight", Ring(2), 3)
    enc = strawman_encoder(f, 1)
    a = run_experiment(enc, ErrorModel("uniform_ball", 1, seed=5), 300)
    b = run_experiment(enc, ErrorModel("uniform_ball", 1, seed=5), 300)
    assert a.successes == b.successes and a.failures == b.failures
