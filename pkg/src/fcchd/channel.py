"""Errors of bounded homogeneous weight and encode -> corrupt -> decode experiments."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ring as rg
from .encoders import FcchdEncoder, decode_batch
from .errors import ParameterError
from .ring import Ring

MODES = ("uniform_ball", "fixed_weight", "adversarial_boundary")
EXHAUSTIVE_ADVERSARY_CAP = 1 << 14


@dataclass(frozen=True)
class ErrorModel:
    mode: str
    t: int
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParameterError(f"unknown error mode {self.mode!r}; expected one of {MODES}")
        if self.t < 0:
            raise ParameterError("error weight t must be >= 0")


@dataclass
class TrialReport:
    trials: int = 0
    successes: int = 0
    failures: list = field(default_factory=list)  # (message, error, decoded, expected)
    wall_time: float = 0.0

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 1.0

    def merge(self, other: "TrialReport") -> "TrialReport":
        return TrialReport(self.trials + other.trials, self.successes + other.successes,
                           self.failures + other.failures, self.wall_time + other.wall_time)

    def lines(self) -> list[str]:
        out = [f"trials: {self.trials}", f"successes: {self.successes}",
               f"failures: {len(self.failures)}", f"success_rate: {self.success_rate!r}"]
        for msg, err, got, want in self.failures[:10]:
            out.append(f"failure: message={msg} error={err} decoded={got} expected={want}")
        return out


# -- sampling --------------------------------------------------------------------

def _shape_counts(n: int, w: int, ring: Ring) -> list[tuple[int, int]]:
    """(s, count) pairs: vectors of weight w with s coordinates equal to 2^{l-1}."""
    ones = ring.q - 2
    out = []
    for s in range(0, w // 2 + 1):
        m = w - 2 * s
        if m + s > n or (m and not ones):
            continue
        out.append((s, math.comb(n, s) * math.comb(n - s, m) * ones ** m))
    return out


def _pick(rng: np.random.Generator, weights: list[int]) -> int:
    """Index drawn with probability proportional to exact integer weights."""
    total = sum(weights)
    x = int(rng.integers(0, total)) if total < 1 << 63 else _big_randbelow(rng, total)
    for i, c in enumerate(weights):
        if x < c:
            return i
        x -= c
    raise AssertionError("unreachable")


def _big_randbelow(rng, total):
    nbits = total.bit_length()
    while True:
        words = rng.integers(0, 1 << 32, size=(nbits + 31) // 32, dtype=np.uint64)
        x = 0
        for wd in words:
            x = (x << 32) | int(wd)
        x >>= 32 * len(words) - nbits
        if x < total:
            return x


def random_vector_of_weight(n: int, w: int, ring: Ring, rng: np.random.Generator) -> tuple[int, ...]:
    shapes = _shape_counts(n, w, ring)
    if not shapes:
        raise ParameterError(f"no vector of length {n} has homogeneous weight {w} over Z_{ring.q}")
    s, _ = shapes[_pick(rng, [c for _, c in shapes])]
    m = w - 2 * s
    pos = rng.permutation(n)
    e = [0] * n
    for p in pos[:s]:
        e[p] = ring.half
    light = [x for x in range(1, ring.q) if x != ring.half]
    for p in pos[s:s + m]:
        e[p] = light[int(rng.integers(0, len(light)))]
    return tuple(e)


def sample_error(n: int, model: ErrorModel, ring: Ring, rng: np.random.Generator | None = None,
                 score: Callable[[tuple], float] | None = None) -> tuple[int, ...]:
    """One error vector of length n under ``model``.

    uniform_ball picks the weight w with probability count(w) / V_h(n, t) and
    then a uniform vector of that weight.  adversarial_boundary needs a
    ``score`` callback and returns the error of weight <= t maximising it:
    exhaustively on small balls, by seeded hill climbing otherwise.
    """
    if n < 0:
        raise ParameterError("length must be >= 0")
    rng = np.random.default_rng(model.seed) if rng is None else rng
    t = model.t
    if model.mode == "uniform_ball":
        counts = list(rg.weight_enumerator(n, ring.l)[: t + 1])
        w = _pick(rng, counts)
        return random_vector_of_weight(n, w, ring, rng)
    if model.mode == "fixed_weight":
        return random_vector_of_weight(n, t, ring, rng)
    if score is None:
        raise ParameterError("adversarial_boundary needs a score callback")
    return adversarial_error(n, t, ring, score, rng)


def adversarial_error(n: int, t: int, ring: Ring, score: Callable[[tuple], float],
                      rng: np.random.Generator, restarts: int = 8, steps: int = 200) -> tuple[int, ...]:
    if rg.ball_volume(n, t, ring) <= EXHAUSTIVE_ADVERSARY_CAP:
        best, best_s = None, None
        for e in rg.vectors_up_to_weight(n, t, ring):
            e = tuple(int(x) for x in e)
            s = score(e)
            if best_s is None or s > best_s:
                best, best_s = e, s
        return best
    best, best_s = (0,) * n, score((0,) * n)
    for _ in range(restarts):
        cur = sample_error(n, ErrorModel("uniform_ball", t), ring, rng)
        cur_s = score(cur)
        for _ in range(steps):
            cand = list(cur)
            pos = int(rng.integers(0, n))
            cand[pos] = int(rng.integers(0, ring.q))
            # repair: clear other coordinates until the weight fits again
            others = [i for i in rng.permutation(n).tolist() if i != pos and cand[i]]
            while rg.weight(cand, ring) > t and others:
                cand[others.pop()] = 0
            cand = tuple(cand)
            if rg.weight(cand, ring) > t:
                continue
            s = score(cand)
            if s >= cur_s:
                cur, cur_s = cand, s
        if cur_s > best_s:
            best, best_s = cur, cur_s
    return best


# -- experiments -----------------------------------------------------------------

def run_experiment(enc: FcchdEncoder, model: ErrorModel, trials: int,
                   message_source: str = "seeded_uniform", decode_mode: str = "ball",
                   batch: int = 2048) -> TrialReport:
    """Encode, add an error from ``model``, decode the function value, compare.

    ``exhaustive`` cycles through every message in lexicographic order;
    ``seeded_uniform`` draws messages from the model's seed.  All randomness
    comes from one generator seeded by ``model.seed``.
    """
    if trials < 0:
        raise ParameterError("trials must be >= 0")
    if message_source not in ("exhaustive", "seeded_uniform"):
        raise ParameterError(f"unknown message source {message_source!r}")
    start = time.perf_counter()
    ring, k, n = enc.ring, enc.k, enc.n
    rng = np.random.default_rng(model.seed)
    N = ring.q ** k
    if message_source == "exhaustive":
        ring.check_budget(k, enc.f.budget_lk)
        idx = np.arange(trials, dtype=np.int64) % N
    else:
        idx = rng.integers(0, N, size=trials, dtype=np.int64)
    msgs = rg.index_to_vectors(idx, k, ring)
    words = enc.encode_batch(msgs)
    truth = _labels(enc, msgs)
    if model.mode == "adversarial_boundary":
        errors = np.array([_adversary_for(enc, words[i], int(truth[i]), model, rng) for i in range(trials)],
                          dtype=np.int64).reshape(trials, n)
    else:
        errors = np.array([sample_error(n, model, ring, rng) for _ in range(trials)],
                          dtype=np.int64).reshape(trials, n)
    received = (words + errors) & (ring.q - 1)
    report = TrialReport(trials=trials)
    for lo in range(0, trials, batch):
        hi = min(lo + batch, trials)
        got, _, _ = decode_batch(received[lo:hi], enc, decode_mode)
        wrong = np.flatnonzero(got != truth[lo:hi])
        report.successes += (hi - lo) - wrong.size
        for w in wrong:
            i = lo + int(w)
            report.failures.append((tuple(msgs[i].tolist()), tuple(errors[i].tolist()),
                                    enc.f.image[int(got[w])], enc.f.image[int(truth[i])]))
    report.wall_time = time.perf_counter() - start
    return report


def _labels(enc, msgs):
    f = enc.f
    if f.batch is not None:
        return np.asarray(f.batch(msgs), dtype=np.int64)
    return np.array([f.index_of(f(tuple(m))) for m in msgs.tolist()], dtype=np.int64)


def _adversary_for(enc, word, truth, model, rng):
    """Error of weight <= t that makes the decoder wrong if one exists.

    The score prefers wrong decodes, then received words that sit closer to
    some codeword carrying a different function value.
    """
    mask = enc.ring.q - 1

    def score(e):
        y = (word + np.asarray(e, dtype=np.int64)) & mask
        got, dist, _ = decode_batch(y[None], enc, "ball")
        return (1 if int(got[0]) != truth else 0, -int(dist[0]))

    return adversarial_error(enc.n, model.t, enc.ring, score, rng)
