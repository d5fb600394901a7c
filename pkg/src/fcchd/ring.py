"""Arithmetic over the residue ring Z_{2^l}.

Vectors are plain tuples of ints; the ring they live in is carried by a
:class:`Ring` instance passed alongside.  Bulk operations use numpy arrays
of shape ``(count, length)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded, ParameterError

MAX_L = 16
DEFAULT_BUDGET_LK = 24


class WeightKind(str, enum.Enum):
    HOMOGENEOUS = "homogeneous"
    HAMMING = "hamming"
    ROSENBLOOM_TSFASMAN = "rosenbloom_tsfasman"


@dataclass(frozen=True)
class Ring:
    """The ring Z_{2^l}."""

    l: int

    def __post_init__(self):
        if not isinstance(self.l, (int, np.integer)) or not 1 <= self.l <= MAX_L:
            raise ParameterError(f"ring exponent l must be in [1, {MAX_L}], got {self.l!r}")

    @property
    def q(self) -> int:
        return 1 << self.l

    @property
    def half(self) -> int:
        """The element 2^{l-1}, the unique nonzero element of weight 2."""
        return 1 << (self.l - 1)

    def vector(self, coords) -> tuple[int, ...]:
        v = tuple(int(c) for c in coords)
        for c in v:
            if not 0 <= c < self.q:
                raise ParameterError(f"residue {c} out of range for Z_{self.q}")
        return v

    @property
    def weight_table(self) -> np.ndarray:
        return _weight_table(self.l)

    def check_budget(self, length: int, budget_lk: int = DEFAULT_BUDGET_LK) -> None:
        if self.l * length > budget_lk:
            raise BudgetExceeded(
                f"enumerating Z_{self.q}^{length} needs l*k = {self.l * length} > budget {budget_lk}",
                budget=budget_lk,
            )


@lru_cache(maxsize=None)
def _weight_table(l: int) -> np.ndarray:
    q = 1 << l
    table = np.ones(q, dtype=np.int64)
    table[0] = 0
    table[q >> 1] = 2
    table.setflags(write=False)
    return table


def hom_weight_scalar(x: int, ring: Ring) -> int:
    """Homogeneous weight of a single residue (normalised so the mean weight is 1).

    For l = 1 the ideal <2^{l-1}> is the whole ring, so the only nonzero
    element gets weight 2.
    """
    if not 0 <= x < ring.q:
        raise ParameterError(f"residue {x} out of range for Z_{ring.q}")
    if x == 0:
        return 0
    return 2 if x == ring.half else 1


def weight(u, ring: Ring, kind: WeightKind | str = WeightKind.HOMOGENEOUS) -> int:
    kind = WeightKind(kind)
    u = ring.vector(u)
    if kind is WeightKind.HOMOGENEOUS:
        return sum(hom_weight_scalar(x, ring) for x in u)
    if kind is WeightKind.HAMMING:
        return sum(1 for x in u if x)
    for i in range(len(u) - 1, -1, -1):
        if u[i]:
            return i + 1
    return 0


def sub(u, v, ring: Ring) -> tuple[int, ...]:
    if len(u) != len(v):
        raise ParameterError(f"length mismatch: {len(u)} != {len(v)}")
    q = ring.q
    return tuple((a - b) % q for a, b in zip(u, v))


def add(u, v, ring: Ring) -> tuple[int, ...]:
    if len(u) != len(v):
        raise ParameterError(f"length mismatch: {len(u)} != {len(v)}")
    q = ring.q
    return tuple((a + b) % q for a, b in zip(u, v))


def distance(u, v, ring: Ring, kind: WeightKind | str = WeightKind.HOMOGENEOUS) -> int:
    return weight(sub(u, v, ring), ring, kind)


# -- bulk helpers -----------------------------------------------------------

def all_vectors(length: int, ring: Ring) -> np.ndarray:
    """Every vector of Z_q^length in lexicographic order, as an int64 array.

    Row ``i`` is the base-q expansion of ``i`` (most significant digit first).
    """
    return index_to_vectors(np.arange(ring.q ** length, dtype=np.int64), length, ring)


def index_to_vectors(idx: np.ndarray, length: int, ring: Ring) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty((idx.shape[0], length), dtype=np.int64)
    rem = idx.copy()
    for pos in range(length - 1, -1, -1):
        out[:, pos] = rem & (ring.q - 1)
        rem >>= ring.l
    return out


def vectors_to_index(vecs: np.ndarray, ring: Ring) -> np.ndarray:
    vecs = np.asarray(vecs, dtype=np.int64)
    idx = np.zeros(vecs.shape[0], dtype=np.int64)
    for pos in range(vecs.shape[1]):
        idx = (idx << ring.l) | vecs[:, pos]
    return idx


def hom_weights(vecs: np.ndarray, ring: Ring) -> np.ndarray:
    vecs = np.asarray(vecs, dtype=np.int64)
    if vecs.shape[-1] == 0:
        return np.zeros(vecs.shape[:-1], dtype=np.int64)
    return ring.weight_table[vecs].sum(axis=-1)


def hom_distances(vecs: np.ndarray, x, ring: Ring) -> np.ndarray:
    """Homogeneous distance from every row of ``vecs`` to the vector ``x``."""
    diff = (np.asarray(vecs, dtype=np.int64) - np.asarray(x, dtype=np.int64)) & (ring.q - 1)
    return hom_weights(diff, ring)


def vectors_up_to_weight(length: int, radius: int, ring: Ring) -> np.ndarray:
    """All vectors of homogeneous weight <= radius, ordered by weight then lexicographically."""
    if radius < 0:
        return np.zeros((0, length), dtype=np.int64)
    if ring.q ** length <= 1 << 22:
        vecs = all_vectors(length, ring)
        w = hom_weights(vecs, ring)
        keep = w <= radius
        vecs, w = vecs[keep], w[keep]
        order = np.argsort(w, kind="stable")
        return vecs[order]
    # sparse construction: choose support, then values
    rows = []
    _extend_sparse(length, radius, ring, rows)
    arr = np.array(rows, dtype=np.int64).reshape(-1, length)
    w = hom_weights(arr, ring)
    order = np.lexsort(tuple(arr[:, p] for p in range(length - 1, -1, -1)) + (w,))
    return arr[order]


def _extend_sparse(length, radius, ring, rows):
    nonzero = [(x, hom_weight_scalar(x, ring)) for x in range(1, ring.q)]

    def rec(pos, budget, acc):
        if pos == length:
            rows.append(tuple(acc))
            return
        acc.append(0)
        rec(pos + 1, budget, acc)
        acc.pop()
        for x, wx in nonzero:
            if wx <= budget:
                acc.append(x)
                rec(pos + 1, budget - wx, acc)
                acc.pop()

    rec(0, radius, [])


# -- ball volumes -------------------------------------------------------------

@lru_cache(maxsize=None)
def weight_enumerator(length: int, l: int) -> tuple[int, ...]:
    """Exact count of vectors in Z_{2^l}^length of each homogeneous weight 0..2*length.

    Dynamic programming over coordinates with the per-coordinate weight
    multiset {0: 1, 1: 2^l - 2, 2: 1}.
    """
    if length < 0:
        raise ParameterError("length must be >= 0")
    ones = (1 << l) - 2
    counts = [1]
    for _ in range(length):
        nxt = [0] * (len(counts) + 2)
        for w, c in enumerate(counts):
            if c:
                nxt[w] += c
                nxt[w + 1] += c * ones
                nxt[w + 2] += c
        counts = nxt
    return tuple(counts)


def ball_volume(length: int, radius: int, ring: Ring) -> int:
    """V_h(length, radius): vectors of homogeneous weight <= radius. V_h(r, -1) = 0."""
    if length < 0:
        raise ParameterError("length must be >= 0")
    if radius < -1:
        raise ParameterError("radius must be >= -1")
    if radius < 0:
        return 0
    return sum(weight_enumerator(length, ring.l)[: radius + 1])


def weight_generating_sum(lam: float, ring: Ring) -> float:
    """L(lambda) = sum over ring elements of exp(-lambda * weight)."""
    return 1.0 + (ring.q - 2) * math.exp(-lam) + math.exp(-2 * lam)


def entropy_ball_bound(length: int, rho: float, lam: float, ring: Ring) -> float:
    """Chernoff-type upper bound (e^{lambda*rho} L(lambda))^length on |B_length(rho)|.

    Here B_length(rho) is the set of vectors of weight <= length * rho.
    """
    if lam < 0:
        raise ParameterError("lambda must be >= 0")
    if length == 0:
        return 1.0
    return (math.exp(lam * rho) * weight_generating_sum(lam, ring)) ** length


def lambda_one_chain(length: int, radius: int, ring: Ring) -> tuple[float, float, float]:
    """The three successively weaker bounds on V_h(length, radius) at lambda = 1.

    Returns ``(e^radius * L(1)^length,
    e^radius * ((2^l - 1)/e + 1)^length,
    e^(radius - length) * 2^((l + 1) * length))``.
    """
    e = math.e
    a = math.exp(radius) * weight_generating_sum(1.0, ring) ** length
    b = math.exp(radius) * ((ring.q - 1) / e + 1) ** length
    c = math.exp(radius - length) * 2.0 ** ((ring.l + 1) * length)
    return a, b, c
