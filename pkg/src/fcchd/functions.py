"""Functions f: Z_{2^l}^k -> Im(f) and the function-ball machinery."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Hashable, Sequence

import numpy as np

from . import ring as rg
from .errors import ParameterError
from .ring import DEFAULT_BUDGET_LK, Ring

KINDS = ("identity", "hom_weight", "weight_distribution", "rt_weight", "min_max", "lookup_table", "constant")


@dataclass(frozen=True, eq=False)
class FunctionSpec:
    """A total function on Z_{2^l}^k with an explicitly ordered image.

    ``evaluator`` maps a message tuple to its value; ``batch`` (optional)
    maps an ``(N, k)`` array of messages to an array of image *indices*.
    """

    ring: Ring
    k: int
    kind: str
    evaluator: Callable[[tuple], Hashable]
    image: tuple
    params: dict = field(default_factory=dict)
    batch: Callable[[np.ndarray], np.ndarray] | None = None
    budget_lk: int = DEFAULT_BUDGET_LK

    def __post_init__(self):
        if len(set(self.image)) != len(self.image):
            raise ParameterError("image has duplicate values")

    def __call__(self, u) -> Hashable:
        u = self.ring.vector(u)
        if len(u) != self.k:
            raise ParameterError(f"message length {len(u)} != k = {self.k}")
        return self.evaluator(u)

    def __repr__(self):
        extra = "".join(f", {k}={v}" for k, v in self.params.items())
        return f"FunctionSpec({self.kind}, l={self.ring.l}, k={self.k}{extra})"

    @cached_property
    def index(self) -> dict:
        return {z: i for i, z in enumerate(self.image)}

    def index_of(self, z) -> int:
        try:
            return self.index[z]
        except KeyError:
            raise ParameterError(f"{z!r} is not in the image of {self!r}") from None

    @cached_property
    def messages(self) -> np.ndarray:
        """All messages, lexicographically ordered (row i is message number i)."""
        self.ring.check_budget(self.k, self.budget_lk)
        return rg.all_vectors(self.k, self.ring)

    @cached_property
    def labels(self) -> np.ndarray:
        """Image index of f(u) for every message u, aligned with :attr:`messages`."""
        msgs = self.messages
        if self.batch is not None:
            out = np.asarray(self.batch(msgs), dtype=np.int64)
        else:
            out = np.fromiter((self.index[self.evaluator(tuple(int(x) for x in row))] for row in msgs),
                              dtype=np.int64, count=len(msgs))
        out.setflags(write=False)
        return out

    def message_index(self, u) -> int:
        idx = 0
        for x in u:
            idx = (idx << self.ring.l) | int(x)
        return idx


# -- constructors -------------------------------------------------------------

def _hom_batch(ring):
    return lambda msgs: rg.hom_weights(msgs, ring)


def _rt_value(u):
    for i in range(len(u) - 1, -1, -1):
        if u[i]:
            return i + 1
    return 0


def _rt_batch(msgs):
    nz = msgs != 0
    k = msgs.shape[1]
    last = k - np.argmax(nz[:, ::-1], axis=1)
    return np.where(nz.any(axis=1), last, 0)


def minmax_value(u: Sequence[int], w: int, s: int) -> tuple[int, int]:
    """(argmin, argmax) of the w blocks of length s, 1-based.

    Blocks are ordered lexicographically; equal blocks are ordered by
    ascending index, so the argmin is the first minimal block and the
    argmax the last maximal block.
    """
    blocks = [tuple(u[i * s:(i + 1) * s]) for i in range(w)]
    lo = min(range(w), key=lambda i: (blocks[i], i))
    hi = max(range(w), key=lambda i: (blocks[i], i))
    return lo + 1, hi + 1


def _minmax_batch(ring, w, s, image_index):
    def batch(msgs):
        keys = np.zeros((msgs.shape[0], w), dtype=np.int64)
        for b in range(w):
            for p in range(s):
                keys[:, b] = (keys[:, b] << ring.l) | msgs[:, b * s + p]
        lo = np.argmin(keys, axis=1)
        hi = w - 1 - np.argmax(keys[:, ::-1], axis=1)
        lut = np.full((w, w), -1, dtype=np.int64)
        for (i, j), idx in image_index.items():
            lut[i - 1, j - 1] = idx
        return lut[lo, hi]

    return batch


def make_function(kind: str, ring: Ring, k: int, *, T: int | None = None, w: int | None = None,
                  s: int | None = None, table: dict | None = None, value: Any = 0,
                  budget_lk: int = DEFAULT_BUDGET_LK) -> FunctionSpec:
    """Build one of the built-in function families.

    kinds: identity, hom_weight, weight_distribution (needs T), rt_weight,
    min_max (needs w, s with k = w*s), lookup_table (needs table), constant.
    """
    kind = kind.replace("-", "_")
    if k < 1:
        raise ParameterError("message length k must be >= 1")
    if kind == "hom_weight":
        image = tuple(range(0, 2 * k + 1)) if ring.l >= 2 else tuple(range(0, 2 * k + 1, 2))
        return FunctionSpec(ring, k, kind, lambda u: rg.weight(u, ring), image,
                            batch=_indexed(_hom_batch(ring), image), budget_lk=budget_lk)
    if kind == "weight_distribution":
        if T is None or T < 1 or (2 * k + 1) % T:
            raise ParameterError(f"weight_distribution needs T >= 1 dividing 2k+1 = {2 * k + 1}, got T={T}")
        if ring.l >= 2:
            image = tuple(range((2 * k) // T + 1))
        else:
            image = tuple(sorted({x // T for x in range(0, 2 * k + 1, 2)}))
        hom = _hom_batch(ring)
        return FunctionSpec(ring, k, kind, lambda u: rg.weight(u, ring) // T, image, {"T": T},
                            batch=_indexed(lambda m: hom(m) // T, image), budget_lk=budget_lk)
    if kind == "rt_weight":
        image = tuple(range(k + 1))
        return FunctionSpec(ring, k, kind, _rt_value, image, batch=_rt_batch, budget_lk=budget_lk)
    if kind == "min_max":
        if w is None or s is None or w < 1 or s < 1 or w * s != k:
            raise ParameterError(f"min_max needs w, s >= 1 with w*s = k = {k}, got w={w}, s={s}")
        image = _minmax_image(ring, w, s, budget_lk)
        image_index = {z: i for i, z in enumerate(image)}
        return FunctionSpec(ring, k, kind, lambda u: minmax_value(u, w, s), image, {"w": w, "s": s},
                            batch=_minmax_batch(ring, w, s, image_index), budget_lk=budget_lk)
    if kind == "identity":
        ring.check_budget(k, budget_lk)
        image = tuple(tuple(int(x) for x in row) for row in rg.all_vectors(k, ring))
        return FunctionSpec(ring, k, kind, lambda u: tuple(u), image,
                            batch=lambda m: rg.vectors_to_index(m, ring), budget_lk=budget_lk)
    if kind == "constant":
        return FunctionSpec(ring, k, kind, lambda u: value, (value,), {"value": value},
                            batch=lambda m: np.zeros(m.shape[0], dtype=np.int64), budget_lk=budget_lk)
    if kind == "lookup_table":
        if table is None:
            raise ParameterError("lookup_table needs a table")
        ring.check_budget(k, budget_lk)
        if len(table) != ring.q ** k:
            raise ParameterError(f"lookup table has {len(table)} entries, expected {ring.q ** k}")
        image = tuple(sorted(set(table.values()), key=_sort_key))
        frozen = dict(table)
        return FunctionSpec(ring, k, kind, lambda u: frozen[tuple(u)], image, budget_lk=budget_lk)
    raise ParameterError(f"unknown function kind {kind!r}; expected one of {KINDS}")


def _sort_key(z):
    # numbers before strings, each in natural order
    if isinstance(z, (int, float)):
        return (0, z, "")
    return (1, 0, str(z))


def _indexed(values_fn, image):
    lut = {z: i for i, z in enumerate(image)}
    if all(isinstance(z, int) for z in image) and image:
        arr = np.full(max(image) + 1, -1, dtype=np.int64)
        for z, i in lut.items():
            arr[z] = i
        return lambda msgs: arr[values_fn(msgs)]
    return lambda msgs: np.array([lut[int(v)] for v in values_fn(msgs)], dtype=np.int64)


def _minmax_image(ring, w, s, budget_lk):
    if ring.l * w * s <= budget_lk:
        msgs = rg.all_vectors(w * s, ring)
        seen = set()
        keys = np.zeros((msgs.shape[0], w), dtype=np.int64)
        for b in range(w):
            for p in range(s):
                keys[:, b] = (keys[:, b] << ring.l) | msgs[:, b * s + p]
        lo = np.argmin(keys, axis=1)
        hi = w - 1 - np.argmax(keys[:, ::-1], axis=1)
        seen = set(zip((lo + 1).tolist(), (hi + 1).tolist()))
        return tuple(sorted(seen))
    if w == 1:
        return ((1, 1),)
    if ring.q ** s < 3:
        raise ParameterError("min_max image with 2 block values needs enumeration; instance exceeds budget")
    # with at least three distinct block values every (i, j), i != j, is attained
    return tuple((i, j) for i in range(1, w + 1) for j in range(1, w + 1) if i != j)


def load_lookup_table(path: str | Path, budget_lk: int = DEFAULT_BUDGET_LK) -> FunctionSpec:
    """Read a lookup-table function file.

    Format: first line ``l k``; then one line per message ``m_1 ... m_k -> value``.
    Values that parse as integers are stored as ints, otherwise as strings.
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParameterError(f"{path}: empty lookup table file")
    try:
        l, k = (int(x) for x in lines[0].split())
    except ValueError:
        raise ParameterError(f"{path}: header must be 'l k'") from None
    ring = Ring(l)
    table = {}
    for ln in lines[1:]:
        if "->" not in ln:
            raise ParameterError(f"{path}: malformed line {ln!r}")
        lhs, rhs = ln.split("->", 1)
        u = ring.vector(int(x) for x in lhs.split())
        if len(u) != k:
            raise ParameterError(f"{path}: message {u} does not have length {k}")
        if u in table:
            raise ParameterError(f"{path}: message {u} listed twice")
        token = rhs.strip()
        try:
            table[u] = int(token)
        except ValueError:
            table[u] = token
    f = make_function("lookup_table", ring, k, table=table, budget_lk=budget_lk)
    f.params["path"] = str(path)
    return f


def write_lookup_table(f: FunctionSpec, path: str | Path) -> None:
    out = [f"{f.ring.l} {f.k}"]
    for row, lab in zip(f.messages, f.labels):
        out.append(" ".join(str(int(x)) for x in row) + " -> " + str(f.image[lab]))
    Path(path).write_text("\n".join(out) + "\n")


# -- preimages and function balls ---------------------------------------------

def preimage(f: FunctionSpec, z) -> list[tuple[int, ...]]:
    idx = f.index_of(z)
    rows = f.messages[f.labels == idx]
    return [tuple(int(x) for x in row) for row in rows]


def _neighbour_indices(f: FunctionSpec, radius: int, centres: np.ndarray | None = None) -> np.ndarray:
    """Message indices of u + e for every error e with weight <= radius.

    Returns an array of shape (n_errors, n_centres).
    """
    errors = rg.vectors_up_to_weight(f.k, radius, f.ring)
    msgs = f.messages if centres is None else centres
    out = np.empty((errors.shape[0], msgs.shape[0]), dtype=np.int64)
    mask = f.ring.q - 1
    for i, e in enumerate(errors):
        out[i] = rg.vectors_to_index((msgs + e) & mask, f.ring)
    return out


def function_ball(f: FunctionSpec, u, rho: int) -> set:
    """{ f(u') : d_h(u, u') <= rho }."""
    if rho < 0:
        raise ParameterError("radius must be >= 0")
    u = np.asarray([f.ring.vector(u)], dtype=np.int64)
    if u.shape[1] != f.k:
        raise ParameterError(f"message length {u.shape[1]} != k = {f.k}")
    nb = _neighbour_indices(f, rho, u)[:, 0]
    return {f.image[i] for i in np.unique(f.labels[nb])}


def ball_label_sets(f: FunctionSpec, rho: int) -> np.ndarray:
    """Per message, the sorted image indices seen in its radius-rho ball, padded with -1."""
    labs = f.labels[_neighbour_indices(f, rho)]  # (n_errors, N)
    labs = np.sort(labs, axis=0)
    distinct = np.vstack([np.ones((1, labs.shape[1]), dtype=bool), labs[1:] != labs[:-1]])
    return np.where(distinct, labs, -1)


def is_locally_binary(f: FunctionSpec, rho: int) -> tuple[bool, tuple[int, ...] | None]:
    """Whether every radius-rho function ball has at most two values.

    On failure also returns a witness message whose ball has >= 3 values.
    """
    if rho < 0:
        raise ParameterError("radius must be >= 0")
    sizes = (ball_label_sets(f, rho) >= 0).sum(axis=0)
    bad = np.nonzero(sizes > 2)[0]
    if bad.size:
        return False, tuple(int(x) for x in f.messages[bad[0]])
    return True, None
