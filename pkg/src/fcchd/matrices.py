"""Distance-requirement matrices and function distances."""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import ring as rg
from .errors import ParameterError
from .functions import FunctionSpec
from .ring import Ring


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """A square matrix of pairwise minimum-distance requirements."""

    entries: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ParameterError(f"distance matrix must be square, got shape {a.shape}")
        if (a < 0).any():
            raise ParameterError("distance matrix entries must be nonnegative")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        labels = tuple(self.labels) if self.labels else tuple(range(1, a.shape[0] + 1))
        if len(labels) != a.shape[0]:
            raise ParameterError(f"{len(labels)} labels for a {a.shape[0]}x{a.shape[0]} matrix")
        object.__setattr__(self, "labels", labels)

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __repr__(self):
        return f"DistanceMatrix(M={self.M}, rows={self.entries.tolist()})"

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.entries, self.entries.T))

    def has_zero_diagonal(self) -> bool:
        return not np.diag(self.entries).any()

    def symmetrized(self) -> np.ndarray:
        """Effective requirements: distance is symmetric, so D_ij and D_ji both bind."""
        return np.maximum(self.entries, self.entries.T)

    def permuted(self, perm: Sequence[int]) -> "DistanceMatrix":
        perm = list(perm)
        return DistanceMatrix(self.entries[np.ix_(perm, perm)], tuple(self.labels[i] for i in perm))

    def total(self) -> int:
        return int(self.entries.sum())

    @classmethod
    def constant(cls, M: int, d: int) -> "DistanceMatrix":
        a = np.full((M, M), d, dtype=np.int64)
        np.fill_diagonal(a, 0)
        return cls(a)


# -- matrix constructors ----------------------------------------------------------

def requirement_matrix(f: FunctionSpec, t: int, msgs: Sequence) -> DistanceMatrix:
    """Requirement matrix for a list of distinct messages.

    Entry (i, j) is max(2t + 1 - d_h(u_i, u_j), 0) when f(u_i) != f(u_j), else 0.
    """
    if t < 0:
        raise ParameterError("t must be >= 0")
    msgs = [f.ring.vector(u) for u in msgs]
    if len(set(msgs)) != len(msgs):
        raise ParameterError("requirement matrix needs pairwise distinct messages")
    for u in msgs:
        if len(u) != f.k:
            raise ParameterError(f"message {u} does not have length k = {f.k}")
    vals = [f(u) for u in msgs]
    M = len(msgs)
    a = np.zeros((M, M), dtype=np.int64)
    for i in range(M):
        for j in range(i + 1, M):
            if vals[i] != vals[j]:
                a[i, j] = a[j, i] = max(2 * t + 1 - rg.distance(msgs[i], msgs[j], f.ring), 0)
    return DistanceMatrix(a, tuple(msgs))


def class_distances(f: FunctionSpec, cap: int | None = None) -> np.ndarray:
    """Exhaustive d_h^f between every pair of image values.

    Grows the search radius one unit at a time and records, for each pair of
    classes, the first radius at which some message of one class has a
    neighbour in the other.  Pairs still unresolved once the radius exceeds
    ``cap`` are reported as ``cap + 1``.
    """
    E = len(f.image)
    maxd = 2 * f.k
    cap = maxd if cap is None else min(cap, maxd)
    big = np.iinfo(np.int64).max
    dist = np.full((E, E), big, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    labels = f.labels
    msgs = f.messages
    errors = rg.vectors_up_to_weight(f.k, cap, f.ring)
    ew = rg.hom_weights(errors, f.ring)
    mask = f.ring.q - 1
    present = np.zeros(E, dtype=bool)
    present[np.unique(labels)] = True
    for radius in range(1, cap + 1):
        for e in errors[ew == radius]:
            nb = labels[rg.vectors_to_index((msgs + e) & mask, f.ring)]
            diff = nb != labels
            if not diff.any():
                continue
            codes = np.unique(labels[diff] * E + nb[diff])
            a, b = codes // E, codes % E
            dist[a, b] = np.minimum(dist[a, b], radius)
        if (dist[np.ix_(present, present)] < big).all():
            break
    dist[dist == big] = cap + 1
    return dist


def function_distance(f: FunctionSpec, z1, z2, exhaustive: bool = False) -> int:
    """d_h^f(z1, z2): minimum homogeneous distance between the two preimage classes."""
    i, j = f.index_of(z1), f.index_of(z2)
    if i == j:
        return 0
    closed = None if exhaustive else _closed_form(f, z1, z2)
    if closed is not None:
        return closed
    return int(class_distances(f)[i, j])


def _closed_form(f: FunctionSpec, z1, z2):
    if f.kind == "hom_weight" and f.ring.l >= 2:
        return abs(z1 - z2)
    if f.kind == "rt_weight":
        # e_i + e_j against e_j; the unit vector coordinate has weight 1 (2 when l = 1)
        return 1 if f.ring.l >= 2 else 2
    return None


def function_distance_matrix(f: FunctionSpec, t: int, exhaustive: bool = False) -> DistanceMatrix:
    """Entry (i, j) = max(2t + 1 - d_h^f(f_i, f_j), 0) for i != j, over the image order."""
    if t < 0:
        raise ParameterError("t must be >= 0")
    E = len(f.image)
    a = np.zeros((E, E), dtype=np.int64)
    use_closed = not exhaustive and _closed_form(f, f.image[0], f.image[-1]) is not None and E > 1
    if E > 1 and not use_closed:
        dist = class_distances(f, cap=2 * t + 1)
    for i in range(E):
        for j in range(i + 1, E):
            d = _closed_form(f, f.image[i], f.image[j]) if use_closed else int(dist[i, j])
            a[i, j] = a[j, i] = max(2 * t + 1 - d, 0)
    return DistanceMatrix(a, f.image)


# -- representative vectors -------------------------------------------------------

def weight_representatives(k: int, ring: Ring) -> list[tuple[int, ...]]:
    """Vectors u_0..u_{2k} with weight i and pairwise distance |i - j|.

    u_i is m_i ones, then s_i copies of 2^{l-1}, then zeros, where s_i is the
    least s with i - 2s + s <= k.
    """
    if ring.l < 2:
        raise ParameterError("weight representatives need l >= 2")
    if k < 1:
        raise ParameterError("k must be >= 1")
    reps = []
    for i in range(2 * k + 1):
        s = max(0, i - k)
        m = i - 2 * s
        reps.append((1,) * m + (ring.half,) * s + (0,) * (k - m - s))
    return reps


def minmax_labels(w: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, w + 1) for j in range(1, w + 1) if i != j]


def minmax_representatives(w: int, s: int, ring: Ring) -> list[tuple[int, ...]]:
    """u_{i,j} for (i, j) in lexicographic order: block i is 0...00, block j is 0...011,
    every other block is 0...01."""
    if w < 3 or s < 2 or ring.l < 2:
        raise ParameterError("min-max representatives need w >= 3, s >= 2, l >= 2")
    pad = (0,) * (s - 2)
    zero, one, top = pad + (0, 0), pad + (0, 1), pad + (1, 1)
    reps = []
    for i, j in minmax_labels(w):
        blocks = [one] * w
        blocks[i - 1] = zero
        blocks[j - 1] = top
        reps.append(tuple(x for b in blocks for x in b))
    return reps


def check_equality_condition(f: FunctionSpec, t: int, reps: Sequence) -> bool:
    """Whether the requirement matrix of ``reps`` equals the function distance matrix.

    When it does, the optimal redundancy equals N_h of the function distance matrix.
    """
    reps = [f.ring.vector(u) for u in reps]
    vals = [f(u) for u in reps]
    if len(reps) != len(f.image) or set(vals) != set(f.image):
        raise ParameterError("representatives must take every image value exactly once")
    ordered = sorted(reps, key=lambda u: f.index_of(f(u)))
    return requirement_matrix(f, t, ordered) == function_distance_matrix(f, t)


# -- text format -------------------------------------------------------------------

def format_matrix(D: DistanceMatrix, with_labels: bool = True) -> str:
    out = io.StringIO()
    out.write(f"{D.M}\n")
    if with_labels:
        for lab in D.labels:
            out.write(f"# label {_label_str(lab)}\n")
    for row in D.entries:
        out.write(" ".join(str(int(x)) for x in row) + "\n")
    return out.getvalue()


def _label_str(lab) -> str:
    if isinstance(lab, tuple):
        return "(" + ",".join(str(x) for x in lab) + ")"
    return str(lab)


def parse_matrix(text: str) -> DistanceMatrix:
    labels, rows, M = [], [], None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("label "):
                labels.append(body[len("label "):].strip())
            continue
        if M is None:
            try:
                M = int(line)
            except ValueError:
                raise ParameterError(f"matrix header must be the order M, got {line!r}") from None
            continue
        rows.append([int(x) for x in line.split()])
    if M is None:
        raise ParameterError("empty matrix text")
    if len(rows) != M or any(len(r) != M for r in rows):
        raise ParameterError(f"expected {M} rows of {M} entries")
    return DistanceMatrix(np.array(rows, dtype=np.int64).reshape(M, M), tuple(labels) if labels else ())


def read_matrix(path: str | Path) -> DistanceMatrix:
    return parse_matrix(Path(path).read_text())


def write_matrix(D: DistanceMatrix, path: str | Path) -> None:
    Path(path).write_text(format_matrix(D))
