"""Codes meeting an irregular distance-requirement matrix.

A code P = (p_1, ..., p_M) of length r meets D when d_h(p_i, p_j) >= D_ij for
all i, j under the given codeword order.  N_h(D) is the least such r.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import ring as rg
from .errors import ParameterError
from .matrices import DistanceMatrix
from .ring import Ring

FOUND, EXHAUSTED, BUDGET = "found", "exhausted", "budget_exceeded"

MAX_PERMUTATION_M = 9
SCAN_CHUNK = 1 << 15


@dataclass(frozen=True)
class IrregularCode:
    ring: Ring
    r: int
    codewords: tuple

    def __post_init__(self):
        words = tuple(self.ring.vector(c) for c in self.codewords)
        for c in words:
            if len(c) != self.r:
                raise ParameterError(f"codeword {c} does not have length r = {self.r}")
        object.__setattr__(self, "codewords", words)

    @property
    def M(self) -> int:
        return len(self.codewords)

    def distances(self) -> np.ndarray:
        M = self.M
        out = np.zeros((M, M), dtype=np.int64)
        for i in range(M):
            for j in range(i + 1, M):
                out[i, j] = out[j, i] = rg.distance(self.codewords[i], self.codewords[j], self.ring)
        return out

    def min_distance(self) -> int | None:
        if self.M < 2:
            return None
        d = self.distances()
        return int(d[~np.eye(self.M, dtype=bool)].min())


@dataclass
class SearchOutcome:
    status: str
    code: IrregularCode | None = None
    r_tried: int = 0
    nodes_visited: int = 0
    analytic_r: int | None = None
    notes: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == FOUND

    @property
    def length(self) -> int | None:
        return self.code.r if self.code is not None else None


def _check_sizes(code: IrregularCode, D: DistanceMatrix):
    if code.M != D.M:
        raise ParameterError(f"code has {code.M} codewords but the matrix has order {D.M}")


def verify_irregular_code(code: IrregularCode, D: DistanceMatrix, try_permutations: bool = False):
    """Check d_h(p_i, p_j) >= D_ij.

    Returns ``(ok, violation)`` where ``violation`` is the first failing 1-based
    pair ``(i, j)`` under the given order.  With ``try_permutations`` (M <= 9)
    every ordering of the codewords is tried and ``ok`` reports whether any works.
    """
    _check_sizes(code, D)
    dist = code.distances()
    req = D.entries
    first = _first_violation(dist, req)
    if first is None or not try_permutations:
        return first is None, first
    if code.M > MAX_PERMUTATION_M:
        raise ParameterError(f"permutation search is limited to M <= {MAX_PERMUTATION_M}")
    for perm in itertools.permutations(range(code.M)):
        p = list(perm)
        if _first_violation(dist[np.ix_(p, p)], req) is None:
            return True, None
    return False, first


def _first_violation(dist, req):
    bad = np.argwhere(dist < req)
    if bad.size == 0:
        return None
    i, j = bad[0]
    return int(i) + 1, int(j) + 1


def plotkin_lower(D: DistanceMatrix) -> int:
    """ceil(sum of all entries / M^2), a lower bound on N_h(D)."""
    if D.M == 0:
        return 0
    return math.ceil(Fraction(D.total(), D.M ** 2))


# -- greedy -------------------------------------------------------------------------

def _scan_first(r, ring, prior, reqs, start=0, limit=None):
    """Lexicographically first vector (index >= start) meeting every prior requirement.

    Returns ``(vector or None, number_scanned, truncated)``.
    """
    total = ring.q ** r
    stop = total if limit is None else min(total, start + limit)
    scanned = 0
    for lo in range(start, stop, SCAN_CHUNK):
        hi = min(lo + SCAN_CHUNK, stop)
        cand = rg.index_to_vectors(np.arange(lo, hi, dtype=np.int64), r, ring)
        ok = np.ones(hi - lo, dtype=bool)
        for p, d in zip(prior, reqs):
            if d > 0:
                ok &= rg.hom_distances(cand, p, ring) >= d
        hit = np.flatnonzero(ok)
        if hit.size:
            scanned += int(hit[0]) + 1
            return tuple(int(x) for x in cand[hit[0]]), scanned, False
        scanned += hi - lo
    return None, scanned, stop < total


def greedy_construct(D: DistanceMatrix, r: int, ring: Ring, perm: Sequence[int] | None = None,
                     strategy: str = "lexicographic", seed: int = 0, samples: int = 4096,
                     scan_limit: int | None = None) -> SearchOutcome:
    """Add codewords one by one in ``perm`` order, each meeting all earlier requirements.

    ``lexicographic`` takes the first admissible vector in lexicographic
    order; ``seeded_random`` tries ``samples`` random vectors first and falls
    back to the scan.  The returned code is in the matrix's own row order.
    """
    if r < 0:
        raise ParameterError("length must be >= 0")
    if strategy not in ("lexicographic", "seeded_random"):
        raise ParameterError(f"unknown greedy strategy {strategy!r}")
    M = D.M
    perm = list(range(M)) if perm is None else list(perm)
    if sorted(perm) != list(range(M)):
        raise ParameterError("perm must be a permutation of range(M)")
    req = D.symmetrized()
    rng = np.random.default_rng(seed)
    chosen: dict[int, tuple] = {}
    nodes = 0
    for step, row in enumerate(perm):
        prior = [chosen[perm[i]] for i in range(step)]
        reqs = [int(req[perm[i], row]) for i in range(step)]
        word = None
        if strategy == "seeded_random" and r > 0 and step > 0:
            cand = rng.integers(0, ring.q, size=(samples, r), dtype=np.int64)
            ok = np.ones(samples, dtype=bool)
            for p, d in zip(prior, reqs):
                if d > 0:
                    ok &= rg.hom_distances(cand, p, ring) >= d
            hit = np.flatnonzero(ok)
            nodes += samples if not hit.size else int(hit[0]) + 1
            if hit.size:
                word = tuple(int(x) for x in cand[hit[0]])
        if word is None:
            word, scanned, truncated = _scan_first(r, ring, prior, reqs, limit=scan_limit)
            nodes += scanned
            if word is None:
                return SearchOutcome(BUDGET if truncated else EXHAUSTED, None, r, nodes,
                                     notes={"failed_row": row + 1})
        chosen[row] = word
    code = IrregularCode(ring, r, tuple(chosen[i] for i in range(M)))
    return SearchOutcome(FOUND, code, r, nodes)


def greedy_min_length(D: DistanceMatrix, ring: Ring, perm: Sequence[int] | None = None,
                      strategy: str = "lexicographic", seed: int = 0, r_cap: int = 64,
                      scan_limit: int | None = 1 << 22,
                      trace: Callable[[str], None] | None = None) -> SearchOutcome:
    """Smallest r at which :func:`greedy_construct` succeeds, starting from the Plotkin bound.

    Scans are capped at ``scan_limit`` vectors per codeword except at lengths
    where the volume condition guarantees success.  ``analytic_r`` carries the
    length from the volume condition for comparison.
    """
    from .bounds import gv_upper

    analytic = gv_upper(D, ring, perm)
    nodes = 0
    for r in range(plotkin_lower(D), r_cap + 1):
        limit = None if r >= analytic else scan_limit
        out = greedy_construct(D, r, ring, perm, strategy, seed, scan_limit=limit)
        nodes += out.nodes_visited
        if trace:
            trace(f"greedy r={r} status={out.status} nodes={nodes}")
        if out.found:
            out.nodes_visited = nodes
            out.analytic_r = analytic
            return out
    return SearchOutcome(BUDGET, None, r_cap, nodes, analytic)


# -- exact branch and bound -----------------------------------------------------------

def _ordered_space(r: int, ring: Ring) -> np.ndarray:
    """All vectors of Z_q^r sorted by homogeneous weight, then lexicographically."""
    vecs = rg.all_vectors(r, ring)
    order = np.argsort(rg.hom_weights(vecs, ring), kind="stable")
    return vecs[order]


def _canonical_mask(vecs: np.ndarray, ring: Ring) -> np.ndarray:
    """Rows fixed by the canonical form under coordinate permutations and unit scaling.

    Multiplying a coordinate by a unit preserves homogeneous weight, so each
    residue can be replaced by the power of two with the same 2-adic
    valuation; sorting the coordinates then picks one orbit representative.
    """
    if vecs.shape[1] == 0:
        return np.ones(vecs.shape[0], dtype=bool)
    canon = np.zeros_like(vecs)
    nz = vecs != 0
    low = vecs & -vecs  # lowest set bit = 2^valuation
    canon[nz] = low[nz]
    canon = -np.sort(-canon, axis=1)
    return (canon == vecs).all(axis=1)


def _constraint_order(req: np.ndarray) -> list[int]:
    """Rows ordered so each next row is the most constrained by those already placed."""
    M = req.shape[0]
    start = int(np.argmax(req.sum(axis=1)))
    order, rest = [start], set(range(M)) - {start}
    while rest:
        nxt = max(sorted(rest), key=lambda j: (int(req[order, j].sum()), int(req[j].sum())))
        order.append(nxt)
        rest.remove(nxt)
    return order


class _NodeBudget(Exception):
    pass


def _dfs_length(req: np.ndarray, r: int, ring: Ring, node_budget: int, counter: list):
    """Depth-first search for a code of length r; returns codewords or None."""
    M = req.shape[0]
    space = _ordered_space(r, ring)
    N = space.shape[0]
    canon = _canonical_mask(space, ring)
    words = [None] * M
    words[0] = 0  # the zero vector sits first in weight order

    # masks[j] = admissible candidate rows for codeword j given assignments so far
    def dist_from(idx):
        return rg.hom_distances(space, space[idx], ring)

    def place(depth, masks):
        counter[0] += 1
        if counter[0] > node_budget:
            raise _NodeBudget
        if depth == M:
            return True
        mask = masks[depth]
        if depth == 1:
            mask = mask & canon
        for idx in np.flatnonzero(mask):
            d = dist_from(idx)
            new = list(masks)
            ok = True
            for j in range(depth + 1, M):
                need = req[depth, j]
                if need > 0:
                    new[j] = masks[j] & (d >= need)
                    if not new[j].any():
                        ok = False
                        break
            if ok:
                words[depth] = int(idx)
                if place(depth + 1, new):
                    return True
        return False

    full = np.ones(N, dtype=bool)
    d0 = dist_from(0)
    masks = [full] * M
    for j in range(1, M):
        if req[0, j] > 0:
            masks[j] = d0 >= req[0, j]
            if not masks[j].any():
                return None
    if place(1, masks):
        return [tuple(int(x) for x in space[i]) for i in words]
    return None


def exact_min_length(D: DistanceMatrix, ring: Ring, r_max: int = 16, node_budget: int = 2_000_000,
                     r_start: int | None = None,
                     trace: Callable[[str], None] | None = None) -> SearchOutcome:
    """N_h(D) with a witness, by exhaustive search over increasing lengths.

    The first codeword is fixed to zero (distances are translation invariant)
    and the second to a canonical orbit representative.  Never returns a
    wrong length: if the cap or node budget is hit the status says so.
    """
    M = D.M
    req = D.symmetrized()
    if M <= 1 or not req.any():
        code = IrregularCode(ring, 0, tuple(() for _ in range(M)))
        return SearchOutcome(FOUND, code, 0, 1)
    order = _constraint_order(req)
    sub = req[np.ix_(order, order)]
    counter = [0]
    r0 = plotkin_lower(D) if r_start is None else r_start
    for r in range(max(r0, 1), r_max + 1):
        if ring.q ** r > 1 << 24:
            return SearchOutcome(BUDGET, None, r, counter[0], notes={"reason": "space too large"})
        try:
            words = _dfs_length(sub, r, ring, node_budget, counter)
        except _NodeBudget:
            return SearchOutcome(BUDGET, None, r, counter[0], notes={"reason": "node budget"})
        if trace:
            trace(f"exact r={r} nodes={counter[0]} {'found' if words else 'infeasible'}")
        if words is not None:
            placed = [None] * M
            for pos, row in enumerate(order):
                placed[row] = words[pos]
            return SearchOutcome(FOUND, IrregularCode(ring, r, tuple(placed)), r, counter[0])
    return SearchOutcome(BUDGET, None, r_max, counter[0], notes={"reason": "r_max reached"})


def equal_distance_code(M: int, d: int, ring: Ring, r_hint: int | None = None,
                        seed: int = 0) -> IrregularCode:
    """M codewords with pairwise homogeneous distance >= d, found greedily.

    For two codewords and even d the antipodal pair (0^{d/2}, (2^{l-1})^{d/2}) is returned.
    """
    if M < 1 or d < 0:
        raise ParameterError("need M >= 1 and d >= 0")
    if M == 1 or d == 0:
        return IrregularCode(ring, 0, tuple(() for _ in range(M)))
    if M == 2 and (d % 2 == 0 or ring.l == 1):
        r = -(-d // 2)
        return IrregularCode(ring, r, ((0,) * r, (ring.half,) * r))
    D = DistanceMatrix.constant(M, d)
    if r_hint is not None:
        out = greedy_construct(D, r_hint, ring, seed=seed)
        if out.found:
            return out.code
    out = greedy_min_length(D, ring, seed=seed)
    if not out.found:
        raise ParameterError(f"no equal-distance code found for M={M}, d={d}")
    return out.code


# -- text format --------------------------------------------------------------------

def format_code(code: IrregularCode) -> str:
    lines = [f"{code.ring.l} {code.r} {code.M}"]
    lines += [" ".join(str(x) for x in c) for c in code.codewords]
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> IrregularCode:
    lines = [ln.strip() for ln in text.splitlines() if not ln.strip().startswith("#")]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise ParameterError("empty code text")
    try:
        l, r, M = (int(x) for x in lines[0].split())
    except ValueError:
        raise ParameterError("code header must be 'l r M'") from None
    body = lines[1:1 + M]
    if r == 0:
        body = body + [""] * (M - len(body))
    if len(body) != M:
        raise ParameterError(f"expected {M} codewords, got {len(body)}")
    ring = Ring(l)
    return IrregularCode(ring, r, tuple(tuple(int(x) for x in ln.split()) for ln in body))


def read_code(path: str | Path) -> IrregularCode:
    return parse_code(Path(path).read_text())


def write_code(code: IrregularCode, path: str | Path) -> None:
    Path(path).write_text(format_code(code))
