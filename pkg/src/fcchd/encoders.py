"""Systematic encoders u -> (u, p(u)), the FCCHD verifier, and function-value decoders."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import ring as rg
from .errors import ParameterError
from .functions import (FunctionSpec, ball_label_sets, function_ball, is_locally_binary, load_lookup_table,
                        make_function)
from .matrices import function_distance_matrix
from .ring import Ring
from .search import IrregularCode, equal_distance_code, verify_irregular_code

PROVENANCES = ("con1", "con2", "locbin", "generic", "custom")
VERIFY_CHUNK = 256


def smod(a: int, b: int) -> int:
    """Shifted modulo ((a - 1) mod b) + 1, which lands in 1..b."""
    if a < 1 or b < 1:
        raise ParameterError(f"smod needs a >= 1 and b >= 1, got a={a}, b={b}")
    return (a - 1) % b + 1


@dataclass(frozen=True, eq=False)
class FcchdEncoder:
    """u -> (u, p(u)).

    ``batch_rule`` maps an ``(N, k)`` message array to the ``(N, r)``
    redundancy array; ``rule`` is the single-message version.
    """

    f: FunctionSpec
    t: int
    r: int
    batch_rule: Callable[[np.ndarray], np.ndarray]
    provenance: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.t < 0 or self.r < 0:
            raise ParameterError("t and r must be >= 0")
        if self.provenance not in PROVENANCES:
            raise ParameterError(f"unknown provenance {self.provenance!r}")

    @property
    def ring(self) -> Ring:
        return self.f.ring

    @property
    def k(self) -> int:
        return self.f.k

    @property
    def n(self) -> int:
        return self.f.k + self.r

    def rule(self, u) -> tuple[int, ...]:
        u = self.ring.vector(u)
        if len(u) != self.k:
            raise ParameterError(f"message length {len(u)} != k = {self.k}")
        out = self.batch_rule(np.asarray([u], dtype=np.int64).reshape(1, self.k))
        return tuple(int(x) for x in out[0])

    def encode(self, u) -> tuple[int, ...]:
        return self.ring.vector(u) + self.rule(u)

    def encode_batch(self, msgs: np.ndarray) -> np.ndarray:
        msgs = np.asarray(msgs, dtype=np.int64).reshape(-1, self.k)
        red = np.asarray(self.batch_rule(msgs), dtype=np.int64).reshape(msgs.shape[0], self.r)
        return np.hstack([msgs, red])

    @cached_property
    def redundancy_table(self) -> np.ndarray:
        """p(u) for every message in lexicographic order."""
        msgs = self.f.messages
        tab = np.asarray(self.batch_rule(msgs), dtype=np.int64).reshape(len(msgs), self.r)
        tab.setflags(write=False)
        return tab

    @cached_property
    def codewords(self) -> np.ndarray:
        out = np.hstack([self.f.messages, self.redundancy_table])
        out.setflags(write=False)
        return out

    def __repr__(self):
        return f"FcchdEncoder({self.provenance}, {self.f!r}, t={self.t}, r={self.r})"


def _table_rule(table: np.ndarray, period: int, ring: Ring):
    """Redundancy p_{(w + 1) smod period} indexed by the homogeneous weight w of u."""
    table = np.asarray(table, dtype=np.int64)

    def rule(msgs):
        w = rg.hom_weights(msgs, ring)
        return table[w % period]

    return rule


def con1_table(t: int, ring: Ring, base_code: IrregularCode | None = None) -> np.ndarray:
    """Redundancy words p_1..p_period for the homogeneous-weight encoder."""
    if ring.l < 2:
        raise ParameterError("the weight-function encoder needs l >= 2")
    if t < 1:
        raise ParameterError("t must be >= 1")
    h = ring.half
    if t == 1:
        words = [(0, 0), (1, 1), (h, 0)]
    elif t == 2:
        base = [(0, 0, 0), (h, h, 0), (0, h, h), (h, 0, h)]
        words = base + [(a, (b + 1) % ring.q, c) for a, b, c in base]
    elif t == 3:
        g = h + 1
        words = [(0, 0, 0, 0, 0), (1, 1, 1, 1, h), (h, h, h, 0, 0), (0, 0, h, h, 0),
                 (1, 1, g, g, h), (h, h, 0, h, 0), (g, g, h, g, h)]
    else:
        if base_code is None:
            base_code = equal_distance_code(2 * t + 1, 2 * t, ring)
        if base_code.ring != ring or base_code.M != 2 * t + 1:
            raise ParameterError(f"base code must have {2 * t + 1} codewords over Z_{ring.q}")
        md = base_code.min_distance()
        if md is None or md < 2 * t:
            raise ParameterError(f"base code has minimum distance {md} < 2t = {2 * t}")
        words = list(base_code.codewords)
    return np.array(words, dtype=np.int64)


def con1_encoder(ring: Ring, k: int, t: int, base_code: IrregularCode | None = None,
                 budget_lk: int = rg.DEFAULT_BUDGET_LK) -> FcchdEncoder:
    """Encoder for the homogeneous weight function with a periodic redundancy table."""
    f = make_function("hom_weight", ring, k, budget_lk=budget_lk)
    table = con1_table(t, ring, base_code)
    return FcchdEncoder(f, t, table.shape[1], _table_rule(table, len(table), ring), "con1",
                        {"period": len(table)})


def con2_table(t: int, T: int, ring: Ring) -> np.ndarray:
    h = ring.half
    words = []
    for i in range(1, T + 1):
        if i <= t + 1:
            words.append((1,) * (i - 1) + (0,) * (t - i + 1))
        elif i <= 2 * t + 1:
            words.append((h,) * (i - 1 - t) + (1,) * (2 * t - i + 1))
        else:
            words.append((h,) * t)
    return np.array(words, dtype=np.int64).reshape(T, t)


def con2_encoder(ring: Ring, k: int, t: int, T: int, budget_lk: int = rg.DEFAULT_BUDGET_LK) -> FcchdEncoder:
    """Encoder with redundancy exactly t for floor(weight / T)."""
    if ring.l < 2:
        raise ParameterError("the weight-distribution encoder needs l >= 2")
    if t < 1:
        raise ParameterError("t must be >= 1")
    if T < 1 or (2 * k + 1) % T:
        raise ParameterError(f"T = {T} must divide 2k+1 = {2 * k + 1}")
    if T < 2 * t + 1:
        raise ParameterError(f"T = {T} must be >= 2t+1 = {2 * t + 1}")
    f = make_function("weight_distribution", ring, k, T=T, budget_lk=budget_lk)
    table = con2_table(t, T, ring)
    return FcchdEncoder(f, t, t, _table_rule(table, T, ring), "con2", {"T": T})


def _order_ranks(f: FunctionSpec, order: Sequence | None) -> np.ndarray:
    """Rank of each image index under the chosen total order (default: image order)."""
    if order is None:
        return np.arange(len(f.image), dtype=np.int64)
    order = list(order)
    if sorted(map(f.index_of, order)) != list(range(len(f.image))):
        raise ParameterError("order must list every image value exactly once")
    ranks = np.empty(len(f.image), dtype=np.int64)
    for pos, z in enumerate(order):
        ranks[f.index_of(z)] = pos
    return ranks


def locbin_indicator(f: FunctionSpec, rho: int, ranks: np.ndarray) -> np.ndarray:
    """1 where f(u) is the larger value seen in the radius-rho ball of u, else 0."""
    sets = ball_label_sets(f, rho)
    r_sets = np.where(sets >= 0, ranks[np.maximum(sets, 0)], -1)
    top = r_sets.max(axis=0)
    return (ranks[f.labels] == top).astype(np.int64)


def locbin_encoder(f: FunctionSpec, t: int, order: Sequence | None = None) -> FcchdEncoder:
    """Redundancy: 2t copies of the indicator that f(u) is the max of its radius-2t ball."""
    if t < 1:
        raise ParameterError("t must be >= 1")
    ok, witness = is_locally_binary(f, 2 * t)
    if not ok:
        raise ParameterError(f"function is not {2 * t}-locally binary; ball of {witness} has 3+ values")
    ranks = _order_ranks(f, order)
    ind = locbin_indicator(f, 2 * t, ranks)

    def rule(msgs):
        idx = rg.vectors_to_index(msgs, f.ring)
        return np.repeat(ind[idx][:, None], 2 * t, axis=1)

    return FcchdEncoder(f, t, 2 * t, rule, "locbin",
                        {"order": tuple(order) if order is not None else None, "ranks": ranks})


def generic_encoder(f: FunctionSpec, t: int, P: IrregularCode, check: bool = True) -> FcchdEncoder:
    """u -> (u, p_i) where i is the image position of f(u)."""
    if P.M != len(f.image):
        raise ParameterError(f"code has {P.M} words but the image has {len(f.image)} values")
    if P.ring != f.ring:
        raise ParameterError("code and function live over different rings")
    if check:
        ok, bad = verify_irregular_code(P, function_distance_matrix(f, t))
        if not ok:
            raise ParameterError(f"code violates the function distance matrix at pair {bad}")
    words = np.array(P.codewords, dtype=np.int64).reshape(P.M, P.r)

    if f.batch is not None:
        def rule(msgs):
            return words[np.asarray(f.batch(msgs), dtype=np.int64)]
    else:
        def rule(msgs):
            return words[[f.index_of(f.evaluator(tuple(int(x) for x in m))) for m in msgs]]

    return FcchdEncoder(f, t, P.r, rule, "generic", {"code": P})


def table_encoder(f: FunctionSpec, t: int, redundancy: np.ndarray, provenance: str = "custom",
                  params: dict | None = None) -> FcchdEncoder:
    """Encoder from an explicit redundancy table aligned with ``f.messages``."""
    redundancy = np.asarray(redundancy, dtype=np.int64)
    N = f.ring.q ** f.k
    if redundancy.ndim != 2 or redundancy.shape[0] != N:
        raise ParameterError(f"redundancy table must have {N} rows")
    if redundancy.size and ((redundancy < 0) | (redundancy >= f.ring.q)).any():
        raise ParameterError("redundancy entries out of range")
    r = redundancy.shape[1]

    def rule(msgs):
        return redundancy[rg.vectors_to_index(msgs, f.ring)]

    return FcchdEncoder(f, t, r, rule, provenance, dict(params or {}))


def strawman_encoder(f: FunctionSpec, t: int) -> FcchdEncoder:
    """No redundancy at all; not an FCCHD for any non-constant f and t >= 1."""
    return FcchdEncoder(f, t, 0, lambda msgs: np.zeros((len(msgs), 0), dtype=np.int64), "custom",
                        {"name": "strawman"})


# -- verification -------------------------------------------------------------------

def verify_fcchd(enc: FcchdEncoder) -> tuple[bool, tuple | None]:
    """Exhaustively check d_h(Enc(u1), Enc(u2)) >= 2t+1 whenever f(u1) != f(u2).

    Returns ``(ok, (u1, u2))`` with the lexicographically first violating pair.
    Pairs whose messages are already 2t+1 apart cannot violate, so when the
    radius-2t ball is smaller than the message space only message pairs
    within that radius are examined.
    """
    f, need = enc.f, 2 * enc.t + 1
    N = f.ring.q ** f.k
    codes = enc.codewords  # budget-checked through f.messages
    labels = f.labels
    if len(f.image) < 2:
        return True, None
    if rg.ball_volume(f.k, 2 * enc.t, f.ring) < N:
        pair = _violations_by_ball(enc, codes, labels, need)
    else:
        pair = _violations_pairwise(enc, codes, labels, need)
    if pair is None:
        return True, None
    i, j = pair
    msgs = f.messages
    return False, (tuple(int(x) for x in msgs[i]), tuple(int(x) for x in msgs[j]))


def _violations_by_ball(enc, codes, labels, need):
    f = enc.f
    mask = f.ring.q - 1
    msgs = f.messages
    red = enc.redundancy_table
    errors = rg.vectors_up_to_weight(f.k, need - 1, f.ring)
    ew = rg.hom_weights(errors, f.ring)
    best = None
    for e, w in zip(errors[1:], ew[1:]):
        nb = rg.vectors_to_index((msgs + e) & mask, f.ring)
        diff = labels != labels[nb]
        if not diff.any():
            continue
        src = np.flatnonzero(diff)
        d = w + rg.hom_weights((red[src] - red[nb[src]]) & mask, f.ring)
        bad = src[d < need]
        if bad.size:
            a = np.minimum(bad, nb[bad])
            b = np.maximum(bad, nb[bad])
            key = a * len(labels) + b
            m = int(key.min())
            best = m if best is None else min(best, m)
    if best is None:
        return None
    return divmod(best, len(labels))


def _violations_pairwise(enc, codes, labels, need):
    N = codes.shape[0]
    mask = enc.ring.q - 1
    wt = enc.ring.weight_table
    for lo in range(0, N, VERIFY_CHUNK):
        hi = min(lo + VERIFY_CHUNK, N)
        block = codes[lo:hi]
        dist = np.zeros((hi - lo, N), dtype=np.int64)
        for c in range(codes.shape[1]):
            dist += wt[(block[:, c, None] - codes[None, :, c]) & mask]
        bad = (dist < need) & (labels[lo:hi, None] != labels[None, :])
        bad &= np.arange(N)[None, :] > np.arange(lo, hi)[:, None]
        hits = np.argwhere(bad)
        if hits.size:
            i, j = hits[0]
            return lo + int(i), int(j)
    return None


# -- decoding -------------------------------------------------------------------

@dataclass
class DecodeResult:
    value: object
    distance: int
    message: tuple


def decode_function_value(y, enc: FcchdEncoder, mode: str = "exhaustive") -> DecodeResult:
    """f of the message whose codeword is nearest to y (lexicographic tie-break).

    ``mode='ball'`` only looks at messages within distance t of the received
    message part, and falls back to the exhaustive scan when none of them is
    within t of y.  Both modes return the same answer whenever the minimum
    distance is <= t.
    """
    y = np.asarray([enc.ring.vector(y)], dtype=np.int64)
    if y.shape[1] != enc.n:
        raise ParameterError(f"received word has length {y.shape[1]}, expected {enc.n}")
    vals, dists, idx = decode_batch(y, enc, mode)
    msg = tuple(int(x) for x in rg.index_to_vectors(idx[:1], enc.k, enc.ring)[0])
    return DecodeResult(enc.f.image[int(vals[0])], int(dists[0]), msg)


def decode_batch(Y: np.ndarray, enc: FcchdEncoder, mode: str = "ball"):
    """Vectorised decoding.  Returns (image indices, distances, message indices)."""
    Y = np.asarray(Y, dtype=np.int64).reshape(-1, enc.n)
    if mode == "exhaustive":
        return _decode_exhaustive(Y, enc)
    if mode != "ball":
        raise ParameterError(f"unknown decode mode {mode!r}")
    ring, k = enc.ring, enc.k
    mask = ring.q - 1
    errs = rg.vectors_up_to_weight(k, enc.t, ring)
    cand_msgs = (Y[None, :, :k] + errs[:, None, :]) & mask  # (V, B, k)
    V, B = cand_msgs.shape[:2]
    flat = cand_msgs.reshape(V * B, k)
    cand_idx = rg.vectors_to_index(flat, ring).reshape(V, B)
    words = enc.encode_batch(flat).reshape(V, B, enc.n)
    dist = rg.hom_weights((words - Y[None]) & mask, ring)  # (V, B)
    N = ring.q ** k
    key = dist * N + cand_idx
    pick = np.argmin(key, axis=0)
    cols = np.arange(B)
    best_d = dist[pick, cols]
    best_i = cand_idx[pick, cols]
    labels = _labels_of(enc.f, rg.index_to_vectors(best_i, k, ring))
    far = best_d > enc.t
    if far.any():
        v2, d2, i2 = _decode_exhaustive(Y[far], enc)
        labels, best_d, best_i = labels.copy(), best_d.copy(), best_i.copy()
        labels[far], best_d[far], best_i[far] = v2, d2, i2
    return labels, best_d, best_i


def _labels_of(f: FunctionSpec, msgs: np.ndarray) -> np.ndarray:
    if f.batch is not None:
        return np.asarray(f.batch(msgs), dtype=np.int64)
    return np.array([f.index_of(f.evaluator(tuple(int(x) for x in m))) for m in msgs], dtype=np.int64)


def _decode_exhaustive(Y, enc):
    codes = enc.codewords
    labels = enc.f.labels
    mask = enc.ring.q - 1
    wt = enc.ring.weight_table
    vals = np.empty(len(Y), dtype=np.int64)
    dists = np.empty(len(Y), dtype=np.int64)
    idxs = np.empty(len(Y), dtype=np.int64)
    for b, y in enumerate(Y):
        d = wt[(codes - y) & mask].sum(axis=1)
        i = int(np.argmin(d))  # first minimum = lexicographically smallest message
        vals[b], dists[b], idxs[b] = labels[i], d[i], i
    return vals, dists, idxs


def locbin_decode(y, enc: FcchdEncoder):
    """Decoder for the locally-binary encoder.

    The indicator bit is recovered by majority over the 2t redundancy
    symbols, with the indicator recomputed from the received message
    breaking ties; the value is then the max or min of the radius-t
    function ball around the received message.
    """
    if enc.provenance != "locbin":
        raise ParameterError("locbin_decode needs a locally-binary encoder")
    f, t = enc.f, enc.t
    y = enc.ring.vector(y)
    if len(y) != enc.n:
        raise ParameterError(f"received word has length {len(y)}, expected {enc.n}")
    u, p = y[:f.k], y[f.k:]
    ranks = enc.params["ranks"]
    own = int(enc.redundancy_table[f.message_index(u), 0])
    ones, zeros = p.count(1), p.count(0)
    ones += own
    zeros += 1 - own
    bit = 1 if ones > zeros else 0
    ball = sorted(function_ball(f, u, t), key=lambda z: ranks[f.index_of(z)])
    return ball[-1] if bit else ball[0]


# -- descriptor files ---------------------------------------------------------------

def function_descriptor(f: FunctionSpec) -> str:
    if f.kind == "lookup_table":
        src = f.params.get("path")
        if not src:
            raise ParameterError("lookup-table functions need a source path to be described")
        return f"function lookup_table path={src}"
    parts = ["function", f.kind] + [f"{k}={v}" for k, v in f.params.items()]
    return " ".join(parts)


def parse_function_descriptor(line: str, ring: Ring, k: int, budget_lk: int = rg.DEFAULT_BUDGET_LK) -> FunctionSpec:
    tokens = line.split()
    if len(tokens) < 2 or tokens[0] != "function":
        raise ParameterError(f"malformed function line {line!r}")
    kind = tokens[1]
    kw = dict(tok.split("=", 1) for tok in tokens[2:])
    if kind == "lookup_table":
        f = load_lookup_table(kw["path"], budget_lk=budget_lk)
        if f.ring != ring or f.k != k:
            raise ParameterError("lookup table does not match the descriptor header")
        return f
    args = {}
    for key in ("T", "w", "s"):
        if key in kw:
            args[key] = int(kw[key])
    if "value" in kw:
        try:
            args["value"] = int(kw["value"])
        except ValueError:
            args["value"] = kw["value"]
    return make_function(kind, ring, k, budget_lk=budget_lk, **args)


def format_encoder(enc: FcchdEncoder) -> str:
    """Header ``l k t r``, a ``function`` line, then ``message -> redundancy`` lines."""
    lines = [f"{enc.ring.l} {enc.k} {enc.t} {enc.r}", function_descriptor(enc.f)]
    for u, p in zip(enc.f.messages, enc.redundancy_table):
        lines.append(" ".join(map(str, u.tolist())) + " -> " + " ".join(map(str, p.tolist())))
    return "\n".join(lines) + "\n"


def format_builtin(name: str, l: int, k: int, t: int, r: int, **params) -> str:
    """Compact descriptor naming a built-in construction instead of listing the table."""
    extra = " ".join(f"{a}={b}" for a, b in params.items())
    return f"{l} {k} {t} {r}\nbuiltin {name} {extra}".rstrip() + "\n"


def parse_encoder(text: str, budget_lk: int = rg.DEFAULT_BUDGET_LK) -> FcchdEncoder:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise ParameterError("encoder descriptor needs a header and a function or builtin line")
    try:
        l, k, t, r = (int(x) for x in lines[0].split())
    except ValueError:
        raise ParameterError("encoder header must be 'l k t r'") from None
    ring = Ring(l)
    if lines[1].startswith("builtin"):
        enc = _builtin(lines[1], ring, k, t, budget_lk)
        if enc.r != r:
            raise ParameterError(f"built-in encoder has r = {enc.r}, header says {r}")
        return enc
    f = parse_function_descriptor(lines[1], ring, k, budget_lk)
    N = ring.q ** k
    ring.check_budget(k, budget_lk)
    table = np.zeros((N, r), dtype=np.int64)
    seen = np.zeros(N, dtype=bool)
    for ln in lines[2:]:
        if "->" not in ln:
            raise ParameterError(f"malformed encoder line {ln!r}")
        lhs, rhs = ln.split("->", 1)
        u = ring.vector(int(x) for x in lhs.split())
        p = ring.vector(int(x) for x in rhs.split())
        if len(u) != k or len(p) != r:
            raise ParameterError(f"line {ln!r} does not match k = {k}, r = {r}")
        i = f.message_index(u)
        if seen[i]:
            raise ParameterError(f"message {u} listed twice")
        seen[i] = True
        table[i] = p
    if not seen.all():
        raise ParameterError(f"descriptor lists {int(seen.sum())} of {N} messages")
    return table_encoder(f, t, table)


def _builtin(line, ring, k, t, budget_lk):
    tokens = line.split()
    if len(tokens) < 2:
        raise ParameterError(f"malformed builtin line {line!r}")
    name = tokens[1]
    kw = dict(tok.split("=", 1) for tok in tokens[2:])
    if name == "con1":
        return con1_encoder(ring, k, t, budget_lk=budget_lk)
    if name == "con2":
        return con2_encoder(ring, k, t, int(kw["T"]), budget_lk=budget_lk)
    if name == "locbin":
        fline = "function " + kw.pop("function") + "".join(f" {a}={b}" for a, b in kw.items())
        return locbin_encoder(parse_function_descriptor(fline, ring, k, budget_lk), t)
    raise ParameterError(f"unknown built-in encoder {name!r}")


def read_encoder(path: str | Path, budget_lk: int = rg.DEFAULT_BUDGET_LK) -> FcchdEncoder:
    return parse_encoder(Path(path).read_text(), budget_lk)


def write_encoder(enc: FcchdEncoder, path: str | Path) -> None:
    Path(path).write_text(format_encoder(enc))
