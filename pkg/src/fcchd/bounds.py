"""Closed-form bounds on N_h(D) and on optimal redundancies."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .matrices import DistanceMatrix
from .ring import Ring, ball_volume
from .search import plotkin_lower

__all__ = [
    "BoundEntry", "BoundReport", "plotkin_lower", "gv_upper", "equal_upper_theorem",
    "hamming_based_upper", "weight_function_lower", "rt_upper", "minmax_bounds",
    "locally_binary_sandwich", "trivial_lower", "table1_rows", "figure1_series",
    "matrix_report", "TABLE1_PAIRS",
]

LOWER, UPPER = "lower", "upper"
TABLE1_PAIRS = ((10, 90), (50, 200), (70, 200), (80, 300), (90, 400))
_NEAR = 1e-9


@dataclass
class BoundEntry:
    name: str
    side: str
    value: object  # int, Fraction, float, or None when inapplicable
    applicable: bool = True
    conditions: str = ""
    anchor: str = ""


@dataclass
class BoundReport:
    instance: str
    entries: list[BoundEntry] = field(default_factory=list)

    def add(self, *args, **kwargs) -> BoundEntry:
        entry = BoundEntry(*args, **kwargs)
        self.entries.append(entry)
        return entry

    def get(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def applicable(self, side: str) -> list[BoundEntry]:
        return [e for e in self.entries if e.side == side and e.applicable and e.value is not None]

    def consistent(self) -> bool:
        lows = [e.value for e in self.applicable(LOWER)]
        ups = [e.value for e in self.applicable(UPPER)]
        return not lows or not ups or max(lows) <= min(ups)

    def rows(self) -> list[dict]:
        return [{"bound": e.name, "side": e.side, "value": e.value, "applicable": e.applicable,
                 "conditions": e.conditions, "anchor": e.anchor} for e in self.entries]


def _stable_ceil(fast: float, precise) -> int:
    """ceil of a real known in float; re-evaluated with 60-digit decimals near an integer."""
    if abs(fast - round(fast)) > _NEAR:
        return math.ceil(fast)
    with localcontext() as ctx:
        ctx.prec = 60
        value = precise()
    return int(value.to_integral_value(rounding="ROUND_CEILING"))


def gv_upper(D: DistanceMatrix, ring: Ring, perm: Sequence[int] | None = None, r_cap: int = 100_000) -> int:
    """Least r with q^r > max_j sum_{i<j} V_h(r, D[pi(i), pi(j)] - 1).

    Greedy code construction is guaranteed to succeed at this length.
    """
    M = D.M
    perm = list(range(M)) if perm is None else list(perm)
    req = D.symmetrized()
    radii = []
    for j in range(M):
        radii.append([int(req[perm[i], perm[j]]) - 1 for i in range(j)])
    for r in range(0, r_cap + 1):
        space = ring.q ** r
        worst = max((sum(ball_volume(r, d, ring) for d in col) for col in radii), default=0)
        if space > worst:
            return r
    raise ParameterError(f"volume condition not met below r = {r_cap}")


def equal_upper_theorem(M: int, d: int) -> int:
    """ceil((ln M + d - 1) / (1 - ln 2)), an upper bound on N_h(M, d)."""
    if M < 1 or d < 1:
        raise ParameterError("need M >= 1 and d >= 1")
    fast = (math.log(M) + d - 1) / (1 - math.log(2))
    return _stable_ceil(fast, lambda: (Decimal(M).ln() + d - 1) / (1 - Decimal(2).ln()))


def hamming_based_upper(M: int, d: int) -> float | None:
    """(2d - 2) / (1 - 2 sqrt(ln d / d)) when d >= 10 and M <= d^2, else None."""
    if d < 10 or M > d * d or M < 1:
        return None
    return (2 * d - 2) / (1 - 2 * math.sqrt(math.log(d) / d))


def weight_function_lower(t: int) -> int:
    """ceil((5t^3 + 15t^2 + 10t) / (3 (t + 2)^2)), valid when k > ceil((t + 1) / 2)."""
    if t < 1:
        raise ParameterError("t must be >= 1")
    return math.ceil(Fraction(5 * t ** 3 + 15 * t ** 2 + 10 * t, 3 * (t + 2) ** 2))


def rt_upper(k: int, t: int) -> int:
    if k < 1 or t < 1:
        raise ParameterError("need k >= 1 and t >= 1")
    return equal_upper_theorem(k + 1, 2 * t)


def trivial_lower(image_size: int, t: int) -> int:
    """Any non-constant function needs at least t redundancy symbols."""
    return t if image_size >= 2 else 0


def locally_binary_sandwich(t: int) -> tuple[int, int]:
    if t < 0:
        raise ParameterError("t must be >= 0")
    return t, 2 * t


def minmax_phi(r: int, w: int, t: int, ring: Ring) -> int:
    return (ring.q ** r - (w * w - 5 * w + 7) * ball_volume(r, 2 * t - 2, ring)
            - 4 * (w - 2) * ball_volume(r, 2 * t - 1, ring))


def minmax_bounds(w: int, s: int, ring: Ring, t: int, r_cap: int = 100_000) -> BoundReport:
    report = BoundReport(f"min-max w={w} s={s} l={ring.l} t={t}")
    ok = w >= 3 and s >= 2
    cond = "w >= 3, s >= 2"
    if ok and t >= 2:
        lower = Fraction(2 * t * (w * w - w - 1) - (3 * w * w - 7 * w + 5), w * (w - 1))
    elif ok and t == 1:
        lower = Fraction(2 * (2 * t - 1) * (w - 2), w * (w - 1))
    else:
        lower = None
    report.add("minmax_average_lower", LOWER, lower, lower is not None, cond + ", t >= 1",
               "representative-vector averaging argument")

    up_ok = ok and ring.l >= 2 and t >= 1
    upper = None
    if up_ok:
        upper = next((r for r in range(r_cap + 1) if minmax_phi(r, w, t, ring) > 0), None)
    report.add("minmax_volume_upper", UPPER, upper, up_ok and upper is not None, cond + ", l >= 2",
               "greedy volume condition phi(r) > 0")

    log_ok = ok and t >= 2
    log_lower = None
    if log_ok:
        a = (t - 2) // 2
        n = math.log2(w * (w - 1))
        inner = n / ring.l
        if a == 0:
            log_lower = n / ring.l
        elif inner > 0:
            log_lower = (n + a * math.log2(inner) - a * math.log2(a)) / ring.l
        else:
            log_ok = False
    report.add("minmax_sphere_packing_lower", LOWER, log_lower, log_ok, cond + ", t >= 2",
               "sphere packing with Hamming sub-balls, base-2 logarithms")
    return report


def matrix_report(D: DistanceMatrix, ring: Ring) -> BoundReport:
    """Bounds on N_h(D) for a single requirement matrix."""
    report = BoundReport(f"matrix M={D.M} l={ring.l}")
    report.add("plotkin", LOWER, plotkin_lower(D), True, "", "average-distance argument")
    report.add("gv", UPPER, gv_upper(D, ring), True, "", "greedy volume condition")
    off = D.entries[~np.eye(D.M, dtype=bool)] if D.M > 1 else []
    constant = D.M > 1 and len(set(int(x) for x in off)) == 1 and D.is_symmetric()
    d = int(off[0]) if constant else None
    if constant and d >= 1:
        report.add("equal_distance_theorem", UPPER, equal_upper_theorem(D.M, d), True,
                   "constant off-diagonal", "lambda = 1 ball bound")
        h = hamming_based_upper(D.M, d)
        report.add("hamming_based", UPPER, h, h is not None, "d >= 10 and M <= d^2",
                   "Hamming-distance code comparison")
    return report


def table1_rows() -> list[tuple[int, int, float, int]]:
    return [(d, M, hamming_based_upper(M, d), equal_upper_theorem(M, d)) for d, M in TABLE1_PAIRS]


def figure1_series(d_lo: int, d_hi: int) -> list[dict]:
    """Rows comparing f(d) = (2 ln d + d - 1)/(1 - ln 2) (raw and ceiled) with
    g(d) = (2d - 2)/(1 - 2 sqrt(ln d / d)).  Rows where g's denominator is not
    positive carry ``g=None`` and ``flag='g-undefined'``."""
    if d_lo < 3 or d_hi < d_lo:
        raise ParameterError("need 3 <= d_lo <= d_hi")
    rows = []
    for d in range(d_lo, d_hi + 1):
        raw = (2 * math.log(d) + d - 1) / (1 - math.log(2))
        ceiled = _stable_ceil(raw, lambda: (2 * Decimal(d).ln() + d - 1) / (1 - Decimal(2).ln()))
        denom = 1 - 2 * math.sqrt(math.log(d) / d)
        g = (2 * d - 2) / denom if denom > 0 else None
        rows.append({"d": d, "f": ceiled, "raw_f": raw, "g": g,
                     "flag": "" if g is not None else "g-undefined"})
    return rows
