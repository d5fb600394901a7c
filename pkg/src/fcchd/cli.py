"""Command-line front end.

Exit codes: 0 success, 1 invalid input or failed check, 2 budget exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds as bd
from . import ring as rg
from .channel import ErrorModel, run_experiment
from .encoders import (con1_encoder, con2_encoder, decode_function_value, format_builtin, format_encoder,
                       generic_encoder, locbin_encoder, read_encoder, verify_fcchd)
from .errors import BudgetExceeded, ParameterError
from .functions import load_lookup_table, make_function
from .matrices import format_matrix, function_distance_matrix, read_matrix, requirement_matrix
from .ring import Ring
from .search import (FOUND, equal_distance_code, exact_min_length, format_code, greedy_min_length,
                     plotkin_lower, read_code, verify_irregular_code)


# -- output ------------------------------------------------------------------------

class Output:
    def __init__(self, fmt: str, path: str | None):
        self.fmt = fmt
        self.path = path
        self.buf = io.StringIO()

    def emit(self, rows: list[dict], text: str | None = None):
        """Write rows in the chosen format; ``text`` overrides the default text rendering."""
        if self.fmt == "json":
            self.buf.write(json.dumps(rows, default=_jsonable) + "\n")
        elif self.fmt == "csv":
            if rows:
                w = csv.DictWriter(self.buf, fieldnames=list(rows[0]), lineterminator="\n")
                w.writeheader()
                for row in rows:
                    w.writerow({k: _cell(v) for k, v in row.items()})
        else:
            if text is None:
                text = "\n".join(" ".join(f"{k}={_cell(v)}" for k, v in row.items()) for row in rows) + "\n"
            self.buf.write(text)

    def close(self):
        data = self.buf.getvalue()
        if self.path:
            Path(self.path).write_text(data)
        else:
            sys.stdout.write(data)


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return "(" + ",".join(str(x) for x in v) + ")"
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if hasattr(v, "tolist"):
        return v.tolist()
    if hasattr(v, "item"):
        return v.item()
    return str(v)


def _vec(text: str) -> tuple[int, ...]:
    text = text.strip().strip("()")
    if not text:
        return ()
    parts = text.replace(",", " ").split()
    try:
        return tuple(int(x) for x in parts)
    except ValueError:
        raise ParameterError(f"cannot parse vector {text!r}") from None


def _trace(args):
    if not args.trace:
        return None
    return lambda msg: print(msg, file=sys.stderr, flush=True)


def _ring(args) -> Ring:
    return Ring(args.ring_l)


def _function(args):
    ring = _ring(args)
    kind = args.function.replace("-", "_")
    if kind == "lookup_table":
        if not args.table:
            raise ParameterError("--table is required for lookup-table functions")
        f = load_lookup_table(args.table, budget_lk=args.budget_lk)
        if f.ring != ring:
            raise ParameterError(f"table is over Z_{f.ring.q}, but --ring-l gives Z_{ring.q}")
        return f
    if args.k is None:
        raise ParameterError("--k is required")
    return make_function(kind, ring, args.k, T=args.T, w=args.w, s=args.s, budget_lk=args.budget_lk)


# -- handlers ----------------------------------------------------------------------

def cmd_weight(args, out):
    ring = _ring(args)
    u = ring.vector(_vec(args.vector))
    if args.to is not None:
        v = ring.vector(_vec(args.to))
        val = rg.distance(u, v, ring, args.kind)
        out.emit([{"u": u, "v": v, "kind": args.kind, "distance": val}], f"{val}\n")
    else:
        val = rg.weight(u, ring, args.kind)
        out.emit([{"u": u, "kind": args.kind, "weight": val}], f"{val}\n")


def _matrix_rows(D):
    return [{"row": i + 1, "label": _cell(D.labels[i]), **{f"c{j + 1}": int(x) for j, x in enumerate(row)}}
            for i, row in enumerate(D.entries)]


def cmd_matrix(args, out):
    f = _function(args)
    if args.which == "req":
        if not args.messages:
            raise ParameterError("--messages is required, e.g. '0,0;0,1;1,1'")
        msgs = [_vec(m) for m in args.messages.split(";") if m.strip()]
        D = requirement_matrix(f, args.t, msgs)
    else:
        D = function_distance_matrix(f, args.t, exhaustive=args.exhaustive)
    out.emit(_matrix_rows(D), format_matrix(D))


def _code_rows(code):
    return [{"index": i + 1, "codeword": c} for i, c in enumerate(code.codewords)]


def cmd_code(args, out):
    ring = _ring(args)
    trace = _trace(args)
    if args.which == "equal":
        code = equal_distance_code(args.M, args.d, ring, seed=args.seed)
        out.emit(_code_rows(code), format_code(code))
        return 0
    D = read_matrix(args.matrix)
    if args.which == "verify":
        code = read_code(args.code)
        if code.ring != ring:
            raise ParameterError(f"code is over Z_{code.ring.q}, but --ring-l gives Z_{ring.q}")
        ok, bad = verify_irregular_code(code, D, try_permutations=args.try_permutations)
        out.emit([{"ok": ok, "violation": bad}], f"{'ok' if ok else f'violation at pair {bad}'}\n")
        return 0 if ok else 1
    if args.which == "greedy":
        perm = [int(x) - 1 for x in _vec(args.perm)] if args.perm else None
        res = greedy_min_length(D, ring, perm, args.strategy, args.seed, trace=trace)
    else:
        res = exact_min_length(D, ring, r_max=args.r_max, node_budget=args.node_budget, trace=trace)
    if res.status != FOUND:
        print(f"search stopped: {res.status} at r={res.r_tried} after {res.nodes_visited} nodes "
              f"{res.notes}", file=sys.stderr)
        return 2
    head = f"# N_h = {res.length}\n" if args.which == "exact" else f"# greedy length = {res.length}\n"
    out.emit([{"length": res.length, "nodes": res.nodes_visited, **r} for r in _code_rows(res.code)],
             head + format_code(res.code))
    return 0


def _report_rows(report):
    return report.rows()


def cmd_bound(args, out):
    which = args.which
    if which in ("plotkin", "gv"):
        ring = _ring(args)
        D = read_matrix(args.matrix)
        val = plotkin_lower(D) if which == "plotkin" else bd.gv_upper(D, ring)
        out.emit([{"bound": which, "value": val}], f"{val}\n")
    elif which == "hamming":
        val = bd.hamming_based_upper(args.M, args.d)
        if val is None:
            raise ParameterError("Hamming-based bound needs d >= 10 and M <= d^2")
        out.emit([{"bound": which, "M": args.M, "d": args.d, "value": val}], f"{val!r}\n")
    elif which == "equal":
        val = bd.equal_upper_theorem(args.M, args.d)
        out.emit([{"bound": which, "M": args.M, "d": args.d, "value": val}], f"{val}\n")
    elif which == "weightfn":
        val = bd.weight_function_lower(args.t)
        out.emit([{"bound": which, "t": args.t, "value": val}], f"{val}\n")
    elif which == "rt":
        val = bd.rt_upper(args.k, args.t)
        out.emit([{"bound": which, "k": args.k, "t": args.t, "value": val}], f"{val}\n")
    elif which == "sandwich":
        lo, hi = bd.locally_binary_sandwich(args.t)
        out.emit([{"bound": which, "t": args.t, "lower": lo, "upper": hi}], f"{lo} {hi}\n")
    elif which == "minmax":
        rep = bd.minmax_bounds(args.w, args.s, _ring(args), args.t)
        rows = _report_rows(rep)
        text = "".join(f"{r['bound']} {r['side']} {_cell(r['value']) if r['applicable'] else 'n/a'}\n"
                       for r in rows)
        out.emit(rows, text)
    return 0


def cmd_encode(args, out):
    ring = _ring(args)
    which = args.which
    if which == "con1":
        base = read_code(args.base_code) if args.base_code else None
        enc = con1_encoder(ring, args.k, args.t, base, budget_lk=args.budget_lk)
        compact = format_builtin("con1", ring.l, args.k, args.t, enc.r) if base is None else None
    elif which == "con2":
        if args.T is None:
            raise ParameterError("--T is required")
        enc = con2_encoder(ring, args.k, args.t, args.T, budget_lk=args.budget_lk)
        compact = format_builtin("con2", ring.l, args.k, args.t, enc.r, T=args.T)
    elif which == "locbin":
        f = _function(args)
        enc = locbin_encoder(f, args.t)
        params = {"function": f.kind, **f.params}
        compact = None if f.kind == "lookup_table" else format_builtin("locbin", ring.l, f.k, args.t, enc.r, **params)
    else:
        f = _function(args)
        if not args.code:
            raise ParameterError("--code is required for the generic encoder")
        enc = generic_encoder(f, args.t, read_code(args.code))
        compact = None
    text = compact if compact is not None and not args.full_table else format_encoder(enc)
    out.emit([{"l": ring.l, "k": enc.k, "t": enc.t, "r": enc.r, "provenance": enc.provenance}], text)
    return 0


def cmd_verify(args, out):
    enc = read_encoder(args.encoder, args.budget_lk)
    ok, pair = verify_fcchd(enc)
    text = "ok\n" if ok else f"violation: {pair[0]} {pair[1]}\n"
    out.emit([{"ok": ok, "u1": pair[0] if pair else None, "u2": pair[1] if pair else None}], text)
    return 0 if ok else 1


def cmd_decode(args, out):
    enc = read_encoder(args.encoder, args.budget_lk)
    res = decode_function_value(_vec(args.received), enc, args.mode)
    out.emit([{"value": res.value, "distance": res.distance, "message": res.message}],
             f"{_cell(res.value)}\n# distance {res.distance} message {_cell(res.message)}\n")
    return 0


def cmd_simulate(args, out):
    enc = read_encoder(args.encoder, args.budget_lk)
    t = enc.t if args.t is None else args.t
    rep = run_experiment(enc, ErrorModel(args.mode, t, args.seed), args.trials, args.source)
    row = {"trials": rep.trials, "successes": rep.successes, "failures": len(rep.failures),
           "success_rate": rep.success_rate}
    out.emit([row], "\n".join(rep.lines()) + "\n")
    return 0


def cmd_emit(args, out):
    if args.which == "table1":
        rows = [{"d": d, "M": M, "hamming_based": g, "theorem": c} for d, M, g, c in bd.table1_rows()]
        text = "".join(f"{r['d']} {r['M']} {r['hamming_based']!r} {r['theorem']}\n" for r in rows)
        out.emit(rows, text)
    else:
        rows = bd.figure1_series(args.d_lo, args.d_hi)
        text = "".join(f"{r['d']} {r['raw_f']!r} {r['f']} {_cell(r['g'])} {r['flag']}\n" for r in rows)
        out.emit([{"d": r["d"], "raw_f": r["raw_f"], "f": r["f"], "g": r["g"], "flag": r["flag"]}
                  for r in rows], text)
    return 0


# -- parser --------------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--ring-l", type=int, default=2, help="ring exponent l, the ring is Z_{2^l}")
    p.add_argument("--budget-lk", type=int, default=rg.DEFAULT_BUDGET_LK,
                   help="largest l*k for which Z_{2^l}^k may be enumerated")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--trace", action="store_true", help="stream search progress to stderr")
    return p


def _function_args(p):
    p.add_argument("--function", default="hom-weight",
                   help="hom-weight, weight-distribution, rt-weight, min-max, identity, constant, lookup-table")
    p.add_argument("--k", type=int)
    p.add_argument("--T", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--table", help="lookup-table file")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="fcchd", description="Function-correcting codes over Z_{2^l}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weight", parents=[common], help="weight of a vector or distance between two")
    p.add_argument("vector")
    p.add_argument("--to")
    p.add_argument("--kind", default="homogeneous", choices=[k.value for k in rg.WeightKind])
    p.set_defaults(handler=cmd_weight)

    p = sub.add_parser("matrix", help="requirement and function distance matrices")
    msub = p.add_subparsers(dest="which", required=True)
    for name in ("req", "fun"):
        q = msub.add_parser(name, parents=[common])
        _function_args(q)
        q.add_argument("--t", type=int, required=True)
        if name == "req":
            q.add_argument("--messages", help="semicolon-separated messages")
        else:
            q.add_argument("--exhaustive", action="store_true", help="skip closed forms")
        q.set_defaults(handler=cmd_matrix)

    p = sub.add_parser("code", help="codes meeting a distance matrix")
    csub = p.add_subparsers(dest="which", required=True)
    q = csub.add_parser("greedy", parents=[common])
    q.add_argument("--matrix", required=True)
    q.add_argument("--strategy", default="lexicographic", choices=("lexicographic", "seeded_random"))
    q.add_argument("--perm", help="1-based insertion order, e.g. 3,1,2")
    q.set_defaults(handler=cmd_code)
    q = csub.add_parser("exact", parents=[common])
    q.add_argument("--matrix", required=True)
    q.add_argument("--r-max", type=int, default=16)
    q.add_argument("--node-budget", type=int, default=2_000_000)
    q.set_defaults(handler=cmd_code)
    q = csub.add_parser("verify", parents=[common])
    q.add_argument("--matrix", required=True)
    q.add_argument("--code", required=True)
    q.add_argument("--try-permutations", action="store_true")
    q.set_defaults(handler=cmd_code)
    q = csub.add_parser("equal", parents=[common])
    q.add_argument("--M", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.set_defaults(handler=cmd_code)

    p = sub.add_parser("bound", help="closed-form bounds")
    bsub = p.add_subparsers(dest="which", required=True)
    for name in ("plotkin", "gv"):
        q = bsub.add_parser(name, parents=[common])
        q.add_argument("--matrix", required=True)
    for name in ("hamming", "equal"):
        q = bsub.add_parser(name, parents=[common])
        q.add_argument("--M", type=int, required=True)
        q.add_argument("--d", type=int, required=True)
    q = bsub.add_parser("weightfn", parents=[common])
    q.add_argument("--t", type=int, required=True)
    q = bsub.add_parser("rt", parents=[common])
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--t", type=int, required=True)
    q = bsub.add_parser("minmax", parents=[common])
    q.add_argument("--w", type=int, required=True)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--t", type=int, required=True)
    q = bsub.add_parser("sandwich", parents=[common])
    q.add_argument("--t", type=int, required=True)
    for q in bsub.choices.values():
        q.set_defaults(handler=cmd_bound)

    p = sub.add_parser("encode", help="build an encoder descriptor")
    esub = p.add_subparsers(dest="which", required=True)
    for name in ("con1", "con2", "locbin", "generic"):
        q = esub.add_parser(name, parents=[common])
        q.add_argument("--t", type=int, required=True)
        q.add_argument("--full-table", action="store_true", help="list every message instead of naming the construction")
        if name in ("con1", "con2"):
            q.add_argument("--k", type=int, required=True)
        if name == "con1":
            q.add_argument("--base-code", help="code file with 2t+1 words at distance >= 2t (t > 3)")
        if name == "con2":
            q.add_argument("--T", type=int)
        if name in ("locbin", "generic"):
            _function_args(q)
        if name == "generic":
            q.add_argument("--code", help="code file meeting the function distance matrix")
        q.set_defaults(handler=cmd_encode)

    p = sub.add_parser("verify-fcchd", parents=[common], help="exhaustively check an encoder")
    p.add_argument("--encoder", required=True)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("decode", parents=[common], help="decode the function value of a received word")
    p.add_argument("--encoder", required=True)
    p.add_argument("--received", required=True)
    p.add_argument("--mode", default="exhaustive", choices=("exhaustive", "ball"))
    p.set_defaults(handler=cmd_decode)

    p = sub.add_parser("simulate", parents=[common], help="encode, corrupt and decode at random")
    p.add_argument("--encoder", required=True)
    p.add_argument("--mode", default="uniform_ball", choices=("uniform_ball", "fixed_weight", "adversarial_boundary"))
    p.add_argument("--t", type=int, help="error weight (default: the encoder's t)")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--source", default="seeded_uniform", choices=("seeded_uniform", "exhaustive"))
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("emit", help="regenerate published tables")
    esub = p.add_subparsers(dest="which", required=True)
    esub.add_parser("table1", parents=[common]).set_defaults(handler=cmd_emit)
    q = esub.add_parser("figure1", parents=[common])
    q.add_argument("--d-lo", type=int, default=10)
    q.add_argument("--d-hi", type=int, default=100)
    q.set_defaults(handler=cmd_emit)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return 0 if exc.code == 0 else 1
    out = Output(args.format, args.out)
    try:
        code = args.handler(args, out) or 0
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (ParameterError, ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out.close()
    return code


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
