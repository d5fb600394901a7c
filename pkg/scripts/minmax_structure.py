"""Function distance matrix and bounds for the block min/max function."""
import argparse

from fcchd.bounds import minmax_bounds
from fcchd.functions import make_function
from fcchd.matrices import format_matrix, function_distance_matrix
from fcchd.ring import Ring
from fcchd.search import exact_min_length, greedy_min_length


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--w", type=int, default=3)
    ap.add_argument("--s", type=int, default=2)
    ap.add_argument("--t", type=int, default=2)
    ap.add_argument("--ring-l", type=int, default=2)
    args = ap.parse_args()
    ring = Ring(args.ring_l)
    f = make_function("min_max", ring, args.w * args.s, w=args.w, s=args.s)
    D = function_distance_matrix(f, args.t)
    print(format_matrix(D), end="")
    for e in minmax_bounds(args.w, args.s, ring, args.t).entries:
        print(f"{e.name:<30} {e.side:<6} {e.value if e.applicable else 'n/a'}")
    g = greedy_min_length(D, ring)
    print(f"greedy length {g.length}")
    ex = exact_min_length(D, ring, node_budget=200_000)
    print(f"exact: {ex.status}" + (f" N_h = {ex.length}" if ex.found else ""))


if __name__ == "__main__":
    main()
