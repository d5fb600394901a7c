"""Print the equal-distance bound table (d, M, Hamming-based bound, closed-form bound)."""
import argparse

from fcchd.bounds import hamming_based_upper, equal_upper_theorem, table1_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--extra", nargs="*", default=[], help="additional d:M pairs, e.g. 20:150")
    args = ap.parse_args()
    rows = list(table1_rows())
    for pair in args.extra:
        d, M = (int(x) for x in pair.split(":"))
        rows.append((d, M, hamming_based_upper(M, d), equal_upper_theorem(M, d)))
    print(f"{'d':>4} {'M':>5} {'hamming-based':>20} {'closed form':>12}")
    for d, M, g, c in rows:
        g_text = "n/a" if g is None else f"{g:.10f}"
        print(f"{d:>4} {M:>5} {g_text:>20} {c:>12}")


if __name__ == "__main__":
    main()
