"""Compare the two equal-distance bounds at M = d^2 and report where the ordering flips."""
import argparse

from fcchd.bounds import figure1_series


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d-lo", type=int, default=10)
    ap.add_argument("--d-hi", type=int, default=100)
    ap.add_argument("--csv", action="store_true", help="print every row as CSV")
    args = ap.parse_args()
    rows = figure1_series(args.d_lo, args.d_hi)
    if args.csv:
        print("d,raw_f,f,g,flag")
        for r in rows:
            print(f"{r['d']},{r['raw_f']!r},{r['f']},{'' if r['g'] is None else repr(r['g'])},{r['flag']}")
        return
    below = [r["d"] for r in rows if r["g"] is not None and r["raw_f"] <= r["g"]]
    above = [r["d"] for r in rows if r["g"] is not None and r["raw_f"] > r["g"]]
    print(f"closed form <= hamming-based for d in {below[0]}..{below[-1]}" if below else "closed form never below")
    if above:
        print(f"first d where the closed form is larger: {above[0]}")
    undefined = [r["d"] for r in rows if r["g"] is None]
    if undefined:
        print(f"hamming-based bound undefined for {len(undefined)} values of d")


if __name__ == "__main__":
    main()
