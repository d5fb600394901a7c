"""Encode, corrupt and decode with several encoders and report success rates."""
import argparse

from fcchd.channel import ErrorModel, run_experiment
from fcchd.encoders import con1_encoder, con2_encoder, locbin_encoder, strawman_encoder
from fcchd.functions import make_function
from fcchd.ring import Ring


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ring-l", type=int, default=2)
    args = ap.parse_args()
    ring = Ring(args.ring_l)
    encoders = [
        ("con1 k=4 t=1", con1_encoder(ring, 4, 1)),
        ("con1 k=4 t=2", con1_encoder(ring, 4, 2)),
        ("con2 k=7 t=2 T=5", con2_encoder(ring, 7, 2, 5)),
        ("locbin k=7 t=1 T=5", locbin_encoder(make_function("weight_distribution", ring, 7, T=5), 1)),
        ("no redundancy k=4 t=1", strawman_encoder(make_function("hom_weight", ring, 4), 1)),
    ]
    for name, enc in encoders:
        for mode in ("uniform_ball", "fixed_weight"):
            rep = run_experiment(enc, ErrorModel(mode, enc.t, args.seed), args.trials)
            print(f"{name:<24} r={enc.r} {mode:<13} success={rep.success_rate:.4f} "
                  f"({rep.successes}/{rep.trials}, {rep.wall_time:.2f}s)")


if __name__ == "__main__":
    main()
