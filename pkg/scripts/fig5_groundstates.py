"""Spread of the two lowest shifted levels of random detuned systems at lambda_1 = 2.5 omega."""

import numpy as np

from _common import Timer, parser, save
from mlrabi.experiments import run_fig5_groundstate_histogram

if __name__ == "__main__":
    p = parser(__doc__, stochastic=True, systems=600)
    p.add_argument("--epsilon", type=float, default=0.05)
    args = p.parse_args()
    with Timer():
        recs = run_fig5_groundstate_histogram(systems=args.systems, epsilon=args.epsilon, seed=args.seed,
                                              workers=args.threads)
    lows = np.array([r.shifted_energy for r in recs if r.experiment_id == "fig5-sample"])
    print(f"mean {lows.mean():.5f}, std {lows.std():.5f} ({lows.std() / args.epsilon:.3f} epsilon)")
    for r in recs:
        if r.experiment_id.startswith("fig5-reference") and r.level_index == 0:
            print(f"{r.experiment_id}: splitting {r.extra['splitting']:.3e}")
    save(recs, args.out_dir, "fig5.csv")
