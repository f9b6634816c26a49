"""Detuning-induced anticrossing between doublet families (epsilon = 0.015 omega)."""

from _common import Timer, parser, save
from mlrabi.experiments import run_fig3_anticrossing

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--epsilon", type=float, default=0.015)
    p.add_argument("--mixing", type=float, default=0.2)
    args = p.parse_args()
    with Timer():
        recs = run_fig3_anticrossing(args.epsilon, b=args.mixing, workers=args.threads)
    s = recs[-1].extra
    print(f"crossing at lambda {s['lambda_cross']:.5f}; detuned gap {s['gap_min']:.5f} "
          f"({s['gap_min'] / args.epsilon:.3f} epsilon)")
    save(recs, args.out_dir, "fig3.csv")
