"""Analytic vs Monte Carlo statistics of the largest singular value, with histograms."""

from _common import Timer, parser, save
from mlrabi.experiments import run_appendix_sv_stats

if __name__ == "__main__":
    p = parser(__doc__, stochastic=True)
    p.add_argument("--ensemble", choices=("complex", "real"), default="complex")
    p.add_argument("--n-grid", default="2,3,4,5,6,8,10,13,16,20,25,30,40,50")
    args = p.parse_args()
    grid = [int(v) for v in args.n_grid.split(",")]
    with Timer():
        recs = run_appendix_sv_stats(grid, ensemble=args.ensemble, seed=args.seed, workers=args.threads)
    print(f"{'n':>4} {'analytic':>10} {'MC':>10} {'z':>7} {'var(an)':>9} {'var(MC)':>9}")
    for r in recs:
        if r.experiment_id == "sv-moments":
            e = r.extra
            z = (e["analytic_mean"] - e["mc_mean"]) / e["mc_stderr"]
            print(f"{int(r.sweep_value):4d} {e['analytic_mean']:10.4f} {e['mc_mean']:10.4f} {z:7.1f} "
                  f"{e['analytic_variance']:9.4f} {e['mc_variance']:9.4f}")
    save(recs, args.out_dir, f"appendix_sv_{args.ensemble}.csv")
