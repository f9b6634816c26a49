"""Shifted-energy density of random 5 x 5 systems with the Rabi-model overlay.

Full resolution (600 systems, 1000 x 1250 bins) takes many hours on one core;
``--systems 100 --bins 200,250`` is the desk-scale check.
"""

from _common import Timer, parser, save
from mlrabi.experiments import heatmap, heatmap_records, ridge_alignment

if __name__ == "__main__":
    p = parser(__doc__, stochastic=True, systems=600)
    p.add_argument("--bins", default="1000,1250")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--cutoff", type=int, default=48)
    args = p.parse_args()
    bins = tuple(int(v) for v in args.bins.split(","))
    with Timer():
        hm = heatmap(systems=args.systems, bins=bins, epsilon=args.epsilon, seed=args.seed,
                     fock_cutoff=args.cutoff, workers=args.threads)
    print(f"ridge alignment {ridge_alignment(hm):.3f}; excluded systems {len(hm.failed)}")
    save(heatmap_records(hm), args.out_dir, "fig4.csv")
