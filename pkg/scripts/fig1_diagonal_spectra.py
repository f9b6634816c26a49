"""Four-level spectra with diagonal coupling (lambda, 0.7 lambda), shifted per doublet."""

import numpy as np

from _common import Timer, parser, save
from mlrabi.experiments import run_fig1_diagonal_spectra

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--lambda-max", type=float, default=2.0)
    args = p.parse_args()
    with Timer():
        recs = run_fig1_diagonal_spectra(np.linspace(0, args.lambda_max, args.points), workers=args.threads)
    save(recs, args.out_dir, "fig1.csv")
