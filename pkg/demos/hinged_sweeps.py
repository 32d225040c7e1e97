"""Branch sweeps of the hinged annulus for six Poisson ratios.

Writes one CSV and one SVG per sigma into ``demos/out`` and prints where the
radial branch stops being the lowest one.
"""
from pathlib import Path

import numpy as np

from biharmonic.cli import fmt_float, sweep_svg, to_csv
from biharmonic.model import navier
from biharmonic.spectrum import SWEEP_SIGMAS, branch_sweep, threshold_find

OUT = Path(__file__).resolve().parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    grid = np.linspace(1e-4, 0.012, 25)
    for sigma in SWEEP_SIGMAS:
        table = branch_sweep(navier(sigma), 2, [0, 1], grid)
        stem = f"sweep_sigma_{sigma:+.2f}"
        rows = [[r.a, r.ell, r.t1, r.lambda1] for r in table.rows]
        (OUT / f"{stem}.csv").write_text(to_csv(["a", "ell", "t1", "lambda1"], rows, {"sigma": sigma}))
        (OUT / f"{stem}.svg").write_text(sweep_svg(table, f"N = 2, navier sigma = {sigma}"))
        (lo, hi), = table.crossings()
        a_star = threshold_find(navier(sigma), 2, lo, hi)
        print(f"sigma = {sigma:+.2f}  crossing at a = {fmt_float(a_star)}")
    print(f"files in {OUT}")


if __name__ == "__main__":
    main()
