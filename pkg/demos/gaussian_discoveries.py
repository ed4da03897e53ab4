"""How many of my rejections are real?  A Gaussian walk-through.

Two hundred hypotheses, half of them false: the false ones have their
observation drawn from N(-3, 1), the true ones from N(0, 1).  We turn each
observation into a likelihood-ratio e-value, build the arithmetic-mean
discovery matrix and read off claims like "among the 50 most significant
hypotheses at least 30 are true discoveries, with e-value above 10".

    python demos/gaussian_discoveries.py [--seed 1] [--out demo_out]
"""

import argparse
from pathlib import Path

import numpy as np

from edisco import discovery, evalues, render, simulation

parser = argparse.ArgumentParser()
parser.add_argument("--seed", type=int, default=1)
parser.add_argument("--out", default="demo_out")
args = parser.parse_args()
out = Path(args.out)
out.mkdir(exist_ok=True)

scenario = simulation.GaussianScenario(K=200, delta=-3.0, seed=args.seed)
x, is_false = simulation.generate_observations(scenario)
e = simulation.likelihood_ratio_e(x, scenario.delta)
ev = discovery.SortedEValues(e)
print(f"{scenario.K} hypotheses, {is_false.sum()} false; largest e-value {ev.values[-1]:.3g}")

am = discovery.am_discovery_matrix(ev)

# Row r answers: if I reject the r most significant hypotheses, how many are real?
for r in (25, 50, 100, 150, 200):
    row = am.row(r)
    strong = int((row >= 10).sum())
    truth = int(is_false[ev.order[::-1][:r]].sum())
    print(f"reject top {r:3d}: at least {strong:3d} true discoveries with e >= 10  (actually {truth})")

# the decisive region: entries at or above 100
print("decisive entries in the last row:", int((am.row(200) >= 100).sum()))

# compare with the FDR procedures on the matching p-values
p = simulation.gaussian_p(x)
for q in (0.01, 0.05, 0.1):
    print(f"q={q:<4}  BH rejects {simulation.bh_rejections(p, q):3d}, BY rejects {simulation.by_rejections(p, q):3d}")

# the e-matrix translated to p-values, and an optimistic VS-calibrated counterpart
render.write_ppm(out / "am_jeffreys.ppm", am, "jeffreys")
render.write_ppm(out / "am_as_p_fisher.ppm", am.map(evalues.e_to_p), "fisher")
vs_e = discovery.am_discovery_matrix(discovery.SortedEValues(evalues.vs_bound(p)))
render.write_ppm(out / "vs_jeffreys.ppm", vs_e, "jeffreys")
print("left-top entry, LR vs VS-calibrated p:", f"{am[1, 1]:.3g}", f"{vs_e[1, 1]:.3g}")
print(f"images written to {out}/")
