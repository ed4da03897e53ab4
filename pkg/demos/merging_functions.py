"""Three ways to merge e-values, and what they buy.

The arithmetic mean is usually the most powerful symmetric merge, the
Bonferroni merge (max / n) the most conservative, with the Simes merge in
between.  Their discovery matrices inherit that order entrywise, and at a
handful of hypotheses we can check every number against exhaustive search
and, on the p-value side, against closed testing.
"""

import math

import numpy as np

from edisco import discovery

rng = np.random.default_rng(3)
e = np.sort(np.concatenate([rng.exponential(size=6), np.exp(rng.normal(3, 1, size=4))]))
print("sorted e-values:", np.round(e, 2))

mats = {m: discovery.discovery_matrix(e, m) for m in ("am", "simes", "bonferroni")}
K = e.size
print("\nlast row (reject everything):")
for name, m in mats.items():
    print(f"  {name:10s}", np.round(m.row(K), 3))

am, sm, bm = (mats[k].data for k in ("am", "simes", "bonferroni"))
print("\nBM <= Simes <= AM everywhere:", bool((bm <= sm + 1e-12).all() and (sm <= am + 1e-12).all()))
print("largest AM / Simes ratio", f"{(am / sm).max():.3f}", "vs bound ln K + 1 =", f"{math.log(K) + 1:.3f}")

# any rejection set, not only the top r
R = [0, 5, 9]
print("\nR =", R)
print("  fast     ", np.round(discovery.discovery_vector("am", e, R), 4))
print("  exhaustive", np.round(discovery.brute_force_discovery_vector("am", e, R), 4))

# p-value side: a rejection set certified by closed testing
p = np.sort(np.concatenate([rng.uniform(size=4) * 0.002, rng.uniform(size=4)]))
R = [0, 1, 2, 3]
for rule in ("bonferroni", "simes"):
    dp = discovery.p_discovery_vector_brute(rule, p, R)
    f = discovery.closed_testing_true_discoveries(rule, p, R, 0.05)
    print(f"\n{rule}: D_p = {np.round(dp, 4)}; closed testing at 5% certifies {f} true discoveries")
