"""Couple plain and stationary last passage on one bulk sample and check the
local comparison inequalities on a grid of endpoints.

    python demos/comparison_audit.py [n] [samples]
"""

import sys

import numpy as np

from lppsim.equilibrium import CoupledSample, comparison_audit

n = int(sys.argv[1]) if len(sys.argv) > 1 else 100
samples = int(sys.argv[2]) if len(sys.argv) > 2 else 200
lams = [0.8, 1.25]
xs = n + 2 * np.linspace(-1, 1, 5) * n ** (2 / 3)

total = None
for i in range(samples):
    cs = CoupledSample(7, i, float(n), float(xs.max()), lams)
    for lam in lams:
        exits, _ = cs.exits(lam, xs)
        rep = comparison_audit(cs.bulk, cs.boundaries[lam], float(n), xs, exits=exits)
        total = rep if total is None else total.merge(rep)

print(f"pairs checked {total.checked_pairs}, upper {total.upper_checked}, "
      f"lower {total.lower_checked}, violations {total.violations}")
