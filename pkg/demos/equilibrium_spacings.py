"""Run the Hammersley particle dynamics from a Poisson(lam) start and compare
the gaps in the middle of the window with Exp(lam).
"""

import numpy as np

from lppsim import stats
from lppsim.equilibrium import ParticleConfig, evolve
from lppsim.rng import Rect, SeedSpec, Substream, sample_axis, sample_ppp

lam, t = 1.5, 30.0
left, right = -(3 * t / lam**2 + 3 * t ** (2 / 3) / lam), 60 / lam + 3 * t / lam
gaps = []
for i in range(100):
    init = sample_axis((left, right), lam, SeedSpec(3, i, Substream.BOUNDARY, 0))
    bulk = sample_ppp(Rect(left, right, 0.0, t), 1.0, SeedSpec(3, i, Substream.BULK, 0))
    pos = evolve(ParticleConfig(init.locations, (left, right), 0.0), bulk, t).positions
    idx = np.flatnonzero((pos > 0) & (pos <= 60 / lam))
    idx = idx[idx + 1 < pos.size]
    gaps.append(pos[idx + 1] - pos[idx])

gaps = np.concatenate(gaps)
ks = stats.ks_one_sample(gaps, stats.exp_cdf(lam))
print(f"{gaps.size} gaps, mean {gaps.mean():.4f} (1/lam = {1 / lam:.4f}), KS p = {ks.p_value:.3f}")
