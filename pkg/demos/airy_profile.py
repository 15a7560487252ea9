"""Passage profile of one Hammersley sample and its Airy rescaling.

    python demos/airy_profile.py [n] [seed]
"""

import sys

import numpy as np

from lppsim.lpp import passage_profile
from lppsim.rescale import airy_path
from lppsim.rng import Rect, SeedSpec, Substream, sample_ppp

n = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0

u = np.linspace(-1, 1, 9)
x_max = n + 2 * n ** (2 / 3)
bulk = sample_ppp(Rect(0.0, x_max, 0.0, float(n)), 1.0, SeedSpec(seed, 0, Substream.BULK, 0))
prof = passage_profile(bulk, 0.0, float(n), x_max)
print(f"{len(bulk)} points, L[n]_n = {prof(float(n))}, 2n = {2 * n}")

path = airy_path(prof, n, u)
for a, v in zip(u, path.values):
    bar = "#" * max(0, int(round(10 * (v + 3))))
    print(f"u={a:+.2f}  A_n={v:+.3f}  {bar}")
