"""Exact enumeration against simulation.

Small designs can be enumerated; large ones cannot.  Each state simulates from
its own random stream, so results do not depend on how work is split.
"""

import numpy as np

from asif_regret import EngineConfig, EnumerationCapError, SamplingDesign, Weighted2, max_regret
from asif_regret.scenario import preset

s = preset("table1")
grid, design, e = s.grid(), SamplingDesign((10, 10)), Weighted2(0.8)

exact = max_regret(e, s.welfare, grid, design)
mc = max_regret(e, s.welfare, grid, design, EngineConfig(mode="monte-carlo", draws=20_000, seed=1))
z = np.abs(mc.expected_regret - exact.expected_regret) / np.where(mc.std_error > 0, mc.std_error, np.inf)
print(f"exact {exact.max_regret:.5f}, simulated {mc.max_regret:.5f} +/- {mc.mc_std_error:.5f}")
print(f"largest per-state deviation: {z.max():.2f} standard errors")

par = max_regret(e, s.welfare, grid, design,
                 EngineConfig(mode="monte-carlo", draws=20_000, seed=1, parallel=True, workers=4))
print("parallel run identical:", np.array_equal(par.expected_regret, mc.expected_regret))

try:
    max_regret(e, s.welfare, grid, SamplingDesign((5000, 5000)))
except EnumerationCapError as exc:
    print("too big to enumerate:", exc)
