"""Borrowing strength from a related group.

Women (group 0) and men (group 1) have illness probabilities within 0.1 of
each other.  Weighting the two sample rates trades bias against variance; the
sweep below finds the weight with the smallest maximum regret.
"""

from asif_regret import SamplingDesign, Weighted2, max_regret
from asif_regret.engine import optimal_weight
from asif_regret.scenario import TABLE1_SIZES, preset

s = preset("table1")
grid = s.grid()
print(f"{len(grid)} feasible states, threshold 1 - u_B = {s.welfare.threshold:.1f}")

for sizes in TABLE1_SIZES[:3]:
    design = SamplingDesign(sizes)
    pooled = max_regret(Weighted2(0.5), s.welfare, grid, design).max_regret
    own = max_regret(Weighted2(1.0), s.welfare, grid, design).max_regret
    sweep = optimal_weight(s.space, s.welfare, design, 0.01, grid=grid)
    print(f"N = {sizes}: pooled {pooled:.4f}, own sample {own:.4f}, "
          f"best w0 = {sweep.w0_star:.2f} with {sweep.mmr:.4f}")

# Where the worst case sits for the own-sample rate
report = max_regret(Weighted2(1.0), s.welfare, grid, SamplingDesign((10, 10)))
print("worst state for the own-sample rate:", report.argmax_state)
