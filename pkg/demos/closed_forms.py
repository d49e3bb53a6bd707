"""Closed-form minimax regret next to the numerical engine.

With no data, the best a planner can do is commit to one treatment; with a coin
flip calibrated to the state space the worst case halves.  One observation
helps further when the welfare of aggressive treatment is not extreme.
"""

from asif_regret import (
    Constant,
    IntervalSpace,
    Randomized,
    SampleRate,
    SamplingDesign,
    WelfareSpec,
    crossover_thresholds,
    grid_interval,
    max_regret,
    maxregret_n1,
    mmr_no_data,
    mmr_randomized,
)

grid = grid_interval(IntervalSpace(0, 1), 2001)
no_data = SamplingDesign((0,))
one = SamplingDesign((1,))

print(" u_B   no data  randomized   N=1 rate   engine(N=1)")
for u in (0.1, 0.3, 0.5, 0.7, 0.9):
    w = WelfareSpec(u)
    value, side = mmr_no_data(0, 1, w)
    q, rvalue = mmr_randomized(0, 1, w)
    engine = max_regret(SampleRate(), w, grid, one).max_regret
    print(f"{u:4.1f}  {value:8.4f}  {rvalue:10.4f}  {maxregret_n1(w):9.4f}  {engine:11.4f}")

# The engine agrees with the randomized closed form in its own terms
w = WelfareSpec(0.5)
print("randomized rule, engine:", max_regret(Randomized(0, 1, 0.5), w, grid, no_data).max_regret)
print("always treat, engine:   ", max_regret(Constant(1.0), w, grid, no_data).max_regret)

lo, hi = crossover_thresholds()
print(f"a constant rule beats one observation when u_B < {lo:.4f} or u_B > {hi:.4f}")
