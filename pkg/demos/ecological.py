"""Using a known population illness rate.

Group 0 makes up 70% of the population and half the population is ill.  The
constrained least-squares estimate respects that marginal, which confines
p_0 to the Duncan-Davis interval before any data arrive.
"""

from asif_regret import ConstrainedLS, SamplingDesign, cls_solution, duncan_davis, max_regret
from asif_regret.scenario import preset

s = preset("eco")
print("Duncan-Davis interval for p_0:", duncan_davis(0.5, 0.7, 0.3))

sol = cls_solution(n0=2, N0=10, n1=9, N1=10, p=0.5, r0=0.7, r1=0.3)
print(f"counts (2/10, 9/10): raw {sol.raw:.4f} -> estimate {sol.theta0:.4f}, corner {sol.corner}")

grid = s.grid()
for sizes in ((10, 10), (20, 20), (40, 40)):
    r = max_regret(ConstrainedLS(0.5, 0.7, 0.3), s.welfare, grid, SamplingDesign(sizes))
    print(f"N = {sizes}: max regret {r.max_regret:.4f} at p = {tuple(round(v, 3) for v in r.argmax_state)}")
