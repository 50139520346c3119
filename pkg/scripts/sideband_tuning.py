#!/usr/bin/env python3
"""Drive-amplitude lookup for sideband-engineered coupling.

Given the bare coupling g, modulation frequency nu and cavity linewidth
kappa (all in the same angular-frequency units), print the normalized
drive amplitude epsilon/nu that realizes a list of target coupling
ratios xi on the n-th sideband, together with the ceiling set by the
first Bessel lobe.

    python3 scripts/sideband_tuning.py g nu kappa [n]
"""
import sys

from lorentzbath.errors import TargetNotReachable
from lorentzbath.sideband import (
    SidebandConfig, _first_peak, bessel_jn, effective_coupling, solve_amplitude,
)

if len(sys.argv) < 4:
    sys.exit(__doc__)
g, nu, kappa = (float(a) for a in sys.argv[1:4])
n = int(sys.argv[4]) if len(sys.argv) > 4 else 1

mu_peak, j_peak = _first_peak(n)
print(f"g={g}, nu={nu}, kappa={kappa}, sideband n={n}")
print(f"largest reachable xi on this branch: {4.0 * g * j_peak / kappa:.6f}"
      f" (at epsilon/nu = {mu_peak:.6f})")
print(f"{'target xi':>10}  {'epsilon/nu':>12}  {'lambda_eff':>12}  {'J_n':>10}")
for target in (0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0):
    try:
        eps = solve_amplitude(g=g, nu=nu, n=n, kappa=kappa, target_xi=target)
    except TargetNotReachable as exc:
        print(f"{target:10.2f}  unreachable ({exc})")
        continue
    lam = effective_coupling(SidebandConfig(g=g, epsilon=eps, nu=nu, n=n))
    print(f"{target:10.2f}  {eps / nu:12.8f}  {lam:12.6f}  {bessel_jn(n, eps / nu):10.6f}")
