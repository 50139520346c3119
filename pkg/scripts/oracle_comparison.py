#!/usr/bin/env python3
"""Cross-check the closed-form amplitudes against both dynamical oracles.

Runs the damped-mode master equation and the discretized-continuum
Schrodinger picture at one coupling ratio and reports the worst
deviation of each from the closed form, plus a short sampled table.

Usage: python3 scripts/oracle_comparison.py [xi] [tau_end]
"""
import sys
import time

import numpy as np

from lorentzbath import analytic, lindblad, multimode
from lorentzbath.model import ModelParams

xi = float(sys.argv[1]) if len(sys.argv) > 1 else 2.0
tau_end = float(sys.argv[2]) if len(sys.argv) > 2 else 3.0

params = ModelParams(xi=xi)
taus = np.linspace(0.0, tau_end, 301)
ce, cg = analytic._amplitude_arrays(xi, taus)
conc_ref = 2.0 * np.abs(ce) * np.abs(cg)
pe_ref = np.abs(ce) ** 2

t0 = time.perf_counter()
traj_lb = lindblad.integrate(
    lindblad.LindbladConfig(params=params, t_end=tau_end), sample_taus=taus
)
t_lb = time.perf_counter() - t0

t0 = time.perf_counter()
bath = multimode.sample_bath(params, n_modes=2001, window=40.0)
traj_mm = multimode.evolve(bath, tau_end, sample_taus=taus)
t_mm = time.perf_counter() - t0

dev_lb = np.abs(traj_lb.concurrences - conc_ref).max()
dev_mm = np.abs(traj_mm.p_e - pe_ref).max()

print(f"xi = {xi}, tau in [0, {tau_end}], {len(taus)} samples")
print(f"damped-mode oracle:  max |C - C_ref|      = {dev_lb:.3e}   ({t_lb:.2f} s)")
print(f"continuum oracle:    max |p_e - p_e_ref|  = {dev_mm:.3e}   ({t_mm:.2f} s,"
      f" N={bath.n_modes}, horizon {bath.recurrence_horizon:.1f})")
print()
print(f"{'tau':>8}  {'C_analytic':>12}  {'C_lindblad':>12}  {'p_e_analytic':>13}  {'p_e_multimode':>13}")
for i in range(0, len(taus), 30):
    print(f"{taus[i]:8.3f}  {conc_ref[i]:12.8f}  {traj_lb.concurrences[i]:12.8f}"
          f"  {pe_ref[i]:13.9f}  {traj_mm.p_e[i]:13.9f}")
