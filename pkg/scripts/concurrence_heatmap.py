#!/usr/bin/env python3
"""Render the concurrence landscape C(xi, tau) as a quick terminal heatmap.

Coarse ASCII shading by default so it needs nothing beyond the package
itself; pass --plot out.png for a real raster via matplotlib.  Worker
count follows the LORENTZBATH_WORKERS environment variable.
"""
import sys

import numpy as np

from lorentzbath import sweep

SHADES = " .:-=+*#%@"

nx, nt = 48, 120
grid = sweep.SweepGrid(
    xi_values=np.geomspace(0.2, 50.0, nx),
    tau_values=np.linspace(0.0, 2.5, nt),
    method="analytic",
    xi_spacing="log",
    tau_spacing="linear",
)
res = sweep.heatmap(grid)
conc = res.records[:, 2].reshape(nx, nt)

top = conc.max()
print(f"C(xi, tau), analytic, peak {top:.4f}; rows xi {grid.xi_values[0]:.2f}"
      f" -> {grid.xi_values[-1]:.1f} (log), cols tau 0 -> {grid.tau_values[-1]}")
for i in range(nx - 1, -1, -1):
    row = "".join(SHADES[min(int(c / top * (len(SHADES) - 1)), len(SHADES) - 1)]
                  for c in conc[i])
    print(f"{grid.xi_values[i]:7.2f} |{row}|")

if "--plot" in sys.argv:
    out = sys.argv[sys.argv.index("--plot") + 1]
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib not installed; rerun without --plot")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    pm = ax.pcolormesh(grid.tau_values, grid.xi_values, conc, shading="auto")
    ax.set_yscale("log")
    ax.set_xlabel(r"$\tau = \kappa t / 4$")
    ax.set_ylabel(r"$\xi$")
    fig.colorbar(pm, label="concurrence")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print("wrote", out)
