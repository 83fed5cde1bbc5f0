#!/usr/bin/env python3
"""Final contamination over the cleanup-strength plane.

Two sweeps with the same error rate and base count, started from opposite
ends: a clean space (ascending searches) and a nearly fully contaminated
one (descending searches).  The contaminated start shows the plateau: for
any pragmatic strength below 1 the space stays at k = 1 no matter how much
competing cleanup is applied, and the surface drops off a cliff once the
pragmatic strength crosses 1.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contamdyn import ModelParams, sweep_plateau

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

base = ModelParams(p_err=0.1, b=7, r_prag=0.0, r_comp=0.0)
axis = np.linspace(0.0, 4.0, 33)

fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
for ax, k0, title in [(axes[0], 0.0, "clean start (k0 = 0)"),
                      (axes[1], 1.0 - 1e-3, "contaminated start (k0 = 0.999)")]:
    grid = sweep_plateau(base, axis, axis, k0=k0)
    img = ax.imshow(grid.values, origin="lower", aspect="auto",
                    vmin=0.0, vmax=1.0,
                    extent=[axis[0], axis[-1], axis[0], axis[-1]])
    ax.set_xlabel("competing strength r_comp")
    ax.set_ylabel("pragmatic strength r_prag")
    ax.set_title(title)
    fig.colorbar(img, ax=ax, label="final k")
    print(f"{title}: {int((grid.values == 1.0).sum())} of "
          f"{grid.values.size} cells fully contaminated")

fig.tight_layout()
fig.savefig(OUT / "plateau_surface.svg")
print(f"wrote {OUT / 'plateau_surface.svg'}")
