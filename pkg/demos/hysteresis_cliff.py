#!/usr/bin/env python3
"""Recovery asymmetry and bistability.

The descending stationary level as a function of pragmatic strength, for
several competing strengths: below r_prag = 1 a fully contaminated space
never recovers (the level stays pinned at 1), and competing cleanup alone
cannot change that.  Just above r_prag = 1 the level collapses, and the
collapse is far deeper when competing cleanup assists.

The same parameters can hold two different answers at once: with weak
pragmatic but strong competing cleanup, a clean space stabilizes at a few
percent contamination while a contaminated one stays at 100%.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from contamdyn import ModelParams, descending_fixed_point, hysteresis

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

r_prag_axis = np.linspace(0.0, 3.0, 121)

fig, ax = plt.subplots(figsize=(7.5, 4.5))
for r_comp in (0.0, 2.0, 8.0):
    levels = [
        descending_fixed_point(ModelParams(0.1, 7, float(rp), r_comp)).k_star
        for rp in r_prag_axis
    ]
    ax.plot(r_prag_axis, levels, label=f"r_comp = {r_comp:g}")
ax.axvline(1.0, color="gray", linestyle=":", linewidth=0.8)
ax.set_xlabel("pragmatic strength r_prag")
ax.set_ylabel("descending stationary level")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "hysteresis_cliff.svg")
print(f"wrote {OUT / 'hysteresis_cliff.svg'}")

# a bistable configuration: the answer depends on where you start
res = hysteresis(ModelParams(p_err=0.1, b=7, r_prag=0.5, r_comp=8.0))
print(f"r_prag=0.5, r_comp=8: from clean k -> {res.k_up:.4f}, "
      f"from contaminated k -> {res.k_down:.1f} (bistable: {res.bistable})")
