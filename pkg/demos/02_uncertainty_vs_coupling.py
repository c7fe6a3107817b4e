"""
Uncertainty product of the qubit along the sweep
================================================

For every eigenstate of the lowest fifty, trace out the field and evaluate
delta = dsx * dsy for the rescaled Pauli pair.  Writes uncertainty.svg.
"""

import numpy as np

from spectraflow import Model, ModelParams
from spectraflow.cli import RunConfig, uncertainty_csv
from spectraflow.observables import uncertainty_sweep
from spectraflow.spectra import converge_truncation, default_grid
from spectraflow.svg import uncertainty_svg

grid = default_grid(steps=31)

for eps in (0.0, 0.3):
    p = ModelParams(Model.ASYM_RABI if eps else Model.RABI, epsilon=eps)
    n_cut = converge_truncation(p, 50, 1e-8, grid[-1])
    deltas = np.array([r.delta for r in uncertainty_sweep(p, grid, 50, n_cut)])
    print(f"eps={eps}: min delta {deltas.min():.4f}, mean {deltas.mean():.4f}, "
          f"fraction at 1/2: {np.mean(deltas > 0.5 - 1e-9):.3f}")

###############################################################################
# The same table through the command-line builder, rendered to SVG.

text = uncertainty_csv(RunConfig(model="ASYM_RABI", epsilon=0.3, g_steps=31))
with open("uncertainty.svg", "w") as fh:
    fh.write(uncertainty_svg(text))
print("wrote uncertainty.svg")
