"""
Energy levels of the Rabi family against the coupling
=====================================================

Sweep the lowest ten levels over g in [0, 1.5] for three values of the
qubit bias and report which adjacent pairs genuinely cross.
"""

import numpy as np

from spectraflow import Model, ModelParams
from spectraflow.spectra import converge_truncation, default_grid, find_crossings, sweep, track_lines

LEVELS = 10
grid = default_grid()

###############################################################################
# With no bias the Hamiltonian commutes with parity, so levels from opposite
# parity sectors may cross.  A bias breaks parity; crossings survive only for
# special (half-integer) values.

for eps in (0.0, 0.3, 0.5):
    p = ModelParams(Model.ASYM_RABI if eps else Model.RABI, epsilon=eps)
    n_cut = converge_truncation(p, LEVELS, 1e-8, grid[-1])
    flow = track_lines(sweep(p, grid, LEVELS, n_cut))
    crossings = find_crossings(p, flow)
    true = [c for c in crossings if c.is_true]
    print(f"eps={eps}: n_cut={n_cut}, {len(true)} true crossings, "
          f"{len(crossings) - len(true)} avoided")
    for c in true[:4]:
        print(f"    g*={c.g_star:.8f}  E={c.energy:.8f}  lines {c.line_a}/{c.line_b}"
              f"  parities {c.parity_a:+d}/{c.parity_b:+d}")

###############################################################################
# The first crossing of the unbiased model sits at g = sqrt(3)/4, E = 13/16.

print("sqrt(3)/4 =", np.sqrt(3) / 4, " 13/16 =", 13 / 16)
