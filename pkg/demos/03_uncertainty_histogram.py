"""
Distribution of the uncertainty product at fixed coupling
=========================================================

At g = 1.2 the unbiased model keeps every state at delta = 1/2, while a
bias of 0.3 spreads the distribution downward.
"""

import numpy as np

from spectraflow import Model, ModelParams
from spectraflow.observables import histogram, uncertainty_sweep
from spectraflow.spectra import converge_truncation

G = 1.2

for eps in (0.0, 0.3):
    p = ModelParams(Model.ASYM_RABI if eps else Model.RABI, epsilon=eps)
    n_cut = converge_truncation(p, 50, 1e-8, G)
    records = uncertainty_sweep(p, [G], 50, n_cut)
    hist = histogram(records)
    deltas = np.array([r.delta for r in records])
    lo, hi = hist.edges[hist.modal_bin], hist.edges[hist.modal_bin + 1]
    print(f"eps={eps}: modal bin [{lo:.2f}, {hi:.2f}), variance {deltas.var():.2e}")
    bars = "".join(" .:-=+*#%@"[min(9, int(10 * pr))] for pr in hist.probabilities)
    print("    |" + bars + "|")
