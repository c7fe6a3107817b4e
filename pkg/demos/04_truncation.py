"""
Choosing the Fock cutoff
========================

The controller doubles n_cut until the lowest M eigenvalues stop moving.
"""

from spectraflow import Model, ModelParams
from spectraflow.spectra import truncation_scan

for levels in (10, 50):
    report = truncation_scan(ModelParams(Model.RABI), levels, 1e-8, 1.5)
    print(f"M={levels}: n_cut={report.n_cut}")
    for n_cut, change in report.history:
        print(f"    {n_cut:5d}  max change {change:.2e}")
