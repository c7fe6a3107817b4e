"""
The two eigensolver routes side by side
=======================================
"""

import time

import numpy as np

from spectraflow.eigensolve import eigh, validate

rng = np.random.default_rng(0)
a = rng.standard_normal((300, 300))
h = 0.5 * (a + a.T)

for method in ("lapack", "householder"):
    start = time.perf_counter()
    dec = eigh(h, method=method)
    rep = validate(h, dec)
    print(f"{method:12s} {time.perf_counter() - start:6.3f}s  "
          f"residual/|H| {rep.residual / rep.norm:.1e}  orth {rep.orthonormality:.1e}")

print("max eigenvalue difference:",
      np.abs(eigh(h).values - eigh(h, method="householder").values).max())
