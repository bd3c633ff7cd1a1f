"""Log-log slope of the vacuum critical frequency against L, decade by decade."""
import numpy as np

from udwent.kernels import ScenarioSpec
from udwent.threshold import log_lattice, trace_curve

curve = trace_curve(ScenarioSpec.vacuum(), log_lattice(10.0, 1e4, 31))
L = np.array([s.L for s in curve.samples])
w = np.array([s.omega_lower for s in curve.samples])
for lo in (10.0, 100.0, 1000.0):
    m = (L >= lo) & (L <= 10 * lo)
    slope = np.polyfit(np.log(L[m]), np.log(w[m]), 1)[0]
    print(f"L in [{lo:g}, {10 * lo:g}]: slope {slope:.4f}, Omega*/(L/2) from {np.min(w[m] / (L[m] / 2)):.4f} "
          f"to {np.max(w[m] / (L[m] / 2)):.4f}")
