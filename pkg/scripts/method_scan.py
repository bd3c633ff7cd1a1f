"""Compare the truncated series against the exact thermal tier along one separation.

Shows where the series self-reports breakdown and how far the two tiers' margins differ.
"""
import sys

from udwent.errors import AsymptoticBreakdownError
from udwent.kernels import ScenarioSpec
from udwent.observables import DetectorParams, observe, observe_exact
from udwent.threshold import log_lattice

L = float(sys.argv[1]) if len(sys.argv) > 1 else 1500.0
sc = ScenarioSpec.thermal(1e-3)
print(f"{'sigma*Omega':>12} {'series margin':>14} {'exact margin':>13}")
for w in log_lattice(100.0, 4000.0, 15):
    p = DetectorParams(1.0, w)
    try:
        s = f"{observe(sc, p, L, method='series').margin:14.5g}"
    except AsymptoticBreakdownError:
        s = f"{'breakdown':>14}"
    print(f"{w:12.2f} {s} {observe_exact(sc, p, L).margin:13.5g}")
