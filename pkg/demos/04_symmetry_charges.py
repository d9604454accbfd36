"""SU(1,1) symmetry orbit: bi-frequency modes and conserved charges.

The cubic Soler model carries an SU(1,1) symmetry psi -> (a + i b g2 K) psi
with |a|^2 - |b|^2 = 1 (K is complex conjugation).  Acting on a
one-frequency solitary wave it generates a family of exact bi-frequency
solutions parameterized by spinors (xi, eta) with ||xi||^2 - ||eta||^2 = 1.
Every member shares the same time-independent scalar density v^2 - u^2, and
the conserved charges (Q, Sigma) move along the orbit while the Casimir
combination Q^2 - |Sigma|^2 stays fixed.

Run:  python3 demos/04_symmetry_charges.py
"""

import numpy as np

import solerlab as sl

print(__doc__)

grid = sl.build_grid(128, 10.0)
p = sl.solve_profile(0.9)
fld = sl.make_bifrequency(p, (1.0, 0.0))
Q0, S0 = sl.charges(fld, grid)
print(f"one-frequency wave at omega = 0.9: Q = {Q0:.6f}, Sigma = {S0:.1f}")
print(f"scalar density positive everywhere (attracting): {sl.is_attracting(fld)}")

print("\nboosting along the orbit (a, b) = (cosh s, sinh s):")
print(f"{'s':>5} {'Q':>12} {'|Sigma|':>12} {'Q^2-|Sigma|^2':>16}")
for s in (0.0, 0.3, 0.6, 1.0):
    g = sl.SU11Element.boost(s)
    Q, S = sl.charges(sl.apply_su11(g, fld), grid)
    print(f"{s:5.1f} {Q:12.6f} {abs(S):12.6f} {Q**2 - abs(S)**2:16.8f}")
print("Q and |Sigma| grow like cosh(2s) and sinh(2s); the Casimir is flat.")

print("\ncharge and energy along the one-frequency family:")
profiles = [sl.solve_profile(w) for w in (0.93, 0.936, 0.94, 0.95)]
rows = sl.charge_table(profiles, grid)
print(f"{'omega':>8} {'Q':>12} {'E':>12}")
for om, Q, _, _, E in rows:
    print(f"{om:8.3f} {Q:12.6f} {E:12.6f}")
print("the energy minimum sits at the stability-window edge near 0.936.")

sl.save_charge_table_csv(rows, "charges_demo.csv")
print("\nwrote charges_demo.csv")
