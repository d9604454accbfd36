"""Solitary-wave profiles: shooting, decay, and persistence.

The one-frequency solitary wave of the cubic Soler model in three space
dimensions is determined by a radial profile pair (v, u) solving a
two-component ODE system with the self-interaction entering through
f(r) = mass - (v^2 - u^2).  The solver shoots on the central amplitude
v(0): too large and v crosses zero (a node), too small and the trajectory
spirals into the interior fixed point.  Bisection pins the separatrix, and
the far field is continued with the exact linear tail
C e^{-kappa r}/r, kappa = sqrt(mass^2 - omega^2).

Run:  python3 demos/01_radial_profile.py
"""

import numpy as np

import solerlab as sl

print(__doc__)

print("central amplitudes across the existence range (mass = 1):")
print(f"{'omega':>8} {'v(0)':>14} {'kappa':>10} {'r_max':>8}")
profiles = {}
for omega in (0.99, 0.9, 0.7, 0.5, 0.3):
    p = sl.solve_profile(omega)
    profiles[omega] = p
    print(f"{omega:8.2f} {p.v_at_zero:14.10f} {p.kappa:10.6f} {p.r_max:8.2f}")

print()
print("v(0) -> 0 as omega -> mass (the small-amplitude limit) and the")
print("amplitude saturates near omega ~ 0.5 before decreasing again.")

p = profiles[0.5]
print()
print("tail decay at omega = 0.5: the fitted log-slope of r|v(r)| on the")
print("outer half of the domain should equal -kappa.")
r = np.linspace(0.6 * p.r_max, p.r_max, 200)
v, u = sl.evaluate_profile(p, r)
slope = np.polyfit(r, np.log(r * np.abs(v)), 1)[0]
print(f"  fitted slope = {slope:.6f},  -kappa = {-p.kappa:.6f}")

print()
print("pointwise ODE residual on a grid twice as fine as the native one:")
rr = p.r_cut * np.linspace(0, 1, 2 * p.samples.shape[0]) ** 2
print(f"  max residual = {sl.profile_residual(p, rr[rr > 1e-5]):.3e}")

out = "profile_demo.csv"
sl.save_profile_csv(p, out)
back = sl.load_profile_csv(out)
print()
print(f"saved and re-loaded {out}: v(0) round-trips bit-exactly ->",
      back.v_at_zero == p.v_at_zero)
