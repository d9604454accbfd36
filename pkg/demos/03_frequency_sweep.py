"""Frequency sweep with bifurcation refinement.

Sweeping the wave frequency omega and classifying every channel's spectrum
reveals where instabilities switch on and off.  Each switch between
adjacent grid points is refined by bisection and labeled by branch
geometry: a pitchfork (real pair through the origin), a Hamiltonian-Hopf
collision (quadruplet leaving the imaginary axis), or a threshold emergence
(quadruplet detaching from the essential-spectrum band edge).

This demo sweeps the spherically symmetric channel across its pitchfork
near omega = 0.936 at a deliberately coarse resolution.

Run:  python3 demos/03_frequency_sweep.py        (~1 minute)
"""

import solerlab as sl

print(__doc__)

result = sl.sweep(0.90, 0.96, 4, ["ell0"], n=100)
print("instability measure on the coarse grid:")
for om in result.omega_grid:
    rec = result.record(om, "ell0")
    print(f"  omega = {float(om):.3f}: {rec.instability_measure:.5f}")

sl.detect_events(result, refine_tol=1e-3)
print("\nrefined events:")
for ev in result.events:
    lo, hi = ev.bracket
    print(f"  {ev.kind} at omega = {ev.omega_location:.4f} "
          f"(bracket [{lo:.4f}, {hi:.4f}], direction: {ev.direction} "
          f"as omega decreases)")

rep = sl.stability_report(result)
print("\nstability window(s) within the swept range:")
for lo, hi in rep["stability_window"]:
    print(f"  ({lo:.4f}, {hi:.4f})")

sl.save_sweep_csv(result, "sweep_demo.csv")
sl.save_events_json(result.events, "events_demo.json")
print("\nwrote sweep_demo.csv and events_demo.json; render figures with")
print("  solerlab plot --in sweep_demo.csv --out .")
