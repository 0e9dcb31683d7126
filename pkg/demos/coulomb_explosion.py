"""
Coulomb explosion of a uniformly charged sphere
===============================================

A cold ball of like charges flies apart. Every shell keeps its enclosed
charge, so each one follows its own closed-form trajectory and the ball
stays uniform while it thins out.
"""

import numpy as np

import mocshock as ms

params = ms.PhysicsParams.nondimensional("sphere", "electric")
ball = ms.Uniform(rho0=1.5, r_max=1.0)  # lam = 1 for every shell

# Shells start at rest and creep away, then coast toward R0 * lam.
shell = ms.Characteristic.from_profile(ball, params, 0.8)
for t in (0.0, 1.0, 3.0, 10.0, 100.0, 1000.0):
    print(f"t={t:7.1f}  R={shell.radius(t):10.4f}  V={shell.velocity(t):.6f}")
print("terminal speed", shell.v_max())

# Density drops as P(lam t)**-3 and stays flat in space.
labels = np.linspace(0.05, 1.0, 50)
for t in (0.0, 2.0, 5.0):
    snap = ms.sample_field(ball, params, labels, t)
    print(f"t={t}: f in [{snap.f.min():.6g}, {snap.f.max():.6g}], edge at {snap.r[-1]:.4f}")

# Inverse question: when has the density dropped eightfold?
print("t at rho0/8:", ms.time_from_density_uniform(8.0, ms.BranchKind.ELECTRIC_SPHERE))

# The charged cylinder never settles: its velocity grows without bound.
rod = ms.Characteristic(1.0, 1.0, ms.BranchKind.ELECTRIC_CYLINDER)
print("cylinder V at t = 2, 5, 10:", rod.velocity(np.array([2.0, 5.0, 10.0])))
