"""
Free fall of self-gravitating dust
==================================

Pressureless dust at rest falls inward. A uniform ball collapses all at
once at T0 = (pi/2) sqrt(3 nu0 / (2 rho0)); a centrally peaked cloud
collapses from the inside out.
"""

import math

import numpy as np

import mocshock as ms
from mocshock.validator import ATTRACTIVE, ode_oracle

params = ms.PhysicsParams.nondimensional("sphere", "gravity")
ball = ms.Uniform(rho0=1.5, r_max=1.0)
T0 = ms.collapse_time(ball, params)
print(f"T0 = {T0:.12f} (pi/2 = {math.pi / 2:.12f})")

# Every shell reaches the centre together; density climbs as P**-3.
for frac in (0.0, 0.5, 0.9, 0.99, 0.999):
    t = frac * T0
    R, rho = ms.density_along(ball, params, 0.5, t)
    print(f"t = {frac:5.3f} T0: R(0.5) = {R:.6f}  rho = {rho:.6g}")

# A direct ODE integration stops at the same instant.
run = ode_oracle(0.5, float(ms.gamma(ball, params, 0.5)), ATTRACTIVE, 2, 10.0)
print(f"ODE stop time {run.stop_time:.9f}, rel gap {abs(run.stop_time - T0) / T0:.1e}")

# A shock scan flags the uniform collapse as focal: all shells meet at r = 0.
rep = ms.shock_onset(ball, params, np.linspace(0.05, 1.0, 40), t_max=1.2 * T0)
print("focal:", rep.focal, "t* =", rep.t_star)

# Lognormal dust: dense inner shells fall first.
cloud = ms.Lognormal()
r0 = np.array([0.1, 0.3, 1.0, 3.0])
lam = ms.lam(cloud, params, r0)
for a, b in zip(r0, math.pi / 2 / lam):
    print(f"label {a:4.1f} reaches the centre at t = {b:.5f}")
