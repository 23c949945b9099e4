"""Arrival-time delay between qubit states, closed form vs collective coordinates.

The kink passes a transmon whose state flips the sign of a localised
capacitive perturbation.  Below some launch velocity damping dominates and the
closed form stops describing the ODE result; that velocity grows with alpha.

    python demos/02_delay_vs_velocity.py
"""

import math

import numpy as np

from fluxdelay import CircuitParams, derive, ode
from fluxdelay.analytics import time_delay_qubit
from fluxdelay.errors import NoCrossingError

d = derive(CircuitParams())
u0s = np.geomspace(0.002, 0.1, 8)
alphas = [1e-6, 1e-5, 1e-4, 1e-3]

print(f"{'u0':>8} {'analytic ps':>12}" + "".join(f"{'a=' + format(a, 'g'):>12}" for a in alphas))
for u0 in u0s:
    row = [time_delay_qubit(u0, d).T_d * 1e12]
    for a in alphas:
        up = ode.PerturbationSpec(alpha=a, eta=d.eta_c)
        down = ode.PerturbationSpec(alpha=a, eta=-d.eta_c)
        try:
            row.append(ode.measure_delay(u0, up, down, dtau=0.1).tau_d / d.omega_p * 1e12)
        except NoCrossingError:
            row.append(math.inf)  # the kink stops before the probe
    print(f"{u0:8.4f}" + "".join(f"{v:12.4g}" for v in row))

# the closed form is trustworthy only while alpha << eta_c * u0
print("\nregime boundary u0 = alpha/eta_c:", ", ".join(f"{a / d.eta_c:.2g}" for a in alphas))
