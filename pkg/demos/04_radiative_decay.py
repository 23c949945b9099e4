"""Does the idle line shorten the qubit lifetime?

Without a kink the JTL is a gapped transmission line; below the plasma
frequency it only carries evanescent waves.  The lossless channel is
suppressed by exp(-l/lambda_J), so the residual decay comes from the subgap
conductance.

    python demos/04_radiative_decay.py
"""

import math

import numpy as np

from fluxdelay import CircuitParams, derive, kgtl

d = derive(CircuitParams())

print("rate vs damping at the qubit frequency")
for alpha in (0.0, 1e-6, 1e-5, 1e-4, 1e-3):
    spec = kgtl.DecaySpec.from_params(d, alpha=alpha)
    exact = kgtl.decay_rate(d.omega_q, spec)
    approx = kgtl.decay_rate_underdamped_approx(d.omega_q, spec)
    print(f"  alpha={alpha:7.0e}  exact={exact:10.4g} 1/s  underdamped={approx:10.4g} 1/s  T1={1 / exact if exact else math.inf:10.3g} s")

print("\nlossless line: exp(-l/lambda_J) suppression")
for l in np.array([0.25, 0.5, 1.0]) * 1e-3:
    spec = kgtl.DecaySpec.from_params(d, alpha=0.0, half_length=l / 2)
    print(f"  l={l * 1e3:4.2f} mm  l/lambda_J={l / d.lambda_J:6.1f}  rate={kgtl.decay_rate(d.omega_q, spec):.3g} 1/s")

print("\nno propagating mode at the qubit frequency:", kgtl.wavenumbers_at(d.omega_q, d) == [])
