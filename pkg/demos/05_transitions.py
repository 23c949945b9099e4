"""Can a passing kink flip the qubit?

The kink drives the transmon with a sech-shaped pulse.  First-order
perturbation theory gives a transition probability set by the Fourier
component of that pulse at the qubit frequency, which is exponentially small
for slow kinks.

    python demos/05_transitions.py
"""

from fluxdelay import CircuitParams, derive
from fluxdelay.analytics import (
    adiabaticity_ratio,
    pinning_report,
    transition_probability_multilevel,
    transition_probability_qubit,
    weak_coupling_ok,
)

d = derive(CircuitParams())
print(f"adiabatic when sqrt(1-u0^2)/u0 >> {adiabaticity_ratio(d.omega_p, d.omega_q):.2f}\n")
print(f"{'u0':>6} {'P(0<->1)':>11} {'P(1->2)':>11} {'P(2->3)':>11} {'weak drive':>10}")
for u0 in (0.005, 0.01, 0.02, 0.05, 0.1, 0.2):
    print(
        f"{u0:6.3f} {transition_probability_qubit(u0, d):11.3e} "
        f"{transition_probability_multilevel(1, 'up', u0, d):11.3e} "
        f"{transition_probability_multilevel(2, 'up', u0, d):11.3e} {str(weak_coupling_ok(u0, d)):>10}"
    )

# the kink is never trapped by the qubit: sech^2 would have to exceed 1
for sign in (1, -1):
    r = pinning_report(sign * d.eta_c)
    print(f"\neta = {sign * d.eta_c:+.4g}: needs sech^2 = {r.required_sech2:.1f}, pinned = {r.pinned}", end="")
print()
