"""Reference circuit: what the dimensionless units mean in SI terms.

    python demos/01_parameters.py
"""

import math

from fluxdelay import CircuitParams, derive
from fluxdelay.params import PLANCK, level_frequency, sw_validity_ratio

c = CircuitParams()
d = derive(c)

print("JTL")
print(f"  penetration depth lambda_J   {d.lambda_J * 1e6:8.3f} um")
print(f"  plasma frequency omega_p     {d.omega_p:8.4g} 1/s  (time unit {d.time_unit * 1e12:.2f} ps)")
print(f"  Swihart velocity             {d.c_bar:8.4g} m/s")
print(f"  impedance Z_J                {d.Z_J:8.3f} Ohm")
print(f"  voltage unit phi0*omega_p    {d.voltage_unit * 1e3:8.4f} mV")

print("\ntransmon")
print(f"  E_J/h = {d.E_J_tr / PLANCK / 1e9:.3f} GHz, E_C/h = {d.E_C_tr / PLANCK / 1e6:.1f} MHz, E_J/E_C = {d.ej_over_ec:.1f}")
print(f"  qubit frequency              {d.omega_q / (2 * math.pi) / 1e9:.4f} GHz")
print(f"  1->2 frequency               {level_frequency(2, d) / (2 * math.pi) / 1e9:.4f} GHz")
print(f"  anharmonicity ratio p        {d.p:.5f}")

print("\ncoupling")
print(f"  eta_c = {d.eta_c:.5g}  (perturbative if << 1)")
# the neglected off-diagonal term is small when Q(n) >= 10
for n in range(3):
    print(f"  Q({n}) = {sw_validity_ratio(n, d.p):.1f}")
