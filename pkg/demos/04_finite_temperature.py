"""
Finite temperature: Matsubara sums, continuity, and SI forces
=============================================================

At T > 0 the frequency integral becomes a sum over Matsubara
frequencies with the zero-frequency term at half weight.  Fixing the
scene length unit in meters sets the Matsubara scale and also enables
SI output through force_si.

Two checks below: the T -> 0 limit of the sum matches the T = 0
integral, and at room temperature the thermal force exceeds the
zero-temperature one (the classical n = 0 term dominates large
separations).
"""

from casphere import (ConstantPermittivity, SceneConfig, SphereSpec,
                      casimir_force)

EPS = ConstantPermittivity(2.6)
MICRON = 1.0e-6


def pair(d, temperature):
    return SceneConfig(
        spheres=(SphereSpec("a", (0.0, 0.0, 0.0), 1.0, EPS),
                 SphereSpec("b", (0.0, 0.0, d), 1.0, EPS)),
        l_max=1,
        temperature_kelvin=temperature,
        length_unit_m=MICRON)


d = 5.0
f0 = casimir_force(pair(d, 0.0), "b")
print(f"T = 0 integral:    F_z = {f0.force[2]: .6e} hbar c/R^2  "
      f"({f0.n_freq} frequency nodes)")

print("\nT (K)    F_z (hbar c/R^2)    F_z/F_z(0)   n_freq   F_z (N)")
for t in (1.0, 4.0, 77.0, 293.0):
    res = casimir_force(pair(d, t), "b")
    print(f"{t:6.1f}   {res.force[2]: .6e}     {res.force[2]/f0.force[2]:8.4f}"
          f"     {res.n_freq:4d}   {res.force_si[2]: .3e}")

print("\nAt 1 K the Matsubara sum needs over a thousand terms but lands")
print("on the T = 0 integral to the displayed digits; at 293 K ten terms")
print("suffice and the half-weighted zero-frequency (classical) term has")
print("raised the force by several percent at this separation.")
