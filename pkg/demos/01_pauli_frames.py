"""Demo: bit-packed Pauli algebra and frame propagation through Cliffords.

Walks through the operator bookkeeping the whole lab rests on: products
with exact signs, commutation tests, and conjugation through the gates a
teleportation step uses.
"""

from mbftqc.circuit import Op
from mbftqc.pauli import PauliString, commutes, conjugate, pauli_mul

x = PauliString.from_label("X")
z = PauliString.from_label("Z")
xz = pauli_mul(x, z)
print("X * Z       ->", "imaginary-phased XZ (phase exponent %d)" % xz.phase)
print("(XZ)^2      ->", pauli_mul(xz, xz).label(), " (the -I bookkeeping)")

a = PauliString.from_label("XXXX")
b = PauliString.from_label("IIZZ")
print("XXXX vs IIZZ commute?", commutes(a, b))

# the error-propagation facts behind one-bit teleportation
xi = PauliString.from_label("XI")
print("CZ (X x I) CZ =", conjugate(xi, Op("CZ", (0, 1))).label(),
      " (X propagates a Z onto the partner)")
zi = PauliString.from_label("ZI")
print("CZ (Z x I) CZ =", conjugate(zi, Op("CZ", (0, 1))).label(),
      " (Z errors are absorbed)")

# frames compose linearly: two faults XOR their masks
f1 = PauliString.from_supports(7, x_support=(0, 3))
f2 = PauliString.from_supports(7, x_support=(3,), z_support=(5,))
print("frame product:", pauli_mul(f1, f2).label())
