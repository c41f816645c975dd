"""Brute-force finite-dimensional triplets as a correctness oracle.

A dense toy triplet is a random Hermitian reference operator with an
explicit boundary map; every abstract identity can then be checked by
plain linear algebra.  This is the oracle the library's own Krein
formula is validated against.
"""

import numpy as np

from weyltriplets import oracle as orc
from weyltriplets import triplets as tr

toy = orc.make_dense_toy(n=8, d=2, seed=7)
print("toy: n=%d interior dimensions, d=%d boundary dimensions, seed=%d"
      % (toy.n, toy.d, toy.seed))
print("abstract Green identity residual over 30 random graph elements:",
      "%.2e" % toy.green_identity_residual(samples=30))

triplet = toy.as_triplet()
B = toy.Q0 + np.eye(toy.d)
print("\nKrein correction vs direct resolvent difference:")
for z in (1j, -2 + 0.5j, 1.5 + 2j):
    direct = toy.direct_resolvent_difference(B, z)
    krein = tr.krein_correction(
        triplet, tr.BoundaryCondition.operator(B), z
    ).dense()
    print("  z = %8s   deviation %.2e" % (z, np.abs(krein - direct).max()))

print("\nWeyl-function difference identity M(z) - M(zeta)* "
      "= (z - conj zeta) gamma(zeta)* gamma(z):")
for z, zeta in ((1j, -2 + 0.5j), (1.5 + 2j, 1j)):
    res = tr.herglotz_identity_residual(triplet, z, zeta)
    print("  (z, zeta) = (%s, %s)   residual %.2e" % (z, zeta, res))

print("\nnormalization: M~(i) = iI and the identity survives the transform")
nt = tr.normalize(triplet)
print("  anchor deviation %.2e"
      % np.abs(nt.weyl(1j) - 1j * np.eye(toy.d)).max())
print("  transformed identity residual %.2e"
      % tr.herglotz_identity_residual(nt, 1j, 1.5 + 2j))
