"""Tensor sums A (x) I + I (x) T over a pure-point measure for T.

The raw blockwise sum of shifted Weyl functions is only a boundary
triplet after renormalization; this script assembles both, verifies
the transform identity connecting them, and prints the growth
certificates that justify truncating an unbounded T to a finite
window.
"""

import numpy as np

from weyltriplets import herglotz as hg
from weyltriplets import spectral as sp
from weyltriplets import tensor as tn
from weyltriplets import triplets as tr
from weyltriplets.models1d import build_triplet, full_line_contact

base = build_triplet(full_line_contact(1.0, 0.0))
measure = sp.SpectralMeasurePP.from_levels(range(6))
print("base: %s (boundary dimension %d), measure atoms %s"
      % (base.label, base.dim, list(measure.lambdas)))

raw = tn.tensor_weyl_bounded(base.weyl, measure)
tt = tn.tensor_normalized(base, measure)
print("\nnormalized anchor: |M~(i) - iI| = %.2e"
      % np.abs(tt.assembled.weyl(1j) - 1j * np.eye(tt.dim)).max())

z = -2 + 0.5j
lhs = tt.assembled.weyl(z)
rhs = tt.G1 @ raw(z) @ tt.G1 - tt.G2 @ tt.G1
print("transform identity M~ = R^-1 (M - Q) R^-1 at z = %s: %.2e"
      % (z, np.abs(lhs - rhs).max()))

print("difference identity on the assembled triplet: %.2e"
      % tr.herglotz_identity_residual(tt.assembled, 1j, z))

one = sp.SpectralMeasurePP.from_levels([0.0])
single = tn.tensor_normalized(base, one)
norm_base = tr.normalize(base)
print("single-atom reduction to the normalized base: %.2e"
      % np.abs(single.assembled.weyl(z) - norm_base.weyl(z)).max())

print("\ngrowth certificates over lambda in [1, 1e4] (scalar base):")
wg = tn.weight_growth_certificates(lambda w: hg.m_schrodinger_halfline(w))
for key in ("im_sqrt", "im_inv_sqrt", "l_kernel"):
    c = wg[key]
    print("  %-12s C0 = %7.3f  alpha = %g  fitted slope %+.3f  dominates %s"
          % (key, c["C0"], c["alpha"], c["fitted_exponent"], c["dominates"]))
print("both +-1/2 weights grow like (1 + lambda); the normalized kernel")
print("stays bounded, which is what makes the direct sum convergent.")
