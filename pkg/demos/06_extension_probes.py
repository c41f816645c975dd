"""Numerical indicators for Friedrichs, Krein and uniform semiboundedness.

The probes sample (M(x) f, f) along a real grid descending into the
spectral gap below a non-negative operator.  Divergence to -infinity in
every direction is the Friedrichs signature; the Krein signature
(divergence to +infinity at the gap's right edge) fails for the
Dirichlet-referenced triplets built here.  The uniform variant locates
thresholds x_N beyond which lambda_max(M(x)) <= -N.
"""

import numpy as np

from weyltriplets import spectral as sp
from weyltriplets import tensor as tn
from weyltriplets import triplets as tr
from weyltriplets.models1d import build_triplet, schrodinger_right

base = build_triplet(schrodinger_right())  # m(z) = i sqrt(z)
x_grid = -np.logspace(0.0, 4.0, 60)

rep = tr.friedrichs_probe(base.weyl, x_grid, [np.array([1.0])])
print("scalar half line: Friedrichs %s, Krein %s"
      % (rep["friedrichs"], rep["krein"]))

lsb = tr.lsb_uniform_probe(base.weyl, (1, 2, 3), x_grid)
print("uniform divergence thresholds (analytic bound x_N <= -N^2):")
for entry in lsb["levels"]:
    print("  N = %.0f   x_N = %10.4f   (-N^2 = %6.1f)"
          % (entry["N"], entry["x_N"], -entry["N"] ** 2))

print("\ntensor sum over atoms {0, 1, 2}, 20 random directions:")
measure = sp.SpectralMeasurePP.from_levels([0, 1, 2])
rep = tn.friedrichs_krein_tensor_check(base, measure)
print("  Friedrichs per direction: %d/%d true"
      % (sum(rep["friedrichs_per_direction"]), rep["n_directions"]))
print("  Krein indicator: %s (reference extension is Dirichlet-type)"
      % rep["krein"])
for entry in rep["lsb"]:
    print("  N = %.0f   x_N = %10.4f" % (entry["N"], entry["x_N"]))
