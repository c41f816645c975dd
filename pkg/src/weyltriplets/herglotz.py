"""Scalar Herglotz/Nevanlinna model coefficients and branch-cut arithmetic.

All Weyl coefficients of the 1-D model catalogue live here:

* half-line Schrodinger           m(z)      = i sqrt(z - v)
* interval Schrodinger            m1(z)     = w tan(w d),   w = sqrt(z - v)
                                  m2(z)     = -w cot(w d)
* half-line Dirac                 m(z)      = i c k1(z)
* interval Dirac                  m1(z)     = c k1 tan(k d)
                                  m2(z)     = -c k1 cot(k d)

with the square root cut along the positive semi-axis (sqrt 1 = 1) for
the Schrodinger family, and the doubly-cut functions

    k(z)  = (1/c) sqrt(z^2 - c^4/4),    k1(z) = sqrt((z - c^2/2)/(z + c^2/2))

for the Dirac family, holomorphic off (-inf, -c^2/2] u [c^2/2, inf) and
positive for real z > c^2/2.

Every function is Herglotz: analytic off its real singular set, with
m(conj z) = conj m(z) and Im m(z) > 0 in the upper half-plane.  Points
exactly on a cut are rejected (the boundary value is not defined by the
branch convention), and real poles of the interval functions are
rejected within a small guard distance.
"""

import cmath
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BranchCutError",
    "PoleError",
    "BranchCut",
    "HerglotzScalar",
    "sqrt_cut",
    "m_schrodinger_halfline",
    "m_interval",
    "dirac_k",
    "dirac_k1",
    "m_dirac",
    "catalogue",
]

# Guard distance (in the complex plane of the tan/cot argument) below
# which evaluation near a real pole is refused.
POLE_GUARD = 1e-10

# |argument| below which tan/cot removable points are evaluated by series.
_SERIES_CUTOFF = 1e-6

# Beyond this |Im argument| the trig functions have saturated to +-i at
# double precision (tanh(20) differs from 1 by ~2e-18); evaluating them
# directly would overflow for very large arguments.
_TRIG_SATURATION = 20.0


class BranchCutError(ValueError):
    """Evaluation point lies on a real branch cut of the function."""


class PoleError(ValueError):
    """Evaluation point is (numerically) a real pole of the function."""


def sqrt_cut(z):
    """Square root with cut along the positive real semi-axis.

    Writes z = r e^{i theta} with theta in [0, 2pi) and returns
    sqrt(r) e^{i theta/2}, so sqrt_cut(1) = 1, sqrt_cut(-1) = i, and the
    image always has non-negative imaginary part.  Total on C (z = 0
    maps to 0); callers who need to *reject* cut points do so themselves
    since the offending set depends on the shift z - v.
    """
    z = complex(z)
    if z == 0:
        return 0j
    theta = cmath.phase(z)
    if theta < 0.0:
        theta += 2.0 * cmath.pi
    return cmath.sqrt(abs(z)) * cmath.exp(0.5j * theta)


def m_schrodinger_halfline(z, v=0.0):
    """Half-line Schrodinger Weyl coefficient m(z) = i sqrt(z - v).

    Real and negative on (-inf, v); the cut [v, inf) is rejected.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real >= v:
        raise BranchCutError("z = %s lies on the cut [%g, inf)" % (z, v))
    return 1j * sqrt_cut(z - v)


def dm_schrodinger_halfline(z, v=0.0):
    """d/dz of the half-line coefficient: i / (2 sqrt(z - v))."""
    z = complex(z)
    if z.imag == 0.0 and z.real >= v:
        raise BranchCutError("z = %s lies on the cut [%g, inf)" % (z, v))
    return 0.5j / sqrt_cut(z - v)


def _tan(w):
    # tan with large-|Im| saturation, avoiding overflow in cosh/sinh
    if w.imag > _TRIG_SATURATION:
        return 1j
    if w.imag < -_TRIG_SATURATION:
        return -1j
    return cmath.tan(w)


def _cot(w):
    if w.imag > _TRIG_SATURATION:
        return -1j
    if w.imag < -_TRIG_SATURATION:
        return 1j
    return cmath.cos(w) / cmath.sin(w)


def _pole_distance(arg, offset):
    """Distance of ``arg`` to the lattice {pi (n + offset) : n integer}."""
    n = round(arg.real / cmath.pi - offset)
    return min(
        abs(arg - cmath.pi * (k + offset)) for k in (n - 1, n, n + 1)
    )


def m_interval(z, v=0.0, d=1.0, branch_index=1):
    """Interval Schrodinger coefficients, half-length ``d``.

    branch_index 1:  m1(z) =  w tan(w d)
    branch_index 2:  m2(z) = -w cot(w d)         (w = sqrt(z - v))

    Both are Herglotz and meromorphic with real poles; m1 has poles at
    w d = pi(n + 1/2) and m2 at w d = pi n (n >= 1; w d = 0 is a
    removable point with value -1/d, handled by series).  Evaluations
    within POLE_GUARD of a pole raise PoleError.
    """
    if d <= 0:
        raise ValueError("interval half-length d must be positive")
    if branch_index not in (1, 2):
        raise ValueError("branch_index must be 1 or 2")
    z = complex(z)
    w = sqrt_cut(z - v)
    arg = w * d
    if branch_index == 1:
        if _pole_distance(arg, 0.5) < POLE_GUARD:
            raise PoleError("w*d = %s too close to a pole of tan" % arg)
        if abs(arg) < _SERIES_CUTOFF:
            # w tan(w d) = w^2 d (1 + (w d)^2/3 + ...) = (z - v) d (1 + ...)
            return (z - v) * d * (1.0 + arg * arg / 3.0)
        return w * _tan(arg)
    # branch 2
    if abs(arg) < _SERIES_CUTOFF:
        # -w cot(w d) = -1/d + (z-v) d/3 + (z-v)^2 d^3/45 + ...
        u = z - v
        return -1.0 / d + u * d / 3.0 + u * u * d**3 / 45.0
    if _pole_distance(arg, 0.0) < POLE_GUARD:
        raise PoleError("w*d = %s too close to a pole of cot" % arg)
    return -w * _cot(arg)


def dm_interval(z, v=0.0, d=1.0, branch_index=1):
    """Analytic z-derivative of ``m_interval`` (used by regularization).

    From dw/dz = 1/(2w):

        m1'(z) = [tan(w d) + w d sec^2(w d)] / (2 w)
        m2'(z) = [-cot(w d) + w d csc^2(w d)] / (2 w)

    with removable limits d and d/3 respectively as w -> 0.
    """
    if branch_index not in (1, 2):
        raise ValueError("branch_index must be 1 or 2")
    z = complex(z)
    w = sqrt_cut(z - v)
    arg = w * d
    if branch_index == 1:
        if abs(arg) < _SERIES_CUTOFF:
            return d * (1.0 + 2.0 * arg * arg / 3.0)
        if _pole_distance(arg, 0.5) < POLE_GUARD:
            raise PoleError("w*d = %s too close to a pole of tan" % arg)
        t = _tan(arg)
        return (t + arg * (1.0 + t * t)) / (2.0 * w)
    if abs(arg) < _SERIES_CUTOFF:
        return d / 3.0 * (1.0 + 2.0 * arg * arg / 5.0)
    if _pole_distance(arg, 0.0) < POLE_GUARD:
        raise PoleError("w*d = %s too close to a pole of cot" % arg)
    ct = _cot(arg)
    return (-ct + arg * (1.0 + ct * ct)) / (2.0 * w)


def dirac_k1(z, c=1.0):
    """k1(z) = sqrt((z - c^2/2)/(z + c^2/2)) on the doubly-cut plane.

    Principal square root of the Moebius ratio for Im z > 0 and its
    Schwarz reflection for Im z < 0; on the real spectral gap
    (-c^2/2, c^2/2) the ratio is negative and k1 = i sqrt(|ratio|).
    The branch point z = c^2/2 itself evaluates to 0; the rest of the
    two real cuts (and the singular point z = -c^2/2) are rejected.
    """
    if c <= 0:
        raise ValueError("speed c must be positive")
    s = 0.5 * c * c
    z = complex(z)
    if z.imag == 0.0:
        x = z.real
        if x == s:
            return 0j  # branch point, common limit from above/below
        if x >= s or x <= -s:
            raise BranchCutError(
                "z = %s lies on a Dirac cut (|Re z| >= %g)" % (z, s)
            )
        ratio = (x - s) / (x + s)  # negative on the gap
        return 1j * np.sqrt(-ratio)
    w = cmath.sqrt((z - s) / (z + s))  # principal root, ratio off (-inf, 0]
    return -w if z.imag < 0.0 else w


def dirac_k(z, c=1.0):
    """k(z) = (1/c) sqrt(z^2 - c^4/4), same branch as ``dirac_k1``.

    Computed as (z + c^2/2) k1(z) / c, which keeps the function
    single-valued across the imaginary axis (the naive principal square
    root of z^2 - c^4/4 has a spurious sign jump there).
    """
    s = 0.5 * c * c
    z = complex(z)
    if z.imag == 0.0 and z.real == -s:
        return 0j  # second branch point; the k1 factor is singular there
    return (z + s) * dirac_k1(z, c) / c


def m_dirac(z, c=1.0, geometry="halfline", d=None, branch_index=1):
    """Dirac Weyl coefficients.

    geometry "halfline":    m(z)  = i c k1(z)
    geometry "interval":    m1(z) = c k1(z) tan(k(z) d)
                            m2(z) = -c k1(z) cot(k(z) d)

    The half-line coefficient is real on the spectral gap
    (-c^2/2, c^2/2).  For the interval functions d is the half-length;
    m2's removable point at the branch points (k d -> 0) is evaluated by
    series, real poles are guarded as in ``m_interval``.
    """
    z = complex(z)
    if geometry == "halfline":
        return 1j * c * dirac_k1(z, c)
    if geometry != "interval":
        raise ValueError("geometry must be 'halfline' or 'interval'")
    if d is None or d <= 0:
        raise ValueError("interval geometry needs a positive half-length d")
    if branch_index not in (1, 2):
        raise ValueError("branch_index must be 1 or 2")
    s = 0.5 * c * c
    if z.imag == 0.0 and z.real == -s:
        # k1 blows up but k -> 0; both interval coefficients stay finite,
        # handled by the same series as the generic small-k case below.
        k1v = None
    else:
        k1v = dirac_k1(z, c)
    kv = (z + s) * k1v / c if k1v is not None else 0j
    arg = kv * d
    if branch_index == 1:
        if abs(arg) < _SERIES_CUTOFF:
            # c k1 tan(k d) = c k1 k d (1 + ...) = (z - s) d (1 + (kd)^2/3)
            return (z - s) * d * (1.0 + arg * arg / 3.0)
        if _pole_distance(arg, 0.5) < POLE_GUARD:
            raise PoleError("k*d = %s too close to a pole of tan" % arg)
        return c * k1v * _tan(arg)
    if abs(arg) < _SERIES_CUTOFF:
        if z + s == 0:
            raise PoleError("z = -c^2/2 is a pole of the second Dirac branch")
        # -c k1 cot(k d) = -c^2/((z+s) d) + (z-s) d/3 + (z-s) k^2 d^3/45
        k2 = (z * z - s * s) / (c * c)  # k^2 = (z^2 - c^4/4)/c^2
        return -c * c / ((z + s) * d) + (z - s) * d / 3.0 + (z - s) * k2 * d**3 / 45.0
    if _pole_distance(arg, 0.0) < POLE_GUARD:
        raise PoleError("k*d = %s too close to a pole of cot" % arg)
    return -c * k1v * _cot(arg)


@dataclass(frozen=True)
class BranchCut:
    """Real singular ray(s) of a scalar model coefficient.

    kind "positive-axis": the ray [v, inf) (Schrodinger, threshold v).
    kind "dirac-gap": the two rays (-inf, -c^2/2] u [c^2/2, inf).
    """

    kind: str
    v: float = 0.0
    c: float = 1.0

    def contains(self, x):
        """Whether real ``x`` lies on the cut (branch points excluded)."""
        x = float(x)
        if self.kind == "positive-axis":
            return x >= self.v
        if self.kind == "dirac-gap":
            s = 0.5 * self.c * self.c
            return abs(x) >= s and x != s and x != -s
        raise ValueError("unknown branch-cut kind %r" % self.kind)


@dataclass(frozen=True)
class HerglotzScalar:
    """A named scalar Herglotz function with its branch bookkeeping.

    ``eval`` maps complex z to complex m(z); ``singular_set`` is a human
    description of the real cut/pole structure.  Instances are immutable
    and safe to share.
    """

    name: str
    eval: object  # callable z -> complex
    branch: BranchCut
    singular_set: str
    params: dict = field(default_factory=dict)

    def __call__(self, z):
        return self.eval(z)


def catalogue(v=0.0, c=1.0, d=1.0):
    """The seven catalogued scalar coefficients with concrete parameters.

    Returns half-line Schrodinger (right and left leads share the same
    coefficient formula; both entries are kept because they parametrize
    different gamma-fields), the two interval Schrodinger branches, the
    half-line Dirac coefficient and the two interval Dirac branches.
    """
    pos = BranchCut("positive-axis", v=v)
    gap = BranchCut("dirac-gap", c=c)
    s = 0.5 * c * c
    return [
        HerglotzScalar(
            "m_hr", lambda z: m_schrodinger_halfline(z, v), pos,
            "cut [v, inf)", {"v": v},
        ),
        HerglotzScalar(
            "m_hl", lambda z: m_schrodinger_halfline(z, v), pos,
            "cut [v, inf)", {"v": v},
        ),
        HerglotzScalar(
            "m_hc1", lambda z: m_interval(z, v, d, 1), pos,
            "poles at v + (pi(n+1/2)/d)^2", {"v": v, "d": d},
        ),
        HerglotzScalar(
            "m_hc2", lambda z: m_interval(z, v, d, 2), pos,
            "poles at v + (pi n/d)^2, n >= 1", {"v": v, "d": d},
        ),
        HerglotzScalar(
            "m_dr", lambda z: m_dirac(z, c, "halfline"), gap,
            "cuts |x| >= c^2/2; real on the gap", {"c": c},
        ),
        HerglotzScalar(
            "m_dc1", lambda z: m_dirac(z, c, "interval", d, 1), gap,
            "cuts |x| >= c^2/2 beyond poles of tan(k d)", {"c": c, "d": d},
        ),
        HerglotzScalar(
            "m_dc2", lambda z: m_dirac(z, c, "interval", d, 2), gap,
            "cuts |x| >= c^2/2 beyond poles of cot(k d)", {"c": c, "d": d},
        ),
    ]
