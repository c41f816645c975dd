"""Model catalogue: boundary data, defect equations, pole catalogues."""

import numpy as np
import pytest

from weyltriplets import herglotz as hg
from weyltriplets import models1d as m1
from weyltriplets import oracle as orc
from weyltriplets import triplets as tr

ALL_SPECS = [
    m1.schrodinger_right(v=0.3),
    m1.schrodinger_left(v=0.3),
    m1.schrodinger_interval(v=0.2, a=0.0, b=1.0),
    m1.dirac_right(c=1.2),
    m1.dirac_interval(c=1.2, a=-1.0, b=1.0),
    m1.full_line_contact(1.0, 0.5),
]
IDS = [s.family for s in ALL_SPECS]


def test_family_registry():
    assert set(m1.FAMILIES) == {
        "schrodinger-right", "schrodinger-left", "schrodinger-interval",
        "dirac-right", "dirac-interval", "full-line-contact",
    }
    for spec in ALL_SPECS:
        assert spec.family in m1.FAMILIES


def test_spec_validation():
    with pytest.raises(ValueError):
        m1.ModelSpec(family="nope")
    with pytest.raises(ValueError):
        m1.schrodinger_interval(a=1.0, b=-1.0)
    with pytest.raises(ValueError):
        m1.ModelSpec(family="schrodinger-interval")  # missing endpoints
    with pytest.raises(ValueError):
        m1.dirac_right(c=0.0)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=IDS)
@pytest.mark.parametrize("z", [2 + 1j, -1 + 0.5j])
def test_gamma_boundary_data_is_identity_and_weyl(spec, z):
    G0, G1 = m1.gamma_boundary_data(spec, z)
    t = m1.build_triplet(spec)
    n = t.dim
    assert np.abs(np.asarray(G0) - np.eye(n)).max() < 1e-12
    assert np.abs(np.asarray(G1) - t.weyl(z)).max() < 1e-12


@pytest.mark.parametrize("spec", ALL_SPECS, ids=IDS)
def test_weyl_conjugate_symmetry(spec):
    t = m1.build_triplet(spec)
    for z in (1j, -2 + 0.5j, 1.5 + 2j):
        M = t.weyl(z)
        assert np.abs(t.weyl(np.conj(z)) - M.conj().T).max() < 1e-12
        im = (M - M.conj().T) / 2j
        assert np.linalg.eigvalsh(im).min() > 0


@pytest.mark.parametrize(
    "spec,grid",
    [
        (m1.schrodinger_right(v=0.5), np.linspace(0.0, 20.0, 4001)),
        (m1.schrodinger_interval(v=0.0, a=0.0, b=1.0),
         np.linspace(0.0, 1.0, 2001)),
        (m1.dirac_right(c=1.0), np.linspace(0.0, 20.0, 4001)),
        (m1.dirac_interval(c=1.0, a=-1.0, b=1.0),
         np.linspace(-1.0, 1.0, 2001)),
        (m1.full_line_contact(1.0, 0.0), np.linspace(-15.0, 15.0, 6001)),
    ],
    ids=["halfline", "interval", "dirac", "dirac-interval", "full-line"],
)
def test_defect_equation(spec, grid):
    assert m1.verify_defect_equation(spec, 2 + 1j, grid) < 1e-4


def test_defect_equation_needs_uniform_grid():
    bad = np.concatenate([np.linspace(0, 1, 100), np.linspace(1.1, 5, 100)])
    with pytest.raises(ValueError):
        m1.verify_defect_equation(m1.schrodinger_right(), 2 + 1j, bad)


@pytest.mark.parametrize(
    "spec", [m1.schrodinger_right(v=0.3), m1.full_line_contact(1.0, 0.5)],
    ids=["halfline", "full-line"],
)
def test_mlambda_identity_by_quadrature(spec):
    t = m1.build_triplet(spec)
    z, zeta = 2 + 1j, -1 + 0.5j
    gram = t.gamma(zeta).gram(t.gamma(z))
    lhs = t.weyl(z) - np.conj(t.weyl(zeta)).T
    assert np.abs(lhs - (z - np.conj(zeta)) * gram).max() < 1e-8


def test_interval_pole_catalogue_locates_weyl_poles():
    spec = m1.schrodinger_interval(v=0.2, a=0.0, b=1.0)
    poles = m1.interval_weyl_poles(spec, count=3)
    assert len(poles["branch1"]) == len(poles["branch2"]) == 3
    dd = spec.half_length
    for branch, arr in ((1, poles["branch1"]), (2, poles["branch2"])):
        for p in arr:
            # the reciprocal of the Weyl branch vanishes linearly at a
            # pole; locate its root from two nearby samples
            eps = 1e-6 * max(1.0, abs(p))
            f1 = 1.0 / hg.m_interval(p - eps, spec.v, dd, branch)
            f2 = 1.0 / hg.m_interval(p - 2 * eps, spec.v, dd, branch)
            root = (p - eps) + f1 * eps / (f2 - f1)
            assert abs(root - p) < 1e-7 * max(1.0, abs(p))
    with pytest.raises(ValueError):
        m1.interval_weyl_poles(m1.schrodinger_right())


def test_krein_correction_matches_fd_oracle():
    spec = m1.schrodinger_right()
    t = m1.build_triplet(spec)
    theta, z = 1.0, -1.0 + 0j
    xs = np.array([0.25, 0.5, 1.0, 2.0])
    corr = tr.krein_correction(
        t, tr.BoundaryCondition.operator(np.array([[theta]])), z
    )
    K = corr.kernel(xs, xs)
    fd = orc.fd_resolvent_difference(orc.FDGrid(5e-3, 30.0), theta, z, xs, xs)
    assert np.abs(K - fd).max() / np.abs(K).max() < 1e-2


def test_eval_gamma_on_grid_samples_defect_elements():
    spec = m1.schrodinger_right(v=0.0)
    t = m1.build_triplet(spec)
    z = 2 + 1j
    grid = np.linspace(0.0, 3.0, 7)
    vals = m1.eval_gamma_on_grid(t, z, np.array([1.0]), grid)
    w = hg.sqrt_cut(z)
    assert np.abs(np.asarray(vals) - np.exp(1j * w * grid)).max() < 1e-12


def test_full_line_contact_sides():
    t = m1.build_triplet(m1.full_line_contact(2.0, 0.0))
    M = t.weyl(1j)
    assert abs(M[0, 0] - hg.m_schrodinger_halfline(1j, 2.0)) < 1e-14
    assert abs(M[1, 1] - hg.m_schrodinger_halfline(1j, 0.0)) < 1e-14
    assert abs(M[0, 1]) == 0.0 and abs(M[1, 0]) == 0.0
