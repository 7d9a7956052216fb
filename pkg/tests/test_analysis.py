import numpy as np
import pytest

from gpsbox.analysis import (
    NoRootError,
    brent,
    choose_order,
    critical_radius,
    critical_screening,
    degeneracy_check,
    free_ordering,
    small_box_ordering,
    sweep,
)
from gpsbox.hamiltonian import SolverError, StateLabel, UnboundStateError, energy
from gpsbox.potentials import Coulomb, Custom, Hulthen, ParticleInBox

C = Coulomb()
S = StateLabel.parse


class TestBrent:
    def test_polynomial_root(self):
        root, f, width = brent(lambda x: x**3 - 2.0, 0.0, 2.0, xtol=1e-14, ftol=1e-13)
        assert root == pytest.approx(2 ** (1 / 3), abs=1e-13)
        assert abs(f) <= 1e-13
        assert width <= 1e-13

    def test_bracket_straddles(self):
        g = lambda x: np.exp(x) - 5.0
        root, _, width = brent(g, 0.0, 4.0, xtol=1e-6, ftol=1e-12)
        assert g(root - 10 * width) < 0 < g(root + 10 * width)

    def test_no_sign_change(self):
        with pytest.raises(NoRootError):
            brent(lambda x: x * x + 1.0, -1.0, 1.0, 1e-8, 1e-8)

    def test_endpoint_roots(self):
        assert brent(lambda x: x, 0.0, 1.0, 1e-8, 1e-8)[0] == 0.0


@pytest.mark.parametrize("pot,state,value,tol", [
    (C, "1s", 1.8352463302, 1e-8),
    (C, "2p", 5.0883082272, 1e-8),
    (C, "10m", 74.044, 5e-4),
    (Hulthen(0.1), "2p", 5.8257603, 1e-7),
    (Hulthen(0.2), "1s", 1.9584319, 1e-7),
])
def test_critical_radius_reference(pot, state, value, tol):
    cr = critical_radius(pot, S(state))
    assert cr.radius == pytest.approx(value, abs=tol)
    assert cr.residual <= 1e-9
    h = 10 * cr.bracket_width
    assert energy(pot, S(state), cr.radius - h) > 0 > energy(pot, S(state), cr.radius + h)


def test_critical_radius_grows_with_screening():
    radii = [critical_radius(Hulthen(d), S("1s")).radius for d in (0.05, 0.1, 0.2)]
    np.testing.assert_allclose(radii, [1.8639, 1.8940, 1.9584], atol=5e-5)
    assert radii[0] < radii[1] < radii[2]


def test_box_has_no_critical_radius():
    with pytest.raises(NoRootError):
        critical_radius(ParticleInBox(), S("1s"))


def test_critical_screening_consistent():
    # inverse problem: the screening that zeroes 1s at its own critical radius
    r_c = critical_radius(Hulthen(0.1), S("1s")).radius
    assert critical_screening(S("1s"), r_c) == pytest.approx(0.1, abs=1e-7)


def test_sweep_reference_and_order():
    res = sweep(C, S("2s"), [0.1, 2, 8, 25])
    np.testing.assert_allclose(
        res.energies, [1942.720354554, 3.327509156489, -0.084738721360, -0.124999763707],
        rtol=1e-11, atol=1e-11)
    assert res.order == 128 and not res.failures
    res = sweep(C, S("5g"), [10, 100])
    np.testing.assert_allclose(res.energies, [0.1883418745, -0.0199999992], atol=1e-10)


def test_sweep_box_scaling():
    res = sweep(ParticleInBox(), S("1s"), [1, 2, 4])
    np.testing.assert_allclose(res.energies / res.energies[0], [1, 1 / 4, 1 / 16], rtol=1e-12)


def test_sweep_auto_order():
    res = sweep(C, S("2s"), [0.1, 2, 8, 25], order=None)
    assert res.order == choose_order(C, S("2s"), 0.1)
    np.testing.assert_allclose(res.energies[2], -0.084738721360, atol=1e-11)


def test_sweep_rejects_unsorted():
    with pytest.raises(ValueError):
        sweep(C, S("1s"), [2, 1])


def test_sweep_records_failures():
    # non-finite beyond r = 15, so only the widest cavity fails
    pot = Custom(lambda r: np.where(r > 15, np.nan, -1.0 / r), name="nan-tail")
    res = sweep(pot, S("1s"), [2, 5, 10, 20])
    assert [r for r, _ in res.failures] == [20.0]
    assert list(res.radii) == [2, 5, 10]


def test_sweep_flags_non_monotone_curve(monkeypatch):
    import gpsbox.analysis as analysis

    monkeypatch.setattr(analysis, "energy", lambda pot, st, r_c, order: (r_c - 2.0) ** 2)
    with pytest.raises(SolverError, match="not decreasing"):
        sweep(C, S("1s"), [1.0, 2.0, 3.0])


@pytest.mark.parametrize("n,ell,r_c", [(2, 0, 2.0), (4, 0, 2.0), (3, 0, 2.0), (3, 1, 6.0), (4, 1, 6.0)])
def test_degeneracy(n, ell, r_c):
    rc, gap = degeneracy_check(n, ell)
    assert rc == r_c
    assert gap <= 1e-9


def test_degeneracy_invalid_pair():
    with pytest.raises(ValueError):
        degeneracy_check(1, 0)


BOX_SEQUENCE = ["1s", "2p", "3d", "2s", "4f", "3p", "5g", "4d", "6h", "3s"]


@pytest.mark.parametrize("pot", [C, Hulthen(0.2)])
def test_small_box_ordering(pot):
    labels = small_box_ordering(pot, 0.05, 10)
    assert [str(s) for s in labels] == BOX_SEQUENCE


def test_free_particle_ordering():
    assert [str(s) for s in small_box_ordering(ParticleInBox(), 1.0, 4)] == ["1s", "2p", "3d", "2s"]


def test_free_hulthen_ordering():
    levels = free_ordering(Hulthen(0.05), 10, with_energies=True)
    assert [str(s) for _, s in levels] == ["1s", "2s", "2p", "3s", "3p", "3d", "4s", "4p", "4d", "4f"]
    assert levels[0][0] == pytest.approx(-0.4753125, abs=1e-10)


def test_free_ordering_unbound():
    with pytest.raises(UnboundStateError):
        free_ordering(Hulthen(2.5), 1)
    with pytest.raises(TypeError):
        free_ordering(ParticleInBox(), 3)
