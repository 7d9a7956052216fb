import numpy as np
import pytest
from helpers import box_energy

from gpsbox import _backend, _numerov_py
from gpsbox.hamiltonian import StateLabel, energy
from gpsbox.oracle import OracleError, numerov_energy
from gpsbox.potentials import Coulomb, Hulthen, ParticleInBox

C = Coulomb()


def test_reference_cases():
    r = numerov_energy(C, 0, 2.0, 0, points=20000)
    assert r.energy == pytest.approx(-0.125, abs=1e-8)
    assert r.nodes == 0
    assert r.mismatch < 1e-10
    assert numerov_energy(ParticleInBox(), 0, 1.0, 0).energy == pytest.approx(np.pi**2 / 2, abs=1e-8)
    assert numerov_energy(Hulthen(0.2), 1, 10.0, 0).energy == pytest.approx(-0.0332989638, abs=1e-7)


def test_requested_level_node_count():
    for k in range(5):
        r = numerov_energy(Hulthen(0.1), 2, 15.0, k)
        assert r.nodes == k


def test_richardson_fourth_order():
    exact = box_energy(0, 8, 1.0)
    errs = [abs(numerov_energy(ParticleInBox(), 0, 1.0, 8, points=m).energy - exact)
            for m in (2000, 4000, 8000)]
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    assert all(r == pytest.approx(16.0, rel=0.1) for r in ratios)


@pytest.mark.parametrize("pot,state,r_c", [
    (C, "1s", 0.5), (C, "2s", 8.0), (C, "4f", 20.0), (Hulthen(0.05), "3d", 5.0), (Hulthen(0.2), "2p", 10.0),
])
def test_agrees_with_collocation(pot, state, r_c):
    st = StateLabel.parse(state)
    r = numerov_energy(pot, st.ell, r_c, st.k)
    assert abs(r.energy - energy(pot, st, r_c)) <= 1e-8


def test_rejects_bad_requests():
    with pytest.raises(ValueError):
        numerov_energy(C, 0, 2.0, 0, points=1000)
    with pytest.raises(ValueError):
        numerov_energy(C, 0, 2.0, -1)


def test_bracket_failure():
    def broken(veff, e, h, u0, u1):
        return 1.0, 0  # never changes sign, never gains nodes

    with pytest.raises(OracleError):
        numerov_energy(C, 0, 2.0, 0, kernel=broken)


def test_python_kernel_matches_backend():
    r = np.linspace(2e-6, 2.0, 3001)
    veff = np.ascontiguousarray(-1.0 / r)
    h = r[1] - r[0]
    for e in (-0.5, -0.125, 3.0):
        a = _backend.shoot(veff, e, h, r[0], r[1])
        b = _numerov_py.shoot(veff, e, h, r[0], r[1])
        assert a[1] == b[1]
        assert a[0] == pytest.approx(b[0], rel=1e-12)
    py = numerov_energy(C, 1, 6.0, 1, points=3000, kernel=_numerov_py.shoot).energy
    assert py == pytest.approx(numerov_energy(C, 1, 6.0, 1, points=3000).energy, abs=1e-13)


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")
