import numpy as np
import pytest

from gpsbox.potentials import Coulomb, Custom, Hulthen, ParticleInBox, parse_potential


def test_coulomb_values():
    r = np.array([0.5, 1.0, 4.0])
    np.testing.assert_allclose(Coulomb()(r), -1.0 / r)
    np.testing.assert_allclose(Coulomb(2.0)(r), -2.0 / r)


def test_hulthen_matches_direct_formula():
    d = 0.2
    r = np.linspace(0.1, 30.0, 50)
    direct = -d * np.exp(-d * r) / (1 - np.exp(-d * r))
    np.testing.assert_allclose(Hulthen(d)(r), direct, rtol=1e-13)


def test_hulthen_coulomb_limit_small_r():
    # v = -1/r + delta/2 - delta^2 r / 12 + ...
    d, r = 0.1, 1e-3
    assert Hulthen(d)(r) == pytest.approx(-1 / r + d / 2 - d**2 * r / 12, abs=1e-11)


def test_hulthen_decays():
    assert abs(Hulthen(0.5)(200.0)) < 1e-40


def test_box_is_zero():
    assert np.all(ParticleInBox()(np.linspace(0.1, 1, 5)) == 0.0)


def test_custom():
    harm = Custom(lambda r: 0.5 * r**2, name="harmonic")
    assert harm(2.0) == 2.0
    assert harm.describe() == {"kind": "custom", "name": "harmonic"}


@pytest.mark.parametrize("bad", [0.0, -0.1])
def test_invalid_parameters(bad):
    with pytest.raises(ValueError):
        Hulthen(bad)
    with pytest.raises(ValueError):
        Coulomb(bad)


def test_parse_potential():
    assert parse_potential("coulomb") == Coulomb()
    assert parse_potential("H", charge=2) == Coulomb(2.0)
    assert parse_potential("hulthen", delta=0.05) == Hulthen(0.05)
    assert isinstance(parse_potential("box"), ParticleInBox)
    with pytest.raises(ValueError, match="delta"):
        parse_potential("hulthen")
    with pytest.raises(ValueError, match="unknown"):
        parse_potential("yukawa")


@pytest.mark.parametrize("pot", [Coulomb(), Coulomb(3.0), Hulthen(0.05), Hulthen(0.2), Hulthen(2.0)])
def test_negative_and_increasing(pot):
    r = np.geomspace(1e-3, 50.0, 400)
    v = pot(r)
    assert np.all(v < 0)
    assert np.all(np.diff(v) > 0)


@pytest.mark.parametrize("delta", [0.05, 0.1, 0.2, 1.0])
def test_hulthen_small_r_bound(delta):
    r = np.geomspace(1e-3, 0.5, 50)
    assert np.all(np.abs(Hulthen(delta)(r) + 1 / r - delta / 2) <= delta**2 * r)
