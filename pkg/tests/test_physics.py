import numpy as np
import pytest
from hypothesis import given, strategies as st

import spnkit as sk
from spnkit.exceptions import DomainError


class TestPhotonEnergy:
    def test_green_photon(self):
        assert sk.photon_energy(550e-9) == pytest.approx(3.61e-19, rel=5e-3)

    def test_blue_photon(self):
        assert sk.photon_energy(450e-9) == pytest.approx(4.41e-19, rel=5e-3)

    @given(st.floats(min_value=1e-9, max_value=1e-3))
    def test_inverse_proportionality(self, lam):
        assert sk.photon_energy(2 * lam) == pytest.approx(sk.photon_energy(lam) / 2, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            sk.photon_energy(0.0)
        with pytest.raises(DomainError):
            sk.photon_energy(-550e-9)


class TestShotSigma:
    @pytest.mark.parametrize("mu,expected", [(100.0, 10.0), (0.0, 0.0)])
    def test_exact_points(self, mu, expected):
        assert sk.shot_sigma(mu) == expected

    def test_sqrt_two(self):
        assert sk.shot_sigma(2.0) == pytest.approx(1.41421, abs=1e-5)

    @given(st.floats(min_value=0, max_value=1e12))
    def test_variance_equals_mean(self, mu):
        assert sk.shot_sigma(mu) ** 2 == pytest.approx(mu, rel=1e-12, abs=1e-300)

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            sk.shot_sigma(-1.0)


class TestMaxSnr:
    def test_points(self):
        assert sk.max_snr(10_000.0) == 100.0
        assert sk.max_snr(1.0) == 1.0
        assert sk.max_snr(5000.0) == pytest.approx(70.71, abs=0.01)

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            sk.max_snr(-5.0)


class TestDarkDensity:
    @pytest.fixture()
    def profile(self):
        return sk.generate_profile(sk.ProfileSpec(width=8, height=8, seed=1))

    def test_anchor_point(self, profile):
        assert sk.dark_density(profile, profile.t_ref) == profile.dark_density_ref

    def test_20_to_45_celsius_ratio(self, profile):
        # delta_e = -0.6 eV, t_ref = 293.15 K by default
        ratio = sk.dark_density(profile, 318.15) / sk.dark_density(profile, 293.15)
        assert ratio == pytest.approx(7.61, rel=0.01)

    def test_monotonic_in_temperature(self, profile):
        temps = np.linspace(250.0, 400.0, 40)
        values = [sk.dark_density(profile, t) for t in temps]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_rejects_nonpositive_temperature(self, profile):
        with pytest.raises(DomainError):
            sk.dark_density(profile, 0.0)


class TestDarkElectrons:
    def test_hand_example(self):
        # 1 nA/cm^2 over a 1.12 um pixel for one second
        value = sk.dark_electrons(1e-5, (1.12e-6) ** 2, 1.0)
        assert value == pytest.approx(78.4, rel=1e-3)

    def test_zero_exposure(self):
        assert sk.dark_electrons(1e-5, 1e-12, 0.0) == 0.0

    @given(
        st.floats(min_value=1e-12, max_value=1e-2),
        st.floats(min_value=1e-16, max_value=1e-8),
        st.floats(min_value=1e-6, max_value=1e3),
    )
    def test_linear_in_each_argument(self, j, a, t):
        base = sk.dark_electrons(j, a, t)
        assert sk.dark_electrons(2 * j, a, t) == pytest.approx(2 * base, rel=1e-12)
        assert sk.dark_electrons(j, 2 * a, t) == pytest.approx(2 * base, rel=1e-12)
        assert sk.dark_electrons(j, a, 2 * t) == pytest.approx(2 * base, rel=1e-12)

    def test_doubling_exposure_doubles_charge(self):
        assert sk.dark_electrons(1e-5, 1e-12, 2.0) == 2 * sk.dark_electrons(1e-5, 1e-12, 1.0)

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            sk.dark_electrons(-1e-5, 1e-12, 1.0)


class TestConstants:
    def test_paper_values(self):
        c = sk.CONSTANTS
        assert c.h == 6.626e-34
        assert c.q == 1.6e-19
        assert c.k_J == 1.38e-23
        assert c.k_eV == 8.617e-5

    def test_immutable(self):
        with pytest.raises(AttributeError):
            sk.CONSTANTS.h = 1.0
