import numpy as np
import pytest

import spnkit as sk


@pytest.fixture(scope="session")
def small_profile():
    """64x64 sensor with clean readout (no FPN blocks) for fast pipeline tests."""
    spec = sk.ProfileSpec(
        width=64,
        height=64,
        pnu_sigma=0.02,
        dark_sigma=0.02,
        dark_pnu_coupling=0.5,
        fpn_offset_sigma_frac=0.0,
        hot_pixel_fraction=0.0,
        seed=2024,
        label="unit-64",
    )
    return sk.generate_profile(spec)


@pytest.fixture(scope="session")
def tuned_wavelet(small_profile):
    """base_sigma pinned near twice the half-well shot noise in DN."""
    shot_dn = np.sqrt(0.5 * small_profile.well_capacity) / small_profile.conversion_gain
    return sk.WaveletConfig(levels=4, base_sigma=2.2 * shot_dn)


def make_flat_frames(profile, count, t_int=0.01, temperature=293.15, start_index=0,
                     fill=0.5, optics=None):
    """Flat-field captures whose mean photo-electron count is fill * well."""
    flux = fill * profile.well_capacity / t_int
    scene = sk.SceneField.flat_field(profile.shape, flux)
    settings = sk.CaptureSettings(
        t_int=t_int,
        temperature=temperature,
        optics=optics if optics is not None else sk.Pinhole(),
    )
    return [
        sk.capture(profile, settings, scene, start_index + i) for i in range(count)
    ]


@pytest.fixture(scope="session")
def flat_frames(small_profile):
    return make_flat_frames(small_profile, 12)
