import numpy as np
import pytest

import spnkit as sk
from spnkit.exceptions import ConfigurationError, DomainError

from conftest import make_flat_frames


def _clean_spec(**kwargs):
    defaults = dict(
        width=64, height=64, fpn_offset_sigma_frac=0.0, hot_pixel_fraction=0.0, seed=77
    )
    return sk.ProfileSpec(**{**defaults, **kwargs})


def test_cold_short_dark_frame_is_all_zero():
    profile = sk.generate_profile(_clean_spec(read_noise_sigma=0.0))
    settings = sk.CaptureSettings(t_int=1e-6, temperature=200.0, shutter_open=False)
    frame = sk.capture(profile, settings, None, 0)
    assert (frame.pixels == 0).all()


def test_bright_flat_field_saturates_every_pixel():
    profile = sk.generate_profile(_clean_spec())
    frames = make_flat_frames(profile, 1, fill=20.0)
    assert (frames[0].pixels == profile.dn_max).all()


def test_dark_saturation_when_mean_exceeds_twice_well():
    profile = sk.generate_profile(_clean_spec(hot_pixel_fraction=0.001))
    t_int = sk.dark_exposure_for_fill(profile, 318.15, 2.5)
    frame = sk.capture(
        profile, sk.CaptureSettings(t_int=t_int, temperature=318.15, shutter_open=False), None, 0
    )
    assert (frame.pixels == profile.dn_max).all()


def test_poisson_statistics_at_half_well():
    profile = sk.generate_profile(
        sk.ProfileSpec(width=512, height=512, pnu_sigma=1e-6, dark_sigma=1e-6,
                       read_noise_sigma=0.0, fpn_offset_sigma_frac=0.0,
                       hot_pixel_fraction=0.0, dark_density_ref=0.0, seed=13, bit_depth=16)
    )
    frame = make_flat_frames(profile, 1, fill=0.5)[0]
    electrons = frame.pixels.astype(float) * profile.conversion_gain
    ratio = electrons.var() / electrons.mean()
    assert abs(ratio - 1.0) < 0.05


def test_dn_bounds_and_dtype():
    profile = sk.generate_profile(_clean_spec(bit_depth=10))
    frame = make_flat_frames(profile, 1, fill=0.9)[0]
    assert frame.pixels.dtype == np.uint16
    assert frame.pixels.min() >= 0
    assert frame.pixels.max() <= profile.dn_max


def test_capture_is_pure_and_index_sensitive():
    profile = sk.generate_profile(_clean_spec())
    scene = sk.SceneField.flat_field(profile.shape, 1e5)
    settings = sk.CaptureSettings(t_int=0.01, temperature=300.0)
    a = sk.capture(profile, settings, scene, 5)
    b = sk.capture(profile, settings, scene, 5)
    c = sk.capture(profile, settings, scene, 6)
    assert np.array_equal(a.pixels, b.pixels)
    assert not np.array_equal(a.pixels, c.pixels)


def test_scene_shape_mismatch_rejected():
    profile = sk.generate_profile(_clean_spec())
    scene = sk.SceneField.flat_field((32, 32), 1e5)
    with pytest.raises(ConfigurationError):
        sk.capture(profile, sk.CaptureSettings(t_int=0.01, temperature=300.0), scene, 0)


def test_open_shutter_requires_scene():
    profile = sk.generate_profile(_clean_spec())
    with pytest.raises(ConfigurationError):
        sk.capture(profile, sk.CaptureSettings(t_int=0.01, temperature=300.0), None, 0)


def test_dark_frames_ignore_optics():
    profile = sk.generate_profile(_clean_spec())
    common = dict(t_int=2.0, temperature=320.0, shutter_open=False)
    a = sk.capture(profile, sk.CaptureSettings(optics=sk.Pinhole(), **common), None, 4)
    b = sk.capture(profile, sk.CaptureSettings(optics=sk.Lens(0.5), **common), None, 4)
    assert np.array_equal(a.pixels, b.pixels)


def test_hot_pixels_run_hotter_in_dark_frames():
    profile = sk.generate_profile(_clean_spec(hot_pixel_fraction=0.01))
    t_int = sk.dark_exposure_for_fill(profile, 300.0, 0.02)
    frame = sk.capture(
        profile, sk.CaptureSettings(t_int=t_int, temperature=300.0, shutter_open=False), None, 0
    )
    hot = profile.hot_pixel_map
    assert frame.pixels[hot].mean() > 5 * frame.pixels[~hot].mean()


def test_describe_pixel_matches_capture():
    profile = sk.generate_profile(
        sk.ProfileSpec(width=64, height=64, seed=31, hot_pixel_fraction=0.01,
                       fpn_offset_sigma_frac=0.01)
    )
    scene = sk.SceneField.flat_field(profile.shape, 2e5)
    settings = sk.CaptureSettings(t_int=0.01, temperature=305.0, optics=sk.Lens(0.2))
    frame = sk.capture(profile, settings, scene, 9)
    for row, col in [(0, 0), (10, 3), (63, 63), (31, 40)]:
        sig = sk.describe_pixel(profile, settings, scene, 9, row, col)
        assert sig.dn == int(frame.pixels[row, col])
        assert sig.sigma_ph == pytest.approx(np.sqrt(sig.mu_ph))
        assert sig.sigma_e == pytest.approx(np.sqrt(sig.mu_e))
        assert 0.0 <= sig.n_well <= profile.well_capacity


def test_pixel_signal_well_identity_without_read_noise():
    profile = sk.generate_profile(_clean_spec(read_noise_sigma=0.0, fpn_offset_sigma_frac=0.01))
    scene = sk.SceneField.flat_field(profile.shape, 2e5)
    settings = sk.CaptureSettings(t_int=0.01, temperature=300.0)
    sig = sk.describe_pixel(profile, settings, scene, 0, 5, 5)
    expected = min(sig.n_pe + sig.n_dark + sig.fpn_offset, profile.well_capacity)
    assert sig.n_well == pytest.approx(max(expected, 0.0))


class TestRowProfile:
    def test_constant_frame_gives_constant_series(self):
        profile = sk.generate_profile(_clean_spec())
        frame = make_flat_frames(profile, 1, fill=20.0)[0]  # saturated -> constant
        series = sk.row_profile(frame, 10)
        assert np.ptp(series) == 0

    def test_out_of_range_row_rejected(self):
        profile = sk.generate_profile(_clean_spec())
        frame = make_flat_frames(profile, 1)[0]
        with pytest.raises(DomainError):
            sk.row_profile(frame, 64)
        with pytest.raises(DomainError):
            sk.row_profile(frame, -1)

    def test_pinhole_row_has_no_curvature(self):
        profile = sk.generate_profile(
            sk.ProfileSpec(width=256, height=256, fpn_offset_sigma_frac=0.0,
                           hot_pixel_fraction=0.0, seed=21)
        )
        frame = make_flat_frames(profile, 1)[0]
        series = sk.row_profile(frame, 128).astype(float)
        x = np.arange(series.size, dtype=float)
        coef, cov = np.polyfit(x, series, 2, cov=True)
        assert abs(coef[0]) < 3.0 * np.sqrt(cov[0, 0])

    def test_lens_vignetting_falloff(self):
        profile = sk.generate_profile(
            sk.ProfileSpec(width=256, height=256, fpn_offset_sigma_frac=0.0,
                           hot_pixel_fraction=0.0, seed=21)
        )
        frame = make_flat_frames(profile, 1, optics=sk.Lens(0.3))[0]
        series = sk.row_profile(frame, 128).astype(float)
        center = series[120:136].mean()
        corners = np.concatenate([series[:16], series[-16:]]).mean()
        assert (center - corners) / center >= 0.10


def test_dark_exposure_for_fill_hits_target():
    profile = sk.generate_profile(_clean_spec(read_noise_sigma=0.0))
    t_int = sk.dark_exposure_for_fill(profile, 318.15, 0.5)
    frame = sk.capture(
        profile, sk.CaptureSettings(t_int=t_int, temperature=318.15, shutter_open=False), None, 0
    )
    fill = frame.pixels.astype(float).mean() * profile.conversion_gain / profile.well_capacity
    assert fill == pytest.approx(0.5, abs=0.02)
