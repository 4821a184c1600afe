"""Noise-residue extraction by locally adaptive wavelet attenuation.

The denoiser treats each wavelet detail coefficient as signal plus noise of
known variance ``base_sigma**2``: a local signal variance is estimated as the
minimum, over several window sizes, of the windowed mean of squared
coefficients minus the noise variance, and each coefficient is scaled by
var / (var + base_sigma**2).  The residue is the image minus its denoised
version; it carries the high-frequency per-pixel structure the fingerprint
stages consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import uniform_filter

from .capture import RawFrame
from .exceptions import ConfigurationError
from .validation import as_float_2d, check_finite
from .wavelet import WaveletPyramid, dwt2, idwt2


@dataclass(frozen=True)
class WaveletConfig:
    levels: int = 4
    base_sigma: float = 5.0
    variance_windows: tuple[int, ...] = (3, 5, 7, 9)

    def __post_init__(self):
        if self.levels < 1:
            raise ConfigurationError(f"levels must be >= 1, got {self.levels}")
        if not np.isfinite(self.base_sigma) or self.base_sigma <= 0:
            raise ConfigurationError(f"base_sigma must be > 0, got {self.base_sigma}")
        windows = tuple(int(w) for w in self.variance_windows)
        if not windows or any(w < 3 or w % 2 == 0 for w in windows):
            raise ConfigurationError(
                f"variance_windows must be odd sizes >= 3, got {self.variance_windows}"
            )
        object.__setattr__(self, "variance_windows", windows)

    def to_dict(self) -> dict:
        return {
            "levels": self.levels,
            "base_sigma": self.base_sigma,
            "variance_windows": list(self.variance_windows),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WaveletConfig":
        return cls(
            levels=int(d["levels"]),
            base_sigma=float(d["base_sigma"]),
            variance_windows=tuple(d["variance_windows"]),
        )


@dataclass
class NoiseResidue:
    """High-pass residue of one frame: image minus its denoised version."""

    values: np.ndarray
    source: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def _attenuate_band(band: np.ndarray, noise_var: float, windows) -> np.ndarray:
    power = band * band
    local = None
    for w in windows:
        est = uniform_filter(power, size=w, mode="reflect")
        local = est if local is None else np.minimum(local, est)
    signal_var = np.maximum(local - noise_var, 0.0)
    return band * (signal_var / (signal_var + noise_var))


def denoise(image, config: WaveletConfig | None = None) -> np.ndarray:
    """Wavelet-domain Wiener-style denoising; keeps estimated scene content."""
    config = config or WaveletConfig()
    arr = as_float_2d(image, "image")
    pyramid = dwt2(arr, config.levels)
    noise_var = config.base_sigma ** 2
    filtered = WaveletPyramid(
        ll=pyramid.ll,
        bands=[
            tuple(_attenuate_band(b, noise_var, config.variance_windows) for b in level)
            for level in pyramid.bands
        ],
        original_shape=pyramid.original_shape,
        padded_shape=pyramid.padded_shape,
    )
    return idwt2(filtered)


def residue(frame, config: WaveletConfig | None = None) -> NoiseResidue:
    """Noise residue of a frame or 2D array (mean is intentionally kept)."""
    if isinstance(frame, RawFrame):
        arr = frame.pixels.astype(np.float64)
        source = dict(frame.metadata)
    else:
        arr = as_float_2d(frame, "frame")
        source = {}
    values = arr - denoise(arr, config)
    check_finite(values, "residue")
    return NoiseResidue(values=values, source=source)
