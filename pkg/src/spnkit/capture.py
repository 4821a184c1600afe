"""Frame capture: photons and dark current in, digital numbers out.

The per-pixel electron chain is
    n_well = clamp(n_pe + n_dark + fpn_offset + read, 0, well_capacity)
    DN     = clamp(round(n_well / conversion_gain), 0, 2**bits - 1)
with n_pe ~ Poisson(flux * t_int * optics_gain * pnu), n_dark ~ Poisson of
the temperature- and exposure-scaled dark current, and Gaussian read noise.
All draws are counter-keyed on (profile.seed, frame_index, pixel, tag), so a
frame is a pure function of its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .exceptions import ConfigurationError, DomainError
from .physics import dark_density, dark_electrons
from .profile import SensorProfile

_TAG_PE = 1
_TAG_DARK = 2
_TAG_READ = 3

# Largest frame index a capture may use; the space above is reserved for
# profile-construction streams.
MAX_FRAME_INDEX = (1 << 63) - 1

DEFAULT_WAVELENGTHS = {"R": 610e-9, "G": 530e-9, "B": 465e-9}


@dataclass(frozen=True)
class Pinhole:
    """Aberration-free optics: unit gain everywhere."""

    def gain_field(self, shape: tuple[int, int]) -> np.ndarray:
        return np.ones(shape)

    def to_dict(self) -> dict:
        return {"type": "pinhole"}


@dataclass(frozen=True)
class Lens:
    """Lens with radial vignetting gain 1 - alpha * r^2 (r = 1 at corners)."""

    vignetting_alpha: float = 0.1

    def __post_init__(self):
        if not 0 <= self.vignetting_alpha < 1:
            raise ConfigurationError(
                f"vignetting_alpha must be in [0, 1), got {self.vignetting_alpha}"
            )

    def gain_field(self, shape: tuple[int, int]) -> np.ndarray:
        h, w = shape
        cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
        rows = np.arange(h)[:, None] - cy
        cols = np.arange(w)[None, :] - cx
        corner = cy * cy + cx * cx
        if corner == 0:
            return np.ones(shape)
        r2 = (rows * rows + cols * cols) / corner
        return 1.0 - self.vignetting_alpha * r2

    def to_dict(self) -> dict:
        return {"type": "lens", "vignetting_alpha": self.vignetting_alpha}


Optics = Pinhole | Lens


def optics_from_dict(d: dict) -> Optics:
    kind = d.get("type")
    if kind == "pinhole":
        return Pinhole()
    if kind == "lens":
        return Lens(vignetting_alpha=float(d["vignetting_alpha"]))
    raise ConfigurationError(f"unknown optics type {kind!r}")


@dataclass(frozen=True)
class CaptureSettings:
    t_int: float
    temperature: float
    optics: Optics = field(default_factory=Pinhole)
    shutter_open: bool = True

    def __post_init__(self):
        if not np.isfinite(self.t_int) or self.t_int <= 0:
            raise ConfigurationError(f"t_int must be > 0 s, got {self.t_int}")
        if not np.isfinite(self.temperature) or self.temperature <= 0:
            raise ConfigurationError(f"temperature must be > 0 K, got {self.temperature}")

    def to_dict(self) -> dict:
        return {
            "t_int": self.t_int,
            "temperature": self.temperature,
            "optics": self.optics.to_dict(),
            "shutter_open": self.shutter_open,
        }


class SceneField:
    """Incident photon flux per pixel (photons/pixel/s), already CFA-filtered.

    Wavelengths per CFA letter are carried for photon-energy bookkeeping only;
    spectral response is assumed folded into the flux itself.
    """

    def __init__(self, photon_flux, wavelength_per_channel=None, description: str = ""):
        flux = np.asarray(photon_flux, dtype=np.float64)
        if flux.ndim != 2:
            raise ConfigurationError(f"photon_flux must be 2D, got shape {flux.shape}")
        if np.any(flux < 0) or not np.all(np.isfinite(flux)):
            raise ConfigurationError("photon_flux must be finite and >= 0")
        flux.setflags(write=False)
        self.photon_flux = flux
        self.wavelength_per_channel = dict(wavelength_per_channel or DEFAULT_WAVELENGTHS)
        self.description = description

    @classmethod
    def flat_field(cls, shape: tuple[int, int], flux: float, **kwargs) -> "SceneField":
        return cls(np.full(shape, float(flux)), description=kwargs.pop("description", "flat field"), **kwargs)

    @property
    def shape(self) -> tuple[int, int]:
        return self.photon_flux.shape


@dataclass(frozen=True)
class RawFrame:
    """Quantized sensor output plus the metadata needed to reproduce it."""

    pixels: np.ndarray
    metadata: dict

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    @property
    def dn_max(self) -> int:
        return (1 << int(self.metadata["bit_depth"])) - 1


@dataclass(frozen=True)
class PixelSignal:
    """Signal chain bookkeeping for one pixel of one frame."""

    mu_ph: float
    sigma_ph: float
    mu_e: float
    sigma_e: float
    n_pe: int
    n_dark: int
    n_well: float
    fpn_offset: float
    read_electrons: float
    dn: int


def _mean_maps(profile: SensorProfile, settings: CaptureSettings, scene: SceneField | None):
    """Per-pixel Poisson means for photo-electrons and dark electrons."""
    if settings.shutter_open:
        if scene is None:
            raise ConfigurationError("shutter is open but no scene was given")
        if scene.shape != profile.shape:
            raise ConfigurationError(
                f"scene shape {scene.shape} does not match sensor {profile.shape}"
            )
        gain_field = settings.optics.gain_field(profile.shape)
        mu_ph = scene.photon_flux * settings.t_int * gain_field
        mu_pe = mu_ph * profile.pnu_map
    else:
        mu_ph = np.zeros(profile.shape)
        mu_pe = mu_ph
    j_d = dark_density(profile, settings.temperature)
    hot_gain = np.where(profile.hot_pixel_map, profile.hot_pixel_gain, 1.0)
    mu_dark = dark_electrons(
        j_d * profile.dark_nonuniformity_map * hot_gain,
        profile.pixel_area,
        settings.t_int,
    )
    return mu_ph, mu_pe, mu_dark


def _quantize(profile: SensorProfile, n_well: np.ndarray) -> np.ndarray:
    dn = np.rint(n_well / profile.conversion_gain)
    return np.clip(dn, 0, profile.dn_max).astype(np.uint16)


def capture(
    profile: SensorProfile,
    settings: CaptureSettings,
    scene: SceneField | None = None,
    frame_index: int = 0,
) -> RawFrame:
    """Simulate one exposure.  Pure in all arguments; dark frames ignore optics."""
    if not 0 <= int(frame_index) <= MAX_FRAME_INDEX:
        raise ConfigurationError(f"frame_index out of range: {frame_index}")
    frame_index = int(frame_index)
    _, mu_pe, mu_dark = _mean_maps(profile, settings, scene)
    lat = rng.lattice_for(profile.shape)

    if settings.shutter_open:
        n_pe = rng.poissons(rng.stream_key(profile.seed, frame_index, _TAG_PE), lat, mu_pe)
    else:
        n_pe = np.zeros(profile.shape, dtype=np.int64)
    n_dark = rng.poissons(rng.stream_key(profile.seed, frame_index, _TAG_DARK), lat, mu_dark)

    electrons = n_pe.astype(np.float64) + n_dark + profile.fpn_offset_field()
    if profile.read_noise_sigma > 0:
        electrons = electrons + profile.read_noise_sigma * rng.normals(
            rng.stream_key(profile.seed, frame_index, _TAG_READ), lat
        )
    n_well = np.clip(electrons, 0.0, profile.well_capacity)

    pixels = _quantize(profile, n_well)
    pixels.setflags(write=False)
    metadata = {
        "sensor_id": profile.label,
        "t_int": settings.t_int,
        "temperature": settings.temperature,
        "optics": settings.optics.to_dict(),
        "shutter_open": settings.shutter_open,
        "seed": profile.seed,
        "frame_index": frame_index,
        "cfa": profile.cfa,
        "bit_depth": profile.bit_depth,
    }
    return RawFrame(pixels=pixels, metadata=metadata)


def describe_pixel(
    profile: SensorProfile,
    settings: CaptureSettings,
    scene: SceneField | None,
    frame_index: int,
    row: int,
    col: int,
) -> PixelSignal:
    """Recompute the full signal chain of one pixel, bit-matching capture()."""
    h, w = profile.shape
    if not (0 <= row < h and 0 <= col < w):
        raise DomainError(f"pixel ({row}, {col}) outside sensor {profile.shape}")
    mu_ph, mu_pe, mu_dark = _mean_maps(profile, settings, scene)
    lat = rng.lattice_at([row], [col], w)

    if settings.shutter_open:
        n_pe = int(
            rng.poissons(rng.stream_key(profile.seed, frame_index, _TAG_PE), lat, [mu_pe[row, col]])[0]
        )
    else:
        n_pe = 0
    n_dark = int(
        rng.poissons(rng.stream_key(profile.seed, frame_index, _TAG_DARK), lat, [mu_dark[row, col]])[0]
    )
    read = 0.0
    if profile.read_noise_sigma > 0:
        read = profile.read_noise_sigma * float(
            rng.normals(rng.stream_key(profile.seed, frame_index, _TAG_READ), lat)[0]
        )
    fpn = float(profile.fpn_offset_field()[row, col])
    n_well = float(np.clip(n_pe + n_dark + fpn + read, 0.0, profile.well_capacity))
    dn = int(_quantize(profile, np.array([[n_well]]))[0, 0])
    mu_ph_val = float(mu_ph[row, col])
    mu_e_val = float(mu_pe[row, col])
    return PixelSignal(
        mu_ph=mu_ph_val,
        sigma_ph=float(np.sqrt(mu_ph_val)),
        mu_e=mu_e_val,
        sigma_e=float(np.sqrt(mu_e_val)),
        n_pe=n_pe,
        n_dark=n_dark,
        n_well=n_well,
        fpn_offset=fpn,
        read_electrons=read,
        dn=dn,
    )


def row_profile(frame, row: int) -> np.ndarray:
    """One row of DN values, e.g. for the lens-vs-pinhole comparison plot."""
    pixels = frame.pixels if isinstance(frame, RawFrame) else np.asarray(frame)
    if pixels.ndim != 2:
        raise DomainError(f"expected a 2D frame, got shape {pixels.shape}")
    if not 0 <= int(row) < pixels.shape[0]:
        raise DomainError(f"row {row} out of range for frame with {pixels.shape[0]} rows")
    return pixels[int(row), :].copy()


def dark_exposure_for_fill(
    profile: SensorProfile, temperature: float, fill: float = 0.5
) -> float:
    """Exposure time whose nominal mean dark charge fills ``fill`` of the well.

    Uses the mean (non-hot) pixel; hot pixels will exceed this fill.
    """
    if not 0 < fill:
        raise DomainError(f"fill must be > 0, got {fill}")
    rate = dark_electrons(dark_density(profile, temperature), profile.pixel_area, 1.0)
    if rate <= 0:
        raise DomainError("sensor has zero dark current; cannot target a fill level")
    return fill * profile.well_capacity / rate
