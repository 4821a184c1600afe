"""Per-device sensor description and its deterministic generation.

A :class:`SensorProfile` captures everything that makes one physical sensor
distinct from another of the same design: the multiplicative pixel response
map, the dark-current non-uniformity map (optionally coupled to the response
map, since both arise from the same junction geometry), hot pixels, and
shared-readout block offsets.  Generation is a pure function of the spec and
its seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import rng
from .cfa import validate_cfa
from .exceptions import ConfigurationError

# Frame-index namespace reserved for profile construction draws.
_PROFILE_STREAM = (1 << 64) - 1
_TAG_PNU = 101
_TAG_DARK = 102
_TAG_HOT = 103
_TAG_FPN = 104

_MAP_FLOOR = 0.01


@dataclass(frozen=True)
class ProfileSpec:
    """Parameters from which a :class:`SensorProfile` is realized."""

    width: int = 256
    height: int = 256
    pixel_pitch: float = 1.12e-6
    well_capacity: float = 10_000.0
    pnu_sigma: float = 0.02
    dark_sigma: float = 0.02
    dark_pnu_coupling: float = 0.5
    dark_density_ref: float = 1e-5
    delta_e: float = -0.6
    t_ref: float = 293.15
    read_noise_sigma: float = 2.0
    conversion_gain: float | None = None
    bit_depth: int = 12
    cfa: str = "RGGB"
    hot_pixel_fraction: float = 0.001
    hot_pixel_gain: float = 50.0
    fpn_block_size: int = 2
    fpn_offset_sigma_frac: float = 0.01
    label: str = "sensor-0"
    seed: int = 0

    def validate(self) -> None:
        if self.width < 2 or self.height < 2 or self.width % 2 or self.height % 2:
            raise ConfigurationError(
                f"sensor dimensions must be even and >= 2, got {self.width}x{self.height}"
            )
        if self.fpn_block_size < 1 or self.width % self.fpn_block_size or self.height % self.fpn_block_size:
            raise ConfigurationError(
                f"dimensions {self.width}x{self.height} not divisible by "
                f"fpn_block_size {self.fpn_block_size}"
            )
        if not 0 < self.pnu_sigma <= 0.5:
            raise ConfigurationError(f"pnu_sigma must be in (0, 0.5], got {self.pnu_sigma}")
        if not 0 < self.dark_sigma <= 0.5:
            raise ConfigurationError(f"dark_sigma must be in (0, 0.5], got {self.dark_sigma}")
        if not 0 <= self.dark_pnu_coupling <= 1:
            raise ConfigurationError(
                f"dark_pnu_coupling must be in [0, 1], got {self.dark_pnu_coupling}"
            )
        if self.delta_e >= 0:
            raise ConfigurationError(
                f"delta_e must be negative (dark current grows with T), got {self.delta_e}"
            )
        if self.pixel_pitch <= 0 or self.well_capacity <= 0 or self.t_ref <= 0:
            raise ConfigurationError("pixel_pitch, well_capacity and t_ref must be > 0")
        if self.dark_density_ref < 0 or self.read_noise_sigma < 0:
            raise ConfigurationError("dark_density_ref and read_noise_sigma must be >= 0")
        if not 1 <= self.bit_depth <= 16:
            raise ConfigurationError(f"bit_depth must be in [1, 16], got {self.bit_depth}")
        if not 0 <= self.hot_pixel_fraction < 1:
            raise ConfigurationError(
                f"hot_pixel_fraction must be in [0, 1), got {self.hot_pixel_fraction}"
            )
        if self.hot_pixel_gain <= 0:
            raise ConfigurationError(f"hot_pixel_gain must be > 0, got {self.hot_pixel_gain}")
        if self.fpn_offset_sigma_frac < 0:
            raise ConfigurationError("fpn_offset_sigma_frac must be >= 0")
        if self.conversion_gain is not None and self.conversion_gain <= 0:
            raise ConfigurationError("conversion_gain must be > 0 when given")
        validate_cfa(self.cfa)


@dataclass(frozen=True)
class SensorProfile:
    """Immutable physical description of one simulated sensor."""

    width: int
    height: int
    pixel_pitch: float
    well_capacity: float
    pnu_map: np.ndarray
    dark_density_ref: float
    dark_nonuniformity_map: np.ndarray
    dark_pnu_coupling: float
    delta_e: float
    t_ref: float
    read_noise_sigma: float
    conversion_gain: float
    bit_depth: int
    cfa: str
    hot_pixel_map: np.ndarray
    hot_pixel_gain: float
    fpn_block_size: int
    fpn_block_offsets: np.ndarray
    seed: int
    label: str = "sensor-0"
    spec: ProfileSpec | None = field(default=None, compare=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @property
    def pixel_area(self) -> float:
        return self.pixel_pitch ** 2

    @property
    def dn_max(self) -> int:
        return (1 << self.bit_depth) - 1

    def fpn_offset_field(self) -> np.ndarray:
        """Per-pixel additive offset (electrons) expanded from block offsets."""
        b = self.fpn_block_size
        return np.kron(self.fpn_block_offsets, np.ones((b, b)))


def _renormalized_map(raw: np.ndarray) -> np.ndarray:
    clamped = np.maximum(raw, _MAP_FLOOR)
    return clamped / clamped.mean()


def generate_profile(spec: ProfileSpec) -> SensorProfile:
    """Realize a sensor from ``spec``; bit-identical for identical specs."""
    spec.validate()
    shape = (spec.height, spec.width)
    lat = rng.lattice_for(shape)

    g1 = rng.normals(rng.stream_key(spec.seed, _PROFILE_STREAM, _TAG_PNU), lat)
    pnu = _renormalized_map(1.0 + spec.pnu_sigma * g1)

    g2 = rng.normals(rng.stream_key(spec.seed, _PROFILE_STREAM, _TAG_DARK), lat)
    rho = spec.dark_pnu_coupling
    mixed = rho * g1 + np.sqrt(1.0 - rho * rho) * g2
    dark = _renormalized_map(1.0 + spec.dark_sigma * mixed)

    hot = np.zeros(shape, dtype=bool)
    n_hot = int(round(spec.hot_pixel_fraction * spec.width * spec.height))
    if n_hot > 0:
        scores = rng.uniforms(rng.stream_key(spec.seed, _PROFILE_STREAM, _TAG_HOT), lat, 0)
        order = np.argsort(scores.ravel(), kind="stable")[:n_hot]
        hot.ravel()[order] = True

    blocks = (spec.height // spec.fpn_block_size, spec.width // spec.fpn_block_size)
    if spec.fpn_offset_sigma_frac > 0:
        sigma_e = spec.fpn_offset_sigma_frac * spec.well_capacity
        offsets = sigma_e * rng.normals(
            rng.stream_key(spec.seed, _PROFILE_STREAM, _TAG_FPN),
            rng.lattice_for(blocks),
        )
    else:
        offsets = np.zeros(blocks)

    gain = spec.conversion_gain
    if gain is None:
        gain = spec.well_capacity / ((1 << spec.bit_depth) - 1)

    for arr in (pnu, dark, hot, offsets):
        arr.setflags(write=False)

    return SensorProfile(
        width=spec.width,
        height=spec.height,
        pixel_pitch=spec.pixel_pitch,
        well_capacity=spec.well_capacity,
        pnu_map=pnu,
        dark_density_ref=spec.dark_density_ref,
        dark_nonuniformity_map=dark,
        dark_pnu_coupling=spec.dark_pnu_coupling,
        delta_e=spec.delta_e,
        t_ref=spec.t_ref,
        read_noise_sigma=spec.read_noise_sigma,
        conversion_gain=float(gain),
        bit_depth=spec.bit_depth,
        cfa=validate_cfa(spec.cfa),
        hot_pixel_map=hot,
        hot_pixel_gain=spec.hot_pixel_gain,
        fpn_block_size=spec.fpn_block_size,
        fpn_block_offsets=offsets,
        seed=spec.seed,
        label=spec.label,
        spec=spec,
    )


def profile_with_seed(spec: ProfileSpec, seed: int, label: str | None = None) -> SensorProfile:
    """Convenience for seed families: same design, different silicon."""
    return generate_profile(
        replace(spec, seed=seed, label=label if label is not None else f"{spec.label}-{seed}")
    )
