"""Device fingerprints from illuminated (PRNU) or dark frames.

Each frame is split into its four Bayer planes first and residues are taken
per plane, so mosaic structure never leaks into the high-frequency bands.
Per-plane residues are averaged across frames, cleaned of linear row/column
structure, and normalized to zero mean and unit L2 norm.  Dark frames pass
through hot-pixel suppression before residue extraction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import median_filter

from .capture import RawFrame
from .cfa import BAYER_POSITIONS, channel_names, split_cfa, validate_cfa
from .exceptions import (
    ConfigurationError,
    DegenerateFingerprintError,
    DomainError,
    ShapeError,
)
from .residue import WaveletConfig, residue
from .validation import as_float_2d

_MAD_TO_SIGMA = 1.4826
_FILL_BAND = (0.10, 0.90)

NORMALIZATION_STEPS = ["row-mean", "column-mean", "global-mean", "unit-norm"]


@dataclass(frozen=True)
class SuppressionConfig:
    enabled: bool = True
    hot_sigma_threshold: float = 6.0
    replacement: str = "local-median-3x3"

    def __post_init__(self):
        if not np.isfinite(self.hot_sigma_threshold) or self.hot_sigma_threshold <= 0:
            raise ConfigurationError(
                f"hot_sigma_threshold must be > 0, got {self.hot_sigma_threshold}"
            )
        if self.replacement != "local-median-3x3":
            raise ConfigurationError(
                f"unsupported replacement strategy {self.replacement!r}"
            )

    def to_dict(self) -> dict:
        return {
            "enabled": self.enabled,
            "hot_sigma_threshold": self.hot_sigma_threshold,
            "replacement": self.replacement,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SuppressionConfig":
        return cls(
            enabled=bool(d["enabled"]),
            hot_sigma_threshold=float(d["hot_sigma_threshold"]),
            replacement=str(d["replacement"]),
        )


@dataclass(frozen=True)
class Fingerprint:
    """Normalized per-CFA-channel reference pattern.

    ``planes`` follows ``cfa.BAYER_POSITIONS`` order; every plane is zero-mean
    with unit L2 norm.
    """

    planes: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    cfa: str
    kind: str
    frame_count: int
    sensor_label: str = ""
    processing: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.planes) != 4:
            raise ShapeError(f"a fingerprint needs 4 channel planes, got {len(self.planes)}")
        shape = self.planes[0].shape
        for p in self.planes:
            if p.shape != shape:
                raise ShapeError("fingerprint channel planes have mismatched shapes")
        validate_cfa(self.cfa)
        if self.kind not in ("prnu", "dark"):
            raise ConfigurationError(f"kind must be 'prnu' or 'dark', got {self.kind!r}")

    @property
    def plane_shape(self) -> tuple[int, int]:
        return self.planes[0].shape

    @property
    def channel_names(self) -> tuple[str, str, str, str]:
        return channel_names(self.cfa)

    def channel(self, name: str) -> np.ndarray:
        names = self.channel_names
        if name not in names:
            raise DomainError(f"unknown channel {name!r}; available: {', '.join(names)}")
        return self.planes[names.index(name)]

    def assemble(self) -> np.ndarray:
        """Full-resolution mosaic with each plane back at its Bayer site."""
        from .cfa import assemble_cfa

        return assemble_cfa(self.planes)


def suppress_hot_pixels(array, config: SuppressionConfig | None = None):
    """Replace robustly detected bright outliers by their local median.

    Threshold is median + hot_sigma_threshold * (1.4826 * MAD); replacement is
    the 3x3 median excluding the pixel itself.  Returns (cleaned, mask).
    """
    config = config or SuppressionConfig()
    arr = as_float_2d(array, "array")
    if arr.shape[0] < 3 or arr.shape[1] < 3:
        raise ShapeError(f"hot-pixel suppression needs at least 3x3, got {arr.shape}")
    med = np.median(arr)
    mad = np.median(np.abs(arr - med))
    threshold = med + config.hot_sigma_threshold * _MAD_TO_SIGMA * mad
    mask = arr > threshold
    if not mask.any():
        return arr.copy(), mask
    footprint = np.ones((3, 3), dtype=bool)
    footprint[1, 1] = False
    neighbors = median_filter(arr, footprint=footprint, mode="reflect")
    cleaned = np.where(mask, neighbors, arr)
    return cleaned, mask


def normalize_channel(plane: np.ndarray) -> np.ndarray:
    """Remove row, column and global means, then scale to unit L2 norm."""
    out = plane - plane.mean(axis=1, keepdims=True)
    out = out - out.mean(axis=0, keepdims=True)
    out = out - out.mean()
    norm = float(np.linalg.norm(out))
    input_scale = float(np.linalg.norm(plane))
    if norm == 0.0 or not np.isfinite(norm) or norm < 1e-8 * input_scale:
        raise DegenerateFingerprintError(
            "channel has no usable energy after normalization (constant or empty input)"
        )
    out = out / norm
    out.setflags(write=False)
    return out


def _frame_planes(frames: list[RawFrame], expect_shutter_open: bool, suppression=None):
    if not frames:
        raise DomainError("at least one frame is required")
    shape = frames[0].shape
    cfa = frames[0].metadata.get("cfa", "RGGB")
    for f in frames:
        if f.shape != shape:
            raise DomainError(f"mixed frame dimensions: {f.shape} vs {shape}")
        if f.metadata.get("cfa", "RGGB") != cfa:
            raise ConfigurationError("frames come from sensors with different CFA patterns")
        if bool(f.metadata.get("shutter_open", True)) != expect_shutter_open:
            want = "open" if expect_shutter_open else "closed"
            got = "open" if f.metadata.get("shutter_open", True) else "closed"
            raise ConfigurationError(
                f"shutter mismatch: frame {f.metadata.get('frame_index')} has shutter "
                f"{got}, expected {want}"
            )
    arrays = []
    for f in frames:
        arr = f.pixels.astype(np.float64)
        if suppression is not None and suppression.enabled:
            arr, _ = suppress_hot_pixels(arr, suppression)
        arrays.append(arr)
    return arrays, cfa, shape


def _source_record(frames: list[RawFrame]) -> dict:
    temps = [float(f.metadata["temperature"]) for f in frames if "temperature" in f.metadata]
    t_ints = [float(f.metadata["t_int"]) for f in frames if "t_int" in f.metadata]
    record = {}
    if temps:
        record["temperature"] = float(np.mean(temps))
    if t_ints:
        record["t_int"] = float(np.mean(t_ints))
    return record


def _build(arrays, cfa, wavelet: WaveletConfig) -> tuple:
    per_plane = [[] for _ in BAYER_POSITIONS]
    for arr in arrays:
        for i, plane in enumerate(split_cfa(arr, cfa)):
            per_plane[i].append(residue(plane, wavelet).values)
    averaged = [np.mean(np.stack(stack), axis=0) for stack in per_plane]
    return tuple(normalize_channel(p) for p in averaged)


def prnu_reference(frames: list[RawFrame], wavelet: WaveletConfig | None = None) -> Fingerprint:
    """Enroll a PRNU reference pattern from illuminated frames."""
    wavelet = wavelet or WaveletConfig()
    arrays, cfa, _ = _frame_planes(frames, expect_shutter_open=True)
    planes = _build(arrays, cfa, wavelet)
    processing = {
        "wavelet": wavelet.to_dict(),
        "suppression": None,
        "normalization": list(NORMALIZATION_STEPS),
        "cfa": cfa,
        "source": _source_record(frames),
    }
    return Fingerprint(
        planes=planes,
        cfa=cfa,
        kind="prnu",
        frame_count=len(frames),
        sensor_label=str(frames[0].metadata.get("sensor_id", "")),
        processing=processing,
    )


def dark_fingerprint(
    frames: list[RawFrame],
    wavelet: WaveletConfig | None = None,
    suppression: SuppressionConfig | None = None,
) -> Fingerprint:
    """Fingerprint a sensor from dark frames (dark current as excitation).

    The canonical protocol uses a single frame captured hot and long enough
    to reach roughly half-well mean fill; a warning is issued when the mean
    level falls outside 10-90% of full scale.
    """
    wavelet = wavelet or WaveletConfig()
    suppression = suppression or SuppressionConfig()
    arrays, cfa, _ = _frame_planes(frames, expect_shutter_open=False, suppression=suppression)
    for f in frames:
        fill = float(f.pixels.mean()) / f.dn_max
        if not _FILL_BAND[0] <= fill <= _FILL_BAND[1]:
            warnings.warn(
                f"dark frame {f.metadata.get('frame_index')} has mean fill "
                f"{fill:.1%}, outside the recommended {_FILL_BAND[0]:.0%}-"
                f"{_FILL_BAND[1]:.0%} band; adjust temperature or exposure",
                stacklevel=2,
            )
    planes = _build(arrays, cfa, wavelet)
    processing = {
        "wavelet": wavelet.to_dict(),
        "suppression": suppression.to_dict(),
        "normalization": list(NORMALIZATION_STEPS),
        "cfa": cfa,
        "source": _source_record(frames),
    }
    return Fingerprint(
        planes=planes,
        cfa=cfa,
        kind="dark",
        frame_count=len(frames),
        sensor_label=str(frames[0].metadata.get("sensor_id", "")),
        processing=processing,
    )
