"""Fingerprint correlation and the rotation / half-swap control protocol.

A probe matches a reference only when the aligned correlation both clears the
caller's threshold and dominates every deliberate-mismatch control (the three
quarter-turn rotations of the reference and its half-swapped variant) by at
least a factor of ten.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .cfa import BAYER_POSITIONS, rotate_pattern, rotate_position
from .exceptions import DegenerateInputError, ProtocolError, ShapeError
from .fingerprint import Fingerprint

CONTROL_DOMINANCE = 10.0
_PCE_EXCLUDE = 11  # window edge around the correlation peak


@dataclass
class CorrelationReport:
    rho_0: float
    rho_90: float
    rho_180: float
    rho_270: float
    rho_flipped: float
    per_channel: dict = field(default_factory=dict)
    pce_0: float = 0.0
    decision: str = "no-match"
    threshold: float = 0.0
    protocol_notes: str = ""
    probe_temperature: float | None = None

    @property
    def control_max(self) -> float:
        return max(abs(self.rho_90), abs(self.rho_180), abs(self.rho_270), abs(self.rho_flipped))

    def to_dict(self) -> dict:
        return {
            "rho_0": self.rho_0,
            "rho_90": self.rho_90,
            "rho_180": self.rho_180,
            "rho_270": self.rho_270,
            "rho_flipped": self.rho_flipped,
            "per_channel": self.per_channel,
            "pce_0": self.pce_0,
            "decision": self.decision,
            "threshold": self.threshold,
            "protocol_notes": self.protocol_notes,
            "probe_temperature": self.probe_temperature,
        }


def _as_vector(x) -> np.ndarray:
    """Mean-removed flat vector of an array or of a fingerprint's channels."""
    if isinstance(x, Fingerprint):
        parts = [p - p.mean() for p in x.planes]
        return np.concatenate([p.ravel() for p in parts])
    arr = np.asarray(x, dtype=np.float64)
    return (arr - arr.mean()).ravel()


def correlate(a, b) -> float:
    """Pearson correlation of two arrays or fingerprints of identical shape."""
    va = _as_vector(a)
    vb = _as_vector(b)
    if va.shape != vb.shape:
        raise ShapeError(f"cannot correlate vectors of size {va.size} and {vb.size}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise DegenerateInputError("correlation undefined for zero-variance input")
    return float(np.dot(va, vb) / (na * nb))


def rotate_fingerprint(fp: Fingerprint, quarter_turns: int, track_cfa: bool = True) -> Fingerprint:
    """Rotate a fingerprint by quarter turns (counterclockwise).

    With ``track_cfa`` the channel planes are re-assigned to the Bayer sites
    they physically land on, exactly as if the whole mosaic had been rotated;
    otherwise planes rotate in place and keep their sites.
    """
    q = int(quarter_turns) % 4
    if q == 0:
        return fp
    h, w = fp.plane_shape
    if q in (1, 3) and h != w:
        raise ShapeError(
            f"90/270 degree rotation needs square channel planes, got {h}x{w}; "
            "crop to the central square first"
        )
    rotated = [np.rot90(p, q) for p in fp.planes]
    if track_cfa:
        new_planes = [None] * 4
        for pos, plane in zip(BAYER_POSITIONS, rotated):
            new_planes[BAYER_POSITIONS.index(rotate_position(pos, q))] = plane
        new_cfa = rotate_pattern(fp.cfa, q)
    else:
        new_planes = rotated
        new_cfa = fp.cfa
    return replace(fp, planes=tuple(new_planes), cfa=new_cfa)


def half_swap(fp: Fingerprint) -> Fingerprint:
    """Exchange the top and bottom halves of every channel plane."""
    h = fp.plane_shape[0]
    if h < 2:
        raise ShapeError(f"half swap needs plane height >= 2, got {h}")
    mid = h // 2
    swapped = []
    for p in fp.planes:
        s = np.concatenate([p[mid:], p[:mid]], axis=0)
        swapped.append(s / np.linalg.norm(s))
    return replace(fp, planes=tuple(swapped))


def correlation_surface(a, b) -> np.ndarray:
    """Normalized circular cross-correlation; entry (dy, dx) correlates ``a``
    with ``b`` shifted back by (dy, dx), so a probe made by rolling the
    reference forward peaks at the roll offsets."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape or va.ndim != 2:
        raise ShapeError(f"need two equal 2D arrays, got {va.shape} and {vb.shape}")
    va = va - va.mean()
    vb = vb - vb.mean()
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise DegenerateInputError("cross-correlation undefined for zero-energy input")
    surface = np.fft.ifft2(np.conj(np.fft.fft2(va)) * np.fft.fft2(vb)).real
    return surface / (na * nb)


def pce(reference_channel, probe_channel) -> float:
    """Peak-to-correlation-energy: squared peak over the mean squared surface
    outside an 11x11 window around the peak (circular indexing)."""
    surface = correlation_surface(reference_channel, probe_channel)
    h, w = surface.shape
    peak_idx = np.unravel_index(int(np.argmax(surface * surface)), surface.shape)
    half = _PCE_EXCLUDE // 2
    rows = (np.arange(peak_idx[0] - half, peak_idx[0] + half + 1)) % h
    cols = (np.arange(peak_idx[1] - half, peak_idx[1] + half + 1)) % w
    keep = np.ones(surface.shape, dtype=bool)
    keep[np.ix_(rows, cols)] = False
    if not keep.any():
        raise ShapeError(
            f"surface {surface.shape} has no background outside the "
            f"{_PCE_EXCLUDE}x{_PCE_EXCLUDE} peak window"
        )
    background = float(np.mean(surface[keep] ** 2))
    if background == 0.0:
        raise DegenerateInputError("correlation surface has zero background energy")
    return float(surface[peak_idx] ** 2 / background)


def peak_location(reference_channel, probe_channel) -> tuple[int, int]:
    """Location of the strongest cross-correlation peak (dy, dx)."""
    surface = correlation_surface(reference_channel, probe_channel)
    return tuple(int(v) for v in np.unravel_index(int(np.argmax(surface * surface)), surface.shape))


def _check_compatible(reference: Fingerprint, probe: Fingerprint) -> None:
    if reference.plane_shape != probe.plane_shape:
        raise ProtocolError(
            f"plane shapes differ: {reference.plane_shape} vs {probe.plane_shape}"
        )
    if reference.cfa != probe.cfa:
        raise ProtocolError(f"CFA patterns differ: {reference.cfa} vs {probe.cfa}")
    ref_wavelet = reference.processing.get("wavelet")
    probe_wavelet = probe.processing.get("wavelet")
    if ref_wavelet != probe_wavelet:
        raise ProtocolError(
            f"wavelet processing differs: {ref_wavelet} vs {probe_wavelet}"
        )
    ref_norm = reference.processing.get("normalization")
    probe_norm = probe.processing.get("normalization")
    if ref_norm != probe_norm:
        raise ProtocolError(f"normalization differs: {ref_norm} vs {probe_norm}")


def match_report(
    reference: Fingerprint,
    probe: Fingerprint,
    threshold: float,
    track_cfa_rotation: bool = True,
) -> CorrelationReport:
    """Run the full control protocol of reference-vs-probe correlations."""
    _check_compatible(reference, probe)
    rotations = {q: rotate_fingerprint(reference, q, track_cfa=track_cfa_rotation) for q in (0, 1, 2, 3)}
    flipped = half_swap(reference)

    rho = {q: correlate(rotations[q], probe) for q in rotations}
    rho_flipped = correlate(flipped, probe)

    per_channel = {}
    for i, name in enumerate(probe.channel_names):
        per_channel[name] = {
            "rho_0": correlate(rotations[0].planes[i], probe.planes[i]),
            "rho_90": correlate(rotations[1].planes[i], probe.planes[i]),
            "rho_180": correlate(rotations[2].planes[i], probe.planes[i]),
            "rho_270": correlate(rotations[3].planes[i], probe.planes[i]),
            "rho_flipped": correlate(flipped.planes[i], probe.planes[i]),
        }

    pce_0 = pce(reference.assemble(), probe.assemble())
    control = max(abs(rho[1]), abs(rho[2]), abs(rho[3]), abs(rho_flipped))
    decision = "match" if (rho[0] >= threshold and rho[0] >= CONTROL_DOMINANCE * control) else "no-match"
    notes = (
        f"controls: reference rotated 90/180/270 ({'CFA-tracking' if track_cfa_rotation else 'in-place'}) "
        f"and half-swapped at the plane midpoint row; match requires rho_0 >= {threshold} "
        f"and rho_0 >= {CONTROL_DOMINANCE:g}x every control"
    )
    return CorrelationReport(
        rho_0=rho[0],
        rho_90=rho[1],
        rho_180=rho[2],
        rho_270=rho[3],
        rho_flipped=rho_flipped,
        per_channel=per_channel,
        pce_0=pce_0,
        decision=decision,
        threshold=float(threshold),
        protocol_notes=notes,
        probe_temperature=probe.processing.get("source", {}).get("temperature"),
    )
