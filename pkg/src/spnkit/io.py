"""File formats: PGM frames with JSON sidecars, profile JSON, fingerprint
containers, correlation reports and CSV exports.

All writers are deterministic (canonical JSON key order, fixed binary
layouts); identical inputs always produce identical bytes.

Fingerprint container layout: one line of UTF-8 JSON (terminated by a single
newline) describing dimensions, kind, channel order and the processing
record, immediately followed by the four channel planes as little-endian
IEEE-754 float32, row-major, concatenated in header order.
"""

from __future__ import annotations

import base64
import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .capture import CaptureSettings, RawFrame, optics_from_dict
from .exceptions import ConfigurationError, DomainError
from .fingerprint import Fingerprint
from .matcher import CorrelationReport
from .profile import ProfileSpec, SensorProfile

FINGERPRINT_FORMAT = "spnkit-fingerprint/1"
PROFILE_FORMAT = "spnkit-profile/1"

_KELVIN = 273.15


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# PGM (portable graymap, binary P5, big-endian 16-bit samples)

def write_pgm(path, pixels: np.ndarray, maxval: int) -> None:
    arr = np.asarray(pixels)
    if arr.ndim != 2:
        raise DomainError(f"PGM needs a 2D array, got shape {arr.shape}")
    if not 0 < maxval < 65536:
        raise DomainError(f"PGM maxval must be in [1, 65535], got {maxval}")
    header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n{maxval}\n".encode("ascii")
    if maxval > 255:
        body = arr.astype(">u2").tobytes()
    else:
        body = arr.astype(np.uint8).tobytes()
    Path(path).write_bytes(header + body)


def read_pgm(path) -> tuple[np.ndarray, int]:
    data = Path(path).read_bytes()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    if fields[0] != b"P5":
        raise DomainError(f"not a binary PGM file: {path}")
    width, height, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    dtype = ">u2" if maxval > 255 else np.uint8
    pixels = np.frombuffer(data, dtype=dtype, count=width * height, offset=pos)
    return pixels.reshape(height, width).astype(np.uint16), maxval


# ---------------------------------------------------------------------------
# Frames: <name>.pgm + <name>.json sidecar

def frame_sidecar_path(pgm_path) -> Path:
    return Path(pgm_path).with_suffix(".json")


def write_frame(pgm_path, frame: RawFrame) -> None:
    write_pgm(pgm_path, frame.pixels, frame.dn_max)
    frame_sidecar_path(pgm_path).write_text(canonical_json(frame.metadata))


def read_frame(pgm_path) -> RawFrame:
    pixels, _ = read_pgm(pgm_path)
    sidecar = frame_sidecar_path(pgm_path)
    if not sidecar.exists():
        raise ConfigurationError(f"missing frame sidecar {sidecar}")
    metadata = json.loads(sidecar.read_text())
    pixels.setflags(write=False)
    return RawFrame(pixels=pixels, metadata=metadata)


def settings_from_metadata(metadata: dict) -> CaptureSettings:
    return CaptureSettings(
        t_int=float(metadata["t_int"]),
        temperature=float(metadata["temperature"]),
        optics=optics_from_dict(metadata["optics"]),
        shutter_open=bool(metadata["shutter_open"]),
    )


# ---------------------------------------------------------------------------
# Sensor profiles

def _encode_array(arr: np.ndarray) -> dict:
    contiguous = np.ascontiguousarray(arr)
    return {
        "dtype": contiguous.dtype.str,
        "shape": list(contiguous.shape),
        "data": base64.b64encode(contiguous.tobytes()).decode("ascii"),
    }


def _decode_array(d: dict) -> np.ndarray:
    arr = np.frombuffer(base64.b64decode(d["data"]), dtype=np.dtype(d["dtype"]))
    out = arr.reshape(d["shape"]).copy()
    out.setflags(write=False)
    return out


def profile_to_dict(profile: SensorProfile) -> dict:
    return {
        "format": PROFILE_FORMAT,
        "width": profile.width,
        "height": profile.height,
        "pixel_pitch": profile.pixel_pitch,
        "well_capacity": profile.well_capacity,
        "pnu_map": _encode_array(profile.pnu_map),
        "dark_density_ref": profile.dark_density_ref,
        "dark_nonuniformity_map": _encode_array(profile.dark_nonuniformity_map),
        "dark_pnu_coupling": profile.dark_pnu_coupling,
        "delta_e": profile.delta_e,
        "t_ref": profile.t_ref,
        "read_noise_sigma": profile.read_noise_sigma,
        "conversion_gain": profile.conversion_gain,
        "bit_depth": profile.bit_depth,
        "cfa": profile.cfa,
        "hot_pixel_map": _encode_array(profile.hot_pixel_map.astype(np.uint8)),
        "hot_pixel_gain": profile.hot_pixel_gain,
        "fpn_block_size": profile.fpn_block_size,
        "fpn_block_offsets": _encode_array(profile.fpn_block_offsets),
        "seed": profile.seed,
        "label": profile.label,
        "spec": asdict(profile.spec) if profile.spec is not None else None,
    }


def profile_from_dict(d: dict) -> SensorProfile:
    if d.get("format") != PROFILE_FORMAT:
        raise ConfigurationError(f"not a {PROFILE_FORMAT} document")
    spec = ProfileSpec(**d["spec"]) if d.get("spec") else None
    return SensorProfile(
        width=int(d["width"]),
        height=int(d["height"]),
        pixel_pitch=float(d["pixel_pitch"]),
        well_capacity=float(d["well_capacity"]),
        pnu_map=_decode_array(d["pnu_map"]),
        dark_density_ref=float(d["dark_density_ref"]),
        dark_nonuniformity_map=_decode_array(d["dark_nonuniformity_map"]),
        dark_pnu_coupling=float(d["dark_pnu_coupling"]),
        delta_e=float(d["delta_e"]),
        t_ref=float(d["t_ref"]),
        read_noise_sigma=float(d["read_noise_sigma"]),
        conversion_gain=float(d["conversion_gain"]),
        bit_depth=int(d["bit_depth"]),
        cfa=str(d["cfa"]),
        hot_pixel_map=_decode_array(d["hot_pixel_map"]).astype(bool),
        hot_pixel_gain=float(d["hot_pixel_gain"]),
        fpn_block_size=int(d["fpn_block_size"]),
        fpn_block_offsets=_decode_array(d["fpn_block_offsets"]),
        seed=int(d["seed"]),
        label=str(d["label"]),
        spec=spec,
    )


def save_profile(path, profile: SensorProfile) -> None:
    Path(path).write_text(canonical_json(profile_to_dict(profile)))


def load_profile(path) -> SensorProfile:
    return profile_from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# Fingerprint containers

def save_fingerprint(path, fp: Fingerprint) -> None:
    header = {
        "format": FINGERPRINT_FORMAT,
        "plane_height": fp.plane_shape[0],
        "plane_width": fp.plane_shape[1],
        "kind": fp.kind,
        "frame_count": fp.frame_count,
        "sensor_label": fp.sensor_label,
        "cfa": fp.cfa,
        "channel_order": list(fp.channel_names),
        "dtype": "<f4",
        "processing": fp.processing,
    }
    blob = b"".join(np.ascontiguousarray(p, dtype="<f4").tobytes() for p in fp.planes)
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        fh.write(blob)


def load_fingerprint(path) -> Fingerprint:
    raw = Path(path).read_bytes()
    nl = raw.find(b"\n")
    if nl < 0:
        raise ConfigurationError(f"not a fingerprint container: {path}")
    header = json.loads(raw[:nl].decode("utf-8"))
    if header.get("format") != FINGERPRINT_FORMAT:
        raise ConfigurationError(f"not a {FINGERPRINT_FORMAT} container: {path}")
    h, w = int(header["plane_height"]), int(header["plane_width"])
    plane_bytes = h * w * 4
    body = raw[nl + 1 :]
    if len(body) != 4 * plane_bytes:
        raise ConfigurationError(
            f"container body has {len(body)} bytes, expected {4 * plane_bytes}"
        )
    planes = []
    for i in range(4):
        plane = np.frombuffer(
            body, dtype="<f4", count=h * w, offset=i * plane_bytes
        ).reshape(h, w).astype(np.float64)
        # float32 storage perturbs the invariants at ~1e-8; restore exactly.
        plane = plane - plane.mean()
        plane = plane / np.linalg.norm(plane)
        plane.setflags(write=False)
        planes.append(plane)
    return Fingerprint(
        planes=tuple(planes),
        cfa=str(header["cfa"]),
        kind=str(header["kind"]),
        frame_count=int(header["frame_count"]),
        sensor_label=str(header["sensor_label"]),
        processing=dict(header["processing"]),
    )


def export_fingerprint_image(path, fp: Fingerprint, channel: str) -> None:
    """Render one channel to 8-bit PGM with a 3-sigma contrast stretch."""
    plane = fp.channel(channel)
    sigma = float(plane.std())
    if sigma == 0.0:
        raise DomainError("channel has zero variance; nothing to render")
    stretched = np.clip((plane - plane.mean()) / (3.0 * sigma), -1.0, 1.0)
    image = np.round((stretched + 1.0) * 127.5).astype(np.uint8)
    write_pgm(path, image, 255)


# ---------------------------------------------------------------------------
# Reports and CSV series

def write_report_json(path, report: CorrelationReport) -> None:
    Path(path).write_text(canonical_json(report.to_dict()))


def report_csv_text(report: CorrelationReport) -> str:
    """Row format mirroring the reference-vs-rotations table layout."""
    temp = report.probe_temperature
    temp_c = "" if temp is None else format(temp - _KELVIN, ".2f")
    cells = [temp_c] + [
        format(v, ".6e") for v in (report.rho_0, report.rho_90, report.rho_180, report.rho_270)
    ]
    return "temp_c,rho_0,rho_90,rho_180,rho_270\n" + ",".join(cells) + "\n"


def write_report_csv(path, report: CorrelationReport) -> None:
    Path(path).write_text(report_csv_text(report))


def row_csv_text(series: np.ndarray, compare: np.ndarray | None = None) -> str:
    lines = ["index,DN" if compare is None else "index,DN,DN_compare"]
    for i, v in enumerate(series):
        if compare is None:
            lines.append(f"{i},{int(v)}")
        else:
            lines.append(f"{i},{int(v)},{int(compare[i])}")
    return "\n".join(lines) + "\n"


def write_row_csv(path, series, compare=None) -> None:
    Path(path).write_text(row_csv_text(np.asarray(series), None if compare is None else np.asarray(compare)))
