"""Bayer color-filter-array bookkeeping.

A CFA pattern is a four-letter string over {R, G, B} read row-major across
the 2x2 mosaic cell, e.g. "RGGB".  Channel names disambiguate the two green
sites by order of appearance: "RGGB" -> R, G1, G2, B.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ConfigurationError, ShapeError

BAYER_POSITIONS = ((0, 0), (0, 1), (1, 0), (1, 1))


def validate_cfa(pattern: str) -> str:
    p = str(pattern).upper()
    if len(p) != 4 or sorted(p) != ["B", "G", "G", "R"]:
        raise ConfigurationError(
            f"CFA pattern must be a permutation of R,G,G,B (e.g. RGGB), got {pattern!r}"
        )
    greens = [pos for pos, letter in zip(BAYER_POSITIONS, p) if letter == "G"]
    if greens[0][0] == greens[1][0] or greens[0][1] == greens[1][1]:
        raise ConfigurationError(
            f"Bayer greens must sit on a diagonal of the 2x2 cell, got {pattern!r}"
        )
    return p


def channel_names(pattern: str) -> tuple[str, str, str, str]:
    """Per-position channel names, greens numbered in reading order."""
    p = validate_cfa(pattern)
    names = []
    green = 0
    for letter in p:
        if letter == "G":
            green += 1
            names.append(f"G{green}")
        else:
            names.append(letter)
    return tuple(names)


def split_cfa(array, pattern: str = "RGGB") -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Partition a full-resolution array into four half-resolution planes.

    Plane order follows ``BAYER_POSITIONS``; the repartition is lossless and
    invertible by :func:`assemble_cfa`.
    """
    validate_cfa(pattern)
    arr = np.asarray(array)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2D array, got shape {arr.shape}")
    h, w = arr.shape
    if h % 2 or w % 2:
        raise ShapeError(f"CFA split needs even dimensions, got {arr.shape}")
    return tuple(arr[pi::2, pj::2] for pi, pj in BAYER_POSITIONS)


def assemble_cfa(planes) -> np.ndarray:
    """Reassemble four half-resolution planes into the full mosaic."""
    planes = [np.asarray(p) for p in planes]
    if len(planes) != 4:
        raise ShapeError(f"expected 4 planes, got {len(planes)}")
    ph, pw = planes[0].shape
    for p in planes:
        if p.shape != (ph, pw):
            raise ShapeError("planes have mismatched shapes")
    out = np.empty((2 * ph, 2 * pw), dtype=np.result_type(*planes))
    for (pi, pj), plane in zip(BAYER_POSITIONS, planes):
        out[pi::2, pj::2] = plane
    return out


def rotate_position(position: tuple[int, int], quarter_turns: int) -> tuple[int, int]:
    """Where a Bayer site lands after rotating the full mosaic.

    Rotation convention matches ``np.rot90`` (counterclockwise); derived from
    (r, c) -> (W-1-c, r) with even W, applied ``quarter_turns`` times.
    """
    pi, pj = position
    for _ in range(quarter_turns % 4):
        pi, pj = (pj + 1) % 2, pi
    return pi, pj


def rotate_pattern(pattern: str, quarter_turns: int) -> str:
    """CFA pattern of a mosaic rotated by ``quarter_turns`` (counterclockwise)."""
    p = validate_cfa(pattern)
    letters = {}
    for pos, letter in zip(BAYER_POSITIONS, p):
        letters[rotate_position(pos, quarter_turns)] = letter
    return "".join(letters[pos] for pos in BAYER_POSITIONS)
