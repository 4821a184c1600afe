import numpy as np
import pytest

import spnkit as sk
from spnkit.cfa import rotate_pattern, rotate_position
from spnkit.exceptions import ConfigurationError, ShapeError


def test_split_then_assemble_is_lossless():
    x = np.random.default_rng(0).normal(size=(32, 48))
    planes = sk.split_cfa(x, "RGGB")
    assert np.array_equal(sk.assemble_cfa(planes), x)


def test_constant_input_gives_constant_planes():
    planes = sk.split_cfa(np.full((16, 16), 3.5))
    for p in planes:
        assert np.ptp(p) == 0.0
        assert p.shape == (8, 8)


def test_bayer_scale_checkerboard_separates():
    # +1 at even mosaic columns, -1 at odd ones: each plane becomes constant
    x = np.fromfunction(lambda i, j: np.where(j % 2 == 0, 1.0, -1.0), (16, 16))
    for plane in sk.split_cfa(x):
        assert np.ptp(plane) == 0.0


def test_odd_dimensions_rejected():
    with pytest.raises(ShapeError):
        sk.split_cfa(np.ones((15, 16)))


def test_invalid_pattern_rejected():
    with pytest.raises(ConfigurationError):
        sk.split_cfa(np.ones((8, 8)), "RGBG")


def test_channel_names_number_greens():
    assert sk.channel_names("RGGB") == ("R", "G1", "G2", "B")
    assert sk.channel_names("GBRG") == ("G1", "B", "R", "G2")


def test_rotate_position_has_period_four():
    for pos in ((0, 0), (0, 1), (1, 0), (1, 1)):
        assert rotate_position(pos, 4) == pos
        once = rotate_position(pos, 1)
        assert rotate_position(once, 3) == pos


def test_rotate_pattern_matches_mosaic_rotation():
    # build a mosaic of letter codes and rotate it directly
    codes = {"R": 0.0, "G": 1.0, "B": 2.0}
    pattern = "RGGB"
    cell = np.array([[codes[pattern[0]], codes[pattern[1]]],
                     [codes[pattern[2]], codes[pattern[3]]]])
    mosaic = np.tile(cell, (4, 4))
    for q in range(4):
        rotated = np.rot90(mosaic, q)
        expected = "".join(
            {v: k for k, v in codes.items()}[rotated[pi, pj]]
            for pi, pj in ((0, 0), (0, 1), (1, 0), (1, 1))
        )
        assert rotate_pattern(pattern, q) == expected
