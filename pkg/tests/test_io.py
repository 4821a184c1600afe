import json

import numpy as np
import pytest

import spnkit as sk
from spnkit import io
from spnkit.exceptions import ConfigurationError, DomainError

from conftest import make_flat_frames


class TestPgm:
    def test_roundtrip_16bit(self, tmp_path):
        pixels = np.arange(48, dtype=np.uint16).reshape(6, 8) * 100
        path = tmp_path / "x.pgm"
        io.write_pgm(path, pixels, 4095)
        back, maxval = io.read_pgm(path)
        assert maxval == 4095
        assert np.array_equal(back, pixels)

    def test_big_endian_sample_order(self, tmp_path):
        pixels = np.array([[0x1234]], dtype=np.uint16)
        path = tmp_path / "be.pgm"
        io.write_pgm(path, pixels, 65535)
        raw = path.read_bytes()
        assert raw.endswith(b"\x12\x34")

    def test_8bit_when_maxval_small(self, tmp_path):
        pixels = np.array([[0, 255]], dtype=np.uint16)
        path = tmp_path / "small.pgm"
        io.write_pgm(path, pixels, 255)
        back, maxval = io.read_pgm(path)
        assert maxval == 255
        assert np.array_equal(back, pixels)

    def test_rejects_bad_maxval(self, tmp_path):
        with pytest.raises(DomainError):
            io.write_pgm(tmp_path / "bad.pgm", np.zeros((2, 2), dtype=np.uint16), 70000)


class TestFrameRoundtrip:
    def test_frame_and_sidecar(self, tmp_path, small_profile):
        frame = make_flat_frames(small_profile, 1)[0]
        path = tmp_path / "frame_0000.pgm"
        io.write_frame(path, frame)
        assert path.exists()
        assert (tmp_path / "frame_0000.json").exists()
        back = io.read_frame(path)
        assert np.array_equal(back.pixels, frame.pixels)
        assert back.metadata == frame.metadata

    def test_missing_sidecar_rejected(self, tmp_path, small_profile):
        frame = make_flat_frames(small_profile, 1)[0]
        path = tmp_path / "f.pgm"
        io.write_pgm(path, frame.pixels, frame.dn_max)
        with pytest.raises(ConfigurationError):
            io.read_frame(path)

    def test_settings_from_metadata(self, small_profile):
        frame = make_flat_frames(small_profile, 1, optics=sk.Lens(0.25))[0]
        settings = io.settings_from_metadata(frame.metadata)
        assert settings.optics == sk.Lens(0.25)
        assert settings.shutter_open


class TestProfileRoundtrip:
    def test_bit_exact(self, tmp_path, small_profile):
        path = tmp_path / "profile.json"
        io.save_profile(path, small_profile)
        back = io.load_profile(path)
        assert np.array_equal(back.pnu_map, small_profile.pnu_map)
        assert np.array_equal(back.dark_nonuniformity_map, small_profile.dark_nonuniformity_map)
        assert np.array_equal(back.hot_pixel_map, small_profile.hot_pixel_map)
        assert np.array_equal(back.fpn_block_offsets, small_profile.fpn_block_offsets)
        assert back.conversion_gain == small_profile.conversion_gain
        assert back.cfa == small_profile.cfa
        assert back.spec == small_profile.spec

    def test_regenerates_identically_from_spec(self, tmp_path, small_profile):
        path = tmp_path / "profile.json"
        io.save_profile(path, small_profile)
        spec = io.load_profile(path).spec
        again = sk.generate_profile(spec)
        assert np.array_equal(again.pnu_map, small_profile.pnu_map)

    def test_wrong_format_rejected(self, tmp_path):
        path = tmp_path / "nope.json"
        path.write_text(json.dumps({"format": "other"}))
        with pytest.raises(ConfigurationError):
            io.load_profile(path)


class TestFingerprintContainer:
    @pytest.fixture()
    def fingerprint(self, flat_frames, tuned_wavelet):
        return sk.prnu_reference(flat_frames, tuned_wavelet)

    def test_layout(self, tmp_path, fingerprint):
        path = tmp_path / "ref.spnfp"
        io.save_fingerprint(path, fingerprint)
        raw = path.read_bytes()
        nl = raw.find(b"\n")
        header = json.loads(raw[:nl])
        assert header["format"] == io.FINGERPRINT_FORMAT
        assert header["channel_order"] == ["R", "G1", "G2", "B"]
        h, w = fingerprint.plane_shape
        assert len(raw) - nl - 1 == 4 * h * w * 4  # four float32 planes

    def test_stored_floats_are_float32_casts(self, tmp_path, fingerprint):
        path = tmp_path / "ref.spnfp"
        io.save_fingerprint(path, fingerprint)
        raw = path.read_bytes()
        body = raw[raw.find(b"\n") + 1 :]
        h, w = fingerprint.plane_shape
        first = np.frombuffer(body, dtype="<f4", count=h * w).reshape(h, w)
        assert np.array_equal(first, fingerprint.planes[0].astype("<f4"))

    def test_roundtrip_restores_invariants(self, tmp_path, fingerprint):
        path = tmp_path / "ref.spnfp"
        io.save_fingerprint(path, fingerprint)
        back = io.load_fingerprint(path)
        assert back.kind == fingerprint.kind
        assert back.frame_count == fingerprint.frame_count
        assert back.processing == fingerprint.processing
        for plane in back.planes:
            assert abs(plane.mean()) < 1e-9
            assert abs(np.linalg.norm(plane) - 1.0) < 1e-9
        # float32 quantization keeps the pattern essentially unchanged
        assert sk.correlate(back, fingerprint) > 0.999999

    def test_truncated_body_rejected(self, tmp_path, fingerprint):
        path = tmp_path / "ref.spnfp"
        io.save_fingerprint(path, fingerprint)
        raw = path.read_bytes()
        path.write_bytes(raw[:-7])
        with pytest.raises(ConfigurationError):
            io.load_fingerprint(path)


class TestExports:
    def test_fingerprint_image_dimensions(self, tmp_path, flat_frames, tuned_wavelet):
        fp = sk.prnu_reference(flat_frames, tuned_wavelet)
        out = tmp_path / "g1.pgm"
        io.export_fingerprint_image(out, fp, "G1")
        img, maxval = io.read_pgm(out)
        assert maxval == 255
        assert img.shape == fp.plane_shape

    def test_report_csv_layout(self):
        report = sk.CorrelationReport(
            rho_0=0.0408, rho_90=-8.68e-4, rho_180=1.28e-5, rho_270=3.5e-5,
            rho_flipped=1e-3, decision="match", threshold=0.01,
            probe_temperature=318.15,
        )
        text = io.report_csv_text(report)
        lines = text.strip().split("\n")
        assert lines[0] == "temp_c,rho_0,rho_90,rho_180,rho_270"
        cells = lines[1].split(",")
        assert cells[0] == "45.00"
        assert float(cells[1]) == pytest.approx(0.0408)
        assert float(cells[2]) == pytest.approx(-8.68e-4)

    def test_row_csv(self):
        text = io.row_csv_text(np.array([5, 6, 7]))
        assert text == "index,DN\n0,5\n1,6\n2,7\n"
        both = io.row_csv_text(np.array([5, 6]), np.array([1, 2]))
        assert both == "index,DN,DN_compare\n0,5,1\n1,6,2\n"
