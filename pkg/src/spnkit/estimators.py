"""scikit-learn style estimators wrapping the fingerprint pipeline.

These classes expose the extraction and matching stages through the familiar
fit/transform/predict surface (with ``get_params``/``set_params`` from
``BaseEstimator``) so they drop into pipelines, grid searches and other
ecosystem tooling.  The underlying functions remain available for direct use.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .capture import RawFrame
from .exceptions import DomainError
from .fingerprint import (
    Fingerprint,
    SuppressionConfig,
    dark_fingerprint,
    prnu_reference,
)
from .matcher import CorrelationReport, correlate, match_report
from .residue import WaveletConfig, residue


def _as_frame_list(X) -> list[RawFrame]:
    if isinstance(X, RawFrame):
        return [X]
    frames = list(X)
    if not frames:
        raise DomainError("need at least one frame")
    if not all(isinstance(f, RawFrame) for f in frames):
        raise DomainError("expected RawFrame instances")
    return frames


class ResidueExtractor(TransformerMixin, BaseEstimator):
    """Stateless transformer turning frames or images into noise residues."""

    def __init__(self, levels=4, base_sigma=5.0, variance_windows=(3, 5, 7, 9)):
        self.levels = levels
        self.base_sigma = base_sigma
        self.variance_windows = variance_windows

    def _config(self) -> WaveletConfig:
        return WaveletConfig(
            levels=self.levels,
            base_sigma=self.base_sigma,
            variance_windows=tuple(self.variance_windows),
        )

    def fit(self, X=None, y=None):
        self._config()  # validates parameters
        return self

    def transform(self, X):
        config = self._config()
        if isinstance(X, (RawFrame, np.ndarray)) and (
            isinstance(X, RawFrame) or X.ndim == 2
        ):
            return residue(X, config).values
        return np.stack([residue(item, config).values for item in X])


class _FingerprintEstimator(BaseEstimator):
    """Shared fit surface: enrollment produces ``fingerprint_``."""

    def fit(self, X, y=None):
        frames = _as_frame_list(X)
        self.fingerprint_ = self._enroll(frames)
        self.n_frames_ = len(frames)
        return self

    def _enroll(self, frames) -> Fingerprint:  # pragma: no cover - abstract
        raise NotImplementedError

    def correlation_to(self, other: Fingerprint) -> float:
        return correlate(self.fingerprint_, other)


class PrnuFingerprinter(_FingerprintEstimator):
    """Enrolls a PRNU reference pattern from illuminated flat-field frames."""

    def __init__(self, levels=4, base_sigma=5.0, variance_windows=(3, 5, 7, 9)):
        self.levels = levels
        self.base_sigma = base_sigma
        self.variance_windows = variance_windows

    def _enroll(self, frames):
        wavelet = WaveletConfig(
            levels=self.levels,
            base_sigma=self.base_sigma,
            variance_windows=tuple(self.variance_windows),
        )
        return prnu_reference(frames, wavelet)


class DarkFingerprinter(_FingerprintEstimator):
    """Builds a dark-current fingerprint from shutter-closed frames."""

    def __init__(
        self,
        levels=4,
        base_sigma=5.0,
        variance_windows=(3, 5, 7, 9),
        suppress_hot_pixels=True,
        hot_sigma_threshold=6.0,
    ):
        self.levels = levels
        self.base_sigma = base_sigma
        self.variance_windows = variance_windows
        self.suppress_hot_pixels = suppress_hot_pixels
        self.hot_sigma_threshold = hot_sigma_threshold

    def _enroll(self, frames):
        wavelet = WaveletConfig(
            levels=self.levels,
            base_sigma=self.base_sigma,
            variance_windows=tuple(self.variance_windows),
        )
        suppression = SuppressionConfig(
            enabled=self.suppress_hot_pixels,
            hot_sigma_threshold=self.hot_sigma_threshold,
        )
        return dark_fingerprint(frames, wavelet, suppression)


class FingerprintMatcher(BaseEstimator):
    """Decides whether probe fingerprints come from the enrolled sensor."""

    def __init__(self, threshold=0.01, track_cfa_rotation=True):
        self.threshold = threshold
        self.track_cfa_rotation = track_cfa_rotation

    def fit(self, X, y=None):
        if not isinstance(X, Fingerprint):
            raise DomainError("fit expects the reference Fingerprint")
        self.reference_ = X
        return self

    def _require_fitted(self):
        if not hasattr(self, "reference_"):
            raise DomainError("matcher is not fitted; call fit(reference) first")

    def report(self, probe: Fingerprint) -> CorrelationReport:
        self._require_fitted()
        return match_report(
            self.reference_, probe, self.threshold, track_cfa_rotation=self.track_cfa_rotation
        )

    def decision_function(self, X) -> np.ndarray:
        self._require_fitted()
        probes = [X] if isinstance(X, Fingerprint) else list(X)
        return np.array([self.report(p).rho_0 for p in probes])

    def predict(self, X) -> np.ndarray:
        self._require_fitted()
        probes = [X] if isinstance(X, Fingerprint) else list(X)
        return np.array([self.report(p).decision == "match" for p in probes])
