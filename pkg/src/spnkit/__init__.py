"""spnkit: sensor pattern noise simulation, fingerprinting and matching.

The package has three layers:

* a physics-based CMOS frame simulator (``profile``, ``capture``, ``physics``)
  driven by a counter-based RNG so every frame is a pure function of its
  arguments;
* residue extraction and fingerprint construction (``wavelet``, ``residue``,
  ``fingerprint``) for both illuminated (PRNU) and dark-current excitation;
* the correlation match protocol with rotation and half-swap controls
  (``matcher``), plus scikit-learn style estimators (``estimators``) and a
  CLI (``spnkit ...``).
"""

from .capture import (
    CaptureSettings,
    Lens,
    Pinhole,
    PixelSignal,
    RawFrame,
    SceneField,
    capture,
    dark_exposure_for_fill,
    describe_pixel,
    row_profile,
)
from .cfa import assemble_cfa, channel_names, split_cfa
from .estimators import (
    DarkFingerprinter,
    FingerprintMatcher,
    PrnuFingerprinter,
    ResidueExtractor,
)
from .exceptions import (
    ConfigurationError,
    DegenerateFingerprintError,
    DegenerateInputError,
    DomainError,
    ProtocolError,
    ShapeError,
    SpnkitError,
)
from .fingerprint import (
    Fingerprint,
    SuppressionConfig,
    dark_fingerprint,
    prnu_reference,
    suppress_hot_pixels,
)
from .matcher import (
    CorrelationReport,
    correlate,
    correlation_surface,
    half_swap,
    match_report,
    pce,
    peak_location,
    rotate_fingerprint,
)
from .physics import (
    CONSTANTS,
    PhysicalConstants,
    dark_density,
    dark_electrons,
    max_snr,
    photon_energy,
    shot_sigma,
)
from .profile import ProfileSpec, SensorProfile, generate_profile, profile_with_seed
from .residue import NoiseResidue, WaveletConfig, denoise, residue
from .wavelet import WaveletPyramid, dwt2, idwt2

__version__ = "0.1.0"

__all__ = [
    "CaptureSettings",
    "ConfigurationError",
    "CorrelationReport",
    "CONSTANTS",
    "DarkFingerprinter",
    "DegenerateFingerprintError",
    "DegenerateInputError",
    "DomainError",
    "Fingerprint",
    "FingerprintMatcher",
    "Lens",
    "NoiseResidue",
    "PhysicalConstants",
    "Pinhole",
    "PixelSignal",
    "PrnuFingerprinter",
    "ProfileSpec",
    "ProtocolError",
    "RawFrame",
    "ResidueExtractor",
    "SceneField",
    "SensorProfile",
    "ShapeError",
    "SpnkitError",
    "SuppressionConfig",
    "WaveletConfig",
    "WaveletPyramid",
    "assemble_cfa",
    "capture",
    "channel_names",
    "correlate",
    "correlation_surface",
    "dark_density",
    "dark_electrons",
    "dark_exposure_for_fill",
    "dark_fingerprint",
    "denoise",
    "describe_pixel",
    "dwt2",
    "generate_profile",
    "half_swap",
    "idwt2",
    "match_report",
    "max_snr",
    "pce",
    "peak_location",
    "photon_energy",
    "profile_with_seed",
    "prnu_reference",
    "residue",
    "rotate_fingerprint",
    "row_profile",
    "shot_sigma",
    "split_cfa",
    "suppress_hot_pixels",
]
