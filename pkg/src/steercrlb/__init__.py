"""Cramér-Rao bounds for the orientation accuracy of steerable circular-harmonic detectors."""

__version__ = "0.1.0"

from . import errors
from .errors import SteerCrlbError
from .radial import (RadialProfile, SpectralConstants, eval_profile, excluded_gamma, make_profile,
                     noise_constants, spectral_moment_b, spectral_moment_d)
from .patterns import (HarmonicTable, Pattern, PatternSynthesizer, angular_profile, harmonic_coefficients,
                       load_pattern, raster_spectrum, synthesize_pattern_image, wavelet_coefficients)
from .filterbank import FilterBank, MeasurementVector, measure, project_pattern, steer_response
from .noise import NoiseModel, measurement_covariance, snr_scale, synthesize
from .crlb import (CrlbReport, convergence_diagnostic, crlb_common_profile, crlb_curve, crlb_single,
                   fisher_bruteforce, fisher_single, select_harmonics)
from .wavelet_crlb import (Grouping, TridiagonalBlock, block_eigensystem, crlb_bounds, fisher_wavelet,
                           group_indices, wavelet_crlb_curve)
from .estimator import AngleEstimate, angular_error, estimate_angle

__all__ = [
    "errors",
    "__version__",
    "SteerCrlbError",
    "RadialProfile",
    "SpectralConstants",
    "eval_profile",
    "excluded_gamma",
    "make_profile",
    "noise_constants",
    "spectral_moment_b",
    "spectral_moment_d",
    "HarmonicTable",
    "Pattern",
    "PatternSynthesizer",
    "angular_profile",
    "harmonic_coefficients",
    "load_pattern",
    "raster_spectrum",
    "synthesize_pattern_image",
    "wavelet_coefficients",
    "FilterBank",
    "MeasurementVector",
    "measure",
    "project_pattern",
    "steer_response",
    "NoiseModel",
    "measurement_covariance",
    "snr_scale",
    "synthesize",
    "CrlbReport",
    "convergence_diagnostic",
    "crlb_common_profile",
    "crlb_curve",
    "crlb_single",
    "fisher_bruteforce",
    "fisher_single",
    "select_harmonics",
    "Grouping",
    "TridiagonalBlock",
    "block_eigensystem",
    "crlb_bounds",
    "fisher_wavelet",
    "group_indices",
    "wavelet_crlb_curve",
    "AngleEstimate",
    "angular_error",
    "estimate_angle",
]
