"""Multi-exposure image fusion with exposure compensation.

Enhances each member of an exposure stack (local contrast enhancement,
middle-gray exposure compensation, Reinhard tone mapping), then fuses the
stack with multi-scale exposure fusion.  Includes an evaluation harness
that synthesises stacks from HDR radiance maps and scores results with
discrete entropy and statistical naturalness.
"""

from .imgcore import (
    ExposureStack,
    PipelineConfig,
    geometric_mean,
    luminance_of,
    restore_color,
)
from .enhance import (
    HAVE_COMPILED,
    bilateral_filter,
    dodge_burn,
    enhance_stack,
    window_radius,
)
from .compensate import AlphaVector, compensate, estimate_alphas, middle_index
from .tonemap import build_enhanced_stack, reinhard_global, tonemap_stack
from .fuse import (
    BACKENDS,
    collapse_pyramid,
    fuse,
    gaussian_pyramid,
    laplacian_pyramid,
    max_depth,
    mertens_fuse,
    pyramid_fuse,
    quality_weights,
)
from .metrics import (
    MetricsReport,
    discrete_entropy,
    score_report,
    statistical_naturalness,
    write_csv,
)
from .hdrio import (
    HdrFormatError,
    read_ldr,
    read_rgbe,
    synth_exposures,
    write_ldr,
    write_rgbe,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaVector",
    "BACKENDS",
    "ExposureStack",
    "HAVE_COMPILED",
    "HdrFormatError",
    "MetricsReport",
    "PipelineConfig",
    "bilateral_filter",
    "build_enhanced_stack",
    "collapse_pyramid",
    "compensate",
    "discrete_entropy",
    "dodge_burn",
    "enhance_stack",
    "estimate_alphas",
    "fuse",
    "gaussian_pyramid",
    "geometric_mean",
    "laplacian_pyramid",
    "luminance_of",
    "max_depth",
    "mertens_fuse",
    "middle_index",
    "pyramid_fuse",
    "quality_weights",
    "read_ldr",
    "read_rgbe",
    "reinhard_global",
    "restore_color",
    "score_report",
    "statistical_naturalness",
    "synth_exposures",
    "tonemap_stack",
    "window_radius",
    "write_csv",
    "write_ldr",
    "write_rgbe",
    "__version__",
]
