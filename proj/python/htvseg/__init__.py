"""Two-stage grayscale segmentation: weighted hybrid TV restoration, then
K-means thresholding."""

import json

from ._htvseg import (
    DivergenceError,
    FormatError,
    add_noise,
    blur,
    config_keys,
    div,
    div2,
    edge_indicator,
    gaussian_kernel,
    grad,
    grad2,
    kmeans_1d,
    label,
    load_image,
    load_labels,
    motion_kernel,
    phantom,
    restore,
    sa,
    save_pgm,
    save_raw,
    stretch,
)
from ._htvseg import run_pipeline as _run_pipeline

__version__ = "0.1.0"


def run_pipeline(**options):
    """Run the full pipeline; the returned dict has the arrays plus the parsed report."""
    out = _run_pipeline(options)
    out["report"] = json.loads(out["report"])
    return out


__all__ = [
    "DivergenceError",
    "FormatError",
    "add_noise",
    "blur",
    "config_keys",
    "div",
    "div2",
    "edge_indicator",
    "gaussian_kernel",
    "grad",
    "grad2",
    "kmeans_1d",
    "label",
    "load_image",
    "load_labels",
    "motion_kernel",
    "phantom",
    "restore",
    "run_pipeline",
    "sa",
    "save_pgm",
    "save_raw",
    "stretch",
]
