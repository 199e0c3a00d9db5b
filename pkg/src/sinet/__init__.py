"""Social interaction network construction, analysis and pattern mining."""

from ._kernels import COMPILED as KERNELS_COMPILED  # noqa: F401

__version__ = "0.1.0"
