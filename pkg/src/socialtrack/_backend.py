"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. Set ``SOCIALTRACK_PURE_PYTHON=1`` to force the fallback.
"""
import logging
import os

from . import _pykernels

logger = logging.getLogger(__name__)

kernels = _pykernels
if not os.environ.get("SOCIALTRACK_PURE_PYTHON"):
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]
    except ImportError:  # extension not built
        logger.debug("compiled kernels unavailable, using pure-Python fallback")

BACKEND: str = kernels.BACKEND
linear_assignment = kernels.linear_assignment
mahalanobis_matrix = kernels.mahalanobis_matrix
connected_components = kernels.connected_components
gated_cosine_distance = kernels.gated_cosine_distance


def available_backends():
    """Return ``{name: module}`` for every kernel backend importable here."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
