"""Hot loops of the pattern-tree miners, in two interchangeable lanes.

``_ckernels`` is a compiled extension built from Cython; ``_pykernels``
is the pure-Python/numpy fallback with identical semantics. The lane is
chosen once at import: the compiled one when available, unless
``SINET_PURE_PYTHON`` is set in the environment.
"""

import os

ALG_SUM = 0
ALG_MOMENTS1 = 1
ALG_MOMENTS2 = 2

ALGEBRA_WIDTH = {ALG_SUM: None, ALG_MOMENTS1: 3, ALG_MOMENTS2: 6}

if os.environ.get("SINET_PURE_PYTHON"):
    from . import _pykernels as _impl

    COMPILED = False
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import _pykernels as _impl

        COMPILED = False

conditional_paths = _impl.conditional_paths
merge_rows = _impl.merge_rows
scatter_merge = _impl.scatter_merge
merge_pair = _impl.merge_pair


def available_lanes() -> dict[str, object]:
    """All importable kernel lanes keyed by name (for parity tests)."""
    from . import _pykernels

    lanes: dict[str, object] = {"python": _pykernels}
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        lanes["compiled"] = _ckernels
    except ImportError:
        pass
    return lanes
