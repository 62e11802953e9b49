"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``STARSEL_PURE_PYTHON=1`` to force the fallback.
"""

import os

from starsel import _pykernels

IMPLEMENTATION = "python"
_impl = _pykernels

if os.environ.get("STARSEL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from starsel import _ckernels as _impl  # type: ignore[no-redef]

        IMPLEMENTATION = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

star = _impl.star
union_closure = _impl.union_closure
intersection_closure = _impl.intersection_closure
refines = _impl.refines
sweep_or = _impl.sweep_or
