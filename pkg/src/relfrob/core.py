"""Select the term-arithmetic kernel: compiled extension or pure Python.

The compiled kernel (relfrob._core, built from _core.pyx) and the fallback
(relfrob._core_py) export identical functions.  Set RELFROB_PURE_PYTHON=1
to force the fallback; `COMPILED` reports which one is active.
"""

import os

if os.environ.get("RELFROB_PURE_PYTHON"):
    from . import _core_py as impl
else:
    try:
        from . import _core as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as impl

COMPILED = bool(getattr(impl, "COMPILED", False))

key_of = impl.key_of
leading = impl.leading
add = impl.add
scale = impl.scale
mul = impl.mul
mul_term = impl.mul_term
normal_form = impl.normal_form
