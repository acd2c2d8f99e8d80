"""Search kernels with a compiled core and a pure-Python fallback.

The compiled extension ``_ccore`` is used when it imports; set
``ICLEAK_PURE=1`` to force the fallback.  Both backends return identical
results, including witnesses and node counts.
"""

from __future__ import annotations

import os

from . import _pure

RANK, LEAKAGE, PARETO = _pure.RANK, _pure.LEAKAGE, _pure.PARETO

_core = None
if not os.environ.get("ICLEAK_PURE"):
    try:
        from . import _ccore as _core  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _core = None

BACKEND = "cython" if _core is not None else "python"

if _core is not None:
    fitting_search = _core.fitting_search
    max_independent_set = _core.max_independent_set
else:
    fitting_search = _pure.fitting_search
    max_independent_set = _pure.max_independent_set

__all__ = ["BACKEND", "RANK", "LEAKAGE", "PARETO", "fitting_search",
           "max_independent_set"]
