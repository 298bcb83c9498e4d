"""Kernel backend selection.

The compiled extension ``_ckernels`` is used when it has been built; the
pure-Python module ``_pykernels`` is the fallback. Set the environment
variable ``USURYCAP_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

if _ckernels is None or os.environ.get("USURYCAP_PURE_PYTHON", "") not in ("", "0"):
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = BACKENDS[BACKEND]

homog_eval = _impl.homog_eval
sign_variations = _impl.sign_variations
chain_variations = _impl.chain_variations
npv_grid = _impl.npv_grid

__all__ = [
    "BACKEND",
    "BACKENDS",
    "homog_eval",
    "sign_variations",
    "chain_variations",
    "npv_grid",
]
