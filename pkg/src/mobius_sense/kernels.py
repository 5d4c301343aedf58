"""Backend selection for the hot kernels.

The compiled extension is used when it imports cleanly; otherwise, or when
``MOBIUS_SENSE_PURE=1`` is set in the environment, the pure-Python module is
used. ``BACKEND`` names the active implementation.
"""
import os

from . import _kernels_py

if os.environ.get("MOBIUS_SENSE_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

mobius_coeff_matrix = _impl.mobius_coeff_matrix
horner_hom = _impl.horner_hom
abs_power_sum = _impl.abs_power_sum

__all__ = ["BACKEND", "mobius_coeff_matrix", "horner_hom", "abs_power_sum"]
