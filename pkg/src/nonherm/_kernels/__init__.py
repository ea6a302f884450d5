"""Hot-kernel backend selection.

The inner loops that dominate runtime (the 4x4 variational-circuit chain
with its 48 shifted evaluations per gradient, and the postselected Trotter
stepping loop) exist twice with identical semantics: a Cython extension
(``_fast``) and a pure Python reference (``reference``). The extension is
preferred when importable; set NONHERM_KERNELS=python or =compiled to force
either side. ``benchmarks/bench_kernels.py`` compares the two.
"""

import os

from . import reference

_requested = os.environ.get("NONHERM_KERNELS", "auto").strip().lower()
if _requested not in ("auto", "compiled", "python"):
    raise ImportError(f"NONHERM_KERNELS must be auto, compiled, or python; got {_requested!r}")

kernels = None
KERNEL_BACKEND = "python"
if _requested in ("auto", "compiled"):
    try:
        from . import _fast as kernels  # type: ignore[no-redef]

        KERNEL_BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
if kernels is None:
    kernels = reference
