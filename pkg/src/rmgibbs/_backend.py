"""Kernel backend selection.

Prefers the compiled extension (rmgibbs._kernels, built from Cython) and falls
back to the pure-Python twin with the identical interface. Which one is active
is visible via backend_name(); benchmarks/bench_chain.py compares the two.
"""

from __future__ import annotations

try:
    from . import _kernels as impl

    HAVE_COMPILED = True
except ImportError:  # extension not built; pure fallback
    from . import _kernels_py as impl

    HAVE_COMPILED = False

GibbsKernel = impl.GibbsKernel
distance_table = impl.distance_table


def backend_name() -> str:
    return impl.BACKEND
