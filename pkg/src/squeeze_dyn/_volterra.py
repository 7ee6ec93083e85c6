"""Backend selection for the memory-kernel solver.

Prefers the compiled extension; falls back to the numpy implementation
when the extension is absent or ``SQUEEZE_DYN_PURE_PY`` is set. The two
backends implement the identical scheme; ``benchmarks/bench_volterra.py``
compares them.
"""

from __future__ import annotations

import os

if os.environ.get("SQUEEZE_DYN_PURE_PY"):
    from ._volterra_py import solve_history

    BACKEND = "python"
else:
    try:
        from ._volterra_c import solve_history  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from ._volterra_py import solve_history  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["solve_history", "BACKEND"]
