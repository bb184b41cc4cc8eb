"""Kernel backend selection.

The compiled extension (``trajadv._core``) is preferred when importable;
otherwise the pure-Python reference kernels are used.  Both expose the same
functions on identical argument layouts, so callers never branch.

Set ``TRAJADV_BACKEND=python`` or ``TRAJADV_BACKEND=compiled`` to force a
choice (the latter raises if the extension is missing).
"""

import os

from . import _ref

try:
    from . import _core
except ImportError:  # pragma: no cover - depends on the build
    _core = None

_choice = os.environ.get("TRAJADV_BACKEND", "auto").strip().lower()
if _choice in ("", "auto"):
    _impl = _core if _core is not None else _ref
elif _choice in ("compiled", "cython", "ext"):
    if _core is None:
        raise ImportError(
            "TRAJADV_BACKEND=compiled but the trajadv._core extension is not "
            "built; run `pip install -e . --no-build-isolation`")
    _impl = _core
elif _choice in ("python", "pure", "ref"):
    _impl = _ref
else:
    raise ImportError(f"unknown TRAJADV_BACKEND value: {_choice!r}")

BACKEND_NAME = "compiled" if _impl is not _ref else "python"

eval_dynamics = _impl.eval_dynamics
potential_energy = _impl.potential_energy
accel = _impl.accel
rk4_step = _impl.rk4_step
sie_step = _impl.sie_step
