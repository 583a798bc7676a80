"""Selects the shot-sampling kernel at import time.

Prefers the compiled Cython kernel and falls back to the pure-Python one when
the extension is missing (or when QDUET_PURE_PYTHON is set, which the test
suite and benchmark use to pin a backend).  Both produce identical bytes for
identical inputs, so the choice only affects speed.
"""

from __future__ import annotations

import os

from qduet import _sampler_py

_FORCE_PURE = os.environ.get("QDUET_PURE_PYTHON", "") not in ("", "0")

if _FORCE_PURE:
    _impl = _sampler_py
    backend = "python"
else:
    try:
        from qduet import _sampler_cy as _impl  # type: ignore[no-redef]

        backend = "cython"
    except ImportError:
        _impl = _sampler_py
        backend = "python"

sample_outcomes = _impl.sample_outcomes


def available_backends() -> dict:
    """All importable kernels by name; used by the benchmark and parity tests."""
    backends = {"python": _sampler_py.sample_outcomes}
    try:
        from qduet import _sampler_cy

        backends["cython"] = _sampler_cy.sample_outcomes
    except ImportError:
        pass
    return backends
