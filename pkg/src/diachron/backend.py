"""Numeric backend selection.

The hot kernels in :mod:`diachron.kernels` exist twice: a numba ``@njit``
version and a pure-numpy vectorized version. The environment variable
``DIACHRON_BACKEND`` picks one:

* unset or ``auto``: numba when importable, numpy otherwise
* ``numba``: require numba, fail loudly if it is missing
* ``numpy``: force the numpy path even when numba is installed

The choice is made once at import time; both paths produce identical output.
"""

from __future__ import annotations

import os

ENV_VAR = "DIACHRON_BACKEND"
_VALID = ("auto", "numba", "numpy")


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def select_backend(value: str | None = None) -> str:
    """Resolve a backend name ("numba" or "numpy") from an env-style value."""
    choice = (value if value is not None else os.environ.get(ENV_VAR, "auto")).strip().lower()
    if choice == "":
        choice = "auto"
    if choice not in _VALID:
        raise ValueError(f"{ENV_VAR} must be one of {_VALID}, got {choice!r}")
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not _numba_available():
            raise ImportError(f"{ENV_VAR}=numba but numba is not importable")
        return "numba"
    return "numba" if _numba_available() else "numpy"


ACTIVE: str = select_backend()
USING_NUMBA: bool = ACTIVE == "numba"
