"""Optional numba acceleration with a pure-Python fallback.

Hot kernels are decorated with ``@njit``; setting the environment
variable ``LOCDEL_NUMBA=0`` (or not having numba installed) replaces
the decorator with a no-op so the same source runs as plain Python.
``USE_NUMBA`` tells modules which binding of shared helpers to select.
"""

import os

USE_NUMBA = os.environ.get("LOCDEL_NUMBA", "1") != "0"

if USE_NUMBA:
    try:
        from numba import njit  # noqa: F401
    except ImportError:
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        """No-op stand-in accepting both @njit and @njit(...) forms."""
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(func):
            return func

        return wrap
