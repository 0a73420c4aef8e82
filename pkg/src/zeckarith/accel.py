"""Backend switch for the hot digit-rewrite kernels.

Every kernel is written once, as a plain Python loop over numpy arrays.
By default it is compiled with numba's ``@njit`` on first call; setting
``ZECKARITH_NO_JIT=1`` in the environment (or calling :func:`use_jit`
with ``False``) selects the interpreted fallback, which runs the very
same function object unmodified.  ``benchmarks/bench_backends.py``
compares the two paths.
"""

import os

ENV_FLAG = "ZECKARITH_NO_JIT"
_TRUTHY = {"1", "true", "yes", "on"}

_jit_wanted = os.environ.get(ENV_FLAG, "").strip().lower() not in _TRUTHY
_numba_usable: bool | None = None  # resolved lazily on first kernel call


def _probe_numba() -> bool:
    try:
        import numba  # noqa: F401
    except Exception:
        return False
    return True


def jit_enabled() -> bool:
    global _numba_usable
    if not _jit_wanted:
        return False
    if _numba_usable is None:
        _numba_usable = _probe_numba()
    return _numba_usable


def use_jit(enable: bool) -> None:
    """Select the backend at runtime, overriding the environment flag."""
    global _jit_wanted
    _jit_wanted = bool(enable)


def backend_name() -> str:
    return "numba" if jit_enabled() else "python"


class Kernel:
    """Callable dispatching to the jitted or the plain version of a function."""

    def __init__(self, py_func):
        self._py = py_func
        self._jit = None
        self.__name__ = py_func.__name__
        self.__doc__ = py_func.__doc__

    @property
    def py_func(self):
        return self._py

    def __call__(self, *args):
        if jit_enabled():
            if self._jit is None:
                from numba import njit

                self._jit = njit(cache=True)(self._py)
            return self._jit(*args)
        return self._py(*args)


def jit_kernel(func) -> Kernel:
    """Decorator marking a hot loop that gets the njit/fallback treatment."""
    return Kernel(func)
