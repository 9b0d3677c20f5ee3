"""Exact Shannon entropies of the D-dimensional harmonic oscillator."""
__all__ = [
    "cache",
    "cli",
    "config",
    "ddouble",
    "entropy",
    "errors",
    "hermite",
    "oracle",
    "print_utils",
    "special",
]

import importlib

def __getattr__(name):
    if name in __all__:
        return importlib.import_module(f"{__name__}.{name}")
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
