"""In-process memoization with as-if-computed-once semantics.

Numeric results that are expensive and immutable (Hermite zeros, per-degree
root-sums, quadrature rules) are cached here. Lookups take a fast path
without the lock; misses re-check under a per-function lock so concurrent
callers never compute the same key twice.
"""
import functools
import threading
from typing import Any, Callable, Dict, Hashable, TypeVar

F = TypeVar("F", bound=Callable[..., Any])


def locked_memo(fn: F) -> F:
    """Memoize ``fn`` on its positional and keyword arguments.

    The wrapped function gains ``cache_clear()`` and ``cache_size()``.
    Cached values must be immutable.
    """
    store: Dict[Hashable, Any] = {}
    # Re-entrant: a memoized function may call itself for a smaller degree
    lock = threading.RLock()

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        key = (args, tuple(sorted(kwargs.items())))
        try:
            return store[key]
        except KeyError:
            pass
        with lock:
            if key in store:
                return store[key]
            result = fn(*args, **kwargs)
            store[key] = result
            return result

    def cache_clear() -> None:
        with lock:
            store.clear()

    def cache_size() -> int:
        return len(store)

    wrapper.cache_clear = cache_clear  # type: ignore[attr-defined]
    wrapper.cache_size = cache_size  # type: ignore[attr-defined]
    return wrapper  # type: ignore[return-value]
