"""Argument guards shared by the constructions."""

from functools import wraps
from typing import Any, Callable


def requires_dimension(minimum: int) -> Callable:
    """Decorator rejecting a first argument n below `minimum`.

    Example:
        @requires_dimension(3)
        def p2(n):
            ...
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(n: int, *args: Any, **kwargs: Any) -> Any:
            if not isinstance(n, int) or n < minimum:
                raise ValueError(f"{func.__name__} requires n >= {minimum}, got {n}")
            return func(n, *args, **kwargs)
        return wrapper
    return decorator


def requires_index(low: int, high_offset: int) -> Callable:
    """Decorator checking low <= i <= n + high_offset for wrapper(n, i, ...)."""
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(n: int, i: int, *args: Any, **kwargs: Any) -> Any:
            if not low <= i <= n + high_offset:
                raise ValueError(
                    f"{func.__name__}: index {i} out of range {low}..{n + high_offset}")
            return func(n, i, *args, **kwargs)
        return wrapper
    return decorator
