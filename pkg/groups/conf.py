import logging
import os
from contextlib import contextmanager
from typing import Dict, Optional

from django.conf import settings

logger = logging.getLogger(__name__)

DEFAULT_LIMITS = {
    "MAX_COSETS": 1_000_000,
    "MAX_ENUM": 1_000_000,
    "MAX_LATTICE": 10_000,
    "TRANSVERSAL_CACHE_LIMIT": 4_000_000,
}

_overrides: Dict[str, int] = {}


def get_limit(name: str) -> int:
    """
    Read a computation cap.

    An active ``override_limits`` block wins, then Django settings when they
    are configured, then the environment variable of the same name, then the
    built-in default.
    """
    if name not in DEFAULT_LIMITS:
        raise ValueError(f"Unknown limit {name}")
    value = _overrides.get(name)
    if value is None and settings.configured:
        value = getattr(settings, name, None)
    if value is None:
        value = os.environ.get(name, DEFAULT_LIMITS[name])
    value = int(value)
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


@contextmanager
def override_limits(**caps: Optional[int]):
    """Temporarily replace caps for one job; None leaves a cap unchanged."""
    previous = dict(_overrides)
    for name, value in caps.items():
        if name not in DEFAULT_LIMITS:
            raise ValueError(f"Unknown limit {name}")
        if value is None:
            continue
        if int(value) < 1:
            raise ValueError(f"{name} must be positive, got {value}")
        _overrides[name] = int(value)
    try:
        yield
    finally:
        _overrides.clear()
        _overrides.update(previous)
