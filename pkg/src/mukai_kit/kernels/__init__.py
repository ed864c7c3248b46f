"""Short-vector enumeration backends.

The compiled kernel (``_cenum``) is used when it imports and the instance
fits in int64; otherwise the exact rational Python kernel runs. Set
``MUKAI_KIT_PURE=1`` to force the Python kernel.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .. import linalg
from . import _pyenum

try:
    if os.environ.get("MUKAI_KIT_PURE"):
        raise ImportError("pure backend requested")
    from . import _cenum
except ImportError:  # pragma: no cover - depends on the build
    _cenum = None

BACKEND = "cython" if _cenum is not None else "python"

_INT64_SAFE = 2**62


def max_enum() -> int:
    """Enumeration node budget from MUKAI_KIT_MAX_ENUM (default 10^7)."""
    raw = os.environ.get("MUKAI_KIT_MAX_ENUM")
    return int(raw) if raw else 10**7


def _fits_int64(gram, target: Fraction, t: list[Fraction], q: int) -> bool:
    ginv = linalg.inverse(gram)
    zmax = 0
    for i, ti in enumerate(t):
        radius = isqrt(int(target * ginv[i][i]) + 1) + 2
        zmax = max(zmax, q * (radius + abs(ti).__ceil__()))
    total = sum(abs(x) for row in gram for x in row)
    return zmax * zmax * total * 4 < _INT64_SAFE


def enumerate_shifted(gram: Sequence[Sequence[int]], target, center: Sequence | None = None,
                      limit: int | None = None, backend: str | None = None) -> list[tuple[int, ...]]:
    """All integer y with (y + center)^T gram (y + center) == target.

    ``gram`` must be a positive definite integer matrix. Output is sorted
    lexicographically and independent of the backend.
    """
    n = len(gram)
    target = Fraction(target)
    limit = max_enum() if limit is None else limit
    backend = backend or BACKEND
    t = [Fraction(x) for x in center] if center is not None else [Fraction(0)] * n
    if backend == "python" or _cenum is None or n == 0 or target < 0:
        return _pyenum.enumerate_shifted(gram, target, t, limit)
    q = linalg.lcm_denominator(t)
    scaled = target * q * q
    if scaled.denominator != 1:
        return []
    if not _fits_int64(gram, target, t, q):
        return _pyenum.enumerate_shifted(gram, target, t, limit)
    d, mu = _pyenum.ldl(gram)
    return _cenum.enumerate_shifted(
        [[int(x) for x in row] for row in gram],
        [float(x) for x in d],
        [[float(x) for x in row] for row in mu],
        [float(x) for x in t],
        [int(x * q) for x in t],
        q,
        int(scaled),
        float(target),
        limit,
    )


__all__ = ["BACKEND", "enumerate_shifted", "max_enum"]
