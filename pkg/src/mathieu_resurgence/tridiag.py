"""Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

Generic over the arithmetic type: works with floats for the fast path and
with mpmath.mpf for the extended-precision tier that exponentially narrow
band widths require.  Only selected eigenvalue indices are computed, which
is all the band-edge extraction needs.
"""
from __future__ import annotations

from typing import Sequence

__all__ = ["count_below", "eigenvalue", "eigenvalues_lowest"]


def count_below(d: Sequence, e: Sequence, x) -> int:
    """Number of eigenvalues strictly below x (Sturm sign count).

    d: diagonal (n entries), e: off-diagonal (n-1 entries).
    """
    count = 0
    q = d[0] - x
    if q < 0:
        count += 1
    tiny = abs(x) * 1e-300 + 1e-300
    for i in range(1, len(d)):
        if q == 0:
            q = tiny
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if q < 0:
            count += 1
    return count


def _gershgorin(d: Sequence, e: Sequence):
    lo = hi = d[0]
    n = len(d)
    for i in range(n):
        r = (abs(e[i - 1]) if i > 0 else 0) + (abs(e[i]) if i < n - 1 else 0)
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)
    return lo, hi


def eigenvalue(d: Sequence, e: Sequence, k: int, tol) -> "float":
    """k-th smallest eigenvalue (k = 0 based) to absolute tolerance tol."""
    lo, hi = _gershgorin(d, e)
    one = d[0] * 0 + 1  # unit of the arithmetic type in use
    lo, hi = lo - one, hi + one
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if count_below(d, e, mid) <= k:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def eigenvalues_lowest(d: Sequence, e: Sequence, howmany: int, tol) -> list:
    return [eigenvalue(d, e, k, tol) for k in range(howmany)]
