"""Multi-index arithmetic over tuples of nonnegative integers.

A multi-index is a plain tuple of ints.  These helpers fix the enumeration
order used by truncated operator bases and provide the exact factorials and
componentwise arithmetic needed by the symbol calculus.
"""

from __future__ import annotations

import math
from itertools import product as _cartesian
from typing import Iterator, Optional, Sequence

MultiIndex = tuple[int, ...]


def validate(alpha: Sequence[int]) -> MultiIndex:
    """Check that alpha is a nonempty tuple of nonnegative ints."""
    if len(alpha) < 1:
        raise ValueError("multi-index must have dimension >= 1")
    for a in alpha:
        if not isinstance(a, int) or isinstance(a, bool) or a < 0:
            raise ValueError(f"multi-index entries must be nonnegative integers, got {tuple(alpha)!r}")
    return tuple(alpha)


def degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def add(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    _same_dim(alpha, beta)
    return tuple(a + b for a, b in zip(alpha, beta))


def comp_min(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    _same_dim(alpha, beta)
    return tuple(min(a, b) for a, b in zip(alpha, beta))


def try_subtract(alpha: MultiIndex, beta: MultiIndex) -> Optional[MultiIndex]:
    """alpha - beta componentwise, or None if any entry would go negative."""
    _same_dim(alpha, beta)
    out = []
    for a, b in zip(alpha, beta):
        if a < b:
            return None
        out.append(a - b)
    return tuple(out)


def factorial(alpha: Sequence[int]) -> int:
    """alpha! = prod_j alpha_j!, exact big integer."""
    validate(alpha)
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def falling_factorial(alpha: MultiIndex, steps: MultiIndex) -> int:
    """alpha! / (alpha - steps)! as an exact integer; requires alpha >= steps."""
    _same_dim(alpha, steps)
    out = 1
    for a, k in zip(alpha, steps):
        if k > a:
            raise ValueError(f"falling factorial needs alpha >= steps, got {alpha} vs {steps}")
        for i in range(k):
            out *= a - i
    return out


def _same_dim(alpha: Sequence[int], beta: Sequence[int]) -> None:
    if len(alpha) != len(beta):
        raise ValueError(f"dimension mismatch: {len(alpha)} vs {len(beta)}")


def _compositions(total: int, length: int) -> Iterator[MultiIndex]:
    # first coordinate largest first, so each degree block is ordered
    # (d,0,...), ..., (0,...,d)
    if length == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, length - 1):
            yield (head,) + rest


def enumerate_upto(n: int, k: int) -> list[MultiIndex]:
    """All alpha in N_0^n with |alpha| <= k, graded by degree.

    Within one degree the first axis varies slowest, from high to low, so
    for n=2, k=1 the order is (0,0), (1,0), (0,1).
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if k < 0:
        raise ValueError("degree bound must be >= 0")
    out: list[MultiIndex] = []
    for d in range(k + 1):
        out.extend(_compositions(d, n))
    return out


def count_upto(n: int, k: int) -> int:
    """Number of alpha in N_0^n with |alpha| <= k, i.e. C(n + k, n)."""
    return math.comb(n + k, n)


def iter_box(cap: MultiIndex) -> Iterator[MultiIndex]:
    """All beta with 0 <= beta <= cap componentwise."""
    return _cartesian(*(range(c + 1) for c in cap))


def unit(n: int, j: int) -> MultiIndex:
    """The j-th standard basis multi-index (1-based axis)."""
    if not 1 <= j <= n:
        raise ValueError(f"axis {j} out of range for dimension {n}")
    return tuple(1 if i == j - 1 else 0 for i in range(n))
