"""Fincke-Pohst enumeration for positive definite rational quadratic forms."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Sequence


def _floor_sqrt(q: Fraction) -> int:
    if q <= 0:
        return 0
    return math.isqrt(q.numerator * q.denominator) // q.denominator


def ldl(form: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    """Return the packed decomposition used by :func:`short_vectors`.

    ``Q(x) = sum_i d[i][i] * (x_i + sum_{j>i} d[i][j] x_j)^2``.
    Raises ``ValueError`` if the form is not positive definite.
    """
    n = len(form)
    q = [[Fraction(v) for v in row] for row in form]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("quadratic form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(form: Sequence[Sequence[Fraction | int]], bound: Fraction | int) -> Iterator[tuple[int, ...]]:
    """Yield every integer vector ``x`` with ``Q(x) <= bound`` (zero included)."""
    n = len(form)
    q = ldl(form)
    bound = Fraction(bound)
    x = [0] * n

    def rec(i: int, budget: Fraction):
        center = -sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        slack = _floor_sqrt(budget / q[i][i]) + 1
        lo = math.floor(center) - slack
        hi = math.ceil(center) + slack
        for xi in range(lo, hi + 1):
            used = q[i][i] * (xi - center) ** 2
            if used > budget:
                continue
            x[i] = xi
            if i == 0:
                yield tuple(x)
            else:
                yield from rec(i - 1, budget - used)
        x[i] = 0

    if n == 0:
        yield ()
        return
    yield from rec(n - 1, bound)


def coordinate_bounds(form: Sequence[Sequence[Fraction | int]], bound: Fraction | int) -> list[int]:
    """Largest ``|x_i|`` possible on ``Q(x) <= bound``: ``floor(sqrt(bound * (Q^-1)_ii))``."""
    inv = _inverse([[Fraction(v) for v in row] for row in form])
    return [_floor_sqrt(Fraction(bound) * inv[i][i]) for i in range(len(form))]


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
