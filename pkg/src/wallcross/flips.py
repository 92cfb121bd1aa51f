"""Intermediate moduli spaces M_k and the flip sequence across one wall."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .walls import WallClassData, WallType

PLUS = "+zeta"
MINUS = "-zeta"


class FlipError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class ExtensionDatum:
    """A non-split extension built from ideal sheaves of lengths ``n1``, ``n2``.

    ``direction`` is ``"+zeta"`` for ``0 -> O(F) I_Z1 -> V -> O(Delta-F) I_Z2 -> 0``
    and ``"-zeta"`` for the same sequence with the two line bundles swapped.
    """

    direction: str
    n1: int
    n2: int
    universally_semistable: bool = False

    def __post_init__(self):
        if self.direction not in (PLUS, MINUS):
            raise FlipError("BAD_DIRECTION", f"direction must be {PLUS!r} or {MINUS!r}")
        if self.n1 < 0 or self.n2 < 0:
            raise FlipError("BAD_LENGTHS", "lengths must be non-negative")


def classify_k_semistable(datum: ExtensionDatum, k: int, ell: int) -> str:
    if datum.n1 + datum.n2 != ell:
        raise FlipError("BAD_LENGTHS", f"n1 + n2 = {datum.n1 + datum.n2}, expected {ell}")
    if not -1 <= k <= ell:
        raise FlipError("BAD_K", f"k = {k} outside [-1, {ell}]")
    if datum.universally_semistable:
        return "universally_semistable_excluded"
    if datum.direction == PLUS:
        return "accepted" if datum.n2 <= k else "rejected"
    return "accepted" if datum.n1 >= k + 1 else "rejected"


def k_of_t(t: Fraction | int, multiples: Sequence[tuple[Fraction | int, int]]):
    """Step function ``k_i(t) = floor((ell_i + r_i t) / 2)`` for each multiple.

    ``multiples`` lists ``(r_i, ell_i)`` with ``zeta_i = r_i zeta``.  Returns a
    list of integers, or the string ``"CRITICAL"`` when some
    ``(ell_i + r_i t)/2`` is an integer in ``[-1, ell_i]``.
    """
    t = Fraction(t)
    values = []
    for r, ell in multiples:
        x = (ell + Fraction(r) * t) / 2
        if x.denominator == 1 and -1 <= x <= ell:
            return "CRITICAL"
        values.append(math.floor(x))
    return values


def k_limits(t: Fraction | int, multiples: Sequence[tuple[Fraction | int, int]]) -> tuple[list[int], list[int]]:
    """One-sided values ``(k(t - eps), k(t + eps))`` for every multiple."""
    t = Fraction(t)
    left, right = [], []
    for r, ell in multiples:
        r = Fraction(r)
        x = (ell + r * t) / 2
        fl = math.floor(x)
        if x.denominator == 1:
            # moving t slightly changes x by the sign of r
            if r > 0:
                left.append(fl - 1)
                right.append(fl)
            elif r < 0:
                left.append(fl)
                right.append(fl - 1)
            else:
                left.append(fl)
                right.append(fl)
        else:
            left.append(fl)
            right.append(fl)
    return left, right


@dataclass(frozen=True)
class CriticalValue:
    t: Fraction
    indices: tuple[int, ...]


def critical_values(multiples: Sequence[tuple[Fraction | int, int]]) -> list[CriticalValue]:
    hits: dict[Fraction, set[int]] = {}
    for i, (r, ell) in enumerate(multiples):
        r = Fraction(r)
        if r == 0:
            continue
        for v in range(-1, ell + 1):
            t = (2 * v - ell) / r
            hits.setdefault(t, set()).add(i)
    return [CriticalValue(t, tuple(sorted(ix))) for t, ix in sorted(hits.items())]


@dataclass(frozen=True)
class FlipStage:
    """Passing from M_k to M_{k-1}: one centre blown up, one blown down."""

    k: int
    center: tuple[int, int]
    center_dim: int
    fiber_dims: tuple[int, int]
    moduli_dim: int
    kind: str = "flip"


def flip_schedule(wcd: WallClassData, wt: WallType) -> list[FlipStage]:
    """Stages ``k = ell, ..., 0``; stage ``k`` removes ``E_zeta^{ell-k,k}``
    (a projective bundle with fibre ``P^{N_zeta}``) and inserts
    ``E_{-zeta}^{k,ell-k}`` (fibre ``P^{N_-zeta}``)."""
    d = wt.d
    ell = wcd.ell
    if wcd.degenerate and ell > 0:
        raise FlipError("DEGENERATE_POSITIVE_ELL", "h + ell = 0 only makes sense for ell = 0")
    if wcd.degenerate:
        return [FlipStage(k=0, center=(0, 0), center_dim=d, fiber_dims=(wcd.n_zeta, wcd.n_neg),
                          moduli_dim=d, kind="add_component")]
    if wcd.degenerate_neg:
        return [FlipStage(k=0, center=(0, 0), center_dim=d, fiber_dims=(wcd.n_zeta, wcd.n_neg),
                          moduli_dim=d, kind="remove_component")]
    stages = []
    for k in range(ell, -1, -1):
        center_dim = 2 * ell + wcd.n_zeta
        stages.append(FlipStage(k=k, center=(ell - k, k), center_dim=center_dim,
                                fiber_dims=(wcd.n_zeta, wcd.n_neg), moduli_dim=d))
    return stages


def stage_is_consistent(stage: FlipStage) -> bool:
    """Blowing up the centre gives a divisor: centre + normal fibre + 1 = dim."""
    if stage.kind != "flip":
        return True
    return stage.center_dim + stage.fiber_dims[1] + 1 == stage.moduli_dim
