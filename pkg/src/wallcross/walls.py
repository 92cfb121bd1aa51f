"""Walls of type (delta, c) and their enumeration along a segment of polarizations.

A wall class is an integral ``zeta`` with ``zeta = delta (mod 2)`` and
``p <= zeta^2 < 0`` where ``p = delta^2 - 4c``.  It is crossed by the segment
``[L_minus, L_plus]`` when ``zeta.L_minus < 0 < zeta.L_plus``.

Enumeration is exact.  For non-proportional forward-cone classes ``L-``,
``L+`` put ``b = L-.L+`` and ``D = b^2 - L-^2 L+^2 > 0``; the form

    Q(x) = -x^2 + (2b/D) (x.L-)(x.L+)

is positive definite (it is minus the square of the part of ``x`` orthogonal
to ``L-, L+`` plus a positive form in ``(x.L-, x.L+)``).  Any class with
``x.L- <= 0 <= x.L+`` and ``x^2 >= p`` has ``Q(x) <= -p``, so one
Fincke-Pohst pass over ``Q <= -p`` finds every candidate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .lattice import DivisorClass, LatticeError, SurfaceLattice, in_positive_cone
from .shortvec import coordinate_bounds, short_vectors


class WallError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class WallType:
    delta: DivisorClass
    c: int

    def __post_init__(self):
        if self.d < 0:
            raise WallError("INVALID_DISCRIMINANT",
                            f"expected dimension d = {self.d} is negative (p = {self.p})")

    @property
    def lattice(self) -> SurfaceLattice:
        return self.delta.lattice

    @property
    def p(self) -> int:
        return self.delta.square() - 4 * self.c

    @property
    def d(self) -> int:
        """Expected dimension ``-p - 3`` of the moduli space."""
        return -self.p - 3


def is_wall_class(zeta: DivisorClass, wt: WallType) -> bool:
    if any((z - t) % 2 for z, t in zip(zeta.coords, wt.delta.coords)):
        return False
    sq = zeta.square()
    return wt.p <= sq < 0


@dataclass(frozen=True)
class WallClassData:
    zeta: DivisorClass
    ell: int
    h: int
    h_neg: int
    n_zeta: int
    n_neg: int
    zeta_sq: int
    zeta_k: int
    crossing_t: Fraction | None = None
    warnings: tuple[str, ...] = ()

    @property
    def degenerate(self) -> bool:
        """The extension space over Hilb^0 x Hilb^0 is a whole component of M_+."""
        return self.h + self.ell == 0

    @property
    def degenerate_neg(self) -> bool:
        return self.h_neg + self.ell == 0

    @property
    def dim_E(self) -> int:
        return 3 * self.ell + self.h - 1

    @property
    def dim_E_neg(self) -> int:
        return 3 * self.ell + self.h_neg - 1


def wall_class_data(zeta: DivisorClass, wt: WallType, crossing_t: Fraction | None = None) -> WallClassData:
    if any((z - t) % 2 for z, t in zip(zeta.coords, wt.delta.coords)):
        raise WallError("PARITY_MISMATCH", f"{zeta} is not congruent to delta mod 2")
    sq = zeta.square()
    if not (wt.p <= sq < 0):
        raise WallError("OUT_OF_RANGE", f"zeta^2 = {sq} is not in [{wt.p}, 0)")
    zk = zeta.dot(wt.lattice.K)
    # zeta^2 = zeta.K mod 2 and zeta^2 = p mod 4 make these integral
    ell = (sq - wt.p) // 4
    h = (zk - sq) // 2 - 1
    h_neg = -sq - 2 - h
    warnings = []
    if h < 0:
        warnings.append("NEGATIVE_H")
    if h + ell == 0 and ell > 0:
        warnings.append("DEGENERATE_POSITIVE_ELL")
    return WallClassData(zeta=zeta, ell=ell, h=h, h_neg=h_neg,
                         n_zeta=h + ell - 1, n_neg=h_neg + ell - 1,
                         zeta_sq=sq, zeta_k=zk, crossing_t=crossing_t,
                         warnings=tuple(warnings))


@dataclass(frozen=True)
class Wall:
    """All wall classes of one type lying on a single hyperplane."""

    primitive: DivisorClass
    classes: tuple[WallClassData, ...]
    crossing_t: Fraction
    coincident: bool = False

    @property
    def multi_class(self) -> bool:
        return len(self.classes) > 1


def _check_endpoint(L: DivisorClass, label: str):
    if not in_positive_cone(L):
        raise LatticeError("NOT_IN_POSITIVE_CONE", f"{label} = {L} is not in the forward positive cone")


def segment_height_form(L_minus: DivisorClass, L_plus: DivisorClass) -> list[list[Fraction]] | None:
    """Positive definite form bounding walls met by the segment, or ``None``
    if the endpoints are proportional."""
    lat = L_minus.lattice
    n = lat.rank
    g = lat.gram
    gm = [sum(g[i][j] * L_minus.coords[j] for j in range(n)) for i in range(n)]
    gp = [sum(g[i][j] * L_plus.coords[j] for j in range(n)) for i in range(n)]
    b = L_minus.dot(L_plus)
    disc = b * b - L_minus.square() * L_plus.square()
    if disc == 0:
        return None
    scale = Fraction(b, disc)
    return [[-g[i][j] + scale * (gm[i] * gp[j] + gp[i] * gm[j]) for j in range(n)] for i in range(n)]


def point_height_form(L: DivisorClass) -> list[list[Fraction]]:
    """``2(x.L)^2/L^2 - x^2``: positive definite, equals ``-x^2`` on ``L``-perp."""
    lat = L.lattice
    n = lat.rank
    g = lat.gram
    gl = [sum(g[i][j] * L.coords[j] for j in range(n)) for i in range(n)]
    sq = Fraction(L.square())
    return [[-g[i][j] + 2 * gl[i] * gl[j] / sq for j in range(n)] for i in range(n)]


def proven_radius(L_minus: DivisorClass, L_plus: DivisorClass, wt: WallType) -> int:
    """Max-norm radius containing every wall class the segment can meet."""
    form = segment_height_form(L_minus, L_plus)
    if form is None:
        form = point_height_form(L_minus)
    return max(coordinate_bounds(form, -wt.p), default=0)


def _primitive(coords: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    g = reduce(math.gcd, (abs(c) for c in coords), 0)
    return tuple(c // g for c in coords), g


def same_wall(z1: DivisorClass, z2: DivisorClass) -> bool:
    """True iff ``z2`` is a positive rational multiple of ``z1``."""
    if z1.is_zero() or z2.is_zero():
        raise WallError("ZERO_CLASS", "wall classes are nonzero")
    return _primitive(z1.coords)[0] == _primitive(z2.coords)[0]


def crossing_parameter(zeta: DivisorClass, L_minus: DivisorClass, L_plus: DivisorClass) -> Fraction:
    """The ``t`` in ``(0, 1)`` where ``zeta`` meets ``(1 - t) L_minus + t L_plus``."""
    u = zeta.dot(L_minus)
    w = zeta.dot(L_plus)
    if not u < 0 < w:
        raise WallError("NO_SIGN_CHANGE", f"zeta.L_minus = {u}, zeta.L_plus = {w}")
    return Fraction(-u, w - u)


def _group(found: list[DivisorClass], L_minus: DivisorClass, L_plus: DivisorClass,
           wt: WallType) -> list[Wall]:
    groups: dict[tuple[int, ...], list[DivisorClass]] = {}
    for zeta in found:
        prim, _ = _primitive(zeta.coords)
        groups.setdefault(prim, []).append(zeta)
    walls = []
    for prim, members in groups.items():
        prim_cls = wt.lattice.divisor(prim)
        t = crossing_parameter(prim_cls, L_minus, L_plus)
        members.sort(key=lambda z: _primitive(z.coords)[1])
        data = tuple(wall_class_data(z, wt, t) for z in members)
        walls.append(Wall(primitive=prim_cls, classes=data, crossing_t=t))
    walls.sort(key=lambda wl: (wl.crossing_t, wl.primitive.coords))
    out = []
    for i, wl in enumerate(walls):
        tie = any(o.crossing_t == wl.crossing_t for j, o in enumerate(walls) if j != i)
        out.append(Wall(wl.primitive, wl.classes, wl.crossing_t, coincident=tie))
    return out


def enumerate_walls(L_minus: DivisorClass, L_plus: DivisorClass, wt: WallType) -> list[Wall]:
    """Walls of type ``wt`` strictly crossed by the open segment, ordered by
    crossing parameter ``t`` in ``(0, 1)``.  Each class is oriented so that
    ``zeta.L_minus < 0 < zeta.L_plus``."""
    _check_endpoint(L_minus, "L_minus")
    _check_endpoint(L_plus, "L_plus")
    lat = wt.lattice
    bound = -wt.p
    form = segment_height_form(L_minus, L_plus)
    if form is None:
        # proportional endpoints: nothing is crossed, only check the endpoint
        for x in short_vectors(point_height_form(L_minus), bound):
            zeta = lat.divisor(x)
            if is_wall_class(zeta, wt) and zeta.dot(L_minus) == 0:
                raise WallError("ENDPOINT_ON_WALL", f"endpoint lies on the wall of {zeta}")
        return []
    found = []
    for x in short_vectors(form, bound):
        zeta = lat.divisor(x)
        if not is_wall_class(zeta, wt):
            continue
        u = zeta.dot(L_minus)
        w = zeta.dot(L_plus)
        if u == 0 or w == 0:
            raise WallError("ENDPOINT_ON_WALL",
                            f"{'L_minus' if u == 0 else 'L_plus'} lies on the wall of {zeta}")
        if u < 0 < w:
            found.append(zeta)
    return _group(found, L_minus, L_plus, wt)


def enumerate_walls_box(L_minus: DivisorClass, L_plus: DivisorClass, wt: WallType,
                        radius: int) -> list[Wall]:
    """Brute-force oracle: scan every class with coordinates in ``[-radius, radius]``."""
    lat = wt.lattice
    n = lat.rank
    g = np.array(lat.gram, dtype=np.int64)
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    delta = np.array(wt.delta.coords, dtype=np.int64)
    parity_ok = np.all((grid - delta) % 2 == 0, axis=1)
    grid = grid[parity_ok]
    sq = np.einsum("ij,jk,ik->i", grid, g, grid)
    u = grid @ (g @ np.array(L_minus.coords, dtype=np.int64))
    w = grid @ (g @ np.array(L_plus.coords, dtype=np.int64))
    keep = (sq >= wt.p) & (sq < 0) & (u < 0) & (w > 0)
    found = [lat.divisor(tuple(int(v) for v in row)) for row in grid[keep]]
    return _group(found, L_minus, L_plus, wt)


def wall_signature(walls: list[Wall]) -> list[tuple[Fraction, tuple[tuple[int, ...], ...]]]:
    """Comparable summary: crossing parameters with their classes."""
    return [(wl.crossing_t, tuple(sorted(c.zeta.coords for c in wl.classes))) for wl in walls]
