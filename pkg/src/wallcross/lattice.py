"""Integral intersection lattices of rational surfaces.

All arithmetic here is exact integer/rational arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


class LatticeError(ValueError):
    """Invalid lattice data; ``code`` is a stable machine-readable tag."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def inertia(matrix: Sequence[Sequence[int | Fraction]]) -> tuple[int, int, int]:
    """Return ``(positive, negative, zero)`` counts of a symmetric matrix.

    Uses congruence diagonalisation over the rationals, so the answer is exact.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    pos = neg = zero = 0
    while a:
        n = len(a)
        pivot = next((i for i in range(n) if a[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in range(n) for j in range(n)
                         if a[i][j] != 0), None)
            if pair is None:
                zero += n
                break
            i, j = pair
            # row_i += row_j, col_i += col_j makes a[i][i] = 2 a[i][j] != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            pivot = i
        p = a[pivot][pivot]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [k for k in range(n) if k != pivot]
        a = [[a[r][c] - a[r][pivot] * a[pivot][c] / p for c in rest] for r in rest]
    return pos, neg, zero


@dataclass(frozen=True)
class SurfaceLattice:
    """H^2(X; Z) with its intersection form and canonical class.

    ``extremal_curves`` are curve classes whose positivity, together with
    the positive cone test, decides ampleness for the preset surfaces.
    ``anticanonical_effective`` is ``True`` when -K is known to be effective,
    ``None`` when the user has not asserted it.
    """

    name: str
    gram: tuple[tuple[int, ...], ...]
    canonical: tuple[int, ...]
    reference_ample: tuple[int, ...]
    chi: int = 1
    extremal_curves: tuple[tuple[int, ...], ...] = ()
    anticanonical_effective: bool | None = None
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        n = len(self.gram)
        if any(len(row) != n for row in self.gram):
            raise LatticeError("NOT_SQUARE", "gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise LatticeError("NOT_SYMMETRIC", f"entry ({i},{j}) differs from ({j},{i})")
        for vec, label in ((self.canonical, "canonical"), (self.reference_ample, "reference_ample")):
            if len(vec) != n:
                raise LatticeError("DIMENSION_MISMATCH", f"{label} has length {len(vec)}, expected {n}")
        pos, neg, zero = inertia(self.gram)
        if zero:
            raise LatticeError("DEGENERATE", "intersection form is degenerate")
        if pos != 1:
            raise LatticeError("BAD_SIGNATURE", f"signature is ({pos},{neg}), expected (1,{n - 1})")
        if self.pair(self.reference_ample, self.reference_ample) <= 0:
            raise LatticeError("BAD_REFERENCE", "reference ample class must have positive square")
        # Wu's formula: K is characteristic.
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            if (self.pair(e, e) - self.pair(e, self.canonical)) % 2:
                raise LatticeError("NOT_CHARACTERISTIC",
                                   f"basis vector {i} violates x.x = x.K mod 2")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        g = self.gram
        return sum(x[i] * g[i][j] * y[j] for i in range(len(x)) for j in range(len(y)) if g[i][j])

    def divisor(self, coords: Sequence[int]) -> "DivisorClass":
        return DivisorClass(self, tuple(int(c) for c in coords))

    @property
    def K(self) -> "DivisorClass":
        return self.divisor(self.canonical)

    @property
    def K_squared(self) -> int:
        return self.pair(self.canonical, self.canonical)


@dataclass(frozen=True)
class DivisorClass:
    lattice: SurfaceLattice = field(repr=False, compare=False)
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.lattice.rank:
            raise LatticeError("DIMENSION_MISMATCH",
                               f"class has {len(self.coords)} coordinates, lattice rank is {self.lattice.rank}")

    def _check(self, other: "DivisorClass"):
        if other.lattice.gram != self.lattice.gram:
            raise LatticeError("DIMENSION_MISMATCH", "classes live in different lattices")

    def dot(self, other: "DivisorClass") -> int:
        self._check(other)
        return self.lattice.pair(self.coords, other.coords)

    def square(self) -> int:
        return self.dot(self)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.lattice, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def pair(x: DivisorClass, y: DivisorClass) -> int:
    return x.dot(y)


# ---------------------------------------------------------------------------
# presets

def _minus_one_curves(n: int) -> list[tuple[int, ...]]:
    """(-1)-curves on the blow-up of P^2 in n <= 8 general points.

    Classes are ``dH - sum m_i E_i`` with ``d^2 - sum m_i^2 = -1`` and
    ``3d - sum m_i = 1``; coordinates are returned as ``(d, -m_1, ..., -m_n)``.
    """
    found: set[tuple[int, ...]] = set()
    for i in range(n):
        found.add(tuple([0] + [1 if j == i else 0 for j in range(n)]))
    for degree in range(1, 7):
        target_sum = 3 * degree - 1
        target_sq = degree * degree + 1

        def multisets(slots, max_val, s, q):
            if s == 0 and q == 0:
                yield []
                return
            if slots == 0 or s <= 0 or q <= 0:
                return
            for v in range(min(max_val, s), 0, -1):
                if v * v <= q:
                    for rest in multisets(slots - 1, v, s - v, q - v * v):
                        yield [v] + rest

        for mults in multisets(n, degree, target_sum, target_sq):
            padded = mults + [0] * (n - len(mults))
            for perm in set(itertools.permutations(padded)):
                found.add(tuple([degree] + [-m for m in perm]))
    return sorted(found)


def blowup_p2(n: int) -> SurfaceLattice:
    """P^2 blown up in ``n`` points, basis ``H, E_1, ..., E_n``."""
    if n < 0:
        raise LatticeError("BAD_PRESET", "number of blown-up points must be non-negative")
    rank = n + 1
    gram = tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(rank)) for i in range(rank))
    canonical = tuple([-3] + [1] * n)
    # 3H - sum E_i is ample on a del Pezzo; for larger n use a steeper H-coefficient.
    h = 3 if n <= 8 else n
    reference = tuple([h] + [-1] * n)
    notes: tuple[str, ...] = ()
    if n == 0:
        curves = ((1,),)
    elif n == 1:
        curves = ((0, 1), (1, -1))  # E and H - E
    elif n <= 8:
        curves = tuple(_minus_one_curves(n))
    else:
        curves = tuple(tuple([0] + [1 if j == i else 0 for j in range(n)]) for i in range(n))
        notes = ("ampleness test only checks exceptional curves; the user must assert ampleness",)
    return SurfaceLattice(
        name=f"Bl{n}P2",
        gram=gram,
        canonical=canonical,
        reference_ample=reference,
        chi=1,
        extremal_curves=curves,
        anticanonical_effective=True if n <= 8 else None,
        notes=notes,
    )


def hirzebruch(e: int) -> SurfaceLattice:
    """Hirzebruch surface F_e in the basis ``(C_0, f)`` with ``C_0^2 = -e``."""
    if e < 0:
        raise LatticeError("BAD_PRESET", "Hirzebruch index must be non-negative")
    gram = ((-e, 1), (1, 0))
    canonical = (-2, -(e + 2))
    return SurfaceLattice(
        name=f"F{e}",
        gram=gram,
        canonical=canonical,
        reference_ample=(1, e + 1),
        chi=1,
        extremal_curves=((1, 0), (0, 1)),
        anticanonical_effective=True,
    )


def make_surface(preset: str | None = None, *, gram=None, canonical=None,
                 reference_ample=None, chi: int = 1, extremal_curves=(),
                 anticanonical_effective: bool | None = None,
                 name: str = "custom") -> SurfaceLattice:
    """Build a lattice from a preset name (``P2``, ``BlnP2``, ``Fe``) or raw data."""
    if preset is not None:
        key = preset.strip()
        if key == "P2":
            return blowup_p2(0)
        if key.startswith("Bl") and key.endswith("P2"):
            try:
                return blowup_p2(int(key[2:-2]))
            except ValueError:
                pass
        if key.startswith("F"):
            try:
                return hirzebruch(int(key[1:]))
            except ValueError:
                pass
        raise LatticeError("BAD_PRESET", f"unknown preset {preset!r}")
    if gram is None or canonical is None or reference_ample is None:
        raise LatticeError("BAD_PRESET", "custom lattices need gram, canonical and reference_ample")
    return SurfaceLattice(
        name=name,
        gram=tuple(tuple(int(x) for x in row) for row in gram),
        canonical=tuple(int(x) for x in canonical),
        reference_ample=tuple(int(x) for x in reference_ample),
        chi=chi,
        extremal_curves=tuple(tuple(int(x) for x in c) for c in extremal_curves),
        anticanonical_effective=anticanonical_effective,
    )


def in_positive_cone(x: DivisorClass) -> bool:
    """Strictly inside the forward positive cone."""
    ref = x.lattice.divisor(x.lattice.reference_ample)
    return x.square() > 0 and x.dot(ref) > 0


def is_ample_candidate(x: DivisorClass) -> bool:
    """Positive cone membership plus positivity on the extremal curves."""
    if not in_positive_cone(x):
        return False
    return all(x.lattice.pair(x.coords, c) > 0 for c in x.lattice.extremal_curves)
