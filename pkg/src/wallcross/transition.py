"""Transition formulas: change of Donaldson polynomials across walls.

A wall crossing is recorded as a :class:`WallCrossingPolynomial`

    sum_i gamma_i * a^(e - 2i) * (alpha^2)^i,     a = (zeta . alpha) / 2,

with ``e = d`` for ``mu^d`` and ``e = d - 2`` for ``mu^(d-2) nu``.  The
coefficients ``gamma_i`` include the sign ``(-1)^h`` and, for ``nu``, the
factor ``1/4``; they are polynomials in ``ZZ = zeta^2``, ``KK = K^2``,
``CHI`` and (optionally symbolic) ``d``.

Two independent routes produce the coefficients:

* ``general``  sums binomial-weighted Segre integrals ``S_j`` (and ``T_j``)
  from the cohomology engine;
* ``explicit`` transcribes the closed formulas for ``ell <= 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .cohomology import compute_S_j, compute_T_j, in_terms_of_a
from .lattice import DivisorClass
from .poly import Poly, falling_binomial
from .walls import Wall, WallClassData, WallType, enumerate_walls

MU = "mu"
NU = "nu"

_FORBIDDEN = {"ZK", "AK", "AZ", "AA", "a"}


class TransitionError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def orientation_sign(delta: DivisorClass) -> int:
    """``(-1)^((delta^2 + delta.K)/2)``."""
    val = delta.square() + delta.dot(delta.lattice.K)
    return -1 if (val // 2) % 2 else 1


@dataclass(frozen=True)
class WallCrossingPolynomial:
    kind: str
    ell: int
    d: int | Poly
    coeffs: tuple[Poly, ...]
    leading_only: bool = False

    @property
    def exponent(self):
        return self.d if self.kind == MU else self.d - 2

    @property
    def modulus(self):
        """Power of ``a`` modulo which a leading-only polynomial is exact."""
        if not self.leading_only:
            return None
        return self.exponent - 2 * self.ell + 2

    def specialize(self, values) -> "WallCrossingPolynomial":
        d = self.d
        if isinstance(d, Poly) and "d" in values:
            d = values["d"]
            d = int(d) if not isinstance(d, Poly) else d
        return replace(self, d=d, coeffs=tuple(c.subs(values) for c in self.coeffs))

    def leading(self) -> "WallCrossingPolynomial":
        coeffs = tuple(c if i == self.ell else Poly() for i, c in enumerate(self.coeffs))
        return replace(self, coeffs=coeffs, leading_only=True)

    def shape_ok(self) -> bool:
        """Coefficients depend only on ZZ, KK, CHI and d."""
        return all(not (c.variables() & _FORBIDDEN) for c in self.coeffs)

    def evaluated(self) -> Poly:
        """Expand into a polynomial in ``a`` and ``AA`` (integer ``d`` only)."""
        if isinstance(self.exponent, Poly):
            raise TransitionError("SYMBOLIC_DEGREE", "cannot expand with a symbolic d")
        out = Poly()
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            power = self.exponent - 2 * i
            if power < 0:
                raise TransitionError("NEGATIVE_POWER", f"a^{power} with non-zero coefficient {c}")
            out = out + c * Poly.var("a", power) * Poly.var("AA", i)
        return out

    def evaluate(self, a: Fraction, alpha_sq: Fraction | int) -> Fraction:
        return self.evaluated().evaluate({"a": Fraction(a), "AA": Fraction(alpha_sq)})

    def __eq__(self, other):
        if not isinstance(other, WallCrossingPolynomial):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        pad = lambda cs: tuple(cs) + (Poly(),) * (n - len(cs))
        return (self.kind, self.ell, Poly.coerce(self.d)) == (other.kind, other.ell, Poly.coerce(other.d)) \
            and pad(self.coeffs) == pad(other.coeffs)

    __hash__ = None


# ---------------------------------------------------------------------------
# general route


def _collect(ell: int, e, sign_exp: int, polys: Sequence[Poly], weight) -> list[Poly]:
    """``sum_j C(e, j) (-1)^(sign_exp + j) a^(e - j) P_j`` rearranged by powers of AA."""
    coeffs = [Poly() for _ in range(ell + 1)]
    for j, pj in enumerate(polys):
        binom = falling_binomial(e, j)
        factor = Poly.coerce(binom) * _sign(sign_exp + j) * weight
        for power_a, rest in in_terms_of_a(pj).coefficients_in("a").items():
            for power_aa, coeff in rest.coefficients_in("AA").items():
                if power_a + 2 * power_aa != j:
                    raise TransitionError("NOT_HOMOGENEOUS", f"S/T term of unexpected degree in {pj}")
                coeffs[power_aa] = coeffs[power_aa] + factor * coeff
    return coeffs


def delta_mu_general(ell: int, d: int | Poly, h: int) -> WallCrossingPolynomial:
    """``mu_+^d - mu_-^d`` from engine integrals; ZZ and CHI stay symbolic."""
    S = [compute_S_j(ell, j) for j in range(2 * ell + 1)]
    coeffs = _collect(ell, d, h + ell, S, Fraction(1))
    return WallCrossingPolynomial(MU, ell, d, tuple(coeffs))


def delta_nu_general(ell: int, d: int | Poly, h: int) -> WallCrossingPolynomial:
    """``mu_+^(d-2) nu_+ - mu_-^(d-2) nu_-`` from engine integrals."""
    e = d - 2
    S = [compute_S_j(ell, j) for j in range(2 * ell + 1)]
    T = [compute_T_j(ell, j) for j in range(2 * ell - 1)]
    first = _collect(ell, e, h + ell - 1, S, Fraction(1, 4))
    second = _collect(ell, e, h + ell - 1, T, Fraction(1))
    coeffs = [a - b for a, b in zip(first, second)]
    return WallCrossingPolynomial(NU, ell, d, tuple(coeffs))


def on_wall(poly: WallCrossingPolynomial, chi: int = 1) -> WallCrossingPolynomial:
    """Substitute ``zeta^2 = p + 4 ell = 4 ell - 3 - d`` and ``chi``."""
    return poly.specialize({"ZZ": 4 * poly.ell - 3 - Poly.coerce(poly.d), "CHI": chi})


# ---------------------------------------------------------------------------
# explicit route


def delta_mu_explicit(ell: int, d: int | Poly, h: int, KK: int | Poly | None = None) -> WallCrossingPolynomial:
    """Closed formulas for ``ell <= 2`` (rational surfaces, ``chi = 1``)."""
    kk = Poly.var("KK") if KK is None else Poly.coerce(KK)
    d_ = Poly.coerce(d)
    if ell == 0:
        coeffs = [Poly.const(_sign(h))]
    elif ell == 1:
        s = _sign(h + 1)
        coeffs = [(2 * kk + 2 * d_ + 6) * s, d_ * (d_ - 1) * s]
    elif ell == 2:
        s = _sign(h)
        g2 = Poly.coerce(falling_binomial(d_, 4)) * 12
        g1 = Poly.coerce(falling_binomial(d_, 2)) * (4 * kk + 4 * d_ + 8)
        g0 = 2 * d_ * d_ + 2 * d_ * kk + 2 * kk * kk + 13 * d_ + 20 * kk + 21
        coeffs = [g0 * s, g1 * s, g2 * s]
    else:
        raise TransitionError("NOT_IMPLEMENTED", f"no closed formula for ell = {ell}; use leading_term")
    return WallCrossingPolynomial(MU, ell, d, tuple(coeffs))


def delta_nu_explicit(ell: int, d: int | Poly, h: int, KK: int | Poly | None = None) -> WallCrossingPolynomial:
    kk = Poly.var("KK") if KK is None else Poly.coerce(KK)
    d_ = Poly.coerce(d)
    quarter = Fraction(1, 4)
    if ell == 0:
        coeffs = [Poly.const(quarter * _sign(h - 1))]
    elif ell == 1:
        s = quarter * _sign(h)
        coeffs = [(2 * kk + 2 * d_ - 18) * s, (d_ - 2) * (d_ - 3) * s]
    elif ell == 2:
        s = quarter * _sign(h + 1)
        g2 = Poly.coerce(falling_binomial(d_ - 2, 4)) * 12
        g1 = Poly.coerce(falling_binomial(d_ - 2, 2)) * (4 * kk + 4 * d_ - 40)
        g0 = 2 * d_ * d_ + 2 * d_ * kk + 2 * kk * kk - 35 * d_ - 28 * kk - 99
        coeffs = [g0 * s, g1 * s, g2 * s]
    else:
        raise TransitionError("NOT_IMPLEMENTED", f"no closed formula for ell = {ell}; use leading_term")
    return WallCrossingPolynomial(NU, ell, d, tuple(coeffs))


def leading_term(ell: int, d: int | Poly, h: int, kind: str = MU) -> WallCrossingPolynomial:
    """Top power of ``alpha^2``, valid for every ``ell``.

    ``mu``: exact modulo ``a^(d - 2 ell + 2)``; ``nu``: modulo ``a^(d - 2 ell)``.
    """
    if kind == MU:
        lead = Poly.coerce(falling_binomial(d, 2 * ell)) * _double_factorial_ratio(ell) * _sign(h + ell)
    elif kind == NU:
        lead = Poly.coerce(falling_binomial(d - 2, 2 * ell)) * _double_factorial_ratio(ell) \
            * Fraction(1, 4) * _sign(h + ell - 1)
    else:
        raise TransitionError("BAD_KIND", kind)
    coeffs = [Poly() for _ in range(ell)] + [lead]
    return WallCrossingPolynomial(kind, ell, d, tuple(coeffs), leading_only=True)


def _double_factorial_ratio(ell: int) -> Fraction:
    """``(2 ell)! / ell!`` -- turns ``C(d, 2 ell)`` into ``d! / (ell! (d - 2 ell)!)``."""
    num = 1
    for i in range(ell + 1, 2 * ell + 1):
        num *= i
    return Fraction(num)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class WallEntry:
    zeta: tuple[int, ...]
    crossing_t: Fraction
    ell: int
    h: int
    sign: int
    polynomial: WallCrossingPolynomial
    a: Fraction
    alpha_sq: int
    value: Fraction
    cross_check: Fraction | None
    method: str


@dataclass(frozen=True)
class TransitionReport:
    kind: str
    d: int
    entries: tuple[WallEntry, ...]
    total: Fraction
    normalization: str = "standard"
    warnings: tuple[str, ...] = field(default=())
    leading_only: bool = False


def _wall_polynomial(wcd: WallClassData, wt: WallType, kind: str, method: str):
    ell, d, h = wcd.ell, wt.d, wcd.h
    values = {"ZZ": wcd.zeta_sq, "KK": wt.lattice.K_squared, "CHI": wt.lattice.chi}
    if ell > 2:
        return None, None
    general = (delta_mu_general if kind == MU else delta_nu_general)(ell, d, h).specialize(values)
    if wt.lattice.chi == 1:
        explicit = (delta_mu_explicit if kind == MU else delta_nu_explicit)(ell, d, h, values["KK"])
    else:
        explicit = None
    if method == "general":
        return general, explicit
    if method == "explicit":
        if explicit is None:
            raise TransitionError("NOT_RATIONAL", "closed formulas assume chi = 1")
        return explicit, general
    raise TransitionError("BAD_METHOD", method)


def donaldson_difference(L_minus: DivisorClass, L_plus: DivisorClass, wt: WallType,
                         alpha: DivisorClass, insert_point: bool = False, *,
                         method: str = "general", km_normalization: bool = False,
                         allow_leading: bool = False) -> TransitionReport:
    """``D(C_+) - D(C_-)`` evaluated on ``alpha^d`` (or ``alpha^(d-2) x``),
    summed over every wall class crossed from ``L_minus`` to ``L_plus``."""
    kind = NU if insert_point else MU
    d = wt.d
    if insert_point and d < 2:
        raise TransitionError("DIMENSION_TOO_SMALL", "point insertion needs d >= 2")
    walls: list[Wall] = enumerate_walls(L_minus, L_plus, wt)
    sign = orientation_sign(wt.delta)
    alpha_sq = alpha.square()
    warnings: list[str] = []
    if wt.lattice.anticanonical_effective is None:
        warnings.append("ANTICANONICAL_EFFECTIVITY_UNASSERTED")
    entries = []
    leading_used = False
    for wall in walls:
        if wall.multi_class:
            warnings.append(f"MULTI_CLASS_WALL at t={wall.crossing_t}: {[c.zeta.coords for c in wall.classes]}")
        if wall.coincident:
            warnings.append(f"COINCIDENT_CROSSING at t={wall.crossing_t}")
        for wcd in wall.classes:
            where = f"zeta={wcd.zeta.coords}"
            if wcd.degenerate and wcd.ell >= 1:
                raise TransitionError("DEGENERATE_WALL", f"h + ell = 0 with ell >= 1 at {where}")
            if any(c.degenerate for c in wall.classes) and any(c.ell >= 1 for c in wall.classes):
                raise TransitionError("DEGENERATE_WALL", f"degenerate component next to ell >= 1 classes at {where}")
            if wcd.h < 0:
                warnings.append(f"NEGATIVE_H at {where}: h = {wcd.h}")
            poly, other = _wall_polynomial(wcd, wt, kind, method)
            used = method
            if poly is None:
                if not allow_leading:
                    raise TransitionError("NOT_IMPLEMENTED", f"ell = {wcd.ell} at {where}; only the leading term is known")
                poly = leading_term(wcd.ell, d, wcd.h, kind)
                other = None
                used = "leading"
                leading_used = True
                warnings.append(f"LEADING_TERM_ONLY at {where}: exact modulo a^{poly.modulus}")
            a = Fraction(wcd.zeta.dot(alpha), 2)
            value = sign * poly.evaluate(a, alpha_sq)
            check = sign * other.evaluate(a, alpha_sq) if other is not None else None
            if km_normalization:
                scale = 2 ** poly.exponent
                value *= scale
                check = check * scale if check is not None else None
            if check is not None and check != value:
                warnings.append(f"PATH_MISMATCH at {where}: {used} gives {value}, other route {check}")
            entries.append(WallEntry(zeta=wcd.zeta.coords, crossing_t=wall.crossing_t, ell=wcd.ell,
                                     h=wcd.h, sign=sign, polynomial=poly, a=a, alpha_sq=alpha_sq,
                                     value=value, cross_check=check, method=used))
    total = sum((e.value for e in entries), Fraction(0))
    return TransitionReport(kind=kind, d=d, entries=tuple(entries), total=total,
                            normalization="km" if km_normalization else "standard",
                            warnings=tuple(warnings), leading_only=leading_used)


def sign_identity_holds(delta: DivisorClass, zeta: DivisorClass) -> bool:
    """``delta(Delta) (-1)^(h+1)`` equals ``(-1)^([(D.K + D^2) + (z.K - z^2)]/2)``."""
    K = delta.lattice.K
    h = (zeta.dot(K) - zeta.square()) // 2 - 1
    lhs = orientation_sign(delta) * _sign(h + 1)
    exponent = ((delta.dot(K) + delta.square()) + (zeta.dot(K) - zeta.square())) // 2
    return lhs == _sign(exponent)
