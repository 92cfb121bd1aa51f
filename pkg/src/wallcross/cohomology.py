"""Symbolic Chern and Segre calculus on the parameter spaces of wall crossings.

A wall class ``zeta`` with ``ell = 0, 1, 2`` needs the cohomology of
``Hilb^{ell-k}(X) x Hilb^k(X)``, i.e. one of

* ``POINT``            (ell = 0)
* ``SURFACE``          X itself (ell = 1)
* ``SURFACE_SQUARED``  X x X (ell = 2, k = 1)
* ``HILB2``            Hilb^2(X) (ell = 2, k = 0 or 2)

Classes are polynomials in a few generators with coefficients that are
themselves polynomials in the intersection numbers of three symbolic surface
classes ``alpha``, ``zeta`` and ``K`` (written ``AA, AZ, AK, ZZ, ZK, KK``)
and ``CHI = chi(O_X)``.  Top-degree classes are turned into numbers by
explicit rule tables; any monomial not covered raises
:class:`UnknownMonomial` instead of silently vanishing.

Generator names:

``SURFACE``          ``h:<c>`` the class ``c`` (degree 1), ``pt`` (degree 2)
``SURFACE_SQUARED``  ``t1:<c>``, ``t2:<c>`` pull-backs (degree 1),
                     ``t1:pt``, ``t2:pt`` (degree 2), ``D0`` the diagonal
                     (degree 2), ``jK`` the canonical class pushed from the
                     diagonal (degree 3), ``jK2`` the point class ``K^2``
                     pushed from the diagonal (degree 4)
``HILB2``            ``Z:<c>`` the slant product ``[Z_2]/c`` (degree 1),
                     ``L`` (degree 1), ``Xx`` the locus of subschemes
                     through a fixed point (degree 2)
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .poly import Poly, falling_binomial, poly_sum

# ---------------------------------------------------------------------------
# symbolic surface classes

_PAIR_SYMBOLS = {
    ("alpha", "alpha"): "AA",
    ("alpha", "zeta"): "AZ",
    ("K", "alpha"): "AK",
    ("zeta", "zeta"): "ZZ",
    ("K", "zeta"): "ZK",
    ("K", "K"): "KK",
}


def pairing_symbol(x: str, y: str) -> Poly:
    key = tuple(sorted((x, y)))
    name = _PAIR_SYMBOLS.get(key)
    if name is None:
        name = f"<{key[0]}.{key[1]}>"
    return Poly.var(name)


@dataclass(frozen=True)
class SurfaceClass:
    """Rational combination of named basis classes on X."""

    parts: Tuple[Tuple[str, Fraction], ...]

    @classmethod
    def named(cls, name: str) -> "SurfaceClass":
        return cls(((name, Fraction(1)),))

    @classmethod
    def _build(cls, d: Mapping[str, Fraction]) -> "SurfaceClass":
        return cls(tuple(sorted((k, v) for k, v in d.items() if v)))

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.parts)

    def __add__(self, other: "SurfaceClass") -> "SurfaceClass":
        d = self.as_dict()
        for k, v in other.parts:
            d[k] = d.get(k, 0) + v
        return SurfaceClass._build(d)

    def __neg__(self) -> "SurfaceClass":
        return SurfaceClass(tuple((k, -v) for k, v in self.parts))

    def __sub__(self, other: "SurfaceClass") -> "SurfaceClass":
        return self + (-other)

    def __mul__(self, k: int | Fraction) -> "SurfaceClass":
        return SurfaceClass._build({n: v * k for n, v in self.parts})

    __rmul__ = __mul__

    def dot(self, other: "SurfaceClass") -> Poly:
        return poly_sum(a * b * pairing_symbol(x, y)
                        for x, a in self.parts for y, b in other.parts)


ALPHA = SurfaceClass.named("alpha")
ZETA = SurfaceClass.named("zeta")
KX = SurfaceClass.named("K")

CHI = Poly.var("CHI")


class UnknownMonomial(KeyError):
    """A top-degree product outside the evaluation rule table."""


class EngineError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


# ---------------------------------------------------------------------------
# graded classes

GenMonomial = Tuple[Tuple[str, int], ...]


def _gmul(m1: GenMonomial, m2: GenMonomial) -> GenMonomial:
    exps = dict(m1)
    for g, e in m2:
        exps[g] = exps.get(g, 0) + e
    return tuple(sorted(exps.items()))


class GradedClass:
    """Element of the (truncated) cohomology ring of a :class:`Variety`."""

    __slots__ = ("variety", "terms")

    def __init__(self, variety: "Variety", terms: Mapping[GenMonomial, Poly] | None = None):
        self.variety = variety
        clean = {}
        for mono, coeff in (terms or {}).items():
            coeff = Poly.coerce(coeff)
            if coeff and variety.mono_degree(mono) <= variety.top_degree and not variety.vanishes(mono):
                clean[mono] = coeff
        self.terms: Dict[GenMonomial, Poly] = clean

    def _same(self, other: "GradedClass"):
        if other.variety is not self.variety:
            raise EngineError("VARIETY_MISMATCH", f"{self.variety.name} vs {other.variety.name}")

    def __add__(self, other):
        if not isinstance(other, GradedClass):
            other = self.variety.scalar(other)
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Poly()) + c
        return GradedClass(self.variety, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.variety, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GradedClass):
            other = Poly.coerce(other)
            return GradedClass(self.variety, {m: c * other for m, c in self.terms.items()})
        self._same(other)
        top = self.variety.top_degree
        deg = self.variety.mono_degree
        out: Dict[GenMonomial, Poly] = {}
        for m1, c1 in self.terms.items():
            d1 = deg(m1)
            for m2, c2 in other.terms.items():
                if d1 + deg(m2) > top:
                    continue
                m = _gmul(m1, m2)
                out[m] = out.get(m, Poly()) + c1 * c2
        return GradedClass(self.variety, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.variety.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self.variety is other.variety and self.terms == other.terms

    def component(self, degree: int) -> "GradedClass":
        deg = self.variety.mono_degree
        return GradedClass(self.variety, {m: c for m, c in self.terms.items() if deg(m) == degree})

    def constant_term(self) -> Poly:
        return self.terms.get((), Poly())

    def is_zero(self) -> bool:
        return not self.terms

    def map_generators(self, rename) -> "GradedClass":
        out: Dict[GenMonomial, Poly] = {}
        for mono, c in self.terms.items():
            m = _merge((rename(g), e) for g, e in mono)
            out[m] = out.get(m, Poly()) + c
        return GradedClass(self.variety, out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (self.variety.mono_degree(m), m)):
            body = "*".join(g if e == 1 else f"{g}^{e}" for g, e in mono) or "1"
            parts.append(f"({self.terms[mono]})*{body}")
        return " + ".join(parts)

    __repr__ = __str__


def _merge(m):
    exps: Dict[str, int] = {}
    for g, e in m:
        exps[g] = exps.get(g, 0) + e
    return tuple(sorted(exps.items()))


# ---------------------------------------------------------------------------
# varieties


class Variety:
    name = "abstract"
    top_degree = 0

    def degree(self, gen: str) -> int:
        raise NotImplementedError

    def mono_degree(self, mono: GenMonomial) -> int:
        return sum(self.degree(g) * e for g, e in mono)

    def vanishes(self, mono: GenMonomial) -> bool:
        """Monomials known to be zero in cohomology below the top degree."""
        return False

    def one(self) -> GradedClass:
        return GradedClass(self, {(): Poly.const(1)})

    def zero(self) -> GradedClass:
        return GradedClass(self)

    def scalar(self, value) -> GradedClass:
        return GradedClass(self, {(): Poly.coerce(value)})

    def gen(self, name: str) -> GradedClass:
        self.degree(name)
        return GradedClass(self, {((name, 1),): Poly.const(1)})

    def linear(self, prefix: str, cls: SurfaceClass) -> GradedClass:
        return GradedClass(self, {((f"{prefix}:{n}", 1),): Poly.const(v) for n, v in cls.parts})

    def evaluate_monomial(self, mono: GenMonomial) -> Poly:
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.name}>"


def _expand(mono: GenMonomial) -> list[str]:
    return [g for g, e in mono for _ in range(e)]


class _Point(Variety):
    name = "POINT"
    top_degree = 0

    def degree(self, gen):
        raise EngineError("UNKNOWN_GENERATOR", f"{gen} on a point")

    def evaluate_monomial(self, mono):
        if mono:
            raise UnknownMonomial(mono)
        return Poly.const(1)


class _Surface(Variety):
    name = "SURFACE"
    top_degree = 2

    def degree(self, gen):
        if gen == "pt":
            return 2
        if gen.startswith("h:"):
            return 1
        raise EngineError("UNKNOWN_GENERATOR", gen)

    def h(self, cls: SurfaceClass) -> GradedClass:
        return self.linear("h", cls)

    def evaluate_monomial(self, mono):
        gens = _expand(mono)
        if gens == ["pt"]:
            return Poly.const(1)
        if len(gens) == 2 and all(g.startswith("h:") for g in gens):
            return pairing_symbol(gens[0][2:], gens[1][2:])
        raise UnknownMonomial(mono)


class _SurfaceSquared(Variety):
    name = "SURFACE_SQUARED"
    top_degree = 4
    _fixed = {"D0": 2, "jK": 3, "jK2": 4, "t1:pt": 2, "t2:pt": 2}

    def degree(self, gen):
        if gen in self._fixed:
            return self._fixed[gen]
        if gen.startswith(("t1:", "t2:")):
            return 1
        raise EngineError("UNKNOWN_GENERATOR", gen)

    def vanishes(self, mono):
        # Kunneth: nothing of degree > 2 pulled back from one copy of X
        slot = {"t1": 0, "t2": 0}
        for g, e in mono:
            if g[:3] in ("t1:", "t2:"):
                slot[g[:2]] += (2 if g.endswith(":pt") else 1) * e
        return slot["t1"] > 2 or slot["t2"] > 2

    def t1(self, cls: SurfaceClass) -> GradedClass:
        return self.linear("t1", cls)

    def t2(self, cls: SurfaceClass) -> GradedClass:
        return self.linear("t2", cls)

    @staticmethod
    def _restrict(names: list[str]) -> Poly:
        """Integrate a product of surface classes over X (the diagonal)."""
        if names == ["pt"]:
            return Poly.const(1)
        if len(names) == 2 and "pt" not in names:
            return pairing_symbol(*names)
        raise UnknownMonomial(tuple(names))

    def evaluate_monomial(self, mono):
        gens = _expand(mono)
        special = [g for g in gens if g in ("D0", "jK", "jK2")]
        pulled = [g for g in gens if g not in ("D0", "jK", "jK2")]
        names = [g[3:] for g in pulled]
        if special == ["jK2"] and not pulled:
            return Poly.var("KK")
        if special == ["D0", "D0"] and not pulled:
            return 12 * CHI - Poly.var("KK")
        if special == ["jK"] and len(names) == 1 and names[0] != "pt":
            return pairing_symbol("K", names[0])
        if special == ["D0"]:
            # the diagonal restricts any pull-back to the class itself
            return self._restrict(names)
        if not special:
            slots = {"t1": [], "t2": []}
            for g in pulled:
                slots[g[:2]].append(g[3:])
            value = Poly.const(1)
            for items in slots.values():
                slot_deg = sum(2 if n == "pt" else 1 for n in items)
                if slot_deg != 2:
                    # Kunneth: a factor of the wrong degree on one copy of X
                    return Poly()
                value = value * self._restrict(items)
            return value
        raise UnknownMonomial(mono)


@lru_cache(maxsize=None)
def hilbert_slant_top(k: int, names: Tuple[str, ...]) -> Poly:
    """Top product of slant classes ``[Z_k]/c`` on Hilb^k, by polarization.

    Starts from ``([Z_k]/c)^{2k} = (2k)!/(2^k k!) (c^2)^k`` and reads off the
    coefficient of the required monomial in formal weights ``t_c``.
    """
    if len(names) != 2 * k:
        raise UnknownMonomial(names)
    counts: Dict[str, int] = {}
    for n in names:
        counts[n] = counts.get(n, 0) + 1
    distinct = sorted(counts)
    weights = {n: Poly.var(f"__t_{i}") for i, n in enumerate(distinct)}
    square = poly_sum(weights[x] * weights[y] * pairing_symbol(x, y)
                      for x in distinct for y in distinct)
    lead = Fraction(math.factorial(2 * k), 2 ** k * math.factorial(k))
    expanded = square ** k * lead
    for n in distinct:
        expanded = expanded.coefficients_in(f"__t_{distinct.index(n)}").get(counts[n], Poly())
    multinom = math.factorial(2 * k)
    for c in counts.values():
        multinom //= math.factorial(c)
    return expanded / multinom


class _Hilb2(Variety):
    name = "HILB2"
    top_degree = 4

    def degree(self, gen):
        if gen == "L":
            return 1
        if gen == "Xx":
            return 2
        if gen.startswith("Z:"):
            return 1
        raise EngineError("UNKNOWN_GENERATOR", gen)

    def Z(self, cls: SurfaceClass) -> GradedClass:
        return self.linear("Z", cls)

    def evaluate_monomial(self, mono):
        gens = _expand(mono)
        zs = [g[2:] for g in gens if g.startswith("Z:")]
        n_l = gens.count("L")
        n_x = gens.count("Xx")
        shape = (len(zs), n_l, n_x)
        if shape == (4, 0, 0):
            return hilbert_slant_top(2, tuple(sorted(zs)))
        if shape in ((3, 1, 0), (1, 1, 1)):
            return Poly()
        if shape == (2, 2, 0):
            return -2 * pairing_symbol(*zs)
        if shape == (1, 3, 0):
            return pairing_symbol(zs[0], "K")
        if shape == (0, 4, 0):
            return 6 * CHI - Poly.var("KK")
        if shape == (2, 0, 1):
            return pairing_symbol(*zs)
        if shape == (0, 2, 1):
            return Poly.const(-1)
        if shape == (0, 0, 2):
            return Poly.const(1)
        raise UnknownMonomial(mono)


POINT = _Point()
SURFACE = _Surface()
SURFACE_SQUARED = _SurfaceSquared()
HILB2 = _Hilb2()


def evaluate_top(cls: GradedClass) -> Poly:
    """Degree of the top-dimensional part of ``cls``."""
    var = cls.variety
    total = Poly()
    for mono, coeff in cls.component(var.top_degree).terms.items():
        total = total + coeff * var.evaluate_monomial(mono)
    return total


# ---------------------------------------------------------------------------
# bundles


@dataclass(frozen=True)
class Bundle:
    """A class in K-theory known through its total Chern class."""

    variety: Variety
    total_chern: GradedClass
    label: str = ""

    def chern(self, i: int) -> GradedClass:
        return self.total_chern.component(i)

    def dual(self) -> "Bundle":
        parts = [self.chern(i) * ((-1) ** i) for i in range(self.variety.top_degree + 1)]
        total = self.variety.zero()
        for p in parts:
            total = total + p
        return Bundle(self.variety, total, f"({self.label})^v")

    def __add__(self, other: "Bundle") -> "Bundle":
        return Bundle(self.variety, self.total_chern * other.total_chern,
                      f"{self.label} + {other.label}")

    def segre_total(self) -> GradedClass:
        """``1 / c(E)``; the sign convention makes ``s_1 = -c_1``."""
        one = self.variety.one()
        nilp = one - self.total_chern
        total = one
        power = one
        for _ in range(self.variety.top_degree):
            power = power * nilp
            total = total + power
        return total

    def segre(self, i: int) -> GradedClass:
        if i < 0:
            return self.variety.zero()
        return self.segre_total().component(i)

    def swap_factors(self) -> "Bundle":
        """Pull back along the swap of the two factors of X x X."""
        if self.variety is not SURFACE_SQUARED:
            return self

        def rename(g: str) -> str:
            if g.startswith("t1:"):
                return "t2:" + g[3:]
            if g.startswith("t2:"):
                return "t1:" + g[3:]
            return g

        return Bundle(self.variety, self.total_chern.map_generators(rename), f"swap({self.label})")


def base_variety(n1: int, n2: int) -> Variety:
    """Cohomology model of Hilb^{n1}(X) x Hilb^{n2}(X)."""
    key = tuple(sorted((n1, n2)))
    if key == (0, 0):
        return POINT
    if key == (0, 1):
        return SURFACE
    if key == (1, 1):
        return SURFACE_SQUARED
    if key == (0, 2):
        return HILB2
    raise EngineError("HILB_TOO_LARGE", f"Hilb^{n1} x Hilb^{n2} is not modelled")


def chern_of_E(n1: int, n2: int, sign: int = 1, zeta: SurfaceClass = ZETA) -> Bundle:
    """Total Chern class of the extension bundle ``E_{sign*zeta}^{n1,n2}``.

    Only the Chern classes are recorded; the trivial summands making up the
    rank ``ell + h`` do not contribute.
    """
    if sign not in (1, -1):
        raise EngineError("BAD_SIGN", "sign must be +1 or -1")
    z = zeta * sign
    zk = z - KX
    var = base_variety(n1, n2)
    label = f"E[{'+' if sign > 0 else '-'}zeta]^({n1},{n2})"
    half = Fraction(1, 2)
    if (n1, n2) == (0, 0):
        total = var.one()
    elif (n1, n2) == (1, 0):
        total = var.one() + var.h(z)
    elif (n1, n2) == (0, 1):
        total = var.one() + var.h(zk)
    elif (n1, n2) == (2, 0):
        Zz, L, Xx = var.Z(z), var.gen("L"), var.gen("Xx")
        c1 = Zz - L
        c2 = (Zz * Zz - Xx * z.dot(z) - Zz * L) * half
        total = var.one() + c1 + c2
    elif (n1, n2) == (0, 2):
        Zw, L, Xx = var.Z(zk), var.gen("L"), var.gen("Xx")
        c1 = Zw + L
        c2 = (L * Zw + Zw * Zw - Xx * zk.dot(zk)) * half
        total = var.one() + c1 + c2
    elif (n1, n2) == (1, 1):
        a, b = var.t1(z), var.t2(zk)
        D0, jK, jK2 = var.gen("D0"), var.gen("jK"), var.gen("jK2")
        c1 = a + b
        c2 = a * b + D0
        c3 = a * D0 - b * D0 - jK
        c4 = jK2 * Fraction(-1, 2)
        total = var.one() + c1 + c2 + c3 + c4
    else:
        raise EngineError("HILB_TOO_LARGE", f"no Chern data for ({n1},{n2})")
    return Bundle(var, total, label)


def normal_sum(ell: int, k: int, sign: int = 1) -> Bundle:
    """``E_zeta^{ell-k,k} + (E_{-zeta}^{k,ell-k})^v`` on Hilb^{ell-k} x Hilb^k."""
    plus = chern_of_E(ell - k, k, sign)
    minus = chern_of_E(k, ell - k, -sign).swap_factors()
    return plus + minus.dual()


def slant_sum(ell: int, k: int, cls: SurfaceClass = ALPHA) -> GradedClass:
    """``[Z_{ell-k}]/cls + [Z_k]/cls`` on Hilb^{ell-k} x Hilb^k."""
    var = base_variety(ell - k, k)
    if var is POINT:
        return var.zero()
    if var is SURFACE:
        return var.h(cls)
    if var is HILB2:
        return var.Z(cls)
    return var.t1(cls) + var.t2(cls)


def point_slant_sum(ell: int, k: int) -> GradedClass:
    """``[Z_{ell-k}]/x + [Z_k]/x`` for the point class ``x``."""
    var = base_variety(ell - k, k)
    if var is POINT:
        return var.zero()
    if var is SURFACE:
        return var.gen("pt")
    if var is HILB2:
        return var.gen("Xx")
    return var.gen("t1:pt") + var.gen("t2:pt")


def _check_range(ell: int, j: int, top: int):
    if ell < 0 or ell > 2:
        raise EngineError("HILB_TOO_LARGE", f"ell = {ell} is not modelled")
    if not 0 <= j <= top:
        raise EngineError("BAD_INDEX", f"index {j} outside [0, {top}]")


@lru_cache(maxsize=None)
def S_part(ell: int, j: int, k: int, orientation: int = 1) -> Poly:
    """Contribution of ``Hilb^{ell-k} x Hilb^k`` to ``S_j``."""
    _check_range(ell, j, 2 * ell)
    normal = normal_sum(ell, k, orientation)
    integrand = slant_sum(ell, k) ** j * normal.segre(2 * ell - j)
    return evaluate_top(integrand)


def compute_S_j(ell: int, j: int, orientation: int = 1) -> Poly:
    """``sum_k (slant/alpha)^j s_{2 ell - j}(normal sum)`` as a pairing polynomial."""
    _check_range(ell, j, 2 * ell)
    return poly_sum(S_part(ell, j, k, orientation) for k in range(ell + 1))


@lru_cache(maxsize=None)
def T_part(ell: int, j: int, k: int, orientation: int = 1) -> Poly:
    _check_range(ell, j, 2 * ell - 2)
    normal = normal_sum(ell, k, orientation)
    integrand = slant_sum(ell, k) ** j * point_slant_sum(ell, k) * normal.segre(2 * ell - 2 - j)
    return evaluate_top(integrand)


def compute_T_j(ell: int, j: int, orientation: int = 1) -> Poly:
    """Point-class companion of ``S_j`` entering the point-inserted invariant."""
    _check_range(ell, j, 2 * ell - 2)
    return poly_sum(T_part(ell, j, k, orientation) for k in range(ell + 1))


def in_terms_of_a(p: Poly) -> Poly:
    """Rewrite ``AZ = zeta.alpha`` as ``2a``."""
    return p.subs({"AZ": 2 * Poly.var("a")})


# ---------------------------------------------------------------------------
# independent oracle for slant products on Hilb^k


def slant_oracle(k: int, factors: Sequence[Tuple[SurfaceClass, int]]) -> Poly:
    """``prod_i ([Z_k]/c_i)^{e_i}`` on Hilb^k computed on X^k.

    Pulled back to X^k the slant class of ``c`` is ``sum_slots c_slot``; a
    top product survives only if every slot receives exactly two classes, in
    which case it integrates to the product of their pairings.  The map
    ``X^k -> Hilb^k`` has degree ``k!``.
    """
    classes = [c for c, e in factors for _ in range(e)]
    if len(classes) != 2 * k:
        raise EngineError("BAD_DEGREE", f"need {2 * k} factors, got {len(classes)}")
    states: Dict[Tuple[Tuple[int, ...], ...], int] = {tuple(() for _ in range(k)): 1}
    for idx in range(len(classes)):
        nxt: Dict[Tuple[Tuple[int, ...], ...], int] = {}
        for state, mult in states.items():
            for slot in range(k):
                if len(state[slot]) >= 2:
                    continue
                new = list(state)
                new[slot] = state[slot] + (idx,)
                key = tuple(new)
                nxt[key] = nxt.get(key, 0) + mult
        states = nxt
    total = Poly()
    for state, mult in states.items():
        term = Poly.const(mult)
        for a, b in state:
            term = term * classes[a].dot(classes[b])
        total = total + term
    return total / math.factorial(k)
