"""Exact sparse multivariate polynomials with rational coefficients.

Pairing polynomials (expressions in ``AA``, ``AZ``, ``ZZ``, ...) and the
coefficients carried by graded cohomology classes are both instances of
:class:`Poly`.  Variables are plain strings; a monomial is a sorted tuple of
``(name, exponent)`` pairs, so two equal polynomials always have identical
term dictionaries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

Monomial = Tuple[Tuple[str, int], ...]
Scalar = Union[int, Fraction]

# Preferred display order; unknown names sort alphabetically after these.
_ORDER = {name: i for i, name in enumerate(
    ["a", "d", "AA", "AZ", "AK", "ZZ", "ZK", "KK", "CHI"])}


def _name_key(name: str) -> tuple:
    return (_ORDER.get(name, len(_ORDER)), name)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for name, e in m2:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items(), key=lambda item: _name_key(item[0])))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    """Polynomial over the rationals in named commuting variables."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = Fraction(coeff)
        self.terms = clean

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, value: Scalar) -> "Poly":
        return cls({(): value})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        if power == 0:
            return cls.const(1)
        return cls({((name, power),): 1})

    @classmethod
    def coerce(cls, value: "Poly | Scalar") -> "Poly":
        if isinstance(value, Poly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Poly")

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, 0) + coeff
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # inspection -------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"polynomial {self} is not constant")
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        return {name for m in self.terms for name, _ in m}

    def degree(self, name: str | None = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(_mono_degree(m) for m in self.terms)
        return max(dict(m).get(name, 0) for m in self.terms)

    def coefficients_in(self, name: str) -> Dict[int, "Poly"]:
        """Split into ``{power: coefficient}`` with respect to one variable."""
        out: Dict[int, Dict[Monomial, Fraction]] = {}
        for mono, coeff in self.terms.items():
            exps = dict(mono)
            power = exps.pop(name, 0)
            rest = tuple(sorted(exps.items(), key=lambda it: _name_key(it[0])))
            bucket = out.setdefault(power, {})
            bucket[rest] = bucket.get(rest, 0) + coeff
        return {k: Poly(v) for k, v in out.items()}

    def subs(self, values: Mapping[str, "Poly | Scalar"]) -> "Poly":
        """Substitute polynomials or numbers for variables."""
        values = {k: Poly.coerce(v) for k, v in values.items()}
        result = Poly()
        cache: Dict[Tuple[str, int], Poly] = {}
        for mono, coeff in self.terms.items():
            term = Poly.const(coeff)
            kept: list[Tuple[str, int]] = []
            for name, e in mono:
                if name in values:
                    key = (name, e)
                    if key not in cache:
                        cache[key] = values[name] ** e
                    term = term * cache[key]
                else:
                    kept.append((name, e))
            if kept:
                term = term * Poly({tuple(kept): 1})
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        return self.subs(values).constant_value()

    # display ----------------------------------------------------------
    def sorted_terms(self) -> list[Tuple[Monomial, Fraction]]:
        def key(item):
            mono, _ = item
            return (-_mono_degree(mono),
                    [(_name_key(n), -e) for n, e in mono])
        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono, coeff in self.sorted_terms():
            body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in mono)
            mag = abs(coeff)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, text))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


def var(name: str) -> Poly:
    return Poly.var(name)


def poly_sum(items: Iterable["Poly | Scalar"]) -> Poly:
    total = Poly()
    for item in items:
        total = total + item
    return total


def falling_binomial(n: "int | Poly", j: int) -> "Fraction | Poly":
    """``n(n-1)...(n-j+1)/j!``; accepts a symbolic ``n``."""
    if j < 0:
        return Fraction(0)
    num: "Fraction | Poly" = Fraction(1)
    for i in range(j):
        num = num * (n - i)
    den = 1
    for i in range(2, j + 1):
        den *= i
    if isinstance(num, Poly):
        return num / den
    return Fraction(num) / den
