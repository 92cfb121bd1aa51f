"""Self-verification suite run by ``wallcross verify``."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .cohomology import (ALPHA, HILB2, KX, ZETA, SurfaceClass, chern_of_E, compute_S_j,
                         compute_T_j, evaluate_top, hilbert_slant_top, in_terms_of_a, slant_oracle)
from .flips import critical_values, flip_schedule, k_limits, stage_is_consistent
from .lattice import blowup_p2, hirzebruch, is_ample_candidate
from .poly import Poly
from .transition import (delta_mu_explicit, delta_mu_general, delta_nu_explicit, delta_nu_general,
                         donaldson_difference, leading_term, on_wall, sign_identity_holds)
from .walls import WallType, enumerate_walls, enumerate_walls_box, proven_radius, wall_signature


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    lhs: str
    rhs: str
    group: str = "identity"


def _p(text: str) -> Poly:
    """Parse ``c*X*Y^2 + ...`` written with the symbols used here."""
    from .poly import var
    env = {n: var(n) for n in ("a", "d", "AA", "AZ", "AK", "ZZ", "ZK", "KK", "CHI")}
    return Poly.coerce(eval(text.replace("^", "**"), {"__builtins__": {}}, env))  # noqa: S307


def _cmp(name: str, lhs: Poly, rhs: Poly, group: str = "identity") -> Check:
    return Check(name, lhs == rhs, str(lhs), str(rhs), group)


# reference closed forms, written with a = zeta.alpha/2 and chi(O_X) = 1
REFERENCE_S = {
    (1, 0): "6*ZZ + 2*KK",
    (2, 2): "64*a^2 + (12*ZZ + 4*KK - 20)*AA",
    (2, 1): "-(48*ZZ + 16*KK - 120)*a",
    (2, 0): "18*ZZ^2 + (14*KK - 105)*ZZ + 2*KK^2 - 50*KK + 96",
}
REFERENCE_T = {(2, 0): "12*ZZ + 4*KK - 10", (2, 1): "-16*a", (2, 2): "4*AA", (1, 0): "2"}
REFERENCE_S4 = {
    (2, 0): "ZZ^2/2 - 5*ZZ - 5*ZK/2 + 6*CHI - KK",
    (0, 2): "(ZZ - 2*ZK + KK)^2/2 - 5*(ZZ - 2*ZK + KK) - 5*(KK - ZK)/2 + 6*CHI - KK",
    (1, 1): "12*ZK - 12*ZZ - 3*KK",
}


def closed_top_S(ell: int) -> tuple[Poly, Poly]:
    """``S_{2 ell}`` and ``S_{2 ell - 1}`` in closed form."""
    c = Fraction(math.factorial(2 * ell), math.factorial(ell))
    top = Poly.var("AA", ell) * c
    sub = Poly.var("AA", ell - 1) * Poly.var("a") * (-4 * c) if ell >= 1 else Poly()
    return top, sub


def reference_checks() -> list[Check]:
    out = []
    for (ell, j), text in REFERENCE_S.items():
        got = in_terms_of_a(compute_S_j(ell, j)).subs({"CHI": 1})
        out.append(_cmp(f"S[ell={ell},j={j}] reference", got, _p(text), "reference"))
    for (ell, j), text in REFERENCE_T.items():
        got = in_terms_of_a(compute_T_j(ell, j)).subs({"CHI": 1})
        out.append(_cmp(f"T[ell={ell},j={j}] reference", got, _p(text), "reference"))
    for (n1, n2), text in REFERENCE_S4.items():
        got = evaluate_top(chern_of_E(n1, n2).segre_total())
        want = _p(text)
        if "CHI" not in want.variables():
            got = got.subs({"CHI": 1})
        out.append(_cmp(f"s4(E^({n1},{n2})) reference", got, want, "reference"))
    d = Poly.var("d")
    for ell in (1, 2):
        for h in (0, 1):
            for kind, gen, exp in (("mu", delta_mu_general, delta_mu_explicit),
                                   ("nu", delta_nu_general, delta_nu_explicit)):
                g = on_wall(gen(ell, d, h))
                e = exp(ell, d, h)
                out.append(Check(f"{kind} general == closed form (ell={ell}, h={h})", g == e,
                                 "; ".join(map(str, g.coeffs)), "; ".join(map(str, e.coeffs)), "reference"))
    return out


def engine_checks() -> list[Check]:
    out = []
    for ell in range(3):
        top, sub = closed_top_S(ell)
        out.append(_cmp(f"S[ell={ell},j={2 * ell}] closed form", in_terms_of_a(compute_S_j(ell, 2 * ell)), top))
        if ell:
            out.append(_cmp(f"S[ell={ell},j={2 * ell - 1}] closed form",
                            in_terms_of_a(compute_S_j(ell, 2 * ell - 1)), sub))
    beta = SurfaceClass.named("beta")
    for k in range(1, 5):
        lead = Fraction(math.factorial(2 * k), 2 ** k * math.factorial(k))
        aa, ab, bb = ALPHA.dot(ALPHA), ALPHA.dot(beta), beta.dot(beta)
        out.append(_cmp(f"slant oracle (Z/a)^{2 * k}, k={k}", slant_oracle(k, [(ALPHA, 2 * k)]), aa ** k * lead))
        out.append(_cmp(f"slant oracle (Z/a)^{2 * k - 1}(Z/b), k={k}",
                        slant_oracle(k, [(ALPHA, 2 * k - 1), (beta, 1)]), aa ** (k - 1) * ab * lead))
        first = Fraction(math.factorial(2 * k - 2), 2 ** (k - 1) * math.factorial(k - 1))
        second = Fraction(math.factorial(2 * k - 2), 2 ** (k - 2) * math.factorial(k - 2)) if k >= 2 else 0
        rhs = aa ** (k - 1) * bb * first + (aa ** (k - 2) * ab * ab * second if k >= 2 else Poly())
        out.append(_cmp(f"slant oracle (Z/a)^{2 * k - 2}(Z/b)^2, k={k}",
                        slant_oracle(k, [(ALPHA, 2 * k - 2), (beta, 2)]), rhs))
    names = ("alpha", "zeta", "K")
    for combo in _multisets(names, 4):
        classes = [SurfaceClass.named(n) for n in combo]
        counts = [(c, combo.count(n)) for n, c in zip(dict.fromkeys(combo), [SurfaceClass.named(n) for n in dict.fromkeys(combo)])]
        out.append(_cmp(f"Hilb^2 polarization {combo}", hilbert_slant_top(2, tuple(sorted(combo))),
                        slant_oracle(2, counts)))
    d = Poly.var("d")
    for ell in range(3):
        for kind, gen in (("mu", delta_mu_general), ("nu", delta_nu_general)):
            g = gen(ell, d, 0)
            out.append(Check(f"{kind} coefficients free of ZK/AK/alpha (ell={ell})", g.shape_ok(),
                             "; ".join(map(str, g.coeffs)), "ZZ, KK, CHI, d only"))
            lead = leading_term(ell, d, 0, kind)
            out.append(_cmp(f"{kind} leading coefficient (ell={ell})", on_wall(g).coeffs[ell], lead.coeffs[ell]))
        if ell <= 1:
            for kind, gen, exp in (("mu", delta_mu_general, delta_mu_explicit),
                                   ("nu", delta_nu_general, delta_nu_explicit)):
                g, e = on_wall(gen(ell, d, 0)), exp(ell, d, 0)
                out.append(Check(f"{kind} general == closed form (ell={ell})", g == e,
                                 "; ".join(map(str, g.coeffs)), "; ".join(map(str, e.coeffs))))
    return out


def _multisets(names, size):
    import itertools
    return [list(c) for c in itertools.combinations_with_replacement(names, size)]


def running_example_checks() -> list[Check]:
    X = blowup_p2(1)
    wt = WallType(X.divisor((1, 0)), 2)
    Lm, Lp = X.divisor((3, -2)), X.divisor((3, -1))
    walls = enumerate_walls(Lm, Lp, wt)
    out = [Check("running example: one wall at t=1/2 with zeta=(1,-2)",
                 [(w.crossing_t, [c.zeta.coords for c in w.classes]) for w in walls] == [(Fraction(1, 2), [(1, -2)])],
                 str(wall_signature(walls)), "[(1/2, ((1, -2),))]")]
    if walls:
        c = walls[0].classes[0]
        out.append(Check("running example: ell, h, N_zeta, N_-zeta", (c.ell, c.h, c.n_zeta, c.n_neg) == (1, 0, 0, 1),
                         str((c.ell, c.h, c.n_zeta, c.n_neg)), "(1, 0, 0, 1)"))
    report = donaldson_difference(Lm, Lp, wt, X.divisor((1, 0)))
    out.append(Check("running example: total", report.total == Fraction(39, 8), str(report.total), "39/8"))
    back = donaldson_difference(Lp, Lm, wt, X.divisor((1, 0)))
    out.append(Check("running example: reversed segment negates", back.total == -report.total,
                     str(back.total), str(-report.total)))
    return out


def random_instance(rng: random.Random, max_abs_p: int = 12):
    """A random wall type and ample segment on Bl1P2, Bl2P2 or F0."""
    while True:
        surf = rng.choice([blowup_p2(1), blowup_p2(2), hirzebruch(0)])
        n = surf.rank
        delta = surf.divisor([rng.randint(-3, 3) for _ in range(n)])
        sq = delta.square()
        lo = math.ceil((sq + 3) / 4)
        hi = math.floor((sq + max_abs_p) / 4)
        if lo > hi:
            continue
        c = rng.randint(lo, hi)
        try:
            wt = WallType(delta, c)
        except ValueError:
            continue
        ends = []
        while len(ends) < 2:
            cand = surf.divisor([rng.randint(-6, 6) for _ in range(n)])
            if is_ample_candidate(cand):
                ends.append(cand)
        return surf, wt, ends[0], ends[1]


def enumeration_checks(rng: random.Random, instances: int, radius: int) -> list[Check]:
    mismatches = []
    done = 0
    while done < instances:
        surf, wt, Lm, Lp = random_instance(rng)
        if proven_radius(Lm, Lp, wt) > radius:
            continue
        try:
            fast = wall_signature(enumerate_walls(Lm, Lp, wt))
        except ValueError:
            continue
        box = wall_signature(enumerate_walls_box(Lm, Lp, wt, radius))
        done += 1
        if fast != box:
            mismatches.append((surf.name, wt.delta.coords, wt.c, Lm.coords, Lp.coords))
    return [Check(f"enumeration == box oracle (radius {radius}, {instances} instances)", not mismatches,
                  str(mismatches[:3]), "[]")]


def property_checks(rng: random.Random, cases: int) -> list[Check]:
    bad_sign = bad_h = bad_parity = bad_anti = 0
    tried = 0
    while tried < cases:
        surf, wt, Lm, Lp = random_instance(rng)
        x = surf.divisor([rng.randint(-9, 9) for _ in range(surf.rank)])
        if (x.square() - x.dot(surf.K)) % 2:
            bad_parity += 1
        zeta = surf.divisor([rng.randint(-5, 5) for _ in range(surf.rank)])
        if zeta.square() < 0:
            h = (zeta.dot(surf.K) - zeta.square()) // 2 - 1
            h_neg = ((-zeta).dot(surf.K) - zeta.square()) // 2 - 1
            if h + h_neg != -zeta.square() - 2:
                bad_h += 1
            if not sign_identity_holds(wt.delta, zeta):
                bad_sign += 1
        tried += 1
    return [
        Check(f"x^2 = x.K mod 2 ({cases} cases)", bad_parity == 0, str(bad_parity), "0"),
        Check(f"h(zeta) + h(-zeta) = -zeta^2 - 2 ({cases} cases)", bad_h == 0, str(bad_h), "0"),
        Check(f"sign identity ({cases} cases)", bad_sign == 0, str(bad_sign), "0"),
    ]


def flip_checks() -> list[Check]:
    multiples = [(1, 2)]
    crit = [cv.t for cv in critical_values(multiples)]
    out = [Check("critical values for ell=2", crit == [-4, -2, 0, 2], str(crit), "[-4, -2, 0, 2]")]
    ok = all(k_limits(cv.t, multiples)[0][0] == k_limits(cv.t, multiples)[1][0] - 1 for cv in critical_values(multiples))
    out.append(Check("k(t-eps) = k(t+eps) - 1 at critical t", ok, str(ok), "True"))
    X = blowup_p2(1)
    wt = WallType(X.divisor((1, 0)), 2)
    walls = enumerate_walls(X.divisor((3, -2)), X.divisor((3, -1)), wt)
    consistent = all(stage_is_consistent(s) and s.center_dim == 3 * c.ell + c.h - 1
                     for w in walls for c in w.classes for s in flip_schedule(c, wt))
    out.append(Check("flip schedule dimensions (running example)", consistent, str(consistent), "True"))
    return out


def run_all(seed: int = 0, include_reference: bool = True, oracle_radius: int = 25,
            instances: int = 100, cases: int = 1000) -> list[Check]:
    rng = random.Random(seed)
    checks: list[Check] = []
    checks += engine_checks()
    checks += running_example_checks()
    checks += flip_checks()
    checks += property_checks(rng, cases)
    if oracle_radius:
        checks += enumeration_checks(rng, instances, oracle_radius)
    if include_reference:
        checks += reference_checks()
    return checks
