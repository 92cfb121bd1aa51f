"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines appear in
the terminal summary) or as a script: ``python3 tests/test_acceptance.py``.
"""

import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import record_criterion  # noqa: E402
from wallcross import cohomology  # noqa: E402
from wallcross.cohomology import (ALPHA, SurfaceClass, chern_of_E, compute_S_j, compute_T_j,  # noqa: E402
                                  evaluate_top, in_terms_of_a, slant_oracle)
from wallcross.flips import critical_values, flip_schedule, k_limits  # noqa: E402
from wallcross.lattice import blowup_p2  # noqa: E402
from wallcross.poly import Poly, var  # noqa: E402
from wallcross.transition import (MU, NU, delta_mu_explicit, delta_mu_general, delta_nu_explicit,  # noqa: E402
                                  delta_nu_general, donaldson_difference, leading_term, on_wall,
                                  sign_identity_holds)
from wallcross.verification import random_instance  # noqa: E402
from wallcross.walls import (WallError, WallType, enumerate_walls, enumerate_walls_box,  # noqa: E402
                             proven_radius, wall_class_data, wall_signature)

ZZ, ZK, KK, CHI, AA, a, d = (var(n) for n in ("ZZ", "ZK", "KK", "CHI", "AA", "a", "d"))


def _eq(name, got, want):
    return (name, got == want, str(got) if got != want else "ok")


def _finish(number, title, results):
    record_criterion(number, title, results)
    bad = [r for r in results if not r[1]]
    assert not bad, "; ".join(f"{n}: {i}" for n, _, i in bad)


def _clear_engine_caches():
    for fn in (cohomology.S_part, cohomology.T_part, cohomology.hilbert_slant_top):
        fn.cache_clear()


# -- criterion 1 -------------------------------------------------------------

def criterion_1():
    _clear_engine_caches()
    start = time.perf_counter()
    S = lambda ell, j: in_terms_of_a(compute_S_j(ell, j)).subs({"CHI": 1})
    out = [
        _eq("ell=1 j=0", S(1, 0), 6 * ZZ + 2 * KK),
        _eq("ell=2 j=2", S(2, 2), 64 * a * a + (12 * ZZ + 4 * KK - 20) * AA),
        _eq("ell=2 j=1", S(2, 1), -(48 * ZZ + 16 * KK - 120) * a),
        _eq("ell=2 j=0", S(2, 0), 18 * ZZ * ZZ + (14 * KK - 105) * ZZ + 2 * KK * KK - 50 * KK + 96),
    ]
    for ell in range(3):
        c = math.factorial(2 * ell) // math.factorial(ell)
        out.append(_eq(f"ell={ell} j={2 * ell}", S(ell, 2 * ell), AA ** ell * c))
        if ell:
            out.append(_eq(f"ell={ell} j={2 * ell - 1}", S(ell, 2 * ell - 1), AA ** (ell - 1) * a * (-4 * c)))
    elapsed = time.perf_counter() - start
    out.append(("runtime < 5 s", elapsed < 5, f"{elapsed:.2f} s"))
    return out


def test_criterion_1_engine_S_values():
    _finish(1, "engine S_j values", criterion_1())


# -- criterion 2 -------------------------------------------------------------

def criterion_2():
    s4 = lambda n1, n2: evaluate_top(chern_of_E(n1, n2).segre_total())
    w2, wk = ZZ - 2 * ZK + KK, KK - ZK
    return [
        _eq("s4(E^(2,0))", s4(2, 0), ZZ * ZZ / 2 - 5 * ZZ - ZK * Fraction(5, 2) + 6 * CHI - KK),
        _eq("s4(E^(0,2))", s4(0, 2), w2 * w2 / 2 - 5 * w2 - wk * Fraction(5, 2) + 6 * CHI - KK),
        _eq("s4(E^(1,1))", s4(1, 1).subs({"CHI": 1}), 12 * ZK - 12 * ZZ - 3 * KK),
    ]


def test_criterion_2_segre_endpoints():
    _finish(2, "top Segre classes of the extension bundles", criterion_2())


# -- criterion 3 -------------------------------------------------------------

def criterion_3():
    out = [
        _eq("T_0", compute_T_j(2, 0).subs({"CHI": 1}), 12 * ZZ + 4 * KK - 10),
        _eq("T_1", in_terms_of_a(compute_T_j(2, 1)), -16 * a),
        _eq("T_2", compute_T_j(2, 2), 4 * AA),
    ]
    for kind, gen, exp in ((MU, delta_mu_general, delta_mu_explicit), (NU, delta_nu_general, delta_nu_explicit)):
        for ell in (1, 2):
            for h in (0, 1):
                g, e = on_wall(gen(ell, d, h)), exp(ell, d, h)
                for i, (gc, ec) in enumerate(zip(g.coeffs, e.coeffs)):
                    out.append(_eq(f"{kind} ell={ell} h={h} coefficient {i} symbolic", gc, ec))
                bad = [(dv, kk) for dv in range(5, 13) for kk in (-1, 5, 8, 9)
                       if g.specialize({"d": dv, "KK": kk}) != exp(ell, dv, h, kk)]
                out.append((f"{kind} ell={ell} h={h} at 8 values of d", not bad, f"differs at {bad[:3]}"))
    return out


def test_criterion_3_two_routes_agree():
    _finish(3, "general route equals closed formulas", criterion_3())


# -- criterion 4 -------------------------------------------------------------

def criterion_4():
    beta = SurfaceClass.named("beta")
    aa, ab, bb = ALPHA.dot(ALPHA), ALPHA.dot(beta), beta.dot(beta)
    out = []
    for k in range(1, 5):
        lead = Fraction(math.factorial(2 * k), 2 ** k * math.factorial(k))
        out.append(_eq(f"k={k} first", slant_oracle(k, [(ALPHA, 2 * k)]), aa ** k * lead))
        out.append(_eq(f"k={k} second", slant_oracle(k, [(ALPHA, 2 * k - 1), (beta, 1)]), aa ** (k - 1) * ab * lead))
        first = Fraction(math.factorial(2 * k - 2), 2 ** (k - 1) * math.factorial(k - 1))
        rhs = aa ** (k - 1) * bb * first
        if k >= 2:
            rhs = rhs + aa ** (k - 2) * ab * ab * Fraction(math.factorial(2 * k - 2),
                                                           2 ** (k - 2) * math.factorial(k - 2))
        out.append(_eq(f"k={k} third", slant_oracle(k, [(ALPHA, 2 * k - 2), (beta, 2)]), rhs))
    out.append(_eq("k=3 coefficient", slant_oracle(3, [(ALPHA, 6)]), aa ** 3 * 15))
    out.append(_eq("k=4 coefficient", slant_oracle(4, [(ALPHA, 8)]), aa ** 4 * 105))
    return out


def test_criterion_4_slant_identities():
    _finish(4, "slant product identities for k <= 4", criterion_4())


# -- criterion 5 -------------------------------------------------------------

def criterion_5():
    points = [(dv, kk, h) for dv in range(4, 14) for kk in (-1, 5, 8) for h in (0, 1)]
    bad = []
    for dv, kk, h in points:
        for ell in range(3):
            if 2 * ell > dv:
                continue
            for kind, gen, exp in ((MU, delta_mu_general, delta_mu_explicit),
                                   (NU, delta_nu_general, delta_nu_explicit)):
                lead = leading_term(ell, dv, h, kind).coeffs[ell]
                n = dv if kind == MU else dv - 2
                # d!/(ell!(d - 2 ell)!), zero once d - 2 ell is negative
                want = Fraction(math.factorial(n), math.factorial(ell) * math.factorial(n - 2 * ell)) \
                    if n >= 2 * ell else Fraction(0)
                want *= (-1) ** ((h + ell) % 2) if kind == MU else Fraction((-1) ** ((h + ell - 1) % 2), 4)
                general = on_wall(gen(ell, d, h)).specialize({"d": dv, "KK": kk}).coeffs[ell]
                explicit = exp(ell, dv, h, kk).coeffs[ell]
                if not (lead == general == explicit == Poly.const(want)):
                    bad.append((kind, ell, dv, kk, h))
    return [(f"grid of {len(points)} (d, K^2, h) points", len(points) >= 50 and not bad, str(bad[:4]))]


def test_criterion_5_leading_terms():
    _finish(5, "leading-term truncations", criterion_5())


# -- criterion 6 -------------------------------------------------------------

def criterion_6():
    start = time.perf_counter()
    X = blowup_p2(1)
    wt = WallType(X.divisor((1, 0)), 2)
    Lm, Lp = X.divisor((3, -2)), X.divisor((3, -1))
    walls = enumerate_walls(Lm, Lp, wt)
    out = [("exactly one wall", len(walls) == 1 and len(walls[0].classes) == 1, str(wall_signature(walls)))]
    c = walls[0].classes[0]
    out.append(_eq("zeta", c.zeta.coords, (1, -2)))
    out.append(_eq("t", walls[0].crossing_t, Fraction(1, 2)))
    out.append(_eq("(ell, h, N_zeta, N_-zeta)", (c.ell, c.h, c.n_zeta, c.n_neg), (1, 0, 0, 1)))
    out.append(_eq("N_zeta + N_-zeta + 2 ell", c.n_zeta + c.n_neg + 2 * c.ell, -wt.p - 4))
    out.append(_eq("total", donaldson_difference(Lm, Lp, wt, X.divisor((1, 0))).total, Fraction(39, 8)))
    elapsed = time.perf_counter() - start
    out.append(("runtime < 1 s", elapsed < 1, f"{elapsed:.2f} s"))
    return out


def test_criterion_6_running_example():
    _finish(6, "Bl1P2 running example", criterion_6())


# -- criterion 7 -------------------------------------------------------------

def criterion_7(count=100, radius=25, seed=7):
    rng = random.Random(seed)
    done = skipped = found = 0
    bad = []
    while done < count:
        surf, wt, Lm, Lp = random_instance(rng)
        try:
            walls = enumerate_walls(Lm, Lp, wt)
        except WallError:
            continue
        if proven_radius(Lm, Lp, wt) > radius:
            skipped += 1
            continue
        found += len(walls)
        if wall_signature(walls) != wall_signature(enumerate_walls_box(Lm, Lp, wt, radius)):
            bad.append((surf.name, wt.delta.coords, wt.c, Lm.coords, Lp.coords))
        done += 1
    label = f"{count} instances, {found} walls, box radius {radius}, {skipped} beyond the radius skipped"
    return [(label, not bad and found > 0, str(bad[:3]))]


def test_criterion_7_enumeration_completeness():
    _finish(7, "enumeration equals box scan", criterion_7())


# -- criterion 8 -------------------------------------------------------------

def _random_wall_class(rng):
    """A random surface, wall type and wall class, built so every draw is valid."""
    while True:
        surf, _, _, _ = random_instance(rng)
        delta = surf.divisor([rng.randint(-3, 3) for _ in range(surf.rank)])
        zeta = delta + surf.divisor([rng.randint(-3, 3) for _ in range(surf.rank)]) * 2
        if zeta.square() < 0:
            low = max(delta.square() - zeta.square(), delta.square() + 3)
            return surf, WallType(delta, -(-low // 4) + rng.randint(0, 3)), zeta


def criterion_8(cases=1000, seed=8):
    rng = random.Random(seed)
    fails = {}

    bad = done = 0
    while done < cases:
        surf, wt, Lm, Lp = random_instance(rng)
        try:
            fwd = enumerate_walls(Lm, Lp, wt)
        except WallError:
            continue
        back = enumerate_walls(Lp, Lm, wt)
        a1 = sorted((1 - w.crossing_t, tuple(sorted((-c.zeta).coords for c in w.classes))) for w in fwd)
        a2 = sorted((w.crossing_t, tuple(sorted(c.zeta.coords for c in w.classes))) for w in back)
        bad += a1 != a2
        done += 1
    fails["crossing antisymmetry"] = bad

    h_bad = ell_bad = sign_bad = 0
    for _ in range(cases):
        surf, wt, zeta = _random_wall_class(rng)
        c, m = wall_class_data(zeta, wt), wall_class_data(-zeta, wt)
        h_bad += c.h + m.h != -zeta.square() - 2
        ell_bad += Fraction(zeta.square() - wt.p, 4) != c.ell or c.ell < 0
        sign_bad += not sign_identity_holds(wt.delta, zeta)
    fails["h(zeta)+h(-zeta) = -zeta^2-2"] = h_bad
    fails["ell integral and non-negative"] = ell_bad
    fails["sign identity"] = sign_bad

    parity_bad = 0
    for _ in range(cases):
        surf = random_instance(rng)[0]
        x = surf.divisor([rng.randint(-20, 20) for _ in range(surf.rank)])
        parity_bad += (x.square() - x.dot(surf.K)) % 2 != 0
    fails["characteristic K parity"] = parity_bad

    shape_bad = 0
    for _ in range(cases):
        ell, dv, h, kk = rng.randint(0, 2), rng.randint(0, 40), rng.randint(-2, 10), rng.randint(-8, 9)
        gen = rng.choice((delta_mu_general, delta_nu_general))
        p = gen(ell, dv, h).specialize({"KK": kk})
        shape_bad += not (p.shape_ok() and all(q.variables() <= {"ZZ", "CHI"} for q in p.coeffs))
    fails["coefficient shape"] = shape_bad
    return [(f"{name} ({cases} cases)", n == 0, f"{n} failures") for name, n in fails.items()]


def test_criterion_8_property_suites():
    _finish(8, "randomized property suites", criterion_8())


# -- criterion 9 -------------------------------------------------------------

def criterion_9(count=200, seed=9):
    rng = random.Random(seed)
    bad_stage, stages, done = [], 0, 0
    X = blowup_p2(1)
    fixed = [(WallType(X.divisor((1, 0)), 2), X.divisor((3, -2)), X.divisor((3, -1)))]
    while done < count:
        if fixed:
            wt, Lm, Lp = fixed.pop()
        else:
            _, wt, Lm, Lp = random_instance(rng)
        try:
            walls = enumerate_walls(Lm, Lp, wt)
        except WallError:
            continue
        done += 1
        for w in walls:
            for c in w.classes:
                if c.degenerate or c.degenerate_neg:
                    continue
                for s in flip_schedule(c, wt):
                    stages += 1
                    if s.center_dim != 3 * c.ell + c.h - 1 or s.center_dim + c.n_neg + 1 != wt.d:
                        bad_stage.append((c.zeta.coords, s))
    out = [(f"stage dimensions ({stages} stages on {count} segments)", not bad_stage and stages > 0,
            str(bad_stage[:2]))]
    out.append(_eq("ell=2 critical values", [cv.t for cv in critical_values([(1, 2)])], [-4, -2, 0, 2]))
    step_bad = []
    for multiples in ([(1, 2)], [(1, 0)], [(1, 1), (2, 1)], [(1, 2), (3, 1), (Fraction(1, 2), 3)]):
        for cv in critical_values(multiples):
            left, right = k_limits(cv.t, multiples)
            for i, (_, ell) in enumerate(multiples):
                clamp = lambda k: min(max(k, -1), ell)
                ok = left[i] == right[i] - 1 if i in cv.indices else clamp(left[i]) == clamp(right[i])
                if not ok:
                    step_bad.append((multiples, cv.t, i))
    out.append(("step property at every critical t", not step_bad, str(step_bad[:3])))
    return out


def test_criterion_9_flip_ledger():
    _finish(9, "flip ledger", criterion_9())


if __name__ == "__main__":
    failures = 0
    for n in range(1, 10):
        fn = globals()[f"criterion_{n}"]
        title = next(v for k, v in globals().items() if k.startswith(f"test_criterion_{n}_")).__name__
        line = record_criterion(n, title.split("_", 3)[3].replace("_", " "), fn())
        failures += " FAIL" in line
    sys.exit(1 if failures else 0)
