"""Hypothesis strategies for random surfaces, wall types and segments."""

import itertools
import math

from hypothesis import assume, strategies as st

from wallcross.lattice import blowup_p2, hirzebruch, is_ample_candidate
from wallcross.walls import WallType

SURFACES = [blowup_p2(1), blowup_p2(2), hirzebruch(0)]


@st.composite
def surfaces(draw):
    return draw(st.sampled_from(SURFACES))


@st.composite
def classes(draw, surface, bound=6):
    return surface.divisor([draw(st.integers(-bound, bound)) for _ in range(surface.rank)])


@st.composite
def wall_types(draw, surface, max_abs_p=12):
    delta = draw(classes(surface, 3))
    sq = delta.square()
    lo, hi = math.ceil((sq + 3) / 4), math.floor((sq + max_abs_p) / 4)
    assume(lo <= hi)
    return WallType(delta, draw(st.integers(lo, hi)))


def _ample_box(surface, bound=7):
    axis = range(-bound, bound + 1)
    return [x for x in map(surface.divisor, itertools.product(axis, repeat=surface.rank))
            if is_ample_candidate(x)]


AMPLE = {s.name: _ample_box(s) for s in SURFACES}


def ample_classes(surface):
    return st.sampled_from(AMPLE[surface.name])


@st.composite
def instances(draw):
    surface = draw(surfaces())
    return surface, draw(wall_types(surface)), draw(ample_classes(surface)), draw(ample_classes(surface))
