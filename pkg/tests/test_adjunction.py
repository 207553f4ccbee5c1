import random

import pytest

from oracles import count_natural_transformations
from stratsheaf.adjunction import LEFT, RIGHT, proper_base_change_check, verify_adjunction
from stratsheaf.generate import random_downset, random_functor, random_poset, random_upset
from stratsheaf.poset import MonotoneMap, Poset
from stratsheaf.report import FINDING, PASS
from stratsheaf.sheaf import SET, VECT, SheafFunctor, extension_open, pullback, pushforward_closed


def _pair(rng, side, kind):
    Q = random_poset(rng, rng.randint(1, 4), 0.4)
    sub = random_downset(rng, Q) if side == RIGHT else random_upset(rng, Q)
    P = Q.subposet(sub)
    return random_functor(rng, P, kind, 2), random_functor(rng, Q, kind, 2)


@pytest.mark.parametrize("side", [LEFT, RIGHT])
@pytest.mark.parametrize("kind", [SET, VECT])
def test_adjunctions_hold_on_random_pairs(side, kind):
    rng = random.Random(f"{side}/{kind}")
    for _ in range(40):
        F, G = _pair(rng, side, kind)
        assert verify_adjunction(side, F, G).verdict == PASS


def test_right_hom_counts_match_brute_force():
    rng = random.Random(40)
    for _ in range(30):
        F, G = _pair(rng, RIGHT, SET)
        inc = MonotoneMap.inclusion(F.base, G.base)
        rep = verify_adjunction(RIGHT, F, G)
        n = count_natural_transformations(pullback(G, inc), F)
        assert rep.details["left"] == rep.details["right"] == n
        assert count_natural_transformations(G, pushforward_closed(F, G.base)) == n


def test_left_hom_counts_match_brute_force():
    rng = random.Random(41)
    for _ in range(30):
        F, G = _pair(rng, LEFT, SET)
        inc = MonotoneMap.inclusion(F.base, G.base)
        n = count_natural_transformations(F, pullback(G, inc))
        assert count_natural_transformations(extension_open(F, G.base), G) == n


def test_unknown_side():
    F = SheafFunctor(Poset(["0"]), SET, {"0": ["x"]}, {})
    with pytest.raises(ValueError):
        verify_adjunction("middle", F, F)


def test_base_change_inside_and_outside():
    F = SheafFunctor(Poset(["0"]), SET, {"0": ["x", "y"]}, {})
    Q = Poset.chain(2)
    assert proper_base_change_check(F, Q, "0").verdict == PASS
    rep = proper_base_change_check(F, Q, "1")
    assert rep.verdict == FINDING
    assert (rep.witness["stalk_size"], rep.witness["initial_size"]) == (1, 0)
    V = SheafFunctor(Poset(["0"]), VECT, {"0": 2}, {})
    assert proper_base_change_check(V, Q, "1").verdict == PASS
