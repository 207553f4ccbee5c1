import random

import pytest

from stratsheaf.errors import NotLeftFibration
from stratsheaf.fibration import (ElementFibration, fibration_roundtrip_iso, functor_roundtrip_iso,
                                  grothendieck, left_fibration_failure, straighten)
from stratsheaf.generate import random_functor, random_poset
from stratsheaf.poset import MonotoneMap, Poset
from stratsheaf.sheaf import SET, VECT, SheafFunctor, is_natural_iso

EDGE = Poset.chain(2)


def test_elements_of_a_two_to_one_map():
    F = SheafFunctor(EDGE, SET, {"0": ["x", "y"], "1": ["z"]}, {("0", "1"): {"x": "z", "y": "z"}})
    E = grothendieck(F)
    assert len(E.total) == 3
    assert E.total.leq(("0", "x"), ("1", "z")) and E.total.leq(("0", "y"), ("1", "z"))
    assert sorted(E.fiber("0")) == [("0", "x"), ("0", "y")]


def test_vect_has_no_category_of_elements():
    with pytest.raises(ValueError):
        grothendieck(SheafFunctor(Poset(["0"]), VECT, {"0": 0}, {}))


def test_two_lifts_are_rejected():
    total = Poset(["e", "f", "g"], [("e", "f"), ("e", "g")])
    E = ElementFibration(total, MonotoneMap(total, EDGE, {"e": "0", "f": "1", "g": "1"}))
    assert left_fibration_failure(E) == ("e", "0", "1", 2)
    with pytest.raises(NotLeftFibration):
        straighten(E)


def test_missing_lift_is_rejected():
    total = Poset.antichain(["e", "f"])
    E = ElementFibration(total, MonotoneMap(total, EDGE, {"e": "0", "f": "1"}))
    assert left_fibration_failure(E) == ("e", "0", "1", 0)


def test_roundtrips():
    rng = random.Random(30)
    for _ in range(50):
        P = random_poset(rng, rng.randint(0, 5), 0.4)
        F = random_functor(rng, P, SET, 3)
        E = grothendieck(F)
        assert left_fibration_failure(E) is None
        G = straighten(E)
        assert is_natural_iso(F, G, functor_roundtrip_iso(F))
        E2 = grothendieck(G)
        phi = fibration_roundtrip_iso(E, E2)
        assert phi is not None and len(set(phi.values())) == len(E.total)
