"""Category of elements and its inverse, for set-valued functors on posets."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotLeftFibration
from .labels import ordered
from .poset import MonotoneMap, Poset
from .sheaf import SET, SheafFunctor


@dataclass(frozen=True)
class ElementFibration:
    total: Poset
    projection: MonotoneMap

    @property
    def base(self) -> Poset:
        return self.projection.target

    def fiber(self, a) -> list:
        return [e for e in self.total if self.projection(e) == a]


def grothendieck(F: SheafFunctor) -> ElementFibration:
    """Total poset of pairs (a, x), x in F(a); (a, x) <= (b, y) iff a <= b and F(a<=b)(x) = y."""
    if F.kind != SET:
        raise ValueError("the category of elements needs a set-valued functor")
    elems = [(a, x) for a in F.base for x in F.values[a]]
    covers = [((a, x), (b, F.transitions[(a, b)][x]))
              for a, b in F.base.covers for x in F.values[a]]
    total = Poset(elems, covers)
    proj = MonotoneMap(total, F.base, {e: e[0] for e in elems})
    return ElementFibration(total, proj)


def left_fibration_failure(E: ElementFibration):
    """First (e, a, b, count) where e over a does not lift uniquely to b >= a."""
    B = E.base
    fibers = {a: E.fiber(a) for a in B}
    for a in B:
        for e in fibers[a]:
            for b in ordered(B.up(a)):
                lifts = [f for f in fibers[b] if E.total.leq(e, f)]
                if len(lifts) != 1:
                    return e, a, b, len(lifts)
    return None


def straighten(E: ElementFibration) -> SheafFunctor:
    """Fibers as values, unique lifts as transitions."""
    bad = left_fibration_failure(E)
    if bad is not None:
        raise NotLeftFibration(*bad)
    B = E.base
    vals = {a: tuple(E.fiber(a)) for a in B}
    trans = {}
    for a, b in B.covers:
        trans[(a, b)] = {e: next(f for f in vals[b] if E.total.leq(e, f)) for e in vals[a]}
    return SheafFunctor(B, SET, vals, trans)


def functor_roundtrip_iso(F: SheafFunctor) -> dict:
    """Canonical iso F -> straighten(grothendieck(F)), x |-> (a, x)."""
    return {a: {x: (a, x) for x in F.values[a]} for a in F.base}


def fibration_roundtrip_iso(E: ElementFibration, E2: ElementFibration) -> dict | None:
    """The canonical map E -> grothendieck(straighten(E)), e |-> (p(e), e), if it is an iso over the base."""
    phi = {e: (E.projection(e), e) for e in E.total}
    if set(phi.values()) != set(E2.total.elements):
        return None
    for e in E.total:
        if E2.projection(phi[e]) != E.projection(e):
            return None
        for f in E.total:
            if E.total.leq(e, f) != E2.total.leq(phi[e], phi[f]):
                return None
    return phi
