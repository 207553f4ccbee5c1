"""Finite posets with the Alexandrov (up-set) topology.

A poset is given by its Hasse covers. Validation rejects cyclic or
non-reduced cover data instead of silently repairing it, so every Poset
has one canonical cover list.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Hashable, Iterable, Mapping

from .errors import (CycleDetected, DuplicateElement, NotDownwardClosed, NotMonotone,
                     NotSubposet, NotUpwardClosed, RedundantCover, UnknownElement)
from .labels import label, ordered

DEFAULT_MAX_SIZE = 64


class Poset:
    """Immutable finite partial order presented by covers ``(a, b)``: a is covered by b."""

    def __init__(self, elements: Iterable[Hashable], covers: Iterable[tuple] = ()):
        elems = list(elements)
        if len(set(elems)) != len(elems):
            dup = next(e for e in elems if elems.count(e) > 1)
            raise DuplicateElement(f"element {dup!r} listed twice")
        self.elements = tuple(ordered(elems))
        known = set(self.elements)
        cov = []
        for a, b in covers:
            for x in (a, b):
                if x not in known:
                    raise UnknownElement(x)
            if a == b:
                raise CycleDetected([a])
            cov.append((a, b))
        if len(set(cov)) != len(cov):
            dup = next(c for c in cov if cov.count(c) > 1)
            raise RedundantCover(*dup)
        self.covers = tuple(sorted(set(cov), key=lambda c: (label(c[0]), label(c[1]))))
        self._up, self._down = self._closure()
        for a, b in self.covers:
            # (a, b) is redundant iff b is reachable through another upper cover of a
            for c in self.upper_covers(a):
                if c != b and b in self._up[c]:
                    raise RedundantCover(a, b)

    def _closure(self):
        succ = {e: [] for e in self.elements}
        indeg = {e: 0 for e in self.elements}
        for a, b in self.covers:
            succ[a].append(b)
            indeg[b] += 1
        order = []
        ready = [e for e in self.elements if indeg[e] == 0]
        while ready:
            e = ready.pop()
            order.append(e)
            for f in succ[e]:
                indeg[f] -= 1
                if indeg[f] == 0:
                    ready.append(f)
        if len(order) != len(self.elements):
            stuck = ordered(e for e in self.elements if indeg[e] > 0)
            raise CycleDetected(stuck)
        up = {}
        for e in reversed(order):
            s = {e}
            for f in succ[e]:
                s |= up[f]
            up[e] = frozenset(s)
        down = {e: set() for e in self.elements}
        for e, s in up.items():
            for f in s:
                down[f].add(e)
        return up, {e: frozenset(s) for e, s in down.items()}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_relation(cls, elements: Iterable[Hashable], less: Iterable[tuple]) -> "Poset":
        """Build from any generating set of strict relations (transitively reduced here)."""
        elems = list(elements)
        known = set(elems)
        succ = {e: set() for e in elems}
        for a, b in less:
            for x in (a, b):
                if x not in known:
                    raise UnknownElement(x)
            if a != b:
                succ[a].add(b)
        # reachability by DFS, then keep only edges with no detour
        reach = {}

        def visit(e, stack):
            if e in reach:
                return reach[e]
            if e in stack:
                raise CycleDetected(ordered(stack))
            stack.add(e)
            r = {e}
            for f in succ[e]:
                r |= visit(f, stack)
            stack.discard(e)
            reach[e] = frozenset(r)
            return reach[e]

        for e in elems:
            visit(e, set())
        covers = []
        for a in elems:
            above = reach[a] - {a}
            for b in above:
                if not any(b in reach[c] for c in above if c != b):
                    covers.append((a, b))
        return cls(elems, covers)

    @classmethod
    def chain(cls, n: int, start: int = 0) -> "Poset":
        """Chain ``start < start+1 < ... < start+n-1`` with string ids."""
        ids = [str(i) for i in range(start, start + n)]
        return cls(ids, list(zip(ids, ids[1:])))

    @classmethod
    def antichain(cls, ids: Iterable[Hashable]) -> "Poset":
        return cls(ids, [])

    # -- order queries ----------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self._up

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (isinstance(other, Poset) and set(self.elements) == set(other.elements)
                and set(self.covers) == set(other.covers))

    def __hash__(self):
        return hash((frozenset(self.elements), frozenset(self.covers)))

    def __repr__(self):
        return f"Poset({len(self)} elements, {len(self.covers)} covers)"

    def _check(self, x):
        if x not in self._up:
            raise UnknownElement(x)

    def leq(self, a, b) -> bool:
        self._check(a)
        self._check(b)
        return b in self._up[a]

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def up(self, a) -> frozenset:
        """Principal up-set U_a, the smallest open containing a."""
        self._check(a)
        return self._up[a]

    def down(self, a) -> frozenset:
        self._check(a)
        return self._down[a]

    @cached_property
    def _upper(self):
        u = {e: [] for e in self.elements}
        for a, b in self.covers:
            u[a].append(b)
        return u

    @cached_property
    def _lower(self):
        d = {e: [] for e in self.elements}
        for a, b in self.covers:
            d[b].append(a)
        return d

    def upper_covers(self, a) -> list:
        return self._upper[a]

    def lower_covers(self, a) -> list:
        return self._lower[a]

    def minimal(self) -> list:
        return [e for e in self.elements if not self._lower[e]]

    def maximal(self) -> list:
        return [e for e in self.elements if not self._upper[e]]

    def comparable_pairs(self, strict: bool = False) -> list:
        return [(a, b) for a in self.elements for b in ordered(self._up[a])
                if not (strict and a == b)]

    @cached_property
    def linear_extension(self) -> tuple:
        """Deterministic topological order (bottom first)."""
        return tuple(sorted(self.elements,
                            key=lambda e: (len(self._down[e]), label(e))))

    def is_open(self, subset: Iterable) -> bool:
        return is_open(self, subset)

    def subposet(self, subset: Iterable) -> "Poset":
        """Induced subposet on ``subset``."""
        sub = set(subset)
        for x in sub:
            self._check(x)
        less = [(a, b) for a in sub for b in self._up[a] if b in sub and b != a]
        return Poset.from_relation(ordered(sub), less)

    def is_subposet_of(self, other: "Poset") -> bool:
        if not set(self.elements) <= set(other.elements):
            return False
        return all(self.leq(a, b) == other.leq(a, b)
                   for a in self.elements for b in self.elements)


def validate_poset(covers: Iterable[tuple], elements: Iterable[Hashable] | None = None) -> Poset:
    """Validate cover data; elements default to those mentioned in covers."""
    covers = [tuple(c) for c in covers]
    if elements is None:
        seen = []
        for a, b in covers:
            for x in (a, b):
                if x not in seen:
                    seen.append(x)
        elements = seen
    return Poset(elements, covers)


def is_open(poset: Poset, subset: Iterable) -> bool:
    """True iff ``subset`` is upward closed (open in the Alexandrov topology)."""
    s = set(subset)
    for x in s:
        poset._check(x)
    return all(poset.up(x) <= s for x in s)


@dataclass(frozen=True)
class UpwardClosedSet:
    """An open of the Alexandrov topology on ``poset``."""
    poset: Poset
    members: frozenset

    def __post_init__(self):
        m = frozenset(self.members)
        object.__setattr__(self, "members", m)
        for x in ordered(m):
            self.poset._check(x)
            for y in ordered(self.poset.up(x)):
                if y not in m:
                    raise NotUpwardClosed(x, y)

    def __contains__(self, x):
        return x in self.members

    def __iter__(self):
        return iter(ordered(self.members))

    def __len__(self):
        return len(self.members)


def downward_closure(poset: Poset, seed: Iterable) -> frozenset:
    out = set()
    for x in seed:
        out |= poset.down(x)
    return frozenset(out)


def upward_closure(poset: Poset, seed: Iterable) -> frozenset:
    out = set()
    for x in seed:
        out |= poset.up(x)
    return frozenset(out)


def is_downward_closed(poset: Poset, subset: Iterable) -> bool:
    s = set(subset)
    return all(poset.down(x) <= s for x in s)


def open_sets(poset: Poset) -> list:
    """All upward-closed subsets, ordered by size then label."""
    elems = poset.linear_extension
    result = []

    def grow(i, current):
        if i < 0:
            result.append(frozenset(current))
            return
        e = elems[i]
        grow(i - 1, current)
        if poset.up(e) <= current | {e}:
            grow(i - 1, current | {e})

    # walk top-down so that membership of e only depends on elements above it
    grow(len(elems) - 1, frozenset())
    return sorted(result, key=lambda u: (len(u), [label(x) for x in ordered(u)]))


BOTTOM = "⊥"


def fresh_bottom(poset: Poset, preferred=BOTTOM):
    b = preferred
    while b in poset:
        b = b + "'"
    return b


def cone(poset: Poset, bottom=None) -> Poset:
    """Adjoin a new element below everything; covers go to the old minima."""
    bottom = fresh_bottom(poset) if bottom is None else bottom
    if bottom in poset:
        raise DuplicateElement(f"cone point {bottom!r} already in poset")
    covers = list(poset.covers) + [(bottom, m) for m in poset.minimal()]
    return Poset(list(poset.elements) + [bottom], covers)


def disjoint_union(*posets: Poset) -> Poset:
    elems, covers = [], []
    for p in posets:
        elems.extend(p.elements)
        covers.extend(p.covers)
    return Poset(elems, covers)


def omega(n: int) -> Poset:
    """Truncation {0 < 1 < ... < n} of the natural numbers."""
    return Poset.chain(n + 1)


def omega_star(n: int) -> Poset:
    """Truncation {0} + {1 < 2 < ... < n}: 0 is isolated."""
    return disjoint_union(Poset(["0"]), Poset.chain(n, start=1))


# -- monotone maps --------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneMap:
    source: Poset
    target: Poset
    assignment: Mapping

    def __post_init__(self):
        amap = dict(self.assignment)
        for a in self.source:
            if a not in amap:
                raise UnknownElement(a, "map domain")
            if amap[a] not in self.target:
                raise UnknownElement(amap[a], "map target")
        for a, b in self.source.covers:
            if not self.target.leq(amap[a], amap[b]):
                raise NotMonotone(a, b)
        object.__setattr__(self, "assignment", amap)

    def __call__(self, a):
        return self.assignment[a]

    @classmethod
    def inclusion(cls, sub: Poset, ambient: Poset) -> "MonotoneMap":
        if not sub.is_subposet_of(ambient):
            raise NotSubposet("source is not an induced subposet of the target")
        return cls(sub, ambient, {a: a for a in sub})

    @classmethod
    def identity(cls, p: Poset) -> "MonotoneMap":
        return cls(p, p, {a: a for a in p})

    def is_injective(self) -> bool:
        return len(set(self.assignment.values())) == len(self.assignment)


# -- omega filtrations ------------------------------------------------------------


@dataclass(frozen=True)
class OmegaFiltration:
    """Increasing finite levels A_0 ⊆ A_1 ⊆ ... ⊆ A_N, each downward closed in the next."""

    levels: tuple

    @property
    def top(self) -> Poset:
        return self.levels[-1]

    def __len__(self):
        return len(self.levels)

    def least_level(self, a) -> int | None:
        for n, lvl in enumerate(self.levels):
            if a in lvl:
                return n
        return None


def validate_omega_filtration(levels: Iterable[Poset]) -> OmegaFiltration:
    levels = tuple(levels)
    if not levels:
        raise ValueError("a filtration needs at least one level")
    for n in range(len(levels) - 1):
        lo, hi = levels[n], levels[n + 1]
        for a in lo:
            if a not in hi:
                raise NotSubposet(f"level {n} element {a!r} missing from level {n + 1}")
        for a in lo:
            for b in lo:
                if lo.leq(a, b) != hi.leq(a, b):
                    raise NotSubposet(
                        f"order of {a!r}, {b!r} differs between levels {n} and {n + 1}")
        for a in lo:  # elements in label order, so the first hit is the minimal pair
            for b in ordered(hi.down(a)):
                if b not in lo:
                    raise NotDownwardClosed(n, a, b)
    return OmegaFiltration(levels)


def omega_filtration(n: int) -> OmegaFiltration:
    return validate_omega_filtration([omega(k) for k in range(n + 1)])


def omega_star_filtration(n: int) -> OmegaFiltration:
    return validate_omega_filtration([omega_star(k) for k in range(n + 1)])


# -- enumeration of small posets ----------------------------------------------------


def all_posets(n: int) -> list:
    """All posets on n elements up to isomorphism, elements "0".."n-1".

    Every poset has a natural labelling (i < j in the order implies i < j as
    integers), so it suffices to scan transitively closed subsets of the pairs
    i < j and keep one representative per isomorphism class.
    """
    pairs = list(combinations(range(n), 2))
    seen = set()
    out = []
    perms = list(permutations(range(n)))
    for mask in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        if any((i, k) not in rel for (i, j) in rel for (j2, k) in rel if j == j2):
            continue
        canon = min(tuple(sorted((p[i], p[j]) for i, j in rel)) for p in perms)
        if canon in seen:
            continue
        seen.add(canon)
        ids = [str(i) for i in range(n)]
        out.append(Poset.from_relation(ids, [(str(i), str(j)) for i, j in rel]))
    return out
