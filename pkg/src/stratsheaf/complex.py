"""Abstract simplicial complexes, their face posets, cones and edge exhaustions."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping

from .errors import (ApexCollision, IncompleteEnumeration, NotClosedUnderFaces, UnknownElement)
from .labels import ordered
from .poset import MonotoneMap, OmegaFiltration, Poset, cone, validate_omega_filtration
from .report import FAIL, PASS, Report


def _subfaces(face: frozenset):
    items = list(face)
    for k in range(1, len(items) + 1):
        for c in combinations(items, k):
            yield frozenset(c)


class SimplicialComplex:
    """Vertices plus a set of faces closed under nonempty subsets."""

    def __init__(self, vertices: Iterable[Hashable], faces: Iterable[Iterable[Hashable]]):
        self.vertices = tuple(ordered(set(vertices)))
        vs = set(self.vertices)
        fs = set()
        for f in faces:
            f = frozenset(f)
            if not f:
                raise NotClosedUnderFaces("the empty set is not a face")
            if not f <= vs:
                raise UnknownElement(ordered(f - vs)[0], "vertex set")
            fs.add(f)
        for v in self.vertices:
            if frozenset([v]) not in fs:
                raise NotClosedUnderFaces(f"vertex {v!r} is not a face")
        for f in fs:
            for g in _subfaces(f):
                if g not in fs:
                    raise NotClosedUnderFaces(f"{ordered(g)} missing below {ordered(f)}")
        self.faces = frozenset(fs)

    @classmethod
    def from_maximal_faces(cls, vertices: Iterable[Hashable], maximal: Iterable[Iterable]) -> "SimplicialComplex":
        vertices = list(vertices)
        faces = {frozenset([v]) for v in vertices}
        for m in maximal:
            faces.update(_subfaces(frozenset(m)))
        return cls(vertices, faces)

    def __eq__(self, other):
        return (isinstance(other, SimplicialComplex) and self.vertices == other.vertices
                and self.faces == other.faces)

    def __hash__(self):
        return hash(self.faces)

    def __repr__(self):
        return f"SimplicialComplex({len(self.vertices)} vertices, {len(self.faces)} faces)"

    def faces_of_dim(self, d: int) -> list:
        return ordered(f for f in self.faces if len(f) == d + 1)

    @property
    def dimension(self) -> int:
        return max((len(f) - 1 for f in self.faces), default=-1)

    def edges(self) -> list:
        return self.faces_of_dim(1)

    def maximal_faces(self) -> list:
        return ordered(f for f in self.faces if not any(f < g for g in self.faces))


def face_poset(K: SimplicialComplex) -> Poset:
    """Faces ordered by inclusion; covers are the codimension-one inclusions."""
    covers = [(f - {v}, f) for f in K.faces if len(f) > 1 for v in f]
    return Poset(K.faces, covers)


APEX = "*"


def cone_complex(K: SimplicialComplex, apex=APEX) -> SimplicialComplex:
    """Join with a point: every face σ gains the coned face σ ∪ {apex}."""
    if apex in K.vertices:
        raise ApexCollision(f"apex {apex!r} is already a vertex")
    faces = set(K.faces) | {frozenset([apex])} | {f | {apex} for f in K.faces}
    return SimplicialComplex(list(K.vertices) + [apex], faces)


@dataclass(frozen=True)
class StratifiedComplex:
    complex: SimplicialComplex
    target: Poset
    strat: MonotoneMap

    def __post_init__(self):
        if self.strat.target != self.target:
            raise ValueError("stratification must land in the target poset")
        if set(self.strat.source.elements) != set(self.complex.faces):
            raise ValueError("stratification must be defined on the face poset")

    @classmethod
    def build(cls, K: SimplicialComplex, target: Poset, assignment: Mapping) -> "StratifiedComplex":
        fp = face_poset(K)
        return cls(K, target, MonotoneMap(fp, target, {frozenset(k): v for k, v in assignment.items()}))

    @classmethod
    def by_faces(cls, K: SimplicialComplex) -> "StratifiedComplex":
        fp = face_poset(K)
        return cls(K, fp, MonotoneMap.identity(fp))

    @classmethod
    def by_dimension(cls, K: SimplicialComplex) -> "StratifiedComplex":
        target = Poset.chain(K.dimension + 1)
        return cls.build(K, target, {f: str(len(f) - 1) for f in K.faces})

    def stratum_of(self, face) -> Hashable:
        return self.strat(frozenset(face))


def strata_of(S: StratifiedComplex, a) -> list:
    if a not in S.target:
        raise UnknownElement(a)
    return ordered(f for f in S.complex.faces if S.strat(f) == a)


def cone_stratified(S: StratifiedComplex, apex=APEX, bottom=None) -> StratifiedComplex:
    """Cone a stratified complex over the coned target: {apex} goes to the new bottom,
    apex ∪ σ to the stratum of σ."""
    K2 = cone_complex(S.complex, apex)
    T2 = cone(S.target, bottom)
    bot = next(e for e in T2 if e not in S.target)
    assign = {}
    for f in K2.faces:
        if apex not in f:
            assign[f] = S.strat(f)
        elif len(f) == 1:
            assign[f] = bot
        else:
            assign[f] = S.strat(f - {apex})
    return StratifiedComplex.build(K2, T2, assign)


# -- exhaustion by finite edge stars --------------------------------------------------


@dataclass
class Exhaustion:
    complex: SimplicialComplex
    levels: list                # SimplicialComplex per n
    filtration: OmegaFiltration # face posets of the levels

    def certify(self) -> Report:
        """Subcomplex, nested, downward closed and exhaustive, checked directly."""
        K = self.complex
        for n, X in enumerate(self.levels):
            if not X.faces <= K.faces:
                return _ex_fail(n, "level has faces outside the complex")
            for f in X.faces:
                for g in _subfaces(f):
                    if g not in X.faces:
                        return _ex_fail(n, "level is not closed under faces", face=ordered(f))
            if n + 1 < len(self.levels) and not X.faces <= self.levels[n + 1].faces:
                return _ex_fail(n, "levels are not nested")
            fp = face_poset(K)
            for f in X.faces:
                if not fp.down(f) <= X.faces:
                    return _ex_fail(n, "face poset of the level is not downward closed",
                                    face=ordered(f))
        missing = K.faces - (self.levels[-1].faces if self.levels else frozenset())
        if missing:
            return _ex_fail(len(self.levels) - 1, "faces never admitted",
                            face=ordered(ordered(missing)[0]))
        return Report(PASS, "exhaustion", "exhaustion",
                      details={"levels": len(self.levels),
                               "faces_per_level": [len(X.faces) for X in self.levels]})


def _ex_fail(n, reason, **extra):
    return Report(FAIL, "exhaustion", "exhaustion", witness={"level": n, "reason": reason, **extra})


def build_exhaustion(K: SimplicialComplex, edge_enumeration: Mapping,
                     horizon: int | None = None) -> Exhaustion:
    """X_{<=n}: the largest subcomplex whose edges sit among the first n+1 edges listed
    at both of their endpoints. Vertices are always admitted."""
    index = {}
    for v in K.vertices:
        lst = [frozenset(e) for e in edge_enumeration.get(v, [])]
        for e in lst:
            if e not in K.faces or len(e) != 2 or v not in e:
                raise IncompleteEnumeration(v, e)
        if len(set(lst)) != len(lst):
            raise IncompleteEnumeration(v, next(e for e in lst if lst.count(e) > 1))
        index[v] = {e: i for i, e in enumerate(lst)}
    for e in K.edges():
        for v in e:
            if e not in index[v]:
                raise IncompleteEnumeration(v, e)
    if horizon is None:
        horizon = max((len(ix) for ix in index.values()), default=1) - 1
        horizon = max(horizon, 0)
    edge_level = {e: max(index[v][e] for v in e) for e in K.edges()}
    levels = []
    for n in range(horizon + 1):
        faces = [f for f in K.faces
                 if all(edge_level[frozenset(p)] <= n for p in combinations(f, 2))]
        levels.append(SimplicialComplex(K.vertices, faces))
    filtration = validate_omega_filtration([face_poset(X) for X in levels])
    return Exhaustion(K, levels, filtration)
