"""Finite configuration spaces with the Hausdorff distance, the cardinality
stratification over ω_*, and the cone distance on (0, ∞) × X plus an apex."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .errors import MetricViolation, SpaceMismatch, UnknownElement
from .labels import ordered
from .report import FAIL, FINDING, PASS, Report

INF = math.inf


class FiniteMetricSpace:
    """Points with an exact rational distance, validated on construction."""

    def __init__(self, points: Iterable[Hashable], dist: Mapping):
        points = list(points)
        if len(set(points)) != len(points):
            raise MetricViolation("duplicate point ids")
        self.points = tuple(ordered(points))
        self._d = {}
        for x in self.points:
            for y in self.points:
                if x == y:
                    v = Fraction(dist.get((x, x), 0))
                    if v != 0:
                        raise MetricViolation(f"d({x!r},{x!r}) = {v}, expected 0")
                    self._d[(x, y)] = v
                    continue
                if (x, y) in dist:
                    v = Fraction(dist[(x, y)])
                elif (y, x) in dist:
                    v = Fraction(dist[(y, x)])
                else:
                    raise MetricViolation(f"missing distance between {x!r} and {y!r}")
                if (x, y) in dist and (y, x) in dist and Fraction(dist[(y, x)]) != v:
                    raise MetricViolation(f"asymmetric distance between {x!r} and {y!r}")
                if v <= 0:
                    raise MetricViolation(f"d({x!r},{y!r}) = {v} must be positive")
                self._d[(x, y)] = v
        for x in self.points:
            for y in self.points:
                for z in self.points:
                    if self._d[(x, z)] > self._d[(x, y)] + self._d[(y, z)]:
                        raise MetricViolation(f"triangle inequality fails on {x!r}, {y!r}, {z!r}")

    @classmethod
    def from_matrix(cls, points: list, rows: list) -> "FiniteMetricSpace":
        return cls(points, {(x, y): rows[i][j] for i, x in enumerate(points) for j, y in enumerate(points)})

    @classmethod
    def from_coordinates(cls, coords: Mapping) -> "FiniteMetricSpace":
        """Points of Q^k with the sup-norm distance (a scalar coordinate means k = 1)."""
        vec = {p: tuple(Fraction(c) for c in (v if isinstance(v, (list, tuple)) else [v]))
               for p, v in coords.items()}
        return cls(list(vec), {(x, y): max(abs(a - b) for a, b in zip(vec[x], vec[y]))
                               for x in vec for y in vec})

    def d(self, x, y) -> Fraction:
        return self._d[(x, y)]

    def matrix(self) -> list:
        return [[self._d[(x, y)] for y in self.points] for x in self.points]

    def diameter(self) -> Fraction:
        return max(self._d.values(), default=Fraction(0))

    def __eq__(self, other):
        return isinstance(other, FiniteMetricSpace) and self._d == other._d

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"FiniteMetricSpace({len(self.points)} points)"


@dataclass(frozen=True)
class Configuration:
    space: FiniteMetricSpace
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for m in self.members:
            if m not in self.space.points:
                raise UnknownElement(m, "metric space")

    def __len__(self):
        return len(self.members)


def exp_distance(S: Configuration, T: Configuration):
    """max of the two directed max-min distances; +inf against the empty configuration."""
    if S.space is not T.space and S.space != T.space:
        raise SpaceMismatch("configurations live in different spaces")
    if not S.members and not T.members:
        return Fraction(0)
    if not S.members or not T.members:
        return INF
    d = S.space.d
    one = max(min(d(s, t) for t in T.members) for s in S.members)
    two = max(min(d(s, t) for s in S.members) for t in T.members)
    return max(one, two)


def _config_json(S: Configuration):
    return ordered(S.members)


def metric_axiom_suite(space: FiniteMetricSpace, trials: int, seed: int = 0) -> Report:
    """Symmetry, identity of indiscernibles and the triangle inequality on random nonempty triples."""
    rng = random.Random(seed)
    pts = list(space.points)

    def draw():
        k = rng.randint(1, len(pts))
        return Configuration(space, rng.sample(pts, k))

    for t in range(trials):
        S, T, U = draw(), draw(), draw()
        st, ts = exp_distance(S, T), exp_distance(T, S)
        wit = {"trial": t, "S": _config_json(S), "T": _config_json(T)}
        if st != ts:
            return Report(FAIL, "exp-axioms", "exponential-metric", seed=seed,
                          witness={**wit, "reason": "asymmetric", "D(S,T)": st, "D(T,S)": ts})
        if (st == 0) != (S.members == T.members):
            return Report(FAIL, "exp-axioms", "exponential-metric", seed=seed,
                          witness={**wit, "reason": "zero distance iff equal fails", "D": st})
        su, tu = exp_distance(S, U), exp_distance(T, U)
        if su > st + tu:
            return Report(FAIL, "exp-axioms", "exponential-metric", seed=seed,
                          witness={**wit, "U": _config_json(U), "reason": "triangle inequality",
                                   "D(S,U)": su, "D(S,T)+D(T,U)": st + tu})
    return Report(PASS, "exp-axioms", "exponential-metric", seed=seed,
                  details={"trials": trials, "points": len(pts)})


def cardinality_stratum(S: Configuration) -> str:
    """|S| as an element of ω_* (element ids are decimal strings)."""
    return str(len(S.members))


def omega_star_leq(a, b) -> bool:
    a, b = int(a), int(b)
    return a == b or (0 < a <= b)


def exp_exit_path_check(sequence: list) -> Report:
    """A sampled path S_0, S_1, ... is an exit path for the cardinality stratification
    when |S_k| is constant for k >= 1 and |S_0| <= |S_1| in ω_*."""
    cards = [len(S) for S in sequence]
    if len(cards) >= 2:
        for k in range(2, len(cards)):
            if cards[k] != cards[1]:
                return Report(FAIL, "exp-exit-path", "cardinality-stratification",
                              witness={"index": k, "cardinality": cards[k], "expected": cards[1],
                                       "reason": "stratum changes after the initial point"})
        if not omega_star_leq(cards[0], cards[1]):
            return Report(FAIL, "exp-exit-path", "cardinality-stratification",
                          witness={"index": 0, "cardinality": cards[0], "next": cards[1],
                                   "reason": "initial stratum is not below the later one in ω_*"})
    return Report(PASS, "exp-exit-path", "cardinality-stratification",
                  details={"cardinalities": cards})


# -- the cone distance --------------------------------------------------------------


@dataclass(frozen=True)
class ConePoint:
    radius: Fraction | None
    point: Hashable | None = None
    space: FiniteMetricSpace | None = None

    def __post_init__(self):
        if self.radius is None:
            if self.point is not None:
                raise ValueError("the apex has no base point")
            return
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius <= 0:
            raise ValueError("cone radii must be positive")
        if self.space is not None and self.point not in self.space.points:
            raise UnknownElement(self.point, "metric space")

    @property
    def is_apex(self) -> bool:
        return self.radius is None

    def to_json(self):
        return "apex" if self.is_apex else [self.radius, self.point]


APEX = ConePoint(None)


def cone_distance(p: ConePoint, q: ConePoint) -> Fraction:
    if p.is_apex and q.is_apex:
        return Fraction(0)
    if p.is_apex:
        return q.radius
    if q.is_apex:
        return p.radius
    if p.space is not q.space and p.space != q.space:
        raise SpaceMismatch("cone points over different spaces")
    return max(abs(p.radius - q.radius), p.space.d(p.point, q.point))


def cone_points(space: FiniteMetricSpace, radii: Iterable) -> list:
    rs = sorted({Fraction(r) for r in radii})
    return [APEX] + [ConePoint(r, x, space) for r in rs for x in space.points]


def cone_triangle_scan(space: FiniteMetricSpace, radii: Iterable, limit: int = 50) -> Report:
    """Every triple (p, q, r) with d(p, r) > d(p, q) + d(q, r); unordered in the outer pair."""
    pts = cone_points(space, radii)
    found = []
    for i, p in enumerate(pts):
        for k in range(i + 1, len(pts)):
            r = pts[k]
            pr = cone_distance(p, r)
            for q in pts:
                if q is p or q is r:
                    continue
                bound = cone_distance(p, q) + cone_distance(q, r)
                if pr > bound:
                    found.append({"p": p.to_json(), "q": q.to_json(), "r": r.to_json(),
                                  "d(p,r)": pr, "d(p,q)+d(q,r)": bound,
                                  "through_apex": q.is_apex})
    details = {"cone_points": len(pts), "violations": len(found)}
    if found:
        return Report(FINDING, "cone-scan", "cone-metric",
                      witness={"violations": found[:limit], "truncated": len(found) > limit},
                      details=details)
    return Report(PASS, "cone-scan", "cone-metric", details=details)


# -- convergence vs stratification ----------------------------------------------------


def colimit_convergence_check(sequence: list, candidate: Configuration, schedule: list) -> Report:
    """schedule: (epsilon, start) pairs; converges iff D(S_k, candidate) < epsilon for all k >= start.

    The cardinality sequence is unbounded on the presented tail when it increases
    strictly from the largest start index on (at least two terms). Convergence
    together with unboundedness is flagged: such a sequence cannot converge in
    the colimit topology of the cardinality filtration.
    """
    for S in sequence:
        if S.space is not candidate.space and S.space != candidate.space:
            raise SpaceMismatch("sequence and candidate live in different spaces")
    if not schedule:
        raise ValueError("empty tolerance schedule")
    dists = [exp_distance(S, candidate) for S in sequence]
    tol = []
    for eps, start in schedule:
        eps, start = Fraction(eps), int(start)
        ok = all(dists[k] < eps for k in range(start, len(sequence)))
        tol.append({"epsilon": eps, "start": start, "met": ok})
    converges = all(t["met"] for t in tol)
    start = max(int(s) for _, s in schedule)
    tail = [len(S) for S in sequence[start:]]
    unbounded = len(tail) >= 2 and all(a < b for a, b in zip(tail, tail[1:]))
    details = {"converges": converges, "cardinality_unbounded": unbounded,
               "distances": dists, "cardinalities": [len(S) for S in sequence],
               "tolerances": tol}
    if converges and unbounded:
        return Report(FINDING, "colimit-check", "colimit-impossibility",
                      witness={"reason": "metrically convergent with strictly increasing cardinality",
                               "tail_start": start, "tail_cardinalities": tail},
                      details=details)
    return Report(PASS, "colimit-check", "colimit-impossibility", details=details)


def random_metric_space(rng: random.Random, n: int, span: int = 20, den: int = 4) -> FiniteMetricSpace:
    """n distinct random rational points of the plane with the sup-norm."""
    coords = {}
    seen = set()
    while len(coords) < n:
        v = (Fraction(rng.randint(0, span * den), den), Fraction(rng.randint(0, span * den), den))
        if v not in seen:
            seen.add(v)
            coords[f"p{len(coords)}"] = v
    return FiniteMetricSpace.from_coordinates(coords)
