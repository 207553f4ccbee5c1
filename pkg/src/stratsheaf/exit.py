"""Exact validation of piecewise-linear exit simplices into a stratified complex.

A PL map |Δ^p| -> |K| is a conforming triangulation of Δ^p whose vertices
carry a source point (barycentric coordinates in Δ^p) and an image point
(barycentric coordinates in K). On the relative interior of a subdivision
face W both the image cell and the zero pattern of the source coordinates
are constant: the image cell is the union of the carriers of W's vertices and
the zero pattern is the common zeros of their source points. So region
membership {t_i != 0, t_{i+1} = ... = t_p = 0} and strata are read off the
finite set of subdivision faces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .complex import StratifiedComplex
from .errors import MalformedSubdivision
from .labels import label, ordered
from .report import FAIL, PASS, Report


def _det(rows) -> Fraction:
    """Determinant by elimination (square, exact)."""
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@dataclass(frozen=True)
class PLPoint:
    source: tuple          # p+1 rationals summing to 1
    image: Mapping         # target vertex -> rational, summing to 1

    @property
    def carrier(self) -> frozenset:
        return frozenset(v for v, c in self.image.items() if c != 0)


@dataclass
class PLSimplexMap:
    p: int
    target: StratifiedComplex
    points: dict           # id -> PLPoint
    pieces: tuple          # tuples of p+1 point ids

    def __post_init__(self):
        self.pieces = tuple(tuple(pc) for pc in self.pieces)
        self._validate()

    def _validate(self):
        p, K = self.p, self.target.complex
        seen = {}
        for vid, pt in self.points.items():
            src = tuple(Fraction(x) for x in pt.source)
            if len(src) != p + 1 or any(x < 0 for x in src) or sum(src) != 1:
                raise MalformedSubdivision(f"point {vid!r}: source must be {p + 1} nonnegative rationals summing to 1")
            img = {v: Fraction(c) for v, c in pt.image.items()}
            if any(c < 0 for c in img.values()) or sum(img.values()) != 1:
                raise MalformedSubdivision(f"point {vid!r}: image coordinates must be nonnegative and sum to 1")
            if pt.carrier not in K.faces:
                raise MalformedSubdivision(f"point {vid!r}: carrier {ordered(pt.carrier)} is not a face")
            if src in seen:
                raise MalformedSubdivision(f"points {seen[src]!r} and {vid!r} coincide in the source")
            seen[src] = vid
            self.points[vid] = PLPoint(src, img)
        if not self.pieces:
            raise MalformedSubdivision("no pieces")
        used = set()
        total = Fraction(0)
        facets = {}
        for pc in self.pieces:
            if len(pc) != p + 1 or len(set(pc)) != p + 1:
                raise MalformedSubdivision(f"piece {pc!r} must list {p + 1} distinct points")
            for vid in pc:
                if vid not in self.points:
                    raise MalformedSubdivision(f"piece {pc!r} uses unknown point {vid!r}")
            used.update(pc)
            rows = [self.points[v].source for v in pc]
            d = _det(rows)
            if d == 0:
                raise MalformedSubdivision(f"piece {pc!r} is degenerate")
            total += abs(d)
            cell = frozenset().union(*(self.points[v].carrier for v in pc))
            if cell not in K.faces:
                raise MalformedSubdivision(f"piece {pc!r} spans {ordered(cell)}, not a face of the target")
            for k in range(p + 1):
                facet = frozenset(pc[:k] + pc[k + 1:])
                facets.setdefault(facet, []).append((pc, pc[k]))
        if total != 1:
            raise MalformedSubdivision(f"pieces cover volume {total}, expected 1")
        if p > 0:
            for facet, owners in facets.items():
                fpts = [self.points[v].source for v in ordered(facet)]
                on_boundary = any(all(s[j] == 0 for s in fpts) for j in range(p + 1))
                if on_boundary:
                    if len(owners) != 1:
                        raise MalformedSubdivision(f"boundary facet {ordered(facet)} shared by {len(owners)} pieces")
                    continue
                if len(owners) != 2:
                    raise MalformedSubdivision(
                        f"interior facet {ordered(facet)} belongs to {len(owners)} pieces")
                signs = [_det(fpts + [self.points[opp].source]) for _, opp in owners]
                if signs[0] * signs[1] >= 0:
                    raise MalformedSubdivision(f"pieces overlap across facet {ordered(facet)}")
        if used != set(self.points):
            raise MalformedSubdivision(f"unused points {ordered(set(self.points) - used)}")

    def faces(self) -> list:
        """All nonempty faces of the subdivision, as frozensets of point ids."""
        out = set()
        for pc in self.pieces:
            for k in range(1, len(pc) + 1):
                out.update(frozenset(c) for c in combinations(pc, k))
        return sorted(out, key=lambda w: (len(w), [label(x) for x in ordered(w)]))

    def region(self, W) -> int:
        srcs = [self.points[v].source for v in W]
        return max(j for j in range(self.p + 1) if any(s[j] != 0 for s in srcs))

    def stratum(self, W):
        cell = frozenset().union(*(self.points[v].carrier for v in W))
        return self.target.strat(cell)

    def barycenter(self, W) -> tuple:
        srcs = [self.points[v].source for v in W]
        return tuple(sum(s[j] for s in srcs) / len(srcs) for j in range(self.p + 1))


@dataclass
class ExitVerdict:
    accepted: bool
    chain: list | None = None
    witness: dict | None = None

    def to_report(self) -> Report:
        if self.accepted:
            return Report(PASS, "exit-simplex", "exit-simplex", details={"chain": self.chain})
        return Report(FAIL, "exit-simplex", "exit-simplex", witness=self.witness)


def validate_exit_simplex(m: PLSimplexMap) -> ExitVerdict:
    """Accept iff each region of Δ^p lands in one stratum and the strata form a chain."""
    T = m.target.target
    by_region = {i: [] for i in range(m.p + 1)}
    for W in m.faces():
        by_region[m.region(W)].append(W)
    chain = []
    for i in range(m.p + 1):
        faces = by_region[i]
        top = max(len(W) for W in faces)
        reference = m.stratum(next(W for W in faces if len(W) == top))
        for W in faces:
            s = m.stratum(W)
            if s != reference:
                return ExitVerdict(False, witness={
                    "region": i, "point": list(m.barycenter(W)), "face": ordered(W),
                    "stratum": s, "expected": reference,
                    "reason": "region meets two strata"})
        if chain and not T.leq(chain[-1], reference):
            W = next(W for W in faces if len(W) == top)
            return ExitVerdict(False, witness={
                "region": i, "point": list(m.barycenter(W)), "face": ordered(W),
                "stratum": reference, "expected_above": chain[-1],
                "reason": "stratum drops below the previous region"})
        chain.append(reference)
    return ExitVerdict(True, chain=chain)


def front_face(m: PLSimplexMap) -> PLSimplexMap:
    """Restriction to the face {t_p = 0}, as a (p-1)-simplex map."""
    if m.p == 0:
        raise ValueError("a 0-simplex has no front face")
    pieces = []
    for pc in m.pieces:
        on = tuple(v for v in pc if m.points[v].source[m.p] == 0)
        if len(on) == m.p:
            pieces.append(on)
    ids = {v for pc in pieces for v in pc}
    pts = {v: PLPoint(m.points[v].source[:-1], m.points[v].image) for v in ids}
    return PLSimplexMap(m.p - 1, m.target, pts, pieces)


def chain_simplex(S: StratifiedComplex, chain: list) -> PLSimplexMap:
    """The linear simplex sending vertex i to the barycenter of face chain[i] (chain weakly increasing)."""
    p = len(chain) - 1
    pts = {}
    for i, face in enumerate(chain):
        face = frozenset(face)
        src = tuple(Fraction(1 if j == i else 0) for j in range(p + 1))
        pts[f"v{i}"] = PLPoint(src, {v: Fraction(1, len(face)) for v in face})
    return PLSimplexMap(p, S, pts, [tuple(f"v{i}" for i in range(p + 1))])


def path_map(S: StratifiedComplex, stops: list) -> PLSimplexMap:
    """A 1-simplex map through ``stops`` = [(t, image coords)], t strictly increasing from 0 to 1.

    Source coordinates of parameter t are (1 - t, t).
    """
    ts = [Fraction(t) for t, _ in stops]
    if ts[0] != 0 or ts[-1] != 1 or any(a >= b for a, b in zip(ts, ts[1:])):
        raise MalformedSubdivision("path parameters must increase strictly from 0 to 1")
    pts = {f"u{k}": PLPoint((1 - t, t), {v: Fraction(c) for v, c in img.items()})
           for k, (t, (_, img)) in enumerate(zip(ts, stops))}
    pieces = [(f"u{k}", f"u{k + 1}") for k in range(len(stops) - 1)]
    return PLSimplexMap(1, S, pts, pieces)
