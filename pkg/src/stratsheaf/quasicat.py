"""Truncated simplicial sets: nerves, inner horns, idempotents, filtered unions."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoundTooLow, SimplicialIdentityViolation
from .labels import label, ordered
from .poset import MonotoneMap, OmegaFiltration, Poset
from .report import FAIL, PASS, Report


@dataclass
class SimplicialSetFragment:
    """Simplices up to dimension N with explicit face and (optionally) degeneracy tables.

    faces[n][x] is the tuple (d_0 x, ..., d_n x) for an n-simplex x, n >= 1.
    degeneracies[n][x] is (s_0 x, ..., s_n x) for an n-simplex x, n < N; pass
    None to describe a semi-simplicial fragment.
    """

    N: int
    simplices: dict
    faces: dict
    degeneracies: dict | None = None

    def __post_init__(self):
        self.simplices = {n: tuple(self.simplices.get(n, ())) for n in range(self.N + 1)}
        for n in range(1, self.N + 1):
            table = self.faces.get(n, {})
            for x in self.simplices[n]:
                fs = table.get(x)
                if fs is None or len(fs) != n + 1:
                    raise SimplicialIdentityViolation(f"{n}-simplex {x!r} needs {n + 1} faces")
                lower = set(self.simplices[n - 1])
                for y in fs:
                    if y not in lower:
                        raise SimplicialIdentityViolation(f"face {y!r} of {x!r} is not a {n - 1}-simplex")
        if self.degeneracies is not None:
            for n in range(self.N):
                table = self.degeneracies.get(n, {})
                upper = set(self.simplices[n + 1])
                for x in self.simplices[n]:
                    ds = table.get(x)
                    if ds is None or len(ds) != n + 1 or any(y not in upper for y in ds):
                        raise SimplicialIdentityViolation(f"degeneracies of {n}-simplex {x!r} are incomplete")
        self._check_identities()

    def d(self, n: int, i: int, x):
        return self.faces[n][x][i]

    def s(self, n: int, i: int, x):
        return self.degeneracies[n][x][i]

    def _check_identities(self):
        d, s = self.d, self.s
        for n in range(2, self.N + 1):
            for x in self.simplices[n]:
                for i in range(n + 1):
                    for j in range(i + 1, n + 1):
                        if d(n - 1, i, d(n, j, x)) != d(n - 1, j - 1, d(n, i, x)):
                            raise SimplicialIdentityViolation(f"d_{i} d_{j} != d_{j - 1} d_{i} on {x!r}")
        if self.degeneracies is None:
            return
        for n in range(self.N):
            for x in self.simplices[n]:
                for j in range(n + 1):
                    y = s(n, j, x)
                    for i in range(n + 2):
                        got = d(n + 1, i, y)
                        if i in (j, j + 1):
                            want = x
                        elif i < j:
                            want = s(n - 1, j - 1, d(n, i, x))
                        else:
                            want = s(n - 1, j, d(n, i - 1, x))
                        if got != want:
                            raise SimplicialIdentityViolation(f"d_{i} s_{j} relation fails on {x!r}")
                if n + 2 <= self.N:
                    for i in range(n + 1):
                        for j in range(i, n + 1):
                            if s(n + 1, i, s(n, j, x)) != s(n + 1, j + 1, s(n, i, x)):
                                raise SimplicialIdentityViolation(f"s_{i} s_{j} != s_{j + 1} s_{i} on {x!r}")

    def is_degenerate(self, n: int, x) -> bool:
        if n == 0 or self.degeneracies is None:
            return False
        return any(x in self.degeneracies[n - 1][y] for y in self.simplices[n - 1])

    def nondegenerate(self, n: int) -> list:
        return [x for x in self.simplices[n] if not self.is_degenerate(n, x)]


def _chains(P: Poset, length: int) -> list:
    out = [(a,) for a in ordered(P)]
    for _ in range(length - 1):
        out = [c + (b,) for c in out for b in ordered(P.up(c[-1]))]
    return out


def nerve(P: Poset, N: int) -> SimplicialSetFragment:
    """Weakly increasing chains; d_i drops entry i, s_i repeats it."""
    simp = {n: _chains(P, n + 1) for n in range(N + 1)}
    faces = {n: {x: tuple(x[:i] + x[i + 1:] for i in range(n + 1)) for x in simp[n]}
             for n in range(1, N + 1)}
    degs = {n: {x: tuple(x[:i + 1] + x[i:] for i in range(n + 1)) for x in simp[n]}
            for n in range(N)}
    return SimplicialSetFragment(N, simp, faces, degs)


def nerve_map(f: MonotoneMap, N: int) -> dict:
    return {n: {x: tuple(f(a) for a in x) for x in _chains(f.source, n + 1)} for n in range(N + 1)}


def nerve_map_commutes(f: MonotoneMap, N: int) -> bool:
    """Check that N(f) commutes with all faces and degeneracies."""
    S, T, m = nerve(f.source, N), nerve(f.target, N), nerve_map(f, N)
    for n in range(N + 1):
        for x in S.simplices[n]:
            if n >= 1 and any(m[n - 1][S.d(n, i, x)] != T.d(n, i, m[n][x]) for i in range(n + 1)):
                return False
            if n < N and any(m[n + 1][S.s(n, i, x)] != T.s(n, i, m[n][x]) for i in range(n + 1)):
                return False
    return True


def _horns(S: SimplicialSetFragment, n: int, i: int):
    """All families (y_j)_{j != i} of (n-1)-simplices with d_j y_k = d_{k-1} y_j for j < k."""
    idx = [j for j in range(n + 1) if j != i]
    cand = S.simplices[n - 1]
    by_face = {}
    for y in cand:
        for p in range(n):
            by_face.setdefault((p, S.d(n - 1, p, y)), []).append(y)

    def extend(chosen):
        if len(chosen) == len(idx):
            yield dict(chosen)
            return
        k = idx[len(chosen)]
        if not chosen:
            pool = cand
        else:
            j0, y0 = chosen[0]
            pool = by_face.get((j0, S.d(n - 1, k - 1, y0)), [])
        for y in pool:
            if all(S.d(n - 1, j, y) == S.d(n - 1, k - 1, yj) for j, yj in chosen):
                yield from extend(chosen + [(k, y)])

    yield from extend([])


def inner_horn_check(S: SimplicialSetFragment, n: int) -> Report:
    if n not in (2, 3):
        raise ValueError("horn dimension must be 2 or 3")
    if S.N < n:
        raise BoundTooLow(f"fragment stops at dimension {S.N}, horns need {n}")
    unfilled, horns, multiple = [], 0, 0
    for i in range(1, n):
        fill = {}
        for x in S.simplices[n]:
            key = tuple(S.d(n, j, x) for j in range(n + 1) if j != i)
            fill.setdefault(key, []).append(x)
        for h in _horns(S, n, i):
            horns += 1
            key = tuple(h[j] for j in sorted(h))
            got = fill.get(key, [])
            if not got:
                unfilled.append({"i": i, "faces": {str(j): h[j] for j in sorted(h)}})
            elif len(got) > 1:
                multiple += 1
    details = {"n": n, "horns": horns, "unfillable": len(unfilled), "non_unique_fillers": multiple}
    if unfilled:
        return Report(FAIL, "horn-check", "quasi-category", witness={"unfillable": unfilled}, details=details)
    return Report(PASS, "horn-check", "quasi-category", details=details)


def idempotent_check(S: SimplicialSetFragment) -> Report:
    """Endo-edges e with a 2-simplex (e, e, e); every one must be degenerate."""
    if S.N < 2:
        raise BoundTooLow("idempotents need 2-simplices")
    loops = {e for e in S.simplices[1] if S.d(1, 0, e) == S.d(1, 1, e)}
    found = ordered({S.d(2, 0, x) for x in S.simplices[2]
                     if S.d(2, 0, x) in loops and S.d(2, 0, x) == S.d(2, 1, x) == S.d(2, 2, x)})
    bad = [e for e in found if not S.is_degenerate(1, e)]
    details = {"idempotents": len(found), "degenerate": len(found) - len(bad)}
    if bad:
        return Report(FAIL, "idempotent-check", "idempotent-completeness",
                      witness={"nondegenerate_idempotents": bad}, details=details)
    return Report(PASS, "idempotent-check", "idempotent-completeness", details=details)


def first_level(filtration: OmegaFiltration, simplex) -> int | None:
    for n, A in enumerate(filtration.levels):
        if all(a in A for a in simplex):
            return n
    return None


def union_colimit(filtration: OmegaFiltration, N: int) -> Report:
    """Least filtration level carrying each simplex of the nerve of the top level."""
    top = nerve(filtration.top, N)
    levels, missing = {}, []
    for n in range(N + 1):
        for x in top.simplices[n]:
            lv = first_level(filtration, x)
            if lv is None:
                missing.append(x)
            else:
                levels[label(x)] = lv
    details = {"simplices": len(levels) + len(missing), "levels": levels}
    if missing:
        return Report(FAIL, "union-colimit", "filtered-colimit",
                      witness={"unassigned": [label(x) for x in missing]}, details=details)
    return Report(PASS, "union-colimit", "filtered-colimit", details=details)


# -- serialization ---------------------------------------------------------------------


def fragment_to_obj(S: SimplicialSetFragment) -> dict:
    out = {"dim": S.N,
           "simplices": {str(n): [label(x) for x in S.simplices[n]] for n in range(S.N + 1)},
           "faces": {str(n): {label(x): [label(y) for y in S.faces[n][x]] for x in S.simplices[n]}
                     for n in range(1, S.N + 1)}}
    if S.degeneracies is not None:
        out["degeneracies"] = {str(n): {label(x): [label(y) for y in S.degeneracies[n][x]]
                                        for x in S.simplices[n]} for n in range(S.N)}
    return out


def fragment_from_obj(obj: dict) -> SimplicialSetFragment:
    N = int(obj["dim"])
    simp = {int(n): list(xs) for n, xs in obj.get("simplices", {}).items()}
    faces = {int(n): {x: tuple(ys) for x, ys in t.items()} for n, t in obj.get("faces", {}).items()}
    degs = obj.get("degeneracies")
    if degs is not None:
        degs = {int(n): {x: tuple(ys) for x, ys in t.items()} for n, t in degs.items()}
    return SimplicialSetFragment(N, simp, faces, degs)


def skeleton_edges(S: SimplicialSetFragment) -> list:
    """Nondegenerate 1-simplices as (source, target, name)."""
    if S.N < 1:
        return []
    return [(S.d(1, 1, e), S.d(1, 0, e), e) for e in S.nondegenerate(1)]
