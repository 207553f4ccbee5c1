"""Sheaves on the Alexandrov space of a finite poset, and their equivalence with functors.

An :class:`AlexandrovSheaf` stores sections on every open (upward-closed
set) and restrictions along the elementary inclusions ``U \\ {m} ⊂ U`` with
m minimal in U. The section presheaf is kept as a :class:`SheafFunctor` on
the poset of opens ordered by reverse inclusion, so presheaf functoriality
is the ordinary functoriality check there.
"""

from __future__ import annotations

from typing import Mapping

from .errors import SheafConditionViolated
from .labels import ordered
from .linalg import Mat, rank, solve, vstack
from .poset import Poset, open_sets
from .report import FAIL, PASS, Report
from .sheaf import (SET, SheafFunctor, check_functoriality, is_natural_iso, kind_ops,
                    limit_over)


def opens_poset(base: Poset) -> Poset:
    """Opens of ``base``, with U <= V iff V ⊆ U (the direction of restriction)."""
    opens = open_sets(base)
    covers = []
    for U in opens:
        for m in _minimal_in(base, U):
            covers.append((U, U - {m}))
    return Poset(opens, covers)


def _minimal_in(P: Poset, U) -> list:
    return [m for m in ordered(U) if not any(P.lt(x, m) for x in U)]


class AlexandrovSheaf:
    def __init__(self, base: Poset, kind: str, sections: Mapping, restrictions: Mapping):
        self.base = base
        self.kind = kind
        self.opens = opens_poset(base)
        self.presheaf = SheafFunctor(self.opens, kind, sections, restrictions)

    @property
    def ops(self):
        return kind_ops(self.kind)

    def sections(self, U):
        return self.presheaf.values[frozenset(U)]

    def restrict(self, U, V):
        """Restriction map from sections over U to sections over V ⊆ U."""
        return self.presheaf.map(frozenset(U), frozenset(V))

    def stalk_functor(self) -> SheafFunctor:
        P = self.base
        vals = {a: self.sections(P.up(a)) for a in P}
        trans = {(a, b): self.restrict(P.up(a), P.up(b)) for a, b in P.covers}
        return SheafFunctor(P, self.kind, vals, trans)


def sheaf_from_functor(F: SheafFunctor) -> AlexandrovSheaf:
    """Sections over U are the limit of F over U."""
    P = F.base
    opens = open_sets(P)
    limits = {U: limit_over(F, U) for U in opens}
    sections = {U: lim.value for U, lim in limits.items()}
    restrictions = {}
    for U in opens:
        for m in _minimal_in(P, U):
            V = U - {m}
            if F.kind == SET:
                restrictions[(U, V)] = {fam: tuple(pr for pr in fam if pr[0] != m)
                                        for fam in sections[U]}
            else:
                lu, lv = limits[U], limits[V]
                s, d = lu.offsets[m]
                rows = [i for i in range(lu.basis.rows) if not s <= i < s + d]
                restrictions[(U, V)] = solve(lv.basis, lu.basis.select_rows(rows))
    return AlexandrovSheaf(P, F.kind, sections, restrictions)


def _comparison(S: AlexandrovSheaf, U, stalks: SheafFunctor):
    """The map S(U) -> compatible stalk families over U, with the target limit."""
    lim = limit_over(stalks, U)
    P = S.base
    if S.kind == SET:
        m = {s: tuple((a, S.restrict(U, P.up(a))[s]) for a in lim.shape)
             for s in S.sections(U)}
        return m, lim
    blocks = [S.restrict(U, P.up(a)) for a in lim.shape]
    stacked = vstack(blocks, S.sections(U)) if blocks else Mat.zeros(0, S.sections(U))
    return stacked, lim


def sheafiness_check(S: AlexandrovSheaf) -> Report:
    """Sections over every open must biject with compatible families over its principal opens."""
    pre = check_functoriality(S.presheaf)
    if pre.verdict == FAIL:
        return Report(FAIL, "sheafiness", "sheaf-condition",
                      witness={"reason": "restrictions do not compose", **pre.witness})
    stalks = S.stalk_functor()
    for U in S.opens.elements:
        comp, lim = _comparison(S, U, stalks)
        if S.kind == SET:
            images = list(comp.values())
            if len(set(images)) != len(images):
                return _fail(U, "two sections have the same family of germs", len(images), len(lim.value))
            if set(images) != set(lim.value):
                return _fail(U, "some compatible family is not glued from a section",
                             len(images), len(lim.value))
        else:
            n = S.sections(U)
            if rank(comp) != n:
                return _fail(U, "restriction to principal opens is not injective", n, lim.value)
            if n != lim.value or solve(lim.basis, comp) is None:
                return _fail(U, "compatible families are not all glued", n, lim.value)
    return Report(PASS, "sheafiness", "sheaf-condition",
                  details={"opens_checked": len(S.opens)})


def _fail(U, reason, n_sections, n_families):
    return Report(FAIL, "sheafiness", "sheaf-condition",
                  witness={"open": ordered(U), "reason": reason,
                           "sections": n_sections, "compatible_families": n_families})


def functor_from_sheaf(S: AlexandrovSheaf) -> SheafFunctor:
    """Stalk at a = sections over the principal open U_a."""
    rep = sheafiness_check(S)
    if rep.verdict == FAIL:
        raise SheafConditionViolated(rep.witness.get("open", []), rep.witness["reason"])
    return S.stalk_functor()


# -- round trips ---------------------------------------------------------------------


def functor_roundtrip(F: SheafFunctor):
    """Return (G, eta) with G = stalks of the sheaf of F and eta: F -> G the canonical iso."""
    G = functor_from_sheaf(sheaf_from_functor(F))
    P = F.base
    eta = {}
    for a in P:
        shape = tuple(p for p in P.linear_extension if P.leq(a, p))
        if F.kind == SET:
            eta[a] = {x: tuple((p, F.map(a, p)[x]) for p in shape) for x in F.values[a]}
        else:
            lim = limit_over(F, shape)
            eta[a] = solve(lim.basis, vstack([F.map(a, p) for p in shape], F.values[a]))
    return G, eta


def sheaf_roundtrip(S: AlexandrovSheaf):
    """Return (S2, phi) with S2 the sheaf of the stalk functor and phi: S -> S2 on every open."""
    stalks = functor_from_sheaf(S)
    S2 = sheaf_from_functor(stalks)
    phi = {}
    for U in S.opens.elements:
        comp, lim = _comparison(S, U, stalks)
        phi[U] = comp if S.kind == SET else solve(lim.basis, comp)
    return S2, phi


def roundtrip_report(F: SheafFunctor) -> Report:
    """Both round trips functor -> sheaf -> functor and sheaf -> functor -> sheaf."""
    G, eta = functor_roundtrip(F)
    if not is_natural_iso(F, G, eta):
        return Report(FAIL, "sheaf-roundtrip", "representation",
                      witness={"side": "functor", "reason": "canonical map is not a natural iso"})
    S = sheaf_from_functor(F)
    S2, phi = sheaf_roundtrip(S)
    if not is_natural_iso(S.presheaf, S2.presheaf, phi):
        return Report(FAIL, "sheaf-roundtrip", "representation",
                      witness={"side": "sheaf", "reason": "canonical map is not a natural iso"})
    return Report(PASS, "sheaf-roundtrip", "representation",
                  details={"elements": len(F.base), "opens": len(S.opens)})
