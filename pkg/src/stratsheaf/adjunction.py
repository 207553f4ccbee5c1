"""Unit/counit and hom-set bijections for restriction along poset inclusions.

RIGHT: closed (downward-closed) inclusion j: P -> Q, j^* ⊣ j_* with j_* the
right Kan extension. LEFT: open (upward-closed) inclusion j: U -> A,
j_! ⊣ j^* with j_! the extension by the initial value.
"""

from __future__ import annotations

from .errors import AdjunctionViolation
from .labels import ordered
from .linalg import Mat, block_diag, solve, vstack
from .poset import MonotoneMap, Poset
from .report import FAIL, FINDING, PASS, Report
from .sheaf import (SET, VECT, KanExtension, SheafFunctor, compose_nat, extension_open, kind_ops,
                    hom_set, hom_space, identity_nat, is_natural, limit_over,
                    nat_equal, pullback, right_kan)

LEFT = "left"
RIGHT = "right"


def kan_on_nat(ke: KanExtension, ke2: KanExtension, alpha: dict) -> dict:
    """j_*(alpha): j_*F -> j_*F2 for alpha: F -> F2, read off the comma-set embeddings."""
    F = ke.source
    out = {}
    for q in ke.functor.base:
        cs = ke.comma[q]
        if F.kind == SET:
            out[q] = {x: ke2.decode[q][tuple((p, alpha[p][xp]) for p, xp in fam)]
                      for x, fam in ke.embed[q].items()}
        else:
            moved = block_diag([alpha[p] for p in cs]) @ ke.embed[q] if cs else \
                Mat.zeros(0, ke.functor.values[q])
            out[q] = solve(ke2.embed[q], moved)
    return out


def right_unit(G: SheafFunctor, ke: KanExtension) -> dict:
    """eta_G: G -> j_* j^* G, with ``ke`` the extension of j^*G."""
    out = {}
    for q in G.base:
        cs = ke.comma[q]
        if G.kind == SET:
            out[q] = {x: ke.decode[q][tuple((p, G.map(q, p)[x]) for p in cs)]
                      for x in G.values[q]}
        else:
            stacked = vstack([G.map(q, p) for p in cs], G.values[q]) if cs else \
                Mat.zeros(0, G.values[q])
            out[q] = solve(ke.embed[q], stacked)
    return out


def _restrict_nat(alpha: dict, sub: Poset) -> dict:
    return {p: alpha[p] for p in sub}


def _violation(side, element, reason, **extra) -> Report:
    return Report(FAIL, f"adjunction-{side}", "adjunction",
                  witness={"element": element, "reason": reason, **extra})


def _first_diff(alpha, beta, kind):
    o = kind_ops(kind)
    for a in ordered(alpha):
        if o.key(alpha[a]) != o.key(beta[a]):
            return a
    return None


def verify_adjunction(side: str, F: SheafFunctor, G: SheafFunctor,
                      raise_on_fail: bool = False, cap: int | None = None) -> Report:
    """Check triangle identities and the hom bijection for (F over the subposet, G over the ambient)."""
    if side == RIGHT:
        rep = _verify_right(F, G, cap)
    elif side == LEFT:
        rep = _verify_left(F, G, cap)
    else:
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")
    if raise_on_fail and rep.verdict == FAIL:
        raise AdjunctionViolation(rep.witness["element"], rep.witness["reason"])
    return rep


def _homs(X, Y, cap):
    if X.kind == SET:
        return hom_set(X, Y) if cap is None else hom_set(X, Y, cap=cap)
    return hom_space(X, Y)


def _verify_right(F: SheafFunctor, G: SheafFunctor, cap) -> Report:
    P, Q = F.base, G.base
    kind = F.kind
    inc = MonotoneMap.inclusion(P, Q)
    keF = right_kan(F, Q)
    jF = keF.functor
    jG = pullback(G, inc)                      # j^*G
    keJG = right_kan(jG, Q)
    # counit j^* j_* F -> F is the identity on the nose
    back = pullback(jF, inc)
    if back != F:
        a = next((p for p in P if back.values[p] != F.values[p]), ordered(P)[0])
        return _violation(RIGHT, a, "counit j^*j_*F -> F is not the identity")
    eps = identity_nat(F)
    eta_G = right_unit(G, keJG)
    if not is_natural(G, keJG.functor, eta_G):
        return _violation(RIGHT, None, "unit is not natural")
    # triangle 1: eps_{j^*G} . j^*(eta_G) = id_{j^*G}
    t1 = _restrict_nat(eta_G, P)
    bad = _first_diff(t1, identity_nat(jG), kind)
    if bad is not None:
        return _violation(RIGHT, bad, "triangle identity on j^*G fails")
    # triangle 2: j_*(eps_F) . eta_{j_*F} = id_{j_*F}
    keBack = right_kan(back, Q)
    eta_jF = right_unit(jF, keBack)
    t2 = compose_nat(kan_on_nat(keBack, keF, eps), eta_jF, kind)
    bad = _first_diff(t2, identity_nat(jF), kind)
    if bad is not None:
        return _violation(RIGHT, bad, "triangle identity on j_*F fails")

    def phi(alpha):   # Hom(j^*G, F) -> Hom(G, j_*F)
        return compose_nat(kan_on_nat(keJG, keF, alpha), eta_G, kind)

    def psi(beta):    # Hom(G, j_*F) -> Hom(j^*G, F)
        return _restrict_nat(beta, P)

    return _bijection_report(RIGHT, kind, _homs(jG, F, cap), _homs(G, jF, cap),
                             phi, psi, jG, F, G, jF)


def _verify_left(F: SheafFunctor, G: SheafFunctor, cap) -> Report:
    U, A = F.base, G.base
    kind = F.kind
    ops = F.ops
    inc = MonotoneMap.inclusion(U, A)
    jF = extension_open(F, A)                  # j_!F
    jG = pullback(G, inc)                      # j^*G
    back = pullback(jF, inc)
    if back != F:
        a = next((u for u in U if back.values[u] != F.values[u]), ordered(U)[0])
        return _violation(LEFT, a, "unit F -> j^*j_!F is not the identity")

    def shriek(alpha, target_ext):
        return {a: alpha[a] if a in U else ops.from_initial(target_ext.values[a]) for a in A}

    jjG = extension_open(jG, A)
    eps_G = {a: ops.identity(G.values[a]) if a in U else ops.from_initial(G.values[a])
             for a in A}
    if not is_natural(jjG, G, eps_G):
        return _violation(LEFT, None, "counit j_!j^*G -> G is not natural")
    eps_jF = {a: ops.identity(jF.values[a]) if a in U else ops.from_initial(jF.values[a])
              for a in A}
    # triangle 1: eps_{j_!F} . j_!(eta_F) = id_{j_!F}
    t1 = compose_nat(eps_jF, shriek(identity_nat(F), jF), kind)
    bad = _first_diff(t1, identity_nat(jF), kind)
    if bad is not None:
        return _violation(LEFT, bad, "triangle identity on j_!F fails")
    # triangle 2: j^*(eps_G) . eta_{j^*G} = id_{j^*G}
    t2 = _restrict_nat(eps_G, U)
    bad = _first_diff(t2, identity_nat(jG), kind)
    if bad is not None:
        return _violation(LEFT, bad, "triangle identity on j^*G fails")

    def phi(beta):    # Hom(j_!F, G) -> Hom(F, j^*G)
        return _restrict_nat(beta, U)

    def psi(alpha):   # Hom(F, j^*G) -> Hom(j_!F, G)
        return compose_nat(eps_G, shriek(alpha, jjG), kind)

    return _bijection_report(LEFT, kind, _homs(jF, G, cap), _homs(F, jG, cap),
                             phi, psi, jF, G, F, jG)


def _bijection_report(side, kind, left, right, phi, psi, L1, L2, R1, R2) -> Report:
    """left = Hom(L1, L2), right = Hom(R1, R2); phi: left -> right, psi its claimed inverse."""
    counts = {"left": len(left), "right": len(right)}
    if kind == VECT:
        counts = {"left_dim": len(left), "right_dim": len(right)}
    if len(left) != len(right):
        return _violation(side, None, "hom sets have different sizes", **counts)
    for alpha in left:
        beta = phi(alpha)
        if not is_natural(R1, R2, beta):
            return _violation(side, None, "image of a morphism is not natural", **counts)
        if not nat_equal(psi(beta), alpha, kind):
            return _violation(side, None, "psi . phi is not the identity", **counts)
    for beta in right:
        if not nat_equal(phi(psi(beta)), beta, kind):
            return _violation(side, None, "phi . psi is not the identity", **counts)
    return Report(PASS, f"adjunction-{side}", "adjunction",
                  details={**counts, "counit_iso": True, "triangles": True})


def proper_base_change_check(F: SheafFunctor, ambient: Poset, a) -> Report:
    """Stalk of the closed pushforward at a, against F(a) inside and the empty limit outside."""
    P = F.base
    ke = right_kan(F, ambient)
    stalk = ke.functor.values[a]
    ops = F.ops
    if a in P:
        lim = limit_over(F, [p for p in P if P.leq(a, p)])
        proj = lim.projections[a]
        proj_iso = ops.is_iso(proj, lim.value, F.values[a])
        if stalk == F.values[a] and proj_iso:
            return Report(PASS, "base-change", "proper-base-change",
                          details={"element": a, "inside": True, "stalk_size": ops.size(stalk)})
        return Report(FAIL, "base-change", "proper-base-change",
                      witness={"element": a, "inside": True, "stalk_size": ops.size(stalk),
                               "expected_size": F.size(a), "projection_iso": proj_iso})
    terminal = ops.terminal()
    if stalk != terminal:
        return Report(FAIL, "base-change", "proper-base-change",
                      witness={"element": a, "inside": False, "stalk_size": ops.size(stalk),
                               "expected_size": ops.size(terminal)})
    if F.kind == VECT:
        return Report(PASS, "base-change", "proper-base-change",
                      details={"element": a, "inside": False, "stalk_size": 0,
                               "note": "the zero space is both initial and terminal"})
    return Report(FINDING, "base-change", "proper-base-change",
                  witness={"element": a, "inside": False, "stalk_size": 1,
                           "initial_size": 0,
                           "note": ("the pushforward stalk is the terminal one-point set "
                                    "(empty limit), not the initial empty set")})
