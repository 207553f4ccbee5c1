"""Towers of functors over an ω-filtration, gluing, and the round-trip verifier.

A tower is a stage over each level A_n and comparison isomorphisms
c_n: stage_n -> stage_{n+1}|A_n. Gluing reads the value at a off the least
level containing a and transports along comparisons to build transitions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import BaseMismatch, InvalidComparison, MalformedMap
from .generate import random_functor
from .labels import ordered
from .poset import OmegaFiltration
from .report import FAIL, PASS, Report
from .sheaf import (SET, SheafFunctor, find_isomorphism, hom_set, identity_nat, is_natural,
                    kind_ops, naturality_failure, relabel)


@dataclass
class SheafTower:
    filtration: OmegaFiltration
    stages: list
    comparisons: list           # comparisons[n][a] for a in A_n, n < N
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        levels = self.filtration.levels
        if len(self.stages) != len(levels) or len(self.comparisons) != len(levels) - 1:
            raise BaseMismatch("one stage per level and one comparison per step are required")
        for n, (st, A) in enumerate(zip(self.stages, levels)):
            if st.base != A:
                raise BaseMismatch(f"stage {n} does not live over level {n}")
        if self.validate:
            bad = tower_defect(self)
            if bad is not None:
                raise InvalidComparison(*bad)

    @property
    def kind(self) -> str:
        return self.stages[0].kind if self.stages else SET

    @property
    def ops(self):
        return kind_ops(self.kind)


def tower_defect(T: SheafTower):
    """First (level, element, reason) where a comparison is not a natural iso, else None."""
    ops = T.ops
    for n, c in enumerate(T.comparisons):
        A = T.filtration.levels[n]
        lo, hi = T.stages[n], T.stages[n + 1].restrict(A)
        for a in ordered(A):
            if a not in c:
                return n, a, "missing component"
            try:
                ops.check(c[a], lo.values[a], hi.values[a])
            except MalformedMap:
                return n, a, "component has the wrong shape"
            if not ops.is_iso(c[a], lo.values[a], hi.values[a]):
                return n, a, "component is not invertible"
        bad = naturality_failure(lo, hi, c)
        if bad is not None:
            return n, bad[0], "comparison does not commute with transitions"
    return None


def restrict_tower(F: SheafFunctor, filtration: OmegaFiltration) -> SheafTower:
    if F.base != filtration.top:
        raise BaseMismatch("functor must live over the top level")
    stages = [F.restrict(A) for A in filtration.levels]
    comps = [identity_nat(st) for st in stages[:-1]]
    return SheafTower(filtration, stages, comps)


def transport(T: SheafTower, a, m: int):
    """Composite of comparisons from the least level of a up to level m, at a."""
    ops = T.ops
    n = T.filtration.least_level(a)
    out = ops.identity(T.stages[n].values[a])
    for k in range(n, m):
        out = ops.compose(T.comparisons[k][a], out)
    return out


def glue_tower(T: SheafTower) -> SheafFunctor:
    F = T.filtration
    top = F.top
    ops = T.ops
    vals = {a: T.stages[F.least_level(a)].values[a] for a in top}
    trans = {}
    for a, b in top.covers:
        nb = F.least_level(b)
        trans[(a, b)] = ops.compose(T.stages[nb].map(a, b), transport(T, a, nb))
    return SheafFunctor(top, T.kind, vals, trans)


def glue_iso(T: SheafTower) -> list:
    """Stagewise isos restrict(glue T)_n -> stage_n, compatible with the comparisons."""
    return [{a: transport(T, a, n) for a in A} for n, A in enumerate(T.filtration.levels)]


def tower_homs(T: SheafTower, T2: SheafTower) -> list:
    """All compatible families f_n: stage_n -> stage2_n with c2_n f_n = f_{n+1} c_n (set-valued)."""
    ops = T.ops
    levels = T.filtration.levels
    out = []

    def rec(n, acc):
        if n == len(levels):
            out.append(list(acc))
            return
        fixed = None
        if n:
            prev = acc[-1]
            fixed = {a: ops.compose(T2.comparisons[n - 1][a],
                                    ops.compose(prev[a], ops.invert(T.comparisons[n - 1][a])))
                     for a in levels[n - 1]}
        for f in hom_set(T.stages[n], T2.stages[n], fixed=fixed):
            rec(n + 1, acc + [f])

    if levels:
        rec(0, [])
    return out


def glue_hom(T: SheafTower, f: list) -> dict:
    return {a: f[T.filtration.least_level(a)][a] for a in T.filtration.top}


def restrict_hom(filtration: OmegaFiltration, alpha: dict) -> list:
    return [{a: alpha[a] for a in A} for A in filtration.levels]


def _key(alpha: dict) -> tuple:
    return tuple((a, tuple(sorted(alpha[a].items(), key=repr))) for a in ordered(alpha))


def random_tower(rng: random.Random, filtration: OmegaFiltration, max_size: int = 3) -> SheafTower:
    """A restricted random functor with every stage relabelled by fresh random bijections."""
    base = restrict_tower(random_functor(rng, filtration.top, SET, max_size), filtration)
    bij = []
    for n, st in enumerate(base.stages):
        b = {}
        for a in st.base:
            names = [f"s{n}.{a}.{i}" for i in range(len(st.values[a]))]
            rng.shuffle(names)
            b[a] = dict(zip(st.values[a], names))
        bij.append(b)
    stages = [relabel(st, b) for st, b in zip(base.stages, bij)]
    comps = []
    for n, A in enumerate(filtration.levels[:-1]):
        comps.append({a: {bij[n][a][x]: bij[n + 1][a][x] for x in bij[n][a]} for a in A})
    return SheafTower(filtration, stages, comps)


def check_tower(T: SheafTower) -> Report:
    """Validate comparisons, then both round trips through the glued functor."""
    bad = tower_defect(T)
    if bad is not None:
        n, a, reason = bad
        return Report(FAIL, "devissage", "devissage",
                      witness={"level": n, "element": a, "reason": reason})
    G = glue_tower(T)
    back = restrict_tower(G, T.filtration)
    for n, (st, iso) in enumerate(zip(back.stages, glue_iso(T))):
        if not is_natural(st, T.stages[n], iso):
            return Report(FAIL, "devissage", "devissage",
                          witness={"level": n, "reason": "restricted glue is not isomorphic to the stage"})
    return Report(PASS, "devissage", "devissage")


CHECKS = {
    "restrict-then-glue": "devissage",
    "glue-then-restrict": "devissage",
    "hom-bijection": "devissage",
    "stabilization": "kan-extension",
}


def verify_devissage(filtration: OmegaFiltration, samples: int, seed: int = 0,
                     max_size: int = 3) -> Report:
    """Seeded random functors and towers: both round trips and both hom bijections."""
    counts = {"samples": samples, "hom_pairs": 0, "homs_enumerated": 0}

    def fail(k, check, reason, **extra):
        return Report(FAIL, "devissage-verify", "devissage", seed=seed,
                      witness={"sample": k, "check": check, "reason": reason, **extra},
                      details={"checks": CHECKS, **counts})

    top = filtration.top
    for k in range(samples):
        rng = random.Random(f"{seed}/{k}")
        F = random_functor(rng, top, SET, max_size)
        G = random_functor(rng, top, SET, max_size)
        TF, TG = restrict_tower(F, filtration), restrict_tower(G, filtration)
        if glue_tower(TF) != F:
            return fail(k, "restrict-then-glue", "glue(restrict F) differs from F")
        # restriction on morphisms is a bijection onto compatible families
        homs = hom_set(F, G)
        fams = tower_homs(TF, TG)
        images = {tuple(_key(f) for f in restrict_hom(filtration, a)) for a in homs}
        targets = {tuple(_key(f) for f in fam) for fam in fams}
        if len(images) != len(homs) or images != targets:
            return fail(k, "hom-bijection", "restriction is not a bijection on morphisms",
                        functor_homs=len(homs), tower_homs=len(fams))
        counts["hom_pairs"] += 1
        counts["homs_enumerated"] += len(homs)
        # random towers with nontrivial comparisons
        T, T2 = random_tower(rng, filtration, max_size), random_tower(rng, filtration, max_size)
        rep = check_tower(T)
        if not rep.ok:
            return fail(k, "glue-then-restrict", rep.witness["reason"])
        GT = glue_tower(T)
        for n, A in enumerate(filtration.levels):
            if find_isomorphism(GT.restrict(A), T.stages[n]) is None:
                return fail(k, "glue-then-restrict", "no isomorphism found by search", level=n)
        for a in top:
            n0 = filtration.least_level(a)
            for m in range(n0, len(filtration.levels)):
                if T.ops.size(T.stages[m].values[a]) != T.ops.size(GT.values[a]):
                    return fail(k, "stabilization", "value changes above the least level", element=a)
        fams = tower_homs(T, T2)
        glued = {_key(glue_hom(T, f)) for f in fams}
        direct = {_key(a) for a in hom_set(GT, glue_tower(T2))}
        if len(glued) != len(fams) or glued != direct:
            return fail(k, "hom-bijection", "gluing is not a bijection on morphisms",
                        tower_homs=len(fams), functor_homs=len(direct))
        counts["hom_pairs"] += 1
        counts["homs_enumerated"] += len(fams)
    return Report(PASS, "devissage-verify", "devissage", seed=seed,
                  details={"checks": CHECKS, "levels": len(filtration.levels), **counts})
