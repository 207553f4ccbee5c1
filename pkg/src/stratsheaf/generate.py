"""Seeded random instances: posets, functors, filtrations, complexes, metric spaces.

Random functors are built bottom-up: the value at b receives a random map out
of the colimit of everything strictly below b, so every transition system
produced is functorial, and every functor with the chosen sizes can occur.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .linalg import Mat
from .poset import OmegaFiltration, Poset, downward_closure, upward_closure, validate_omega_filtration
from .sheaf import SET, SheafFunctor, colimit_over


def random_poset(rng: random.Random, n: int, density: float = 0.4) -> Poset:
    ids = [str(i) for i in range(n)]
    less = [(ids[i], ids[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset.from_relation(ids, less)


def random_downset(rng: random.Random, P: Poset, proper: bool = False) -> frozenset:
    seeds = [a for a in P if rng.random() < 0.4]
    D = downward_closure(P, seeds)
    if proper and len(D) == len(P) and len(P) > 0:
        top = rng.choice(P.maximal())
        D = D - {top}
    return D


def random_upset(rng: random.Random, P: Poset) -> frozenset:
    return upward_closure(P, [a for a in P if rng.random() < 0.4])


def random_functor(rng: random.Random, P: Poset, kind: str = SET, max_size: int = 3,
                   allow_empty: bool = True) -> SheafFunctor:
    vals, trans = {}, {}
    done = []
    for b in P.linear_extension:
        below = P.down(b) - {b}
        partial = SheafFunctor(P.subposet(done), kind, vals,
                               {c: trans[c] for c in P.subposet(done).covers})
        colim = colimit_over(partial, below)
        if kind == SET:
            lo = 1 if (colim.value or not allow_empty) else 0
            size = rng.randint(lo, max_size)
            vals[b] = tuple(f"x{i}" for i in range(size))
            f = {cls: rng.choice(vals[b]) for cls in colim.value}
            for a in P.lower_covers(b):
                trans[(a, b)] = {x: f[colim.injections[a][x]] for x in vals[a]}
        else:
            dim = rng.randint(0, max_size)
            vals[b] = dim
            m = Mat.from_rows([[Fraction(rng.randint(-2, 2)) for _ in range(colim.value)]
                               for _ in range(dim)], cols=colim.value)
            for a in P.lower_covers(b):
                trans[(a, b)] = m @ colim.injections[a]
        done.append(b)
    return SheafFunctor(P, kind, vals, trans)


def random_filtration(rng: random.Random, n_elements: int, n_levels: int,
                      density: float = 0.4) -> OmegaFiltration:
    """Random poset with an increasing chain of downsets ending at the whole poset."""
    P = random_poset(rng, n_elements, density)
    order = list(P.linear_extension)
    # prefixes of a linear extension are downward closed; pick random cut points
    cuts = sorted(rng.randint(0, len(order)) for _ in range(n_levels - 1)) + [len(order)]
    levels = [P.subposet(order[:c]) for c in cuts]
    return validate_omega_filtration(levels)


def random_rational(rng: random.Random, lo: int = 0, hi: int = 20, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))
