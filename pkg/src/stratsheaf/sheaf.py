"""Sheaves on finite posets as functors into finite sets or rational vector spaces.

A :class:`SheafFunctor` assigns a value to each element and a transition map
to each cover ``a ⋖ b`` (covariant: maps go up the order, matching restriction
from the principal open U_a to U_b). Everything is exact: sets are finite
tuples of hashable labels, linear maps are :class:`~stratsheaf.linalg.Mat`
over the rationals.

Kan extensions along inclusions are computed with explicit embeddings of each
value into the product over its comma set, which also gives the action of the
extension on natural transformations, units and counits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .errors import (BaseMismatch, MalformedMap, MissingTransition, NotDownwardClosed,
                     NotSubposet, NotUpwardClosed, TooLarge)
from .labels import label, ordered
from .linalg import Mat, hstack, inverse, kernel, rank, rref, solve, vstack
from .poset import DEFAULT_MAX_SIZE, MonotoneMap, Poset
from .report import FAIL, PASS, Report

SET = "set"
VECT = "vect"
KINDS = (SET, VECT)

DEFAULT_HOM_CAP = 200_000


# -- the two target categories ---------------------------------------------------


class _Sets:
    name = SET

    @staticmethod
    def identity(value):
        return {x: x for x in value}

    @staticmethod
    def compose(g, f):
        """g ∘ f"""
        return {x: g[y] for x, y in f.items()}

    @staticmethod
    def key(m):
        return tuple(sorted(m.items(), key=lambda kv: label(kv[0])))

    @staticmethod
    def terminal():
        return ((),)

    @staticmethod
    def initial():
        return ()

    @staticmethod
    def from_initial(value):
        return {}

    @staticmethod
    def size(value):
        return len(value)

    @staticmethod
    def check(m, src, dst):
        if set(m) != set(src):
            raise MalformedMap(f"map domain {ordered(m)} != {ordered(src)}")
        bad = [y for y in m.values() if y not in set(dst)]
        if bad:
            raise MalformedMap(f"map values {bad!r} outside codomain")

    @staticmethod
    def is_iso(m, src, dst):
        return len(src) == len(dst) and set(m.values()) == set(dst)

    @staticmethod
    def invert(m):
        return {y: x for x, y in m.items()}


class _Vects:
    name = VECT

    @staticmethod
    def identity(value):
        return Mat.identity(value)

    @staticmethod
    def compose(g, f):
        return g @ f

    @staticmethod
    def key(m):
        return m

    @staticmethod
    def terminal():
        return 0

    @staticmethod
    def initial():
        return 0

    @staticmethod
    def from_initial(value):
        return Mat.zeros(value, 0)

    @staticmethod
    def size(value):
        return value

    @staticmethod
    def check(m, src, dst):
        if not isinstance(m, Mat) or m.shape != (dst, src):
            shape = getattr(m, "shape", None)
            raise MalformedMap(f"matrix shape {shape} != {(dst, src)}")

    @staticmethod
    def is_iso(m, src, dst):
        return src == dst and rank(m) == src

    @staticmethod
    def invert(m):
        return inverse(m)


def kind_ops(kind):
    return {SET: _Sets, VECT: _Vects}[kind]


# -- functors ------------------------------------------------------------------------


class SheafFunctor:
    """A functor from a finite poset into finite sets (kind ``set``) or Q-vector spaces (``vect``).

    ``values[a]`` is a tuple of labels (set) or a dimension (vect);
    ``transitions[(a, b)]`` is a dict (set) or a dim(b) x dim(a) matrix (vect)
    for every cover a ⋖ b.
    """

    def __init__(self, base: Poset, kind: str, values: Mapping, transitions: Mapping):
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
        self.base = base
        self.kind = kind
        self.ops = kind_ops(kind)
        vals = {}
        for a in base:
            if a not in values:
                raise MalformedMap(f"no value at {a!r}")
            v = values[a]
            if kind == SET:
                v = tuple(ordered(v))
                if len(set(v)) != len(v):
                    raise MalformedMap(f"value at {a!r} repeats an element")
            else:
                if not isinstance(v, int) or v < 0:
                    raise MalformedMap(f"dimension at {a!r} must be a nonnegative int")
            vals[a] = v
        extra = set(values) - set(base.elements)
        if extra:
            raise MalformedMap(f"values given for unknown elements {ordered(extra)}")
        self.values = vals
        trans = {}
        for c in base.covers:
            if c not in transitions:
                raise MissingTransition(c)
            m = transitions[c]
            if kind == SET:
                m = dict(m)
            self.ops.check(m, vals[c[0]], vals[c[1]])
            trans[c] = m
        extra = set(transitions) - set(base.covers)
        if extra:
            raise MalformedMap(f"transitions on non-covers {sorted(map(label, extra))}")
        self.transitions = trans
        self._memo = {}

    def __repr__(self):
        return f"SheafFunctor({self.kind}, {len(self.base)} elements)"

    def __eq__(self, other):
        if not isinstance(other, SheafFunctor):
            return NotImplemented
        if self.kind != other.kind or self.base != other.base:
            return False
        if self.values != other.values:
            return False
        return all(self.ops.key(self.transitions[c]) == self.ops.key(other.transitions[c])
                   for c in self.base.covers)

    __hash__ = None

    def __call__(self, a):
        return self.values[a]

    def map(self, a, b):
        """Transition for a <= b, composed along a canonical cover path."""
        key = (a, b)
        if key in self._memo:
            return self._memo[key]
        if not self.base.leq(a, b):
            raise ValueError(f"{a!r} is not <= {b!r}")
        if a == b:
            m = self.ops.identity(self.values[a])
        else:
            c = next(c for c in ordered(self.base.upper_covers(a)) if self.base.leq(c, b))
            m = self.ops.compose(self.map(c, b), self.transitions[(a, c)])
        self._memo[key] = m
        return m

    def size(self, a) -> int:
        return self.ops.size(self.values[a])

    def restrict(self, sub: Poset) -> "SheafFunctor":
        return pullback(self, MonotoneMap.inclusion(sub, self.base))


def constant_functor(base: Poset, kind: str, value) -> SheafFunctor:
    ops = kind_ops(kind)
    vals = {a: value for a in base}
    if kind == SET:
        vals = {a: tuple(ordered(value)) for a in base}
    return SheafFunctor(base, kind, vals, {c: ops.identity(vals[c[0]]) for c in base.covers})


def check_functoriality(F: SheafFunctor, max_size: int = DEFAULT_MAX_SIZE) -> Report:
    """Compare all cover-path composites for every comparable pair."""
    P = F.base
    if len(P) > max_size:
        raise TooLarge(f"poset has {len(P)} elements, limit {max_size}")
    ops = F.ops
    comps = {}
    for a in reversed(P.linear_extension):
        comps[(a, a)] = {ops.key(ops.identity(F.values[a])): ops.identity(F.values[a])}
        for b in P.up(a) - {a}:
            out = {}
            for c in P.upper_covers(a):
                if P.leq(c, b):
                    for m in comps[(c, b)].values():
                        m2 = ops.compose(m, F.transitions[(a, c)])
                        out.setdefault(ops.key(m2), m2)
            comps[(a, b)] = out
    bad = [(a, b) for (a, b), ms in comps.items() if len(ms) > 1]
    if not bad:
        return Report(PASS, "functoriality", "functoriality",
                      details={"pairs_checked": len(comps)})
    bad.sort(key=lambda ab: (len(P.up(ab[0]) & P.down(ab[1])), label(ab[0]), label(ab[1])))
    a, b = bad[0]
    composites = list(comps[(a, b)].values())[:2]
    return Report(FAIL, "functoriality", "functoriality",
                  witness={"pair": [a, b], "composites": [_map_json(F.kind, m) for m in composites]},
                  details={"violating_pairs": len(bad)})


def _map_json(kind, m):
    if kind == SET:
        return {label(x): label(y) for x, y in m.items()}
    return m.to_strings()


# -- limits and colimits -------------------------------------------------------------


@dataclass
class Limit:
    """A limit cone. ``value`` is a tuple of families (set) or a dimension (vect).

    Set families are tuples of ``(element, x)`` pairs in shape order. For vect,
    ``basis`` has one column per limit basis vector in product coordinates
    (blocks in shape order, offsets in ``offsets``).
    """

    kind: str
    shape: tuple
    value: object
    projections: dict
    basis: Mat | None = None
    offsets: dict = field(default_factory=dict)


def _shape_order(P: Poset, shape) -> tuple:
    shape = set(shape)
    for x in shape:
        P._check(x)
    return tuple(e for e in P.linear_extension if e in shape)


def _families(F: SheafFunctor, order: tuple):
    """All compatible families over ``order`` (a linear extension of the shape)."""
    P = F.base
    below = {b: [a for a in order[:i] if P.leq(a, b)] for i, b in enumerate(order)}
    out = []
    assign = {}

    def rec(i):
        if i == len(order):
            out.append(tuple((a, assign[a]) for a in order))
            return
        b = order[i]
        preds = below[b]
        if preds:
            x = F.map(preds[0], b)[assign[preds[0]]]
            if all(F.map(a, b)[assign[a]] == x for a in preds[1:]):
                assign[b] = x
                rec(i + 1)
            return
        for x in F.values[b]:
            assign[b] = x
            rec(i + 1)

    rec(0)
    return tuple(out)


def limit_over(F: SheafFunctor, shape) -> Limit:
    order = _shape_order(F.base, shape)
    if F.kind == SET:
        fams = _families(F, order)
        projections = {a: {fam: dict(fam)[a] for fam in fams} for a in order}
        return Limit(SET, order, fams, projections)
    offsets, total = {}, 0
    for a in order:
        offsets[a] = (total, F.values[a])
        total += F.values[a]
    sub = F.base.subposet(order) if order else Poset([])
    blocks = []
    for a, b in sub.covers:
        row = [Mat.zeros(F.values[b], F.values[c]) for c in order]
        row[order.index(a)] = F.map(a, b)
        row[order.index(b)] = Mat.identity(F.values[b]).scale(-1)
        blocks.append(hstack(row, F.values[b]))
    if blocks:
        basis = kernel(vstack(blocks, total))
    else:
        basis = Mat.identity(total)
    projections = {a: basis.select_rows(range(s, s + d)) for a, (s, d) in offsets.items()}
    return Limit(VECT, order, basis.cols, projections, basis, offsets)


@dataclass
class Colimit:
    kind: str
    shape: tuple
    value: object
    injections: dict
    quotient: Mat | None = None
    offsets: dict = field(default_factory=dict)


def colimit_over(F: SheafFunctor, shape) -> Colimit:
    """Colimit over a subset of the base: a quotient of the disjoint union / direct sum."""
    order = _shape_order(F.base, shape)
    sub = F.base.subposet(order) if order else Poset([])
    if F.kind == SET:
        parent = {(a, x): (a, x) for a in order for x in F.values[a]}

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        for a, b in sub.covers:
            m = F.map(a, b)
            for x in F.values[a]:
                ru, rv = find((a, x)), find((b, m[x]))
                if ru != rv:
                    parent[max(ru, rv, key=label)] = min(ru, rv, key=label)
        classes = {}
        for u in parent:
            classes.setdefault(find(u), []).append(u)
        names = {r: tuple(sorted(us, key=label)) for r, us in classes.items()}
        value = tuple(ordered(names.values()))
        inj = {a: {x: names[find((a, x))] for x in F.values[a]} for a in order}
        return Colimit(SET, order, value, inj)
    offsets, total = {}, 0
    for a in order:
        offsets[a] = (total, F.values[a])
        total += F.values[a]
    rels = []
    for a, b in sub.covers:
        row = [Mat.zeros(F.values[c], F.values[a]) for c in order]
        row[order.index(a)] = Mat.identity(F.values[a])
        row[order.index(b)] = F.map(a, b).scale(-1)
        rels.append(vstack(row, F.values[a]))
    relations = hstack(rels, total) if rels else Mat.zeros(total, 0)
    # complement the image of the relations by unit vectors (pivot order is deterministic)
    _, piv = rref(hstack([relations, Mat.identity(total)], total))
    image_cols = [p for p in piv if p < relations.cols]
    comp_units = [p - relations.cols for p in piv if p >= relations.cols]
    basis = hstack([relations.select_cols(image_cols),
                    Mat.identity(total).select_cols(comp_units)], total)
    coords = inverse(basis) if total else Mat.zeros(0, 0)
    k = len(comp_units)
    quotient = coords.select_rows(range(len(image_cols), len(image_cols) + k))
    inj = {a: quotient.select_cols(range(s, s + d)) for a, (s, d) in offsets.items()}
    return Colimit(VECT, order, k, inj, quotient, offsets)


# -- pullback and Kan extensions -----------------------------------------------------------


def pullback(F: SheafFunctor, f: MonotoneMap) -> SheafFunctor:
    """Precomposition F ∘ f."""
    if f.target != F.base:
        raise BaseMismatch("map target is not the functor's base")
    vals = {p: F.values[f(p)] for p in f.source}
    trans = {(p, q): F.map(f(p), f(q)) for p, q in f.source.covers}
    return SheafFunctor(f.source, F.kind, vals, trans)


def _check_inclusion(sub: Poset, ambient: Poset):
    if not sub.is_subposet_of(ambient):
        raise NotSubposet("functor base is not an induced subposet of the ambient poset")


@dataclass
class KanExtension:
    """A right Kan extension with each value embedded in the product over its comma set."""

    source: SheafFunctor
    functor: SheafFunctor
    comma: dict                # q -> tuple of source elements p with q <= p
    embed: dict                # q -> (set) {x: family} / (vect) Mat into product coordinates
    decode: dict               # q -> (set) {family: x}; unused for vect

    def coords_to_value(self, q, coords):
        if self.functor.kind == SET:
            return self.decode[q][coords]
        x = solve(self.embed[q], coords)
        if x is None:
            raise ValueError(f"coordinates outside the value at {q!r}")
        return x

    def block_rows(self, q, sub_comma):
        """Rows of the product coordinates over ``sub_comma`` inside those of ``q``."""
        F = self.source
        rows, off = [], 0
        wanted = set(sub_comma)
        for p in self.comma[q]:
            d = F.values[p]
            if p in wanted:
                rows.extend(range(off, off + d))
            off += d
        return rows


def right_kan(F: SheafFunctor, ambient: Poset) -> KanExtension:
    """Pushforward along a downward-closed inclusion, value at q = lim over {p : q <= p}."""
    P = F.base
    _check_inclusion(P, ambient)
    for a in P:
        for b in ordered(ambient.down(a)):
            if b not in P:
                raise NotDownwardClosed(None, a, b)
    comma, embed, decode, vals = {}, {}, {}, {}
    for q in ambient:
        cs = tuple(p for p in P.linear_extension if ambient.leq(q, p))
        comma[q] = cs
        if F.kind == SET:
            if q in P:
                vals[q] = F.values[q]
                embed[q] = {x: tuple((p, F.map(q, p)[x]) for p in cs) for x in F.values[q]}
            else:
                fams = limit_over(F, cs).value
                vals[q] = fams
                embed[q] = {fam: fam for fam in fams}
            decode[q] = {fam: x for x, fam in embed[q].items()}
        else:
            if q in P:
                vals[q] = F.values[q]
                embed[q] = vstack([F.map(q, p) for p in cs], F.values[q])
            else:
                lim = limit_over(F, cs)
                vals[q] = lim.value
                embed[q] = lim.basis
    trans = {}
    for q, r in ambient.covers:
        if q in P and r in P:
            trans[(q, r)] = F.transitions[(q, r)]
            continue
        keep = set(comma[r])
        if F.kind == SET:
            trans[(q, r)] = {x: decode[r][tuple(pair for pair in fam if pair[0] in keep)]
                             for x, fam in embed[q].items()}
        else:
            rows = []
            off = 0
            for p in comma[q]:
                d = F.values[p]
                if p in keep:
                    rows.extend(range(off, off + d))
                off += d
            m = solve(embed[r], embed[q].select_rows(rows))
            trans[(q, r)] = m
    G = SheafFunctor(ambient, F.kind, vals, trans)
    return KanExtension(F, G, comma, embed, decode)


def pushforward_closed(F: SheafFunctor, ambient: Poset) -> SheafFunctor:
    return right_kan(F, ambient).functor


def extension_open(F: SheafFunctor, ambient: Poset) -> SheafFunctor:
    """Extension by the initial value along an upward-closed inclusion (left Kan extension)."""
    U = F.base
    _check_inclusion(U, ambient)
    for a in U:
        for b in ordered(ambient.up(a)):
            if b not in U:
                raise NotUpwardClosed(a, b)
    ops = F.ops
    vals = {a: F.values[a] if a in U else ops.initial() for a in ambient}
    trans = {}
    for a, b in ambient.covers:
        if a in U:
            trans[(a, b)] = F.transitions[(a, b)]
        else:
            trans[(a, b)] = ops.from_initial(vals[b])
    return SheafFunctor(ambient, F.kind, vals, trans)


# -- natural transformations ---------------------------------------------------------------


def identity_nat(F: SheafFunctor) -> dict:
    return {a: F.ops.identity(F.values[a]) for a in F.base}


def compose_nat(beta: dict, alpha: dict, kind: str) -> dict:
    ops = kind_ops(kind)
    return {a: ops.compose(beta[a], alpha[a]) for a in alpha}


def naturality_failure(F: SheafFunctor, G: SheafFunctor, alpha: Mapping):
    """First cover where the naturality square fails, or None."""
    if F.base != G.base or F.kind != G.kind:
        raise BaseMismatch("natural transformations need functors on the same base")
    ops = F.ops
    for a in F.base:
        ops.check(alpha[a], F.values[a], G.values[a])
    for a, b in F.base.covers:
        lhs = ops.compose(G.transitions[(a, b)], alpha[a])
        rhs = ops.compose(alpha[b], F.transitions[(a, b)])
        if ops.key(lhs) != ops.key(rhs):
            return (a, b)
    return None


def is_natural(F, G, alpha) -> bool:
    return naturality_failure(F, G, alpha) is None


def is_natural_iso(F, G, alpha) -> bool:
    if not is_natural(F, G, alpha):
        return False
    return all(F.ops.is_iso(alpha[a], F.values[a], G.values[a]) for a in F.base)


def nat_equal(alpha: dict, beta: dict, kind: str) -> bool:
    ops = kind_ops(kind)
    return set(alpha) == set(beta) and all(ops.key(alpha[a]) == ops.key(beta[a]) for a in alpha)


def hom_set(F: SheafFunctor, G: SheafFunctor, fixed: Mapping | None = None,
            cap: int = DEFAULT_HOM_CAP) -> list:
    """All natural transformations F -> G between set-valued functors.

    Elements are processed bottom-up; naturality along the lower covers pins
    a component on the images of the incoming transitions, the rest is free.
    ``fixed`` pins whole components in advance.
    """
    if F.kind != SET or G.kind != SET:
        raise ValueError("hom_set enumerates set-valued functors; use hom_space for vect")
    if F.base != G.base:
        raise BaseMismatch("functors on different bases")
    P = F.base
    fixed = dict(fixed or {})
    order = P.linear_extension
    out = []
    alpha = {}

    def rec(i):
        if len(out) > cap:
            raise TooLarge(f"more than {cap} natural transformations")
        if i == len(order):
            out.append(dict(alpha))
            return
        b = order[i]
        pinned = {}
        for a in P.lower_covers(b):
            fa, ga = F.transitions[(a, b)], G.transitions[(a, b)]
            for x in F.values[a]:
                y, z = fa[x], ga[alpha[a][x]]
                if pinned.setdefault(y, z) != z:
                    return
        if b in fixed:
            comp = fixed[b]
            if any(comp[y] != z for y, z in pinned.items()):
                return
            alpha[b] = dict(comp)
            rec(i + 1)
            return
        free = [x for x in F.values[b] if x not in pinned]
        for choice in product(G.values[b], repeat=len(free)):
            comp = dict(pinned)
            comp.update(zip(free, choice))
            alpha[b] = comp
            rec(i + 1)
        alpha.pop(b, None)

    rec(0)
    return out


def hom_space(F: SheafFunctor, G: SheafFunctor) -> list:
    """Basis of the space of natural transformations between vect-valued functors."""
    if F.kind != VECT or G.kind != VECT:
        raise ValueError("hom_space is for vect-valued functors")
    if F.base != G.base:
        raise BaseMismatch("functors on different bases")
    P = F.base
    offsets, total = {}, 0
    for a in P:
        offsets[a] = total
        total += G.values[a] * F.values[a]

    def var(a, i, j):  # entry (i, j) of component a
        return offsets[a] + i * F.values[a] + j

    rows = []
    for a, b in P.covers:
        g, f = G.transitions[(a, b)], F.transitions[(a, b)]
        # (g @ alpha_a - alpha_b @ f)[i, j] = 0
        for i in range(G.values[b]):
            for j in range(F.values[a]):
                row = [0] * total
                for k in range(G.values[a]):
                    if g[i, k]:
                        row[var(a, k, j)] += g[i, k]
                for k in range(F.values[b]):
                    if f[k, j]:
                        row[var(b, i, k)] -= f[k, j]
                rows.append(row)
    system = Mat.from_rows(rows, cols=total) if rows else Mat.zeros(0, total)
    basis = kernel(system)
    out = []
    for c in range(basis.cols):
        col = basis.column(c)
        out.append({a: Mat(G.values[a], F.values[a], tuple(
            tuple(col[var(a, i, j)] for j in range(F.values[a])) for i in range(G.values[a])))
            for a in P})
    return out


def find_isomorphism(F: SheafFunctor, G: SheafFunctor):
    """Search for a natural isomorphism between set-valued functors (exhaustive)."""
    if F.kind != SET or G.kind != SET or F.base != G.base:
        raise ValueError("find_isomorphism compares set-valued functors on one base")
    P = F.base
    if any(len(F.values[a]) != len(G.values[a]) for a in P):
        return None
    from itertools import permutations
    order = P.linear_extension
    alpha = {}

    def rec(i):
        if i == len(order):
            return dict(alpha)
        b = order[i]
        pinned = {}
        for a in P.lower_covers(b):
            fa, ga = F.transitions[(a, b)], G.transitions[(a, b)]
            for x in F.values[a]:
                y, z = fa[x], ga[alpha[a][x]]
                if pinned.setdefault(y, z) != z:
                    return None
        if len(set(pinned.values())) != len(pinned):
            return None
        free = [x for x in F.values[b] if x not in pinned]
        rest = [z for z in G.values[b] if z not in set(pinned.values())]
        for perm in permutations(rest):
            alpha[b] = {**pinned, **dict(zip(free, perm))}
            found = rec(i + 1)
            if found is not None:
                return found
        alpha.pop(b, None)
        return None

    return rec(0)


def relabel(F: SheafFunctor, bijections: Mapping) -> SheafFunctor:
    """Transport a set-valued functor along elementwise bijections ``bijections[a]: F(a) -> new``."""
    vals = {a: tuple(bijections[a][x] for x in F.values[a]) for a in F.base}
    trans = {}
    for a, b in F.base.covers:
        inv = {y: x for x, y in bijections[a].items()}
        trans[(a, b)] = {y: bijections[b][F.transitions[(a, b)][x]] for y, x in inv.items()}
    return SheafFunctor(F.base, SET, vals, trans)
