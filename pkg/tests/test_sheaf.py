import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from oracles import (closure_from_covers, compatible_families, count_natural_transformations,
                     set_functors_isomorphic, sympy_rank)
from stratsheaf.errors import MissingTransition, NotDownwardClosed, NotUpwardClosed
from stratsheaf.generate import random_downset, random_functor, random_poset
from stratsheaf.linalg import Mat, inverse, kernel, rank, solve
from stratsheaf.poset import MonotoneMap, Poset, cone, disjoint_union
from stratsheaf.report import FAIL, PASS
from stratsheaf.sheaf import (SET, VECT, SheafFunctor, check_functoriality, colimit_over,
                              constant_functor, extension_open, find_isomorphism, hom_set,
                              hom_space, is_natural, limit_over, pullback, pushforward_closed)

DIAMOND = Poset(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
EDGE = Poset.chain(2)


def one(x):
    return Mat.from_rows([[Fraction(x)]])


def leq_pairs(P):
    return closure_from_covers(list(P), P.covers)


# -- functoriality --------------------------------------------------------------------


def test_constant_functor_on_diamond_is_functorial():
    F = constant_functor(DIAMOND, SET, ["p", "q"])
    assert check_functoriality(F).verdict == PASS


def test_noncommuting_diamond_reports_bottom_to_top():
    F = SheafFunctor(DIAMOND, VECT, {a: 1 for a in DIAMOND},
                     {("bot", "a"): one(1), ("bot", "b"): one(1),
                      ("a", "top"): one(1), ("b", "top"): one(2)})
    rep = check_functoriality(F)
    assert rep.verdict == FAIL
    assert rep.witness["pair"] == ["bot", "top"]
    assert sorted(c[0][0] for c in rep.to_dict()["witness"]["composites"]) == ["1", "2"]


def test_chain_functors_always_functorial():
    rng = random.Random(0)
    for _ in range(20):
        F = random_functor(rng, Poset.chain(5), SET, 3)
        assert check_functoriality(F).verdict == PASS


def test_missing_transition():
    with pytest.raises(MissingTransition):
        SheafFunctor(EDGE, SET, {"0": ["x"], "1": ["y"]}, {})


# -- limits -----------------------------------------------------------------------------


def test_empty_limit_is_terminal():
    F = constant_functor(EDGE, SET, ["x", "y"])
    assert limit_over(F, []).value == ((),)
    G = SheafFunctor(EDGE, VECT, {"0": 2, "1": 2}, {("0", "1"): Mat.identity(2)})
    assert limit_over(G, []).value == 0


def test_vect_limit_over_antichain_is_product():
    F = SheafFunctor(Poset.antichain(["a", "b"]), VECT, {"a": 2, "b": 3}, {})
    assert limit_over(F, ["a", "b"]).value == 5


def test_set_limits_match_brute_force_families():
    rng = random.Random(1)
    for _ in range(60):
        P = random_poset(rng, rng.randint(1, 4), 0.5)
        F = random_functor(rng, P, SET, 3)
        lp = leq_pairs(P)
        shape = [a for a in P if rng.random() < 0.7]
        fams = compatible_families(F.values, F.transitions, lp, shape)
        lim = limit_over(F, shape)
        assert {tuple(sorted(dict(f).items())) for f in lim.value} == \
            {tuple(sorted(f.items())) for f in fams}


def test_limit_with_minimum_projects_isomorphically():
    rng = random.Random(2)
    for _ in range(40):
        P = cone(random_poset(rng, rng.randint(0, 4), 0.4))
        bot = P.minimal()[0]
        for kind in (SET, VECT):
            F = random_functor(rng, P, kind, 3)
            lim = limit_over(F, list(P))
            if kind == SET:
                proj = lim.projections[bot]
                assert sorted(proj.values()) == sorted(F.values[bot]) and len(proj) == len(F.values[bot])
            else:
                assert lim.value == F.values[bot]
                assert sympy_rank(lim.projections[bot]) == F.values[bot]


def test_vect_limit_dimension_matches_sympy_nullspace():
    rng = random.Random(3)
    for _ in range(30):
        P = random_poset(rng, rng.randint(1, 4), 0.5)
        F = random_functor(rng, P, VECT, 3)
        order = list(P.linear_extension)
        off, total = {}, 0
        for a in order:
            off[a] = total
            total += F.values[a]
        rows = []
        for a in order:
            for b in order:
                if a != b and P.leq(a, b):
                    m = F.map(a, b)
                    for i in range(F.values[b]):
                        r = [0] * total
                        for j in range(F.values[a]):
                            r[off[a] + j] = m[i, j]
                        r[off[b] + i] -= 1
                        rows.append(r)
        dim = total - (sympy.Matrix(rows).rank() if rows else 0)
        assert limit_over(F, order).value == dim


# -- colimits ---------------------------------------------------------------------------


def test_set_colimit_counts_components():
    F = SheafFunctor(EDGE, SET, {"0": ["x", "y"], "1": ["z", "w"]}, {("0", "1"): {"x": "z", "y": "z"}})
    C = colimit_over(F, ["0", "1"])
    assert len(C.value) == 2
    assert C.injections["0"]["x"] == C.injections["1"]["z"]


def test_vect_colimit_dimension_is_cokernel():
    rng = random.Random(4)
    for _ in range(30):
        P = random_poset(rng, rng.randint(1, 4), 0.5)
        F = random_functor(rng, P, VECT, 3)
        C = colimit_over(F, list(P))
        total = sum(F.values.values())
        rel_cols = []
        order = list(P.linear_extension)
        off, t = {}, 0
        for a in order:
            off[a] = t
            t += F.values[a]
        for a, b in P.covers:
            m = F.map(a, b)
            for j in range(F.values[a]):
                col = [0] * total
                col[off[a] + j] = 1
                for i in range(F.values[b]):
                    col[off[b] + i] -= m[i, j]
                rel_cols.append(col)
        r = sympy.Matrix(rel_cols).rank() if rel_cols else 0
        assert C.value == total - r


# -- pullback and Kan extensions ------------------------------------------------------------


def test_pullback_identity_and_constant():
    rng = random.Random(5)
    F = random_functor(rng, DIAMOND, SET, 3)
    assert pullback(F, MonotoneMap.identity(DIAMOND)) == F
    K = constant_functor(DIAMOND, SET, ["p"])
    f = MonotoneMap(EDGE, DIAMOND, {"0": "bot", "1": "top"})
    assert pullback(K, f) == constant_functor(EDGE, SET, ["p"])


def test_pullback_along_chain_inclusion_truncates():
    C3 = Poset.chain(3)
    F = SheafFunctor(C3, VECT, {"0": 1, "1": 2, "2": 3},
                     {("0", "1"): Mat.from_rows([[1], [2]]),
                      ("1", "2"): Mat.from_rows([[1, 0], [0, 1], [1, 1]])})
    G = pullback(F, MonotoneMap.inclusion(EDGE, C3))
    assert G.values == {"0": 1, "1": 2}
    assert G.transitions[("0", "1")] == F.transitions[("0", "1")]


def test_pushforward_identity_and_point_into_edge():
    rng = random.Random(6)
    F = random_functor(rng, DIAMOND, SET, 3)
    assert pushforward_closed(F, DIAMOND) == F
    pt = SheafFunctor(Poset(["0"]), SET, {"0": ["x", "y"]}, {})
    G = pushforward_closed(pt, EDGE)
    assert len(G.values["1"]) == 1 and G.values["0"] == ("x", "y")
    H = pushforward_closed(pt, disjoint_union(Poset(["0"]), Poset(["x"])))
    assert len(H.values["x"]) == 1


def test_pushforward_requires_downward_closed():
    pt = SheafFunctor(Poset(["1"]), SET, {"1": ["x"]}, {})
    with pytest.raises(NotDownwardClosed):
        pushforward_closed(pt, EDGE)


def test_extension_open_examples():
    rng = random.Random(7)
    F = random_functor(rng, DIAMOND, SET, 3)
    assert extension_open(F, DIAMOND) == F
    up = SheafFunctor(Poset(["1"]), SET, {"1": ["x"]}, {})
    assert extension_open(up, EDGE).values["0"] == ()
    upv = SheafFunctor(Poset(["1"]), VECT, {"1": 3}, {})
    assert extension_open(upv, EDGE).values["0"] == 0
    down = SheafFunctor(Poset(["0"]), SET, {"0": ["x"]}, {})
    with pytest.raises(NotUpwardClosed):
        extension_open(down, EDGE)


def test_pullback_of_pushforward_is_identity():
    rng = random.Random(8)
    for _ in range(60):
        Q = random_poset(rng, rng.randint(1, 6), 0.4)
        P = Q.subposet(random_downset(rng, Q))
        for kind in (SET, VECT):
            F = random_functor(rng, P, kind, 3)
            G = pushforward_closed(F, Q)
            assert check_functoriality(G).verdict == PASS
            assert pullback(G, MonotoneMap.inclusion(P, Q)) == F


def test_pushforward_values_are_comma_limits():
    rng = random.Random(9)
    for _ in range(40):
        Q = random_poset(rng, rng.randint(1, 5), 0.4)
        P = Q.subposet(random_downset(rng, Q))
        F = random_functor(rng, P, SET, 3)
        G = pushforward_closed(F, Q)
        lp = leq_pairs(P)
        for q in Q:
            comma = [p for p in P if Q.leq(q, p)]
            assert len(G.values[q]) == len(compatible_families(F.values, F.transitions, lp, comma))


# -- homs -----------------------------------------------------------------------------


def test_hom_set_counts_match_brute_force():
    rng = random.Random(10)
    for _ in range(40):
        P = random_poset(rng, rng.randint(1, 3), 0.5)
        F, G = random_functor(rng, P, SET, 2), random_functor(rng, P, SET, 2)
        homs = hom_set(F, G)
        assert all(is_natural(F, G, h) for h in homs)
        assert len(homs) == count_natural_transformations(F, G)


def test_hom_space_dimension_matches_sympy():
    rng = random.Random(11)
    for _ in range(25):
        P = random_poset(rng, rng.randint(1, 3), 0.5)
        F, G = random_functor(rng, P, VECT, 2), random_functor(rng, P, VECT, 2)
        basis = hom_space(F, G)
        assert all(is_natural(F, G, h) for h in basis)
        # unknowns: entries of every component; equations: naturality on covers
        var, n = {}, 0
        for a in P.linear_extension:
            for i in range(G.values[a]):
                for j in range(F.values[a]):
                    var[(a, i, j)] = n
                    n += 1
        rows = []
        for a, b in P.covers:
            Fm, Gm = F.transitions[(a, b)], G.transitions[(a, b)]
            for i in range(G.values[b]):
                for j in range(F.values[a]):
                    r = [0] * n
                    for k in range(G.values[a]):
                        r[var[(a, k, j)]] += Gm[i, k]
                    for k in range(F.values[b]):
                        r[var[(b, i, k)]] -= Fm[k, j]
                    rows.append(r)
        dim = n - (sympy.Matrix(rows).rank() if rows else 0)
        assert len(basis) == dim


def test_find_isomorphism_agrees_with_brute_force():
    rng = random.Random(12)
    for _ in range(40):
        P = random_poset(rng, rng.randint(1, 3), 0.5)
        F, G = random_functor(rng, P, SET, 3), random_functor(rng, P, SET, 3)
        assert (find_isomorphism(F, G) is not None) == set_functors_isomorphic(F, G)


# -- exact linear algebra -----------------------------------------------------------------


@st.composite
def matrices(draw, max_dim=4):
    r, c = draw(st.integers(0, max_dim)), draw(st.integers(0, max_dim))
    entries = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    return Mat.from_rows([[draw(entries) for _ in range(c)] for _ in range(r)], cols=c)


@given(matrices())
def test_rank_and_kernel_match_sympy(m):
    assert rank(m) == sympy_rank(m)
    K = kernel(m)
    assert K.cols == m.cols - rank(m)
    assert (m @ K).is_zero()


@given(matrices(), matrices())
def test_solve_is_exact(a, b):
    if a.rows != b.rows:
        b = Mat.zeros(a.rows, b.cols)
    x = solve(a, b)
    S = sympy.Matrix(a.rows, a.cols, [a[i, j] for i in range(a.rows) for j in range(a.cols)])
    if x is not None:
        assert a @ x == b
    elif a.cols and b.cols and a.rows:
        B = sympy.Matrix(b.rows, b.cols, [b[i, j] for i in range(b.rows) for j in range(b.cols)])
        assert S.rank() != S.row_join(B).rank()


@given(matrices())
def test_inverse_when_square(m):
    if m.rows != m.cols:
        return
    inv = inverse(m)
    if rank(m) == m.rows:
        assert m @ inv == Mat.identity(m.rows)
    else:
        assert inv is None
