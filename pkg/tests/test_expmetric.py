import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from oracles import hausdorff_by_threshold
from stratsheaf.errors import MetricViolation, SpaceMismatch, UnknownElement
from stratsheaf.expmetric import (APEX, ConePoint, Configuration, FiniteMetricSpace,
                                  cardinality_stratum, colimit_convergence_check, cone_distance,
                                  cone_triangle_scan, exp_distance, exp_exit_path_check,
                                  metric_axiom_suite, random_metric_space)
from stratsheaf.report import FAIL, FINDING, PASS

LINE = FiniteMetricSpace.from_coordinates({"a": (0,), "b": (10,), "c": (3,)})


def C(space, *m):
    return Configuration(space, list(m))


def test_distance_examples():
    assert exp_distance(C(LINE, "a"), C(LINE, "a", "b")) == 10
    assert exp_distance(C(LINE, "a", "c"), C(LINE, "a")) == 3
    assert exp_distance(C(LINE), C(LINE)) == 0
    assert exp_distance(C(LINE), C(LINE, "a")) == math.inf


def test_metric_validation():
    with pytest.raises(MetricViolation):
        FiniteMetricSpace.from_matrix(["x", "y"], [[0, 1], [2, 0]])
    with pytest.raises(MetricViolation):
        FiniteMetricSpace.from_matrix(["x", "y", "z"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    with pytest.raises(MetricViolation):
        FiniteMetricSpace.from_matrix(["x", "y"], [[0, 0], [0, 0]])
    with pytest.raises(UnknownElement):
        C(LINE, "q")
    other = FiniteMetricSpace.from_coordinates({"a": (1,)})
    with pytest.raises(SpaceMismatch):
        exp_distance(C(LINE, "a"), C(other, "a"))


@st.composite
def spaces_and_configs(draw):
    rng = random.Random(draw(st.integers(0, 10**6)))
    X = random_metric_space(rng, draw(st.integers(1, 6)))
    pts = list(X.points)
    subs = [draw(st.lists(st.sampled_from(pts), min_size=1, unique=True)) for _ in range(3)]
    return X, [Configuration(X, s) for s in subs]


@given(spaces_and_configs())
def test_distance_matches_threshold_oracle(data):
    X, (S, T, U) = data
    assert exp_distance(S, T) == hausdorff_by_threshold(X.d, list(S.members), list(T.members))
    assert exp_distance(S, U) <= exp_distance(S, T) + exp_distance(T, U)


def test_axiom_suite_passes():
    rng = random.Random(60)
    for _ in range(5):
        assert metric_axiom_suite(random_metric_space(rng, 6), 200, seed=3).verdict == PASS


def test_cardinality_strata_and_exit_paths():
    assert cardinality_stratum(C(LINE)) == "0"
    assert exp_exit_path_check([C(LINE, "a"), C(LINE, "a", "c"), C(LINE, "b", "c")]).verdict == PASS
    assert exp_exit_path_check([C(LINE), C(LINE, "a"), C(LINE, "b")]).verdict == FAIL
    rep = exp_exit_path_check([C(LINE, "a"), C(LINE, "a", "c"), C(LINE, "a")])
    assert rep.verdict == FAIL and rep.witness["index"] == 2
    rep = exp_exit_path_check([C(LINE, "a", "c"), C(LINE, "a")])
    assert rep.verdict == FAIL and rep.witness["index"] == 0


def test_cone_violation_through_apex():
    X = FiniteMetricSpace.from_matrix(["x", "y"], [[0, 10], [10, 0]])
    p, q = ConePoint(Fraction(1, 10), "x", X), ConePoint(Fraction(1, 10), "y", X)
    assert cone_distance(p, q) == 10
    assert cone_distance(p, APEX) + cone_distance(APEX, q) == Fraction(1, 5)
    rep = cone_triangle_scan(X, [Fraction(1, 10)])
    assert rep.verdict == FINDING
    assert all(v["through_apex"] for v in rep.witness["violations"])


def test_cone_small_diameter_passes():
    X = FiniteMetricSpace.from_matrix(["x", "y"], [[0, 1], [1, 0]])
    assert cone_triangle_scan(X, [1, 2]).verdict == PASS


@given(st.integers(0, 10**6), st.lists(st.fractions(min_value=Fraction(1, 8), max_value=8,
                                                     max_denominator=8), min_size=1, max_size=3))
def test_cone_violations_are_exactly_far_pairs_through_apex(seed, radii):
    X = random_metric_space(random.Random(seed), 4, span=5)
    rep = cone_triangle_scan(X, radii, limit=10**6)
    rs = sorted(set(radii))
    expected = set()
    for (r1, x), (r2, y) in combinations([(r, x) for r in rs for x in X.points], 2):
        if X.d(x, y) > r1 + r2:
            expected.add(frozenset([(r1, x), (r2, y)]))
    got = set()
    for v in rep.witness.get("violations", []) if rep.witness else []:
        assert v["through_apex"]
        got.add(frozenset([tuple(v["p"]), tuple(v["r"])]))
    assert got == expected
    assert (rep.verdict == FINDING) == bool(expected)


def test_shrinking_sequence_is_flagged():
    X = FiniteMetricSpace.from_coordinates({f"x{k}": (Fraction(1, 2 ** k),) for k in range(5)} | {"o": (0,)})
    seq = [Configuration(X, ["o"] + [f"x{j}" for j in range(2, 2 + k)]) for k in range(3)]
    cand = Configuration(X, ["o"])
    rep = colimit_convergence_check(seq, cand, [(1, 0), (Fraction(1, 2), 1)])
    assert rep.verdict == FINDING
    assert rep.witness["tail_cardinalities"] == [2, 3]
    # a constant-cardinality tail is not flagged
    flat = [cand, cand, cand]
    assert colimit_convergence_check(flat, cand, [(1, 0)]).verdict == PASS
    with pytest.raises(ValueError):
        colimit_convergence_check(seq, cand, [])
