import pytest
from hypothesis import given, strategies as st

from oracles import all_faces, closure_from_covers
from stratsheaf.complex import (APEX, SimplicialComplex, StratifiedComplex, build_exhaustion,
                                cone_complex, cone_stratified, face_poset, strata_of)
from stratsheaf.errors import ApexCollision, IncompleteEnumeration, NotClosedUnderFaces

BOUNDARY = SimplicialComplex.from_maximal_faces("abc", ["ab", "bc", "ac"])
STAR = SimplicialComplex.from_maximal_faces("cxyz", ["cx", "cy", "cz"])
STAR_ENUM = {"c": ["cx", "cy", "cz"], "x": ["cx"], "y": ["cy"], "z": ["cz"]}


def test_boundary_face_poset():
    P = face_poset(BOUNDARY)
    assert len(P) == 6 and len(P.covers) == 6
    assert P.leq(frozenset("a"), frozenset("ab"))


def test_cone_of_boundary():
    C = cone_complex(BOUNDARY)
    assert len(C.faces) == 13
    assert frozenset(["a", "b", APEX]) in C.faces
    with pytest.raises(ApexCollision):
        cone_complex(C)


def test_not_closed_under_faces():
    with pytest.raises(NotClosedUnderFaces):
        SimplicialComplex("abc", [["a"], ["b"], ["c"], ["a", "b"], ["a", "b", "c"]])
    with pytest.raises(NotClosedUnderFaces):
        SimplicialComplex("abc", [["a"], ["b"], ["c"], ["a", "b", "c"]])


def test_dimension_stratification():
    S = StratifiedComplex.by_dimension(BOUNDARY)
    assert strata_of(S, "0") == [frozenset("a"), frozenset("b"), frozenset("c")]
    assert len(strata_of(S, "1")) == 3


def test_cone_stratified_sends_apex_to_bottom():
    S = cone_stratified(StratifiedComplex.by_dimension(BOUNDARY))
    bot = S.target.minimal()[0]
    assert S.stratum_of([APEX]) == bot
    assert S.stratum_of(["a", APEX]) == "0"
    assert S.stratum_of(["a", "b", APEX]) == "1"


def test_star_exhaustion():
    ex = build_exhaustion(STAR, STAR_ENUM)
    assert [len(X.faces) for X in ex.levels] == [5, 6, 7]
    assert ex.certify().verdict == "PASS"


def test_short_horizon_fails_to_exhaust():
    rep = build_exhaustion(STAR, STAR_ENUM, horizon=1).certify()
    assert rep.verdict == "FAIL" and rep.witness["reason"] == "faces never admitted"


def test_incomplete_enumeration():
    with pytest.raises(IncompleteEnumeration):
        build_exhaustion(STAR, {**STAR_ENUM, "x": []})
    with pytest.raises(IncompleteEnumeration):
        build_exhaustion(STAR, {**STAR_ENUM, "x": ["cy"]})


@st.composite
def complexes(draw):
    n = draw(st.integers(1, 6))
    verts = [f"v{i}" for i in range(n)]
    maxi = draw(st.lists(st.lists(st.sampled_from(verts), min_size=1, max_size=4, unique=True),
                         max_size=5))
    return SimplicialComplex.from_maximal_faces(verts, maxi), verts, maxi


@given(complexes())
def test_faces_and_face_poset_match_oracle(data):
    K, verts, maxi = data
    assert K.faces == all_faces(maxi + [[v] for v in verts])
    P = face_poset(K)
    leq = closure_from_covers(list(P), P.covers)
    assert leq == {(f, g) for f in K.faces for g in K.faces if f <= g}


@given(complexes(), st.randoms(use_true_random=False))
def test_random_exhaustions_certify(data, rng):
    K = data[0]
    enum = {}
    for v in K.vertices:
        es = [e for e in K.edges() if v in e]
        rng.shuffle(es)
        enum[v] = es
    ex = build_exhaustion(K, enum)
    assert ex.certify().verdict == "PASS"
    for X in ex.levels:
        for f in X.faces:
            assert all(frozenset([u, w]) in X.faces for u in f for w in f if u != w)
