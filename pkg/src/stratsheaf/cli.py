"""Command-line front end: one verb per operation, JSON reports on stdout.

Exit codes: 0 for PASS or FINDING, 1 for FAIL, 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import io
from .adjunction import LEFT, RIGHT, proper_base_change_check, verify_adjunction
from .alexandrov import roundtrip_report, sheaf_from_functor, sheafiness_check
from .complex import build_exhaustion, cone_complex, cone_stratified, face_poset
from .devissage import verify_devissage
from .errors import StratError, UnknownVerb, Unsupported
from .exit import validate_exit_simplex
from .expmetric import (colimit_convergence_check, cone_triangle_scan, exp_distance,
                        metric_axiom_suite)
from .fibration import (fibration_roundtrip_iso, functor_roundtrip_iso, grothendieck,
                        left_fibration_failure, straighten)
from .generate import random_downset, random_functor, random_upset
from .labels import label, ordered, parse_frac
from .poset import MonotoneMap, cone
from .quasicat import fragment_to_obj, idempotent_check, inner_horn_check, nerve, union_colimit
from .report import FAIL, FINDING, PASS, Report, dumps
from .sheaf import (SET, check_functoriality, extension_open, is_natural_iso, pullback,
                    pushforward_closed)


def _emit_artifact(args, obj, text: str | None = None):
    if args.out:
        Path(args.out).write_text(text if text is not None else dumps(obj), encoding="utf-8")


def _fragment(ws, args):
    if args.fragment:
        return ws.load("fragment", "fragment", args.fragment)
    if not args.poset:
        raise ValueError("give --fragment or --poset")
    dim = args.dim if args.dim is not None else getattr(args, "horn", 2)
    return nerve(ws.load("poset", "poset", args.poset), dim)


# -- verbs ---------------------------------------------------------------------------
# Each returns (report, artifact_obj_or_None). Artifacts go to --out.


def v_poset_validate(ws, args):
    P = ws.load("poset", "poset", args.poset)
    return Report(PASS, "poset-validate", "poset-validation",
                  details={"elements": len(P), "covers": len(P.covers),
                           "minimal": P.minimal(), "maximal": P.maximal()}), None


def v_nerve(ws, args):
    P = ws.load("poset", "poset", args.poset)
    S = nerve(P, args.dim)
    counts = {str(n): len(S.simplices[n]) for n in range(args.dim + 1)}
    nondeg = {str(n): len(S.nondegenerate(n)) for n in range(args.dim + 1)}
    return Report(PASS, "nerve", "nerve", details={"simplices": counts, "nondegenerate": nondeg}), \
        fragment_to_obj(S)


def v_horn_check(ws, args):
    return inner_horn_check(_fragment(ws, args), args.horn), None


def v_idempotent_check(ws, args):
    return idempotent_check(_fragment(ws, args)), None


def v_union_colimit(ws, args):
    return union_colimit(ws.load("filtration", "filtration", args.filtration), args.dim), None


def v_face_poset(ws, args):
    K = ws.load("complex", "complex", args.complex)
    P = face_poset(K)
    return Report(PASS, "face-poset", "face-poset",
                  details={"faces": len(P), "covers": len(P.covers)}), io.poset_to_obj(P)


def v_cone(ws, args):
    if args.poset:
        C = cone(ws.load("poset", "poset", args.poset))
        return Report(PASS, "cone", "cone", details={"elements": len(C), "minimal": C.minimal()}), \
            io.poset_to_obj(C)
    if args.stratified:
        S = cone_stratified(ws.load("stratified", "stratified", args.stratified))
        return Report(PASS, "cone", "cone", details={"faces": len(S.complex.faces)}), \
            io.stratified_to_obj(S)
    K = ws.load("complex", "complex", args.complex)
    C = cone_complex(K)
    return Report(PASS, "cone", "cone",
                  details={"faces": len(C.faces), "new_faces": len(C.faces) - len(K.faces)}), \
        io.complex_to_obj(C)


def v_exhaust(ws, args):
    K = ws.load("complex", "complex", args.complex)
    en = ws.load("enumeration", "enumeration", args.enumeration)
    ex = build_exhaustion(K, en, args.horizon)
    art = {"levels": [io.complex_to_obj(X) for X in ex.levels]}
    return ex.certify(), art


def v_exit_validate(ws, args):
    return validate_exit_simplex(ws.load("map", "plmap", args.map)).to_report(), None


def v_sheaf_check(ws, args):
    F = ws.load("sheaf", "sheaf", args.sheaf)
    rep = check_functoriality(F)
    if rep.verdict == FAIL:
        return rep, None
    return sheafiness_check(sheaf_from_functor(F)), None


def v_push(ws, args):
    F = ws.load("sheaf", "sheaf", args.sheaf)
    Q = ws.load("ambient", "poset", args.ambient)
    G = extension_open(F, Q) if args.open else pushforward_closed(F, Q)
    back = pullback(G, MonotoneMap.inclusion(F.base, Q))
    rep = Report(PASS if back == F else FAIL, "push", "kan-extension",
                 witness=None if back == F else {"reason": "restriction of the extension differs from the input"},
                 details={"direction": "open" if args.open else "closed",
                          "sizes": {label(a): G.size(a) for a in ordered(Q)}})
    return rep, io.sheaf_to_obj(G)


def v_pull(ws, args):
    F = ws.load("sheaf", "sheaf", args.sheaf)
    if args.map:
        obj = ws.load("map", "json", args.map)
        f = io.map_from_obj(obj, io.poset_from_obj(obj["source"]), F.base)
    else:
        f = MonotoneMap.inclusion(ws.load("sub", "poset", args.sub), F.base)
    G = pullback(F, f)
    return Report(PASS, "pull", "kan-extension",
                  details={"sizes": {label(a): G.size(a) for a in ordered(G.base)}}), io.sheaf_to_obj(G)


def v_adjunction_verify(ws, args):
    side = args.side
    if args.sheaf:
        F = ws.load("sheaf", "sheaf", args.sheaf)
        G = ws.load("ambient_sheaf", "sheaf", args.ambient_sheaf)
        return verify_adjunction(side, F, G), None
    Q = ws.load("poset", "poset", args.poset)
    rng = random.Random(args.seed)
    for k in range(args.samples):
        sub = random_downset(rng, Q) if side == RIGHT else random_upset(rng, Q)
        P = Q.subposet(sub)
        F = random_functor(rng, P, args.kind, 3)
        G = random_functor(rng, Q, args.kind, 3)
        rep = verify_adjunction(side, F, G)
        if rep.verdict == FAIL:
            rep.seed = args.seed
            rep.witness = {**rep.witness, "sample": k, "subposet": ordered(sub)}
            return rep, None
    return Report(PASS, f"adjunction-{side}", "adjunction", seed=args.seed,
                  details={"samples": args.samples, "kind": args.kind}), None


def v_sheaf_roundtrip(ws, args):
    return roundtrip_report(ws.load("sheaf", "sheaf", args.sheaf)), None


def v_grothendieck(ws, args):
    F = ws.load("sheaf", "sheaf", args.sheaf)
    E = grothendieck(F)
    ok = is_natural_iso(F, straighten(E), functor_roundtrip_iso(F))
    rep = Report(PASS if ok else FAIL, "grothendieck", "unstraightening",
                 witness=None if ok else {"reason": "straightening does not recover the functor"},
                 details={"total": len(E.total), "base": len(E.base)})
    return rep, io.fibration_to_obj(E)


def v_straighten(ws, args):
    E = ws.load("fibration", "fibration", args.fibration)
    bad = left_fibration_failure(E)
    if bad is not None:
        e, a, b, n = bad
        return Report(FAIL, "straighten", "unstraightening",
                      witness={"element": e, "over": a, "towards": b, "lifts": n}), None
    F = straighten(E)
    ok = fibration_roundtrip_iso(E, grothendieck(F)) is not None
    rep = Report(PASS if ok else FAIL, "straighten", "unstraightening",
                 witness=None if ok else {"reason": "unstraightening does not recover the fibration"},
                 details={"sizes": {label(a): F.size(a) for a in ordered(F.base)}})
    return rep, io.sheaf_to_obj(F)


def v_base_change(ws, args):
    F = ws.load("sheaf", "sheaf", args.sheaf)
    Q = ws.load("ambient", "poset", args.ambient)
    if args.element is not None:
        return proper_base_change_check(F, Q, args.element), None
    reps = {label(a): proper_base_change_check(F, Q, a) for a in ordered(Q)}
    verdicts = {k: r.verdict for k, r in reps.items()}
    for v in (FAIL, FINDING):
        hits = {k: r.witness for k, r in reps.items() if r.verdict == v}
        if hits:
            return Report(v, "base-change", "proper-base-change", witness=hits,
                          details={"verdicts": verdicts}), None
    return Report(PASS, "base-change", "proper-base-change", details={"verdicts": verdicts}), None


def v_devissage_verify(ws, args):
    Fl = ws.load("filtration", "filtration", args.filtration)
    return verify_devissage(Fl, args.samples, args.seed), None


def _ids(s: str) -> list:
    return [x for x in (p.strip() for p in s.split(",")) if x]


def v_exp_dist(ws, args):
    X = ws.load("space", "metric", args.space)
    S, T = io.configuration(X, _ids(args.a)), io.configuration(X, _ids(args.b))
    return Report(PASS, "exp-dist", "exponential-metric",
                  details={"S": ordered(S.members), "T": ordered(T.members),
                           "distance": exp_distance(S, T)}), None


def v_exp_axioms(ws, args):
    return metric_axiom_suite(ws.load("space", "metric", args.space), args.samples, args.seed), None


def v_cone_scan(ws, args):
    X = ws.load("space", "metric", args.space)
    return cone_triangle_scan(X, [parse_frac(r) for r in _ids(args.radii)]), None


def v_colimit_check(ws, args):
    obj = ws.load("input", "json", args.input)
    X = io.metric_from_obj(obj["space"])
    seq = [io.configuration(X, s) for s in obj["sequence"]]
    cand = io.configuration(X, obj["candidate"])
    schedule = [(parse_frac(e), int(s)) for e, s in obj["schedule"]]
    return colimit_convergence_check(seq, cand, schedule), None


def v_export_dot(ws, args):
    if args.poset:
        art, anchor = ws.load("poset", "poset", args.poset), "poset-validation"
    elif args.fibration:
        art, anchor = ws.load("fibration", "fibration", args.fibration), "unstraightening"
    elif args.sheaf:
        art, anchor = grothendieck(ws.load("sheaf", "sheaf", args.sheaf)), "unstraightening"
    elif args.fragment:
        art, anchor = ws.load("fragment", "fragment", args.fragment), "nerve"
    else:
        raise Unsupported("export-dot supports --poset, --fibration, --sheaf or --fragment")
    text = io.export_dot(art)
    return Report(PASS, "export-dot", anchor, details={"lines": text.count("\n")}), text


VERBS = {
    "poset-validate": (v_poset_validate, ["poset"]),
    "nerve": (v_nerve, ["poset", "dim"]),
    "horn-check": (v_horn_check, ["fragment?", "poset?", "dim?", "horn"]),
    "idempotent-check": (v_idempotent_check, ["fragment?", "poset?", "dim?"]),
    "union-colimit": (v_union_colimit, ["filtration", "dim"]),
    "face-poset": (v_face_poset, ["complex"]),
    "cone": (v_cone, ["poset?", "complex?", "stratified?"]),
    "exhaust": (v_exhaust, ["complex", "enumeration", "horizon?"]),
    "exit-validate": (v_exit_validate, ["map"]),
    "sheaf-check": (v_sheaf_check, ["sheaf"]),
    "push": (v_push, ["sheaf", "ambient", "open"]),
    "pull": (v_pull, ["sheaf", "sub?", "map?"]),
    "adjunction-verify": (v_adjunction_verify,
                          ["side", "sheaf?", "ambient_sheaf?", "poset?", "samples", "seed", "kind"]),
    "sheaf-roundtrip": (v_sheaf_roundtrip, ["sheaf"]),
    "grothendieck": (v_grothendieck, ["sheaf"]),
    "straighten": (v_straighten, ["fibration"]),
    "base-change": (v_base_change, ["sheaf", "ambient", "element?"]),
    "devissage-verify": (v_devissage_verify, ["filtration", "samples", "seed"]),
    "exp-dist": (v_exp_dist, ["space", "a", "b"]),
    "exp-axioms": (v_exp_axioms, ["space", "samples", "seed"]),
    "cone-scan": (v_cone_scan, ["space", "radii"]),
    "colimit-check": (v_colimit_check, ["input"]),
    "export-dot": (v_export_dot, ["poset?", "fibration?", "sheaf?", "fragment?"]),
}

_OPTS = {
    "poset": dict(help="poset JSON file"),
    "complex": dict(help="simplicial complex JSON file"),
    "stratified": dict(help="stratified complex JSON file"),
    "enumeration": dict(help="edge enumeration JSON file (vertex -> list of edges)"),
    "map": dict(help="map JSON file"),
    "sheaf": dict(help="sheaf JSON file"),
    "ambient_sheaf": dict(help="sheaf over the ambient poset"),
    "ambient": dict(help="ambient poset JSON file"),
    "sub": dict(help="subposet JSON file"),
    "fibration": dict(help="fibration JSON file"),
    "fragment": dict(help="simplicial set fragment JSON file"),
    "filtration": dict(help="filtration JSON file"),
    "space": dict(help="metric space JSON file"),
    "input": dict(help="JSON file with space, sequence, candidate and schedule"),
    "element": dict(help="poset element"),
    "dim": dict(type=int, help="dimension bound"),
    "horn": dict(type=int, choices=[2, 3], default=2, help="horn dimension"),
    "horizon": dict(type=int, help="last level to build"),
    "samples": dict(type=int, default=100, help="number of random samples or trials"),
    "seed": dict(type=int, default=0, help="random seed"),
    "side": dict(choices=[LEFT, RIGHT], default=RIGHT, help="which adjunction"),
    "kind": dict(choices=["set", "vect"], default=SET, help="value kind for random samples"),
    "open": dict(action="store_true", help="extend along an open inclusion instead"),
    "a": dict(default="", help="comma-separated point ids"),
    "b": dict(default="", help="comma-separated point ids"),
    "radii": dict(help="comma-separated radii, rationals as p/q"),
}

REQUIRED_VALUED = {"poset", "complex", "enumeration", "map", "sheaf", "ambient", "fibration",
                   "filtration", "space", "input", "dim", "radii", "ambient_sheaf", "sub",
                   "stratified", "fragment", "element"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stratsheaf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", metavar="VERB")
    for verb, (_, opts) in VERBS.items():
        p = sub.add_parser(verb)
        for o in opts:
            optional = o.endswith("?")
            name = o.rstrip("?")
            kw = dict(_OPTS[name])
            if name in REQUIRED_VALUED and not optional and "default" not in kw:
                kw["required"] = True
            p.add_argument("--" + name.replace("_", "-"), dest=name, **kw)
        p.add_argument("--out", help="write the produced artifact (or the report) here")
        p.add_argument("--report", help="write the report here instead of stdout")
        for name in ("poset", "fragment", "dim", "fibration", "sheaf", "complex", "stratified",
                     "sub", "map", "element", "horizon", "ambient_sheaf"):
            if not any(o.rstrip("?") == name for o in opts):
                p.set_defaults(**{name: None})
    return parser


def run(argv: list) -> int:
    if argv and not argv[0].startswith("-") and argv[0] not in VERBS:
        err = UnknownVerb(f"unknown verb {argv[0]!r}; expected one of {', '.join(VERBS)}")
        sys.stderr.write(dumps({"error": type(err).__name__, "message": str(err)}))
        return 2
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.verb:
        parser.print_help()
        return 2
    ws = io.Workspace()
    fn = VERBS[args.verb][0]
    try:
        rep, artifact = fn(ws, args)
    except (StratError, ValueError, KeyError, TypeError, OSError) as e:
        sys.stderr.write(dumps({"error": type(e).__name__, "message": str(e)}))
        return 2
    if ws.provenance:
        rep.details = {**rep.details, "inputs": ws.provenance}
    text = rep.to_json()
    if artifact is not None:
        _emit_artifact(args, artifact, artifact if isinstance(artifact, str) else None)
    elif args.out and not args.report:
        args.report = args.out
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return rep.exit_code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
