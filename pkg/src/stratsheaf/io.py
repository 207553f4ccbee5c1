"""JSON formats for every artifact, a provenance-tracking workspace, and dot export."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .complex import SimplicialComplex, StratifiedComplex
from .errors import StratError, Unsupported, ValidationFailed
from .exit import PLPoint, PLSimplexMap
from .expmetric import Configuration, FiniteMetricSpace
from .fibration import ElementFibration
from .labels import frac_str, label, ordered, parse_frac
from .linalg import Mat
from .poset import MonotoneMap, OmegaFiltration, Poset, validate_omega_filtration, validate_poset
from .quasicat import SimplicialSetFragment, fragment_from_obj, skeleton_edges
from .sheaf import SET, VECT, SheafFunctor


# -- posets ---------------------------------------------------------------------------


def poset_from_obj(obj) -> Poset:
    covers = [tuple(c) for c in obj.get("covers", [])]
    if any(len(c) != 2 for c in covers):
        raise ValueError("covers must be pairs")
    return validate_poset(covers, obj.get("elements"))


def poset_to_obj(P: Poset) -> dict:
    return {"elements": [label(a) for a in ordered(P)],
            "covers": sorted([label(a), label(b)] for a, b in P.covers)}


def filtration_from_obj(obj) -> OmegaFiltration:
    """Either {"levels": [poset, ...]} or {"poset": P, "levels": [[ids], ...]}."""
    levels = obj["levels"]
    if "poset" in obj:
        top = poset_from_obj(obj["poset"])
        return validate_omega_filtration([top.subposet(lv) for lv in levels])
    return validate_omega_filtration([poset_from_obj(lv) for lv in levels])


def filtration_to_obj(F: OmegaFiltration) -> dict:
    return {"poset": poset_to_obj(F.top), "levels": [[label(a) for a in ordered(A)] for A in F.levels]}


def map_from_obj(obj, source: Poset, target: Poset) -> MonotoneMap:
    return MonotoneMap(source, target, dict(obj["assignment"]))


# -- sheaves --------------------------------------------------------------------------


def _matrix(rows, n_rows, n_cols) -> Mat:
    return Mat.from_rows([[parse_frac(x) for x in r] for r in rows], cols=n_cols) if n_rows else \
        Mat.zeros(0, n_cols)


def sheaf_from_obj(obj) -> SheafFunctor:
    base = poset_from_obj(obj["base"])
    raw = obj["values"]
    kinds = {v.get("kind") for v in raw.values()}
    kind = obj.get("kind") or (kinds.pop() if len(kinds) == 1 else None)
    if kind not in (SET, VECT):
        raise ValueError("sheaf kind must be 'set' or 'vect'")
    vals = {}
    for a, v in raw.items():
        if v.get("kind", kind) != kind:
            raise ValueError(f"value at {a!r} has kind {v.get('kind')!r}, expected {kind!r}")
        vals[a] = tuple(v["elems"]) if kind == SET else int(v["dim"])
    trans = {}
    for t in obj.get("transitions", []):
        a, b = t["from"], t["to"]
        if kind == SET:
            trans[(a, b)] = dict(t["map"])
        else:
            trans[(a, b)] = _matrix(t["matrix"], vals.get(b, 0), vals.get(a, 0))
    return SheafFunctor(base, kind, vals, trans)


def sheaf_to_obj(F: SheafFunctor) -> dict:
    if F.kind == SET:
        vals = {label(a): {"kind": SET, "elems": [label(x) for x in F.values[a]]} for a in F.base}
        trans = [{"from": label(a), "to": label(b),
                  "map": {label(x): label(y) for x, y in F.transitions[(a, b)].items()}}
                 for a, b in F.base.covers]
    else:
        vals = {label(a): {"kind": VECT, "dim": F.values[a]} for a in F.base}
        trans = [{"from": label(a), "to": label(b), "matrix": F.transitions[(a, b)].to_strings()}
                 for a, b in F.base.covers]
    trans.sort(key=lambda t: (t["from"], t["to"]))
    return {"base": poset_to_obj(F.base), "kind": F.kind, "values": vals, "transitions": trans}


def fibration_to_obj(E: ElementFibration) -> dict:
    return {"total": poset_to_obj(E.total), "base": poset_to_obj(E.base),
            "projection": {label(e): label(E.projection(e)) for e in E.total}}


def fibration_from_obj(obj) -> ElementFibration:
    total, base = poset_from_obj(obj["total"]), poset_from_obj(obj["base"])
    return ElementFibration(total, MonotoneMap(total, base, dict(obj["projection"])))


# -- complexes ------------------------------------------------------------------------


def complex_from_obj(obj) -> SimplicialComplex:
    return SimplicialComplex.from_maximal_faces(obj["vertices"], obj.get("maximal_faces", []))


def complex_to_obj(K: SimplicialComplex) -> dict:
    return {"vertices": [label(v) for v in K.vertices],
            "maximal_faces": sorted([label(v) for v in ordered(f)] for f in K.maximal_faces())}


def face_key(face) -> str:
    return json.dumps([label(v) for v in ordered(face)])


def stratified_from_obj(obj) -> StratifiedComplex:
    """{"complex": K, "strat": "dimension" | "faces" | {face-key: element}, "target": P}."""
    K = complex_from_obj(obj["complex"])
    strat = obj.get("strat", "faces")
    if strat == "faces":
        return StratifiedComplex.by_faces(K)
    if strat == "dimension":
        return StratifiedComplex.by_dimension(K)
    target = poset_from_obj(obj["target"])
    assignment = {frozenset(json.loads(k)): v for k, v in strat.items()}
    return StratifiedComplex.build(K, target, assignment)


def stratified_to_obj(S: StratifiedComplex) -> dict:
    return {"complex": complex_to_obj(S.complex), "target": poset_to_obj(S.target),
            "strat": {face_key(f): label(S.strat(f)) for f in ordered(S.complex.faces)}}


def enumeration_from_obj(obj) -> dict:
    return {v: [tuple(e) for e in edges] for v, edges in obj.items()}


def plmap_from_obj(obj) -> PLSimplexMap:
    S = stratified_from_obj(obj["target"])
    pts = {vid: PLPoint(tuple(parse_frac(x) for x in pt["source"]),
                        {v: parse_frac(c) for v, c in pt["image"].items()})
           for vid, pt in obj["points"].items()}
    return PLSimplexMap(int(obj["p"]), S, pts, [tuple(pc) for pc in obj["pieces"]])


# -- metric spaces --------------------------------------------------------------------


def metric_from_obj(obj) -> FiniteMetricSpace:
    pts = list(obj["points"])
    rows = [[parse_frac(x) for x in r] for r in obj["distances"]]
    if len(rows) != len(pts) or any(len(r) != len(pts) for r in rows):
        raise ValueError("distance matrix must be square over the points")
    for i in range(len(pts)):
        for j in range(len(pts)):
            if rows[i][j] != rows[j][i]:
                raise ValueError(f"distance matrix is not symmetric at {pts[i]!r}, {pts[j]!r}")
    return FiniteMetricSpace.from_matrix(pts, rows)


def metric_to_obj(X: FiniteMetricSpace) -> dict:
    return {"points": list(X.points), "distances": [[frac_str(d) for d in r] for r in X.matrix()]}


def configuration(X: FiniteMetricSpace, ids) -> Configuration:
    return Configuration(X, list(ids))


# -- workspace ------------------------------------------------------------------------


LOADERS = {
    "poset": poset_from_obj,
    "filtration": filtration_from_obj,
    "sheaf": sheaf_from_obj,
    "fibration": fibration_from_obj,
    "complex": complex_from_obj,
    "stratified": stratified_from_obj,
    "enumeration": enumeration_from_obj,
    "plmap": plmap_from_obj,
    "metric": metric_from_obj,
    "fragment": fragment_from_obj,
    "json": lambda obj: obj,
}


class Workspace:
    """Named artifacts loaded from files, each validated on load, with content hashes."""

    def __init__(self):
        self.artifacts = {}
        self.provenance = {}

    def load(self, name: str, kind: str, path: str):
        if name in self.artifacts:
            raise ValueError(f"artifact name {name!r} already used")
        p = Path(path)
        data = p.read_bytes()
        try:
            obj = json.loads(data)
            value = LOADERS[kind](obj)
        except (StratError, ValueError, KeyError, TypeError, json.JSONDecodeError) as e:
            raise ValidationFailed(name, f"{type(e).__name__}: {e}") from e
        self.artifacts[name] = value
        self.provenance[name] = {"file": p.name, "kind": kind,
                                 "sha256": hashlib.sha256(data).hexdigest()}
        return value

    def __getitem__(self, name):
        return self.artifacts[name]


# -- dot ------------------------------------------------------------------------------


def _q(x) -> str:
    return json.dumps(label(x), ensure_ascii=False)


def poset_to_dot(P: Poset, name: str = "poset") -> str:
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;"]
    lines += [f"  {_q(a)};" for a in ordered(P)]
    lines += [f"  {_q(a)} -> {_q(b)};" for a, b in sorted(P.covers, key=lambda c: (label(c[0]), label(c[1])))]
    lines.append("}")
    return "\n".join(lines) + "\n"


def fibration_to_dot(E: ElementFibration) -> str:
    lines = ['digraph "fibration" {', "  rankdir=BT;"]
    for i, a in enumerate(ordered(E.base)):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f"    label={_q(a)};")
        lines += [f"    {_q(e)};" for e in ordered(E.fiber(a))]
        lines.append("  }")
    lines += [f"  {_q(a)} -> {_q(b)};"
              for a, b in sorted(E.total.covers, key=lambda c: (label(c[0]), label(c[1])))]
    lines.append("}")
    return "\n".join(lines) + "\n"


def skeleton_to_dot(S: SimplicialSetFragment) -> str:
    lines = ['digraph "skeleton" {']
    lines += [f"  {_q(v)};" for v in ordered(S.simplices[0])]
    for src, dst, e in sorted(skeleton_edges(S), key=lambda t: label(t[2])):
        lines.append(f"  {_q(src)} -> {_q(dst)} [label={_q(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(artifact, out=None) -> str:
    """Dot text for a poset, element fibration or simplicial-set fragment; written to ``out`` if given."""
    if isinstance(artifact, Poset):
        text = poset_to_dot(artifact)
    elif isinstance(artifact, ElementFibration):
        text = fibration_to_dot(artifact)
    elif isinstance(artifact, SimplicialSetFragment):
        text = skeleton_to_dot(artifact)
    else:
        raise Unsupported(f"no dot rendering for {type(artifact).__name__}")
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text
