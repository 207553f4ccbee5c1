"""Structured check reports with deterministic JSON rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .labels import frac_str, label, ordered

PASS = "PASS"
FAIL = "FAIL"
FINDING = "FINDING"
VERDICTS = (PASS, FAIL, FINDING)

# Tag -> the statement a check shadows. docs/theorem-index.md carries the
# long-form entries; tests keep the two in sync.
ANCHORS = {
    "poset-validation": "cover data presents a finite partial order",
    "alexandrov-topology": "opens of a poset are its upward-closed subsets",
    "omega-filtration": "an omega-stratified poset is an increasing union of downward-closed levels",
    "cone": "the cone adjoins a new bottom element below the old poset",
    "functoriality": "transition maps compose consistently along all paths",
    "kan-extension": "pushforward along closed inclusions is a right Kan extension, extension along open inclusions a left one",
    "representation": "functors out of a poset are equivalent to sheaves on its Alexandrov space",
    "sheaf-condition": "sections over an open are the compatible families over its principal opens",
    "adjunction": "restriction is adjoint to pushforward / extension with an invertible counit",
    "proper-base-change": "stalks of a closed pushforward are the original stalks inside and the empty limit outside",
    "unstraightening": "set-valued functors are equivalent to discrete left fibrations",
    "devissage": "sheaves on an omega-filtered space are towers of sheaves on its closed truncations",
    "face-poset": "a simplicial complex is stratified by its poset of simplices",
    "exhaustion": "a locally countable complex is exhausted by subcomplexes with finite edge stars",
    "exit-simplex": "exit simplices move only towards larger strata along the simplex filtration",
    "nerve": "the nerve of a poset is the simplicial set of its weakly increasing chains",
    "quasi-category": "inner horns in an exit-path simplicial set have fillers",
    "idempotent-completeness": "idempotent exit paths are trivial",
    "filtered-colimit": "every chain in a filtered union lies in a finite level",
    "exponential-metric": "the min-max distance on finite subsets is a generalised metric",
    "cardinality-stratification": "finite subsets are stratified by cardinality over {0} + {1 < 2 < ...}",
    "cone-metric": "the max-formula cone distance and its triangle inequality",
    "colimit-impossibility": "in a colimit topology convergent sequences are bounded in the stratification",
}


@dataclass
class Report:
    verdict: str
    check: str
    anchor: str
    witness: dict | None = None
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.anchor not in ANCHORS:
            raise ValueError(f"unknown anchor {self.anchor!r}")
        if self.verdict in (FAIL, FINDING) and self.witness is None:
            raise ValueError(f"{self.verdict} reports must carry a witness")

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL

    @property
    def exit_code(self) -> int:
        return 1 if self.verdict == FAIL else 0

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "check": self.check, "anchor": self.anchor,
               "details": jsonable(self.details)}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def jsonable(x):
    """Convert to JSON-safe values; rationals become 'p/q' strings."""
    from .linalg import Mat

    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "+inf" if x > 0 else "-inf"
        return frac_str(Fraction(x))
    if isinstance(x, Mat):
        return x.to_strings()
    if isinstance(x, dict):
        return {label(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in ordered(x)]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    return label(x)
