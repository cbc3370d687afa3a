"""Bundled example curves and isogenies, addressed by label."""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

from .curves import WeierstrassModel
from .isogeny import IsogenyDescriptor, IsogenyStep

DATA_FILE = Path(__file__).parent / "data" / "curves.json"


class UnknownCurveError(KeyError):
    pass


def parse_catalog(text: str) -> dict:
    raw = json.loads(text)
    curves = {label.lower(): {"coefficients": [int(a) for a in rec["coefficients"]],
                              "source": rec.get("source", "external-table")}
              for label, rec in raw["curves"].items()}
    isogenies = []
    for rec in raw.get("isogenies", []):
        entry = {"source": rec["source"].lower(), "target": rec["target"].lower(), "degree": int(rec["degree"])}
        if "chain" in rec:
            entry["chain"] = [[a.lower(), b.lower(), int(d)] for a, b, d in rec["chain"]]
        isogenies.append(entry)
    return {"curves": curves, "isogenies": isogenies}


def serialize_catalog(catalog: dict) -> str:
    return json.dumps(catalog, indent=2, sort_keys=True)


@lru_cache(maxsize=1)
def load_catalog() -> dict:
    return parse_catalog(DATA_FILE.read_text())


def curve_labels() -> list[str]:
    return sorted(load_catalog()["curves"])


def curve(label_or_coeffs: str) -> WeierstrassModel:
    """A curve from a bundled label ("11a1") or a coefficient list ("[0,-1,1,-10,-20]")."""
    text = label_or_coeffs.strip()
    if text.startswith("["):
        return WeierstrassModel.from_list(json.loads(text))
    if "," in text:
        return WeierstrassModel.from_list([int(x) for x in text.split(",")])
    rec = load_catalog()["curves"].get(text.lower())
    if rec is None:
        raise UnknownCurveError(f"no bundled curve labelled {label_or_coeffs!r}")
    return WeierstrassModel.from_list(rec["coefficients"])


def isogeny(source: str, target: str, degree: int | None = None) -> IsogenyDescriptor:
    """Descriptor for a bundled isogeny; the degree may be omitted for catalogued pairs."""
    src, tgt = source.lower(), target.lower()
    for rec in load_catalog()["isogenies"]:
        for a, b, flip in ((rec["source"], rec["target"], False), (rec["target"], rec["source"], True)):
            if (a, b) != (src, tgt):
                continue
            if degree is not None and degree != rec["degree"]:
                raise ValueError(f"catalogued degree of {source}->{target} is {rec['degree']}, not {degree}")
            chain = None
            if "chain" in rec:
                chain = tuple(IsogenyStep(curve(x), curve(y), d) for x, y, d in rec["chain"])
            d = IsogenyDescriptor(curve(rec["source"]), curve(rec["target"]), rec["degree"], chain,
                                  (rec["source"], rec["target"]))
            return d.dual() if flip else d
    if degree is None:
        raise UnknownCurveError(f"no catalogued isogeny {source} -> {target}; give its degree")
    return IsogenyDescriptor(curve(source), curve(target), degree, labels=(source, target))
