"""Reading monoidal complexes from JSON documents."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .cellcomplex import CellComplex, validate_complex
from .errors import ParseError, ValidationError
from .semigroup import MonoidalComplex, validate_monoidal
from .toricring import ToricFaceRing


@dataclass
class Model:
    """A validated input document."""

    complex: CellComplex
    monoidal: MonoidalComplex
    labels: dict = field(default_factory=dict)
    name: str = ""
    raw: dict = field(default_factory=dict)

    def ring(self) -> ToricFaceRing:
        return ToricFaceRing(self.monoidal, self.labels)

    def normalized(self) -> "Model":
        mc = self.monoidal.normalization()
        return Model(self.complex, mc, {}, self.name + "-normalized", mc.to_raw())


def _require(doc: dict, key: str, kind):
    if key not in doc:
        raise ParseError(f"missing top-level key {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise ParseError(f"{key!r} has the wrong type")
    return val


def load_document(doc: dict) -> Model:
    """Validate a decoded document; raises ParseError or ValidationError."""
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    cells = _require(doc, "cells", list)
    order = doc.get("order", [])
    incidence = doc.get("incidence", [])
    try:
        cx = validate_complex(cells, order, incidence)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ParseError(f"malformed cell data: {exc}") from exc
    sgs = {}
    for cid, entry in _require(doc, "semigroups", dict).items():
        if not isinstance(entry, dict) or "generators" not in entry:
            raise ParseError(f"semigroup of {cid!r} needs a 'generators' list")
        sgs[str(cid)] = entry["generators"]
    embs = []
    for e in doc.get("embeddings", []):
        try:
            embs.append((str(e["lower"]), str(e["upper"]), e["matrix"]))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed embedding entry {e!r}") from exc
    for lo, hi, _ in embs:
        for x in (lo, hi):
            if x not in {c.id for c in cx.cells}:
                raise ValidationError(f"embedding references unknown cell {x!r}", [x])
    mc = validate_monoidal(cx, sgs, embs)
    labels = {}
    for name, spec in doc.get("labels", {}).items():
        labels[str(name)] = (cx.cell(str(spec["cell"])), tuple(int(v) for v in spec["coords"]))
    return Model(cx, mc, labels, str(doc.get("name", "")), doc)


def read_json(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from exc


def load(path) -> Model:
    return load_document(read_json(path))


def parse_input(path) -> tuple[CellComplex, MonoidalComplex]:
    """Parse and validate an input file into its complex and monoidal data."""
    m = load(path)
    return m.complex, m.monoidal
