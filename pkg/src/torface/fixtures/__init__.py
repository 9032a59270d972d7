"""Bundled example complexes.

========  ==========================================================
fx1       one vertex with the numerical semigroup <2,3>
fx2       two isolated vertices, R = k[x,y]/(xy)
fx3       the Moebius strip of three square cones (not a fan)
fx4       one edge with a non-normal semigroup
fx5       a two-cone planar fan, normal
fx6       two disjoint edges, not Cohen-Macaulay
broken    invalid input (no empty cell)
========  ==========================================================
"""

from __future__ import annotations

import json
from importlib import resources

NAMES = ("fx1", "fx2", "fx3", "fx4", "fx5", "fx6")


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.json")


def raw(name: str) -> dict:
    return json.loads(path(name).read_text())


def load(name: str):
    """Validated :class:`~torface.io.Model` of a bundled fixture.

    ``"fx1n"`` gives the normalization of fx1.
    """
    from ..io import load_document

    if name.endswith("n") and name[:-1] in NAMES:
        return load_document(raw(name[:-1])).normalized()
    return load_document(raw(name))
