import functools
from itertools import combinations

import pytest

from torface import fixtures
from torface.homology import StrandBuilder
from torface.io import load_document


@functools.lru_cache(maxsize=None)
def model(name):
    return fixtures.load(name)


@functools.lru_cache(maxsize=None)
def ring(name):
    return model(name).ring()


@functools.lru_cache(maxsize=None)
def builder(name):
    return StrandBuilder(ring(name))


def stanley_reisner_doc(facets, name="sr"):
    """JSON document of the Stanley-Reisner ring of a simplicial complex.

    Every face gets the semigroup N^{|face|} and coordinate embeddings.
    Incidence uses the alternating sign with vertices in first-seen order.
    """
    verts = []
    for f in facets:
        for v in f:
            if v not in verts:
                verts.append(v)
    faces = set()
    for f in facets:
        f = sorted(f, key=verts.index)
        for k in range(len(f) + 1):
            faces.update(combinations(f, k))
    faces = sorted(faces, key=lambda f: (len(f), [verts.index(v) for v in f]))

    def cid(f):
        return "".join(f) if f else "empty"

    doc = {"name": name, "cells": [], "order": [], "incidence": [], "semigroups": {}, "embeddings": []}
    for f in faces:
        doc["cells"].append({"id": cid(f), "dim": len(f) - 1})
        if f:
            n = len(f)
            doc["semigroups"][cid(f)] = {"generators": [[int(i == j) for j in range(n)] for i in range(n)]}
        for i in range(len(f)):
            g = f[:i] + f[i + 1:]
            doc["order"].append([cid(g), cid(f)])
            doc["incidence"].append([cid(f), cid(g), (-1) ** i if len(f) > 1 else 1])
            if g:
                mat = [[int(f[r] == g[c]) for c in range(len(g))] for r in range(len(f))]
                doc["embeddings"].append({"lower": cid(g), "upper": cid(f), "matrix": mat})
    return doc


def stanley_reisner(facets):
    return load_document(stanley_reisner_doc(facets))


@pytest.fixture
def fx():
    return model


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
