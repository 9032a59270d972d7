"""Finite regular cell complexes encoded as graded posets with incidence signs."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import BadIncidence, DimGap, MissingEmptyCell, NoMeet, NotAPoset, ValidationError


@dataclass(frozen=True)
class Cell:
    index: int
    id: str
    dim: int


@dataclass(eq=False)
class CellComplex:
    """A validated cell complex.

    Cells are addressed by dense integer indices assigned in input order;
    ``cells[i].id`` is the user-facing string id. ``le[i]`` is the set of
    indices below or equal to ``i`` and ``ge[i]`` the set above or equal.
    ``incidence[(upper, lower)]`` is the sign on a covering pair.
    """

    cells: tuple[Cell, ...]
    le: tuple[frozenset, ...]
    ge: tuple[frozenset, ...]
    incidence: Mapping[tuple[int, int], int]
    empty: int
    _meets: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n = len(self.cells)
        self.index_of = {c.id: c.index for c in self.cells}
        self.covers_down = tuple(
            tuple(sorted(t for t in self.le[s] if self.cells[t].dim == self.cells[s].dim - 1))
            for s in range(n)
        )
        self.covers_up = tuple(
            tuple(sorted(t for t in self.ge[s] if self.cells[t].dim == self.cells[s].dim + 1))
            for s in range(n)
        )
        self.maximal = tuple(s for s in range(n) if len(self.ge[s]) == 1)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    @property
    def dim(self) -> int:
        return max(c.dim for c in self.cells)

    def cell(self, key: int | str) -> int:
        """Index of a cell given either its index or its string id."""
        if isinstance(key, str):
            try:
                return self.index_of[key]
            except KeyError:
                raise KeyError(f"unknown cell id {key!r}") from None
        return key

    def dim_of(self, s: int) -> int:
        return self.cells[s].dim

    def leq(self, s: int, t: int) -> bool:
        return s in self.le[t]

    def eps(self, upper: int, lower: int) -> int:
        return self.incidence.get((upper, lower), 0)

    def of_dim(self, k: int) -> list[int]:
        return [c.index for c in self.cells if c.dim == k]

    def sort_key(self, s: int) -> tuple[int, int]:
        return (self.cells[s].dim, s)

    def meet(self, s: int, t: int) -> int:
        """Greatest common lower bound (always exists after validation)."""
        s, t = self.cell(s), self.cell(t)
        key = (s, t) if s <= t else (t, s)
        if key not in self._meets:
            self._meets[key] = _greatest(self, self.le[s] & self.le[t])
        return self._meets[key]

    def upper_set(self, s: int) -> list[int]:
        """All cells above ``s``, sorted by dimension then index."""
        return sorted(self.ge[self.cell(s)], key=self.sort_key)

    def lower_set(self, s: int) -> list[int]:
        return sorted(self.le[self.cell(s)], key=self.sort_key)

    def boundary_composites(self) -> dict[tuple[int, int], int]:
        """``sum_t eps(s, t) eps(t, u)`` for every pair with dim gap 2."""
        out = {}
        for s in range(len(self)):
            for t in self.covers_down[s]:
                for u in self.covers_down[t]:
                    out[(s, u)] = out.get((s, u), 0) + self.eps(s, t) * self.eps(t, u)
        return out

    def resigned(self, signs: Mapping[int, int]) -> "CellComplex":
        """Complex with incidence replaced by ``signs[s] * eps(s, t) * signs[t]``."""
        inc = {
            (s, t): signs.get(s, 1) * e * signs.get(t, 1) for (s, t), e in self.incidence.items()
        }
        return CellComplex(self.cells, self.le, self.ge, inc, self.empty)

    def to_raw(self) -> dict:
        order = [
            [self.cells[t].id, self.cells[s].id]
            for s in range(len(self))
            for t in self.covers_down[s]
        ]
        inc = [[self.cells[s].id, self.cells[t].id, e] for (s, t), e in sorted(self.incidence.items())]
        return {
            "cells": [{"id": c.id, "dim": c.dim} for c in self.cells],
            "order": order,
            "incidence": inc,
        }


def _greatest(cx: CellComplex, candidates: Iterable[int]) -> int | None:
    cand = list(candidates)
    for c in cand:
        if all(d in cx.le[c] for d in cand):
            return c
    return None


def validate_complex(
    cells: Sequence[Mapping],
    order: Sequence[Sequence[str]],
    incidence: Sequence[Sequence],
) -> CellComplex:
    """Build a :class:`CellComplex` from raw lists, checking every invariant.

    ``cells`` is a list of ``{"id", "dim"}`` records, ``order`` a list of
    ``[lower, upper]`` pairs (the transitive closure is taken, and the empty
    cell is placed below everything), ``incidence`` a list of
    ``[upper, lower, sign]`` triples on covering pairs. Signs between a
    vertex and the empty cell default to 1 when omitted.
    """
    ids = [str(c["id"]) for c in cells]
    dims = [int(c["dim"]) for c in cells]
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise ValidationError("cell ids must be unique", dup)
    if any(d < -1 for d in dims):
        raise ValidationError("cell dimension below -1", [i for i, d in zip(ids, dims) if d < -1])
    empties = [k for k, d in enumerate(dims) if d == -1]
    if len(empties) != 1:
        raise MissingEmptyCell(
            "exactly one cell of dimension -1 is required", [ids[k] for k in empties]
        )
    empty = empties[0]
    index = {cid: k for k, cid in enumerate(ids)}
    n = len(ids)

    below: list[set[int]] = [{k} for k in range(n)]
    for pair in order:
        lo, hi = (str(x) for x in pair)
        for x in (lo, hi):
            if x not in index:
                raise ValidationError(f"order references unknown cell {x!r}", [x])
        below[index[hi]].add(index[lo])
    for k in range(n):
        below[k].add(empty)
    # transitive closure by iterating to a fixed point
    changed = True
    while changed:
        changed = False
        for k in range(n):
            new = set().union(*(below[j] for j in below[k]))
            if new != below[k]:
                below[k] = new
                changed = True
    for k in range(n):
        for j in below[k]:
            if j != k and k in below[j]:
                raise NotAPoset("order relation has a cycle", [ids[j], ids[k]])
            if j != k and dims[j] >= dims[k]:
                raise NotAPoset("a cell lies below a cell of equal or lower dimension", [ids[j], ids[k]])
    if below[empty] != {empty}:
        raise MissingEmptyCell("the empty cell must be the minimum", [ids[empty]])

    cell_objs = tuple(Cell(k, ids[k], dims[k]) for k in range(n))
    le = tuple(frozenset(b) for b in below)
    ge = tuple(frozenset(j for j in range(n) if k in le[j]) for k in range(n))

    for s in range(n):
        for t in le[s]:
            if t == s:
                continue
            between = [u for u in le[s] if u != s and u != t and t in le[u]]
            if not between and dims[t] != dims[s] - 1:
                raise DimGap("covering pair skips a dimension", [ids[t], ids[s]])

    eps: dict[tuple[int, int], int] = {}
    for entry in incidence:
        hi, lo, sign = str(entry[0]), str(entry[1]), int(entry[2])
        for x in (hi, lo):
            if x not in index:
                raise ValidationError(f"incidence references unknown cell {x!r}", [x])
        s, t = index[hi], index[lo]
        if sign == 0:
            continue
        if sign not in (1, -1):
            raise BadIncidence("incidence values must lie in {0, 1, -1}", [hi, lo])
        if t not in le[s] or dims[t] != dims[s] - 1:
            raise BadIncidence("nonzero incidence on a non-covering pair", [hi, lo])
        if (s, t) in eps and eps[(s, t)] != sign:
            raise BadIncidence("conflicting incidence entries", [hi, lo])
        eps[(s, t)] = sign

    cx = CellComplex(cell_objs, le, ge, {}, empty)
    for s in range(n):
        for t in cx.covers_down[s]:
            if t == empty:
                if eps.setdefault((s, t), 1) != 1:
                    raise BadIncidence("vertices must have incidence 1 with the empty cell", [ids[s], ids[t]])
            elif (s, t) not in eps:
                raise BadIncidence("covering pair lacks an incidence sign", [ids[s], ids[t]])
    cx = CellComplex(cell_objs, le, ge, eps, empty)
    for (s, u), total in sorted(cx.boundary_composites().items()):
        if total != 0:
            raise BadIncidence("boundary of boundary is nonzero", [ids[s], ids[u]])

    for s, t in combinations(range(n), 2):
        if _greatest(cx, le[s] & le[t]) is None:
            raise NoMeet("two cells have no unique maximal common face", [ids[s], ids[t]])
    return cx


def simplicial_complex(facets: Iterable[Iterable[str]]) -> CellComplex:
    """Cell complex of a simplicial complex with the alternating-sign incidence.

    Vertices are ordered by first appearance; a face with sorted vertices
    ``v_0 < ... < v_k`` has id ``"v_0-...-v_k"`` and
    ``eps(face, face minus v_i) = (-1)^i``.
    """
    order_of: dict[str, int] = {}
    faces: set[tuple[str, ...]] = set()
    for facet in facets:
        fs = list(facet)
        for v in fs:
            order_of.setdefault(v, len(order_of))
        fs.sort(key=order_of.__getitem__)
        for k in range(len(fs) + 1):
            faces.update(combinations(fs, k))
    ordered = sorted(faces, key=lambda f: (len(f), [order_of[v] for v in f]))

    def name(f):
        return "-".join(f) if f else "empty"

    cells = [{"id": name(f), "dim": len(f) - 1} for f in ordered]
    order, inc = [], []
    for f in ordered:
        for i in range(len(f)):
            g = f[:i] + f[i + 1:]
            order.append([name(g), name(f)])
            inc.append([name(f), name(g), (-1) ** i if len(f) > 1 else 1])
    return validate_complex(cells, order, inc)
