"""Degreewise strands of the Čech complex L, its Matlis dual J and the Ishida complex I.

Every graded piece of every term is at most one-dimensional per cell, so a
strand is a cochain complex whose basis at each position is a list of
cells and whose differentials are small integer matrices.

Index conventions: in L the cells of dimension ``i - 1`` sit at position
``i``; in J and I they sit at position ``-i``. Differentials raise the
position by one.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing as mp
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import NotConeWiseNormal, UndecidedAtCap, UndecidedDegree
from .linalg import Field
from .localization import DEFAULT_CAP, Localizer, negate_component
from .toricring import DegreeElem, ToricFaceRing

TAGS = ("L", "J", "I")


@dataclass
class Strand:
    """The degree-``degree`` slice of one of the complexes."""

    tag: str
    degree: DegreeElem
    positions: dict[int, list[int]]
    differentials: dict[int, np.ndarray]

    def dim(self, i: int) -> int:
        return len(self.positions.get(i, ()))

    def matrix(self, i: int) -> np.ndarray:
        """``d^i``: position ``i`` to ``i + 1`` (rows index position ``i + 1``)."""
        m = self.differentials.get(i)
        if m is None:
            return np.zeros((self.dim(i + 1), self.dim(i)), dtype=object)
        return m

    def indices(self) -> list[int]:
        return sorted(self.positions)

    def check(self) -> None:
        """Assert ``d ∘ d = 0`` and shape consistency."""
        for i, m in self.differentials.items():
            assert m.shape == (self.dim(i + 1), self.dim(i)), (self.tag, i, m.shape)
        for i in self.differentials:
            nxt = self.differentials.get(i + 1)
            if nxt is not None and nxt.size and self.differentials[i].size:
                assert not (nxt.dot(self.differentials[i]) != 0).any(), f"d∘d ≠ 0 at {i} in {self.tag}"

    def is_empty(self) -> bool:
        return not any(self.positions.values())


def _rank(field: Field, m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return field.rank(m)


def strand_cohomology(s: Strand, field: Field = Field()) -> dict[int, int]:
    """Ranks ``dim C^i - rank d^i - rank d^{i-1}``; zero ranks are omitted."""
    out = {}
    ranks = {i: _rank(field, m) for i, m in s.differentials.items()}
    for i, cells in s.positions.items():
        h = len(cells) - ranks.get(i, 0) - ranks.get(i - 1, 0)
        assert h >= 0
        if h:
            out[i] = h
    return out


class StrandBuilder:
    """Builds strands of L, J and I for one toric face ring.

    A basis slot is a pair ``(cell, local degree)``; for fans there is at
    most one slot per cell.

    Parameters
    ----------
    ring : ToricFaceRing
    cap : int
        Shift cap handed to the :class:`~torface.localization.Localizer`.
    """

    def __init__(self, ring: ToricFaceRing, cap: int = DEFAULT_CAP, localizer: Localizer | None = None):
        self.ring = ring
        self.complex = ring.complex
        self.loc = localizer or Localizer(ring, cap)
        self._cells = sorted(range(len(self.complex)), key=self.complex.sort_key)

    def _assemble(self, tag, a, slots, position, entry, downward: bool) -> Strand:
        cx = self.complex
        pos: dict[int, list] = {}
        for slot in slots:
            pos.setdefault(position(slot[0]), []).append(slot)
        diffs = {}
        for i in sorted(pos):
            if i + 1 not in pos:
                continue
            src, dst = pos[i], pos[i + 1]
            m = np.zeros((len(dst), len(src)), dtype=object)
            for c, x in enumerate(src):
                for r, y in enumerate(dst):
                    hi, lo = (x[0], y[0]) if downward else (y[0], x[0])
                    if lo in cx.covers_down[hi]:
                        m[r, c] = entry(x, y)
            diffs[i] = m
        st = Strand(tag, a, pos, diffs)
        st.check()
        return st

    def build_cech_strand(self, a: DegreeElem) -> Strand:
        """Degree-``a`` part of L: slots where ``a ∈ M − M_σ``, maps ``ε(τ,σ)·g_{τ,σ}``."""
        cx, loc = self.complex, self.loc

        def entry(x, y):
            (s, k), (t, k2) = x, y
            return cx.eps(t, s) * int(loc.image_component(a, s, k, t) == k2)

        try:
            slots = [(s, k) for s in self._cells for k in loc.loc_slots(a, s)]
            return self._assemble("L", a, slots, lambda s: cx.dim_of(s) + 1, entry, downward=False)
        except UndecidedAtCap as exc:
            raise UndecidedDegree(a) from exc

    def build_dual_strand(self, a: DegreeElem) -> Strand:
        """Degree-``a`` part of J: slots where ``a ∈ M_σ − M``, maps ``ε(σ,τ)·g^∨_{σ,τ}``.

        ``g^∨_{σ,τ}`` sends ``t_σ^a`` to ``t_τ^a`` when ``a ∈ M_τ − M`` and to 0
        otherwise; for local degrees, to the one at τ containing it.
        """
        cx, loc = self.complex, self.loc

        def entry(x, y):
            (s, k), (t, k2) = x, y
            return cx.eps(s, t) * int(k[0] in k2)

        try:
            slots = [(s, k) for s in self._cells for k in loc.dual_slots(a, s)]
            return self._assemble("J", a, slots, lambda s: -(cx.dim_of(s) + 1), entry, downward=True)
        except UndecidedAtCap as exc:
            raise UndecidedDegree(a) from exc

    def build_ishida_strand(self, a: DegreeElem) -> Strand:
        """Degree-``a`` part of I: slots where ``a ∈ M_σ``, maps ``ε(σ,τ)·f_{τ,σ}``."""
        cx, R = self.complex, self.ring
        slots = [(s, ((s, R.rep(a, s)),)) for s in self._cells if R.in_cell(a, s)]
        return self._assemble(
            "I", a, slots, lambda s: -(cx.dim_of(s) + 1), lambda x, y: cx.eps(x[0], y[0]), downward=True,
        )

    def build(self, tag: str, a: DegreeElem) -> Strand:
        return {"L": self.build_cech_strand, "J": self.build_dual_strand, "I": self.build_ishida_strand}[tag](a)


def transpose_mismatches(builder: StrandBuilder, a: DegreeElem) -> list[str]:
    """Compare J at ``a`` with the index-reversed transpose of L at ``-a``.

    Slots are matched by negating local degrees.
    """
    J = builder.build_dual_strand(a)
    L = builder.build_cech_strand(builder.ring.negate(a))
    out = []
    idx = set(J.positions) | {-i for i in L.positions}
    perm = {}
    for i in sorted(idx):
        js = [(s, negate_component(k)) for s, k in J.positions.get(i, [])]
        ls = L.positions.get(-i, [])
        if sorted(js) != sorted(ls):
            out.append(f"position {i}: bases differ")
            return out
        perm[i] = [ls.index(x) for x in js]
    for i in sorted(idx):
        if i + 1 not in perm:
            continue
        jm = J.matrix(i)
        lm = L.matrix(-i - 1).T  # rows: L position -i, cols: L position -i-1
        expect = lm[np.ix_(perm[i + 1], perm[i])] if jm.size else jm
        if jm.shape != expect.shape or (jm.size and (jm != expect).any()):
            out.append(f"d^{i}: matrices differ")
    return out


# ---- tables ----------------------------------------------------------------

@dataclass
class CohomologyTable:
    """Nonzero ranks ``(index, degree) -> rank`` of one complex over a scan box."""

    tag: str
    box: int
    field: Field
    degrees: list[DegreeElem]
    entries: dict[tuple[int, DegreeElem], int] = field(default_factory=dict)
    undecided: list[DegreeElem] = field(default_factory=list)

    def rank(self, i: int, a: DegreeElem) -> int:
        return self.entries.get((i, a), 0)

    def nonzero(self, i: int) -> list[DegreeElem]:
        return sorted(a for (j, a), r in self.entries.items() if j == i and r)

    def rows(self) -> list[tuple[DegreeElem, int, int]]:
        return sorted(((a, i, r) for (i, a), r in self.entries.items()), key=lambda t: (t[0], t[1]))

    def to_json(self, complex) -> dict:
        return {
            "schema": 1,
            "complex": self.tag,
            "box": self.box,
            "field": str(self.field),
            "degrees_scanned": len(self.degrees),
            "entries": [
                {"index": i, "degree": a.to_json(complex), "rank": r} for a, i, r in self.rows()
            ],
            "undecided": [a.to_json(complex) for a in sorted(self.undecided)],
        }

    def to_csv(self, complex) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["complex", "index", "cell", "coords", "rank"])
        for a, i, r in self.rows():
            w.writerow([self.tag, i, complex.cells[a.cell].id, " ".join(map(str, a.coords)), r])
        for a in sorted(self.undecided):
            w.writerow([self.tag, "", complex.cells[a.cell].id, " ".join(map(str, a.coords)), "undecided"])
        return buf.getvalue()


# worker state for process pools; rebuilt from the raw document in each worker
_WORKER: dict = {}


def _init_worker(raw: dict, cap: int, field_p) -> None:
    from .io import load_document

    model = load_document(raw)
    ring = model.ring()
    _WORKER.update(ring=ring, builder=StrandBuilder(ring, cap), field=Field(field_p))


def _scan_chunk(args) -> list:
    tag, keys = args
    ring, builder, fld = _WORKER["ring"], _WORKER["builder"], _WORKER["field"]
    out = []
    for cell, coords in keys:
        a = ring.canonicalize(cell, coords)
        try:
            out.append((cell, coords, strand_cohomology(builder.build(tag, a), fld)))
        except UndecidedDegree:
            out.append((cell, coords, None))
    return out


def _default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def box_scan(
    builder: StrandBuilder,
    tag: str,
    box: int,
    field: Field = Field(),
    jobs: int | None = 1,
    raw: dict | None = None,
) -> CohomologyTable:
    """Cohomology ranks of one complex at every degree of the scan box.

    With ``jobs > 1`` the degrees are split over worker processes, each of
    which rebuilds the ring from ``raw`` (the model's JSON document). The
    merged table does not depend on ``jobs``.
    """
    if tag not in TAGS:
        raise ValueError(f"unknown complex {tag!r}")
    ring = builder.ring
    degrees = ring.box_degrees(box)
    table = CohomologyTable(tag, box, field, degrees)
    jobs = _default_jobs() if jobs is None else jobs
    if jobs > 1 and raw is not None and len(degrees) > 1:
        keys = [(a.cell, a.coords) for a in degrees]
        step = max(1, len(keys) // (4 * jobs))
        chunks = [(tag, keys[k:k + step]) for k in range(0, len(keys), step)]
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(jobs, mp_context=ctx, initializer=_init_worker,
                                 initargs=(raw, builder.loc.cap, field.p)) as pool:
            results = [r for part in pool.map(_scan_chunk, chunks) for r in part]
        ranks_of = {ring.canonicalize(c, x): h for c, x, h in results}
    else:
        ranks_of = {}
        for a in degrees:
            try:
                ranks_of[a] = strand_cohomology(builder.build(tag, a), field)
            except UndecidedDegree:
                ranks_of[a] = None
    for a in degrees:
        h = ranks_of[a]
        if h is None:
            table.undecided.append(a)
            continue
        for i, r in h.items():
            table.entries[(i, a)] = r
    return table


# ---- diagnostics -----------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    passed: bool
    violations: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.violations:
            return "fail"
        return "undecided" if self.undecided else "pass"

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "check": self.name,
            "status": self.status,
            "violations": self.violations,
            "undecided": self.undecided,
            **self.details,
        }


def _tables(builder, tags, box, field, jobs, raw):
    return {t: box_scan(builder, t, box, field, jobs, raw) for t in tags}


def duality_check(builder: StrandBuilder, box: int, field: Field = Field(), jobs=1, raw=None) -> CheckReport:
    """``rank H^{-i}(J)_a = rank H^i(L)_{-a}`` for every in-box degree."""
    T = _tables(builder, ("L", "J"), box, field, jobs, raw)
    R, cx = builder.ring, builder.complex
    bad = []
    for a in T["J"].degrees:
        na = R.negate(a)
        for i in range(0, cx.dim + 2):
            lhs, rhs = T["J"].rank(-i, a), T["L"].rank(i, na)
            if lhs != rhs:
                bad.append({"index": i, "degree": a.to_json(cx), "J": lhs, "L": rhs})
    und = sorted(set(T["J"].undecided) | {R.negate(a) for a in T["L"].undecided})
    return CheckReport("duality", not bad, bad, [a.to_json(cx) for a in und],
                       {"box": box, "degrees_scanned": len(T["J"].degrees)})


def ishida_vs_dual_check(builder: StrandBuilder, box: int, field: Field = Field(), jobs=1, raw=None) -> CheckReport:
    """``rank H^{-i}(I)_a = rank H^{-i}(J)_a``; only meaningful for cone-wise normal input."""
    if not builder.ring.mc.is_cone_wise_normal():
        raise NotConeWiseNormal("the Ishida comparison needs every semigroup to be normal")
    T = _tables(builder, ("I", "J"), box, field, jobs, raw)
    cx = builder.complex
    bad = []
    for a in T["J"].degrees:
        for i in range(0, cx.dim + 2):
            lhs, rhs = T["I"].rank(-i, a), T["J"].rank(-i, a)
            if lhs != rhs:
                bad.append({"index": i, "degree": a.to_json(cx), "I": lhs, "J": rhs})
    return CheckReport("ishida", not bad, bad, [a.to_json(cx) for a in T["J"].undecided],
                       {"box": box, "degrees_scanned": len(T["J"].degrees)})


@dataclass
class CMVerdict:
    verdict: str  # ConsistentWithCM | NotCM | Undecided
    witnesses: list[tuple[int, DegreeElem]]

    def to_json(self, complex) -> dict:
        return {
            "schema": 1,
            "check": "cm",
            "verdict": self.verdict,
            "witnesses": [{"index": i, "degree": a.to_json(complex)} for i, a in self.witnesses],
        }


def cm_diagnostic(table: CohomologyTable, d: int) -> CMVerdict:
    """Box verdict from J ranks: NotCM if ``H^{-i}(J)_a ≠ 0`` for some ``i ≠ d``."""
    if table.tag != "J":
        raise ValueError("the Cohen-Macaulay diagnostic reads a J table")
    wit = sorted(((-j, a) for (j, a), r in table.entries.items() if r and -j != d),
                 key=lambda t: (t[0], t[1]))
    if wit:
        return CMVerdict("NotCM", wit)
    if table.undecided:
        return CMVerdict("Undecided", [])
    return CMVerdict("ConsistentWithCM", [])
