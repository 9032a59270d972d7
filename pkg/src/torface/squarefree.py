"""Squarefree modules as box-truncated graded data and as cell-poset representations.

A module is given by the dimension of each graded piece ``M_a`` (``a`` in
|M|) and the matrices of multiplication by ``t^b``. It is squarefree when
``t^b : M_a → M_{a+b}`` is bijective whenever ``supp(a+b) = supp(a)``.
Such a module is determined by the spaces ``V_σ = M_{s_σ}`` and the maps
``φ`` between them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import linalg
from .errors import BoxTooSmall, NoDegreeWithSupport, OutOfBox, SuppOrderViolated
from .toricring import DegreeElem, ToricFaceRing


def _zero(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def _eye(n: int) -> np.ndarray:
    return np.array([[int(i == j) for j in range(n)] for i in range(n)], dtype=object).reshape(n, n)


class GradedModule:
    """An |M|-graded module known through ``dim(a)`` and ``mult(b, a)``.

    ``mult(b, a)`` is the matrix of ``t^b : M_a → M_{a+b}`` (shape
    ``dim(a+b) x dim(a)``); it is only asked for when ``a + b`` exists.
    Degrees whose class has a representative of sup-norm at most ``box``
    are in range.
    """

    def __init__(self, ring: ToricFaceRing, box: int,
                 dim_fn: Callable[[DegreeElem], int],
                 mult_fn: Callable[[DegreeElem, DegreeElem], np.ndarray],
                 name: str = "module"):
        self.ring = ring
        self.box = box
        self._dim_fn = dim_fn
        self._mult_fn = mult_fn
        self.name = name
        self._degrees = None

    def degrees(self) -> list[DegreeElem]:
        if self._degrees is None:
            self._degrees = self.ring.box_monomials(self.box)
        return self._degrees

    def in_box(self, a: DegreeElem) -> bool:
        return self.ring.norm(a) <= self.box

    def dim(self, a: DegreeElem) -> int:
        return self._dim_fn(a)

    def mult(self, b: DegreeElem, a: DegreeElem) -> np.ndarray:
        m = np.asarray(self._mult_fn(b, a), dtype=object)
        c = self.ring.monomial_product(a, b)
        shape = (self.dim(c) if c is not None else 0, self.dim(a))
        return m.reshape(shape)


# ---- built-in modules ------------------------------------------------------

def ring_module(R: ToricFaceRing, box: int) -> GradedModule:
    """R itself: every piece is k and multiplication is 1."""
    return GradedModule(R, box, lambda a: 1,
                        lambda b, a: _eye(1) if R.monomial_product(a, b) is not None else _zero(0, 1),
                        "ring")


def quotient_module(R: ToricFaceRing, s, box: int) -> GradedModule:
    """``k[σ] = R/p_σ``: pieces k at ``a ∈ M_σ``."""
    s = R.complex.cell(s)

    def dim(a):
        return int(R.in_cell(a, s))

    def mult(b, a):
        c = R.monomial_product(a, b)
        rows = dim(c) if c is not None else 0
        return _eye(1)[:rows, :dim(a)] if rows and dim(a) else _zero(rows, dim(a))

    return GradedModule(R, box, dim, mult, f"quotient:{R.complex.cells[s].id}")


def prime_module(R: ToricFaceRing, s, box: int) -> GradedModule:
    """The ideal ``p_σ``: pieces k at ``a ∉ M_σ``."""
    s = R.complex.cell(s)

    def dim(a):
        return int(not R.in_cell(a, s))

    def mult(b, a):
        c = R.monomial_product(a, b)
        rows = dim(c) if c is not None else 0
        return _eye(1) if rows and dim(a) else _zero(rows, dim(a))

    return GradedModule(R, box, dim, mult, f"prime:{R.complex.cells[s].id}")


def explicit_module(R: ToricFaceRing, doc: Mapping, box: int) -> GradedModule:
    """Module from a JSON description.

    ``{"builtin": "ring" | "quotient" | "prime", "cell": id}`` selects a
    built-in; otherwise ``{"dims": [{"degree": {"cell", "coords"}, "dim"}],
    "maps": [{"by": deg, "from": deg, "matrix": [[...]]}]}`` lists the
    nonzero pieces and maps (missing maps are zero).
    """
    kind = doc.get("builtin")
    if kind == "ring":
        return ring_module(R, box)
    if kind == "quotient":
        return quotient_module(R, doc["cell"], box)
    if kind == "prime":
        return prime_module(R, doc["cell"], box)
    if kind is not None:
        raise ValueError(f"unknown builtin module {kind!r}")

    def deg(d):
        return R.degree(d["cell"], d["coords"])

    dims = {deg(e["degree"]): int(e["dim"]) for e in doc.get("dims", [])}
    maps = {(deg(e["by"]), deg(e["from"])): np.array(e["matrix"], dtype=object) for e in doc.get("maps", [])}

    def dim(a):
        return dims.get(a, 0)

    def mult(b, a):
        if b == R.zero:
            return _eye(dim(a))
        c = R.monomial_product(a, b)
        rows = dim(c) if c is not None else 0
        m = maps.get((b, a))
        return m if m is not None else _zero(rows, dim(a))

    return GradedModule(R, box, dim, mult, doc.get("name", "explicit"))


# ---- squarefreeness --------------------------------------------------------

@dataclass
class SquarefreeReport:
    squarefree: bool
    witness: tuple | None = None
    pairs_checked: int = 0
    support_growth_seen: bool = False
    warnings: list[str] = field(default_factory=list)

    def to_json(self, complex) -> dict:
        out = {
            "schema": 1,
            "check": "squarefree",
            "squarefree": self.squarefree,
            "pairs_checked": self.pairs_checked,
            "warnings": self.warnings,
        }
        if self.witness is not None:
            a, b = self.witness
            out["witness"] = {"a": a.to_json(complex), "b": b.to_json(complex)}
        return out


def _bijective(m: np.ndarray) -> bool:
    r, c = m.shape
    return r == c and (r == 0 or linalg.rank(m) == r)


def check_squarefree(M: GradedModule, strict: bool = False) -> SquarefreeReport:
    """Check bijectivity of ``t^b : M_a → M_{a+b}`` for in-box pairs with ``supp(a+b) = supp(a)``.

    The first violating pair ``(a, b)`` (in canonical order) is returned as
    the witness. With ``strict`` a box that shows no support growth raises
    :class:`BoxTooSmall`; otherwise a warning is recorded.
    """
    R = M.ring
    degs = M.degrees()
    rep = SquarefreeReport(True)
    for a in degs:
        for b in degs:
            c = R.monomial_product(a, b)
            if c is None or not M.in_box(c):
                continue
            if R.supp(c) != R.supp(a):
                rep.support_growth_seen = True
                continue
            rep.pairs_checked += 1
            if not _bijective(M.mult(b, a)):
                rep.squarefree = False
                rep.witness = (a, b)
                return rep
    if not rep.support_growth_seen:
        if strict:
            raise BoxTooSmall("no in-box pair changes support")
        rep.warnings.append("BoxTooSmall: no in-box pair changes support")
    return rep


def phi(M: GradedModule, a: DegreeElem, b: DegreeElem) -> np.ndarray:
    """``φ_{a,b} : M_b → M_a``, i.e. ``(t^b on M_a)^{-1} ∘ (t^a on M_b)``.

    Needs ``supp(b) ≤ supp(a)`` (then ``a + b`` exists and has the support of ``a``).
    """
    R = M.ring
    sa, sb = R.supp(a), R.supp(b)
    if not R.complex.leq(sb, sa):
        raise SuppOrderViolated("phi needs supp(b) <= supp(a)")
    c = R.monomial_product(a, b)
    assert c is not None and R.supp(c) == sa
    if not (M.in_box(a) and M.in_box(b) and M.in_box(c)):
        raise OutOfBox("phi needs a, b and a + b inside the box")
    left = M.mult(b, a)
    if not _bijective(left):
        raise ValueError("module is not squarefree at this pair")
    right = M.mult(a, b)
    if left.shape[0] == 0:
        return _zero(M.dim(a), M.dim(b))
    return linalg.inverse(left).dot(right)


@dataclass
class SquarefreeModule:
    """Representation of the cell poset: ``V_σ`` and maps ``V_τ → V_σ`` for ``τ ≤ σ``."""

    complex: object
    spaces: dict[int, int]
    maps: dict[tuple[int, int], np.ndarray]

    @property
    def total_dim(self) -> int:
        return sum(self.spaces.values())

    def check(self) -> None:
        cx = self.complex
        for s, n in self.spaces.items():
            assert (self.maps[(s, s)] == _eye(n)).all()
        for (s, t), m in self.maps.items():
            for u in cx.le[t]:
                lhs = m.dot(self.maps[(t, u)]) if m.size and self.maps[(t, u)].size else _zero(*m.shape[:1], self.spaces[u])
                assert (lhs == self.maps[(s, u)]).all(), "representation is not functorial"

    def composite_ranks(self) -> dict[tuple[int, int], int]:
        return {k: (linalg.rank(m) if m.size else 0) for k, m in sorted(self.maps.items())}


def to_incidence_module(M: GradedModule, choose: Callable[[int], DegreeElem] | None = None) -> SquarefreeModule:
    """Poset representation with ``V_σ = M_{a(σ)}``, ``a(σ) = s_σ`` unless ``choose`` is given."""
    R = M.ring
    cx = R.complex
    pick = choose or R.generator_degree
    deg = {}
    for s in range(len(cx)):
        a = pick(s)
        if R.supp(a) != s or not M.in_box(a):
            raise NoDegreeWithSupport(f"no in-box degree with support {cx.cells[s].id}")
        deg[s] = a
    spaces = {s: M.dim(a) for s, a in deg.items()}
    maps = {}
    for s in range(len(cx)):
        for t in cx.le[s]:
            if s == t:
                maps[(s, t)] = _eye(spaces[s])
            else:
                maps[(s, t)] = phi(M, deg[s], deg[t])
    out = SquarefreeModule(cx, spaces, maps)
    out.check()
    return out
