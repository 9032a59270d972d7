"""Affine semigroups in pointed rational cones and monoidal complexes.

Cones are handled exclusively through exact integer data: facets are found
by enumerating generalized cross products of generator subsets, so every
membership or face question reduces to sign checks on integer dot products.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import ceil, gcd
from typing import Iterable, Mapping, Sequence

from . import linalg
from .cellcomplex import CellComplex
from .errors import (
    CoordinateOverflow,
    FaceConditionFails,
    FaceWithoutCell,
    FunctorialityFails,
    GroupNotSaturated,
    NotPointed,
    RankMismatch,
    UndecidedAtCap,
    ValidationError,
)
from .linalg import LeftInverse, dot, matvec, primitive

INT64 = 2 ** 63
# integer covectors tried before falling back to the facet-normal sum
_FUNCTIONAL_SEARCH_NORM = 3


Vector = tuple


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


class AffineSemigroup:
    """Finitely generated submonoid of Z^rank inside a pointed cone.

    >>> M = AffineSemigroup([[2], [3]])
    >>> M.contains((5,)), M.contains((1,))
    (True, False)
    """

    def __init__(self, generators: Iterable[Sequence[int]], rank: int | None = None):
        gens = [tuple(int(x) for x in g) for g in generators]
        if rank is None:
            if not gens:
                raise ValueError("rank is required for an empty generator list")
            rank = len(gens[0])
        for g in gens:
            if len(g) != rank:
                raise RankMismatch(f"generator {list(g)} does not have length {rank}")
        self.rank = rank
        seen = []
        for g in gens:
            if any(g) and g not in seen:
                seen.append(g)
        self.generators: tuple[Vector, ...] = tuple(seen)
        self._lock = threading.RLock()
        self._facets = None
        self._functional = None
        self._hilbert = None
        self._rays = None
        self._memo: dict[Vector, bool] = {}

    def __repr__(self) -> str:
        return f"AffineSemigroup({[list(g) for g in self.generators]}, rank={self.rank})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AffineSemigroup)
            and self.rank == other.rank
            and set(self.generators) == set(other.generators)
        )

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self.generators)))

    # ---- cone data -------------------------------------------------------

    @property
    def facets(self) -> tuple[Vector, ...]:
        """Primitive inward facet normals, sorted."""
        if self._facets is None:
            with self._lock:
                if self._facets is None:
                    self._facets = self._compute_facets()
        return self._facets

    def _compute_facets(self) -> tuple[Vector, ...]:
        r = self.rank
        if r == 0:
            return ()
        found = set()
        for sub in combinations(self.generators, r - 1):
            n = linalg.cofactor_normal(sub, r)
            if not any(n):
                continue
            vals = [dot(n, g) for g in self.generators]
            if all(v >= 0 for v in vals):
                found.add(n)
            elif all(v <= 0 for v in vals):
                found.add(tuple(-x for x in n))
        return tuple(sorted(found))

    def spans(self) -> bool:
        return linalg.rank(list(self.generators) or [[0] * self.rank]) == self.rank if self.rank else True

    def is_pointed(self) -> bool:
        if self.rank == 0:
            return True
        if not self.spans():
            return False
        return bool(self.facets) and linalg.rank(list(self.facets)) == self.rank

    def in_cone(self, x: Sequence[int]) -> bool:
        if self.rank == 0:
            return True
        return all(dot(n, x) >= 0 for n in self.facets)

    @property
    def positive_functional(self) -> Vector:
        """Integer covector positive on every nonzero generator.

        Deterministic: the first covector in (sup-norm, lexicographic) order
        among those of sup-norm at most 3, else the primitive sum of the
        facet normals.
        """
        if self._functional is None:
            with self._lock:
                if self._functional is None:
                    self._functional = self._compute_functional()
        return self._functional

    def _compute_functional(self) -> Vector:
        r = self.rank
        if r == 0:
            return ()
        if not self.is_pointed():
            raise NotPointed(f"cone of {self!r} contains a line")
        for norm in range(1, _FUNCTIONAL_SEARCH_NORM + 1):
            for cand in product(range(-norm, norm + 1), repeat=r):
                if max(map(abs, cand)) != norm:
                    continue
                if all(dot(cand, g) > 0 for g in self.generators):
                    return cand
        total = [sum(col) for col in zip(*self.facets)]
        return primitive(total)

    def ell(self, x: Sequence[int]) -> int:
        return dot(self.positive_functional, x)

    @property
    def extreme_rays(self) -> tuple[Vector, ...]:
        """Primitive vectors on the extreme rays, sorted."""
        if self._rays is None:
            with self._lock:
                if self._rays is None:
                    self._rays = self._compute_rays()
        return self._rays

    def _compute_rays(self) -> tuple[Vector, ...]:
        r = self.rank
        if r == 0:
            return ()
        rays = set()
        for g in self.generators:
            p = primitive(g)
            tight = [n for n in self.facets if dot(n, p) == 0]
            if (r == 1 and not tight) or (tight and linalg.rank(tight) == r - 1):
                rays.add(p)
        return tuple(sorted(rays))

    def faces(self) -> list[frozenset]:
        """Faces as frozensets of extreme rays (the zero face is empty)."""
        rays = self.extreme_rays
        out = {frozenset(rays)}
        facets = self.facets
        for k in range(1, len(facets) + 1):
            for sub in combinations(facets, k):
                out.add(frozenset(v for v in rays if all(dot(n, v) == 0 for n in sub)))
        out.add(frozenset())
        return sorted(out, key=lambda f: (len(f), sorted(f)))

    def minimal_face(self, vectors: Iterable[Sequence[int]]) -> tuple[frozenset, tuple[Vector, ...]]:
        """Smallest face containing ``vectors``: (its rays, the facets cutting it out)."""
        vecs = list(vectors)
        cut = tuple(n for n in self.facets if all(dot(n, v) == 0 for v in vecs))
        return frozenset(v for v in self.extreme_rays if all(dot(n, v) == 0 for n in cut)), cut

    # ---- membership ------------------------------------------------------

    def contains(self, x: Sequence[int]) -> bool:
        """Whether ``x`` is a nonnegative integer combination of generators.

        Depth-first subtraction of generators, pruned by the cone and
        memoized; terminates because the positive functional drops by at
        least its minimum on the generators at every step.
        """
        x = tuple(int(v) for v in x)
        if len(x) != self.rank:
            raise RankMismatch(f"vector of length {len(x)} tested in rank {self.rank}")
        return self._member(x)

    __contains__ = contains

    def _member(self, x: Vector) -> bool:
        hit = self._memo.get(x)
        if hit is not None:
            return hit
        if not any(x):
            res = True
        elif not self.in_cone(x) or self.ell(x) <= 0:
            res = False
        else:
            res = False
            for g in self.generators:
                y = _sub(x, g)
                if self.ell(y) >= 0 and self._member(y):
                    res = True
                    break
        self._memo[x] = res
        return res

    # ---- normalization ---------------------------------------------------

    def hilbert_basis(self) -> "AffineSemigroup":
        """The normalization Z^rank ∩ cone, given by its Hilbert basis.

        Lattice points come from fundamental parallelepipeds of all
        full-rank simplicial cones on extreme rays (these cover the cone);
        reducible candidates are discarded. Sorted by (functional, lex).
        """
        if self._hilbert is None:
            with self._lock:
                if self._hilbert is None:
                    self._hilbert = AffineSemigroup(self._compute_hilbert(), self.rank)
        return self._hilbert

    def _compute_hilbert(self) -> list[Vector]:
        r = self.rank
        if r == 0:
            return []
        self.positive_functional  # raises NotPointed early
        rays = self.extreme_rays
        cands = set(rays)
        for sub in combinations(rays, r):
            cols = [list(v) for v in zip(*sub)]  # r x r, columns are rays
            d = linalg.det(cols)
            if d == 0:
                continue
            cands.update(_parallelepiped_points(cols, d))
        cands.discard(tuple([0] * r))
        basis = []
        for h in cands:
            reducible = any(
                c != h and self.in_cone(_sub(h, c)) and any(_sub(h, c)) for c in cands
            )
            if not reducible:
                basis.append(h)
        return sorted(basis, key=lambda h: (self.ell(h), h))

    def is_normal(self) -> bool:
        """True iff the semigroup equals its saturation."""
        return all(self.contains(h) for h in self.hilbert_basis().generators)

    def minimal_generators(self) -> tuple[Vector, ...]:
        """Generators that are not sums of two nonzero elements, sorted."""
        out = []
        for g in self.generators:
            if not any(
                h != g and self.contains(_sub(g, h)) and any(_sub(g, h)) for h in self.generators
            ):
                out.append(g)
        return tuple(sorted(out, key=lambda h: (self.ell(h), h)))

    # ---- localization at a face -----------------------------------------

    def quotient_member(self, x: Vector, face: "FaceData", budget: int = 200_000) -> bool:
        """Decide ``x ∈ M + Z·(face semigroup)`` exactly.

        Modulo the face lattice only generators off the face matter, and the
        face functional is positive on them, so the search is finite.
        """
        off = face.off_face
        target = dot(face.functional, x)
        if target < 0 or not face.in_star(x):
            return False
        seen = set()
        stack = [x]
        steps = 0
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            steps += 1
            if steps > budget:
                raise UndecidedAtCap(x, face)
            if dot(face.functional, y) == 0:
                if face.lattice.solve(y) is not None:
                    return True
                continue
            for g in off:
                z = _sub(y, g)
                if dot(face.functional, z) >= 0 and face.in_star(z):
                    stack.append(z)
        return False


def _parallelepiped_points(cols: list[list[int]], d: int) -> set[Vector]:
    r = len(cols)
    adj = linalg.inverse(cols) * d  # adjugate up to sign is d * inverse
    lo = [sum(min(0, cols[i][j]) for j in range(r)) for i in range(r)]
    hi = [sum(max(0, cols[i][j]) for j in range(r)) for i in range(r)]
    out = set()
    ad = abs(d)
    for x in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        lam = [sum(adj[i][j] * x[j] for j in range(r)) for i in range(r)]
        # lam / d must lie in [0, 1)
        if d < 0:
            lam = [-v for v in lam]
        if all(0 <= v < ad for v in lam):
            out.add(tuple(x))
    return out


@dataclass
class FaceData:
    """A face of an upper cone seen from the upper cell's coordinates.

    ``star_normals`` are the facet normals of the upper cone containing the
    face: ``x`` lies in cone + span(face) iff all are nonnegative on ``x``.
    """

    upper: int
    lower: int
    s: Vector
    star_normals: tuple[Vector, ...]
    functional: Vector
    off_face: tuple[Vector, ...]
    lattice: LeftInverse
    normal_upper: bool

    def in_star(self, x) -> bool:
        return all(dot(n, x) >= 0 for n in self.star_normals)

    def min_shift(self, x) -> int | None:
        """Least ``n ≥ 0`` with ``x + n·s`` in the upper cone, or None."""
        if not self.in_star(x):
            return None
        n = 0
        for f in self._other_normals:
            fs = dot(f, self.s)
            fx = dot(f, x)
            if fx < 0:
                n = max(n, ceil(Fraction(-fx, fs)))
        return n

    _other_normals: tuple = ()


class MonoidalComplex:
    """Affine semigroups on the cells of a complex with their face embeddings.

    ``embedding(upper, lower)`` is the integer matrix of the lifted face
    map for any comparable pair (composites of covering maps).
    """

    def __init__(self, complex: CellComplex, semigroups: Sequence[AffineSemigroup],
                 embeddings: Mapping[tuple[int, int], tuple]):
        self.complex = complex
        self.semigroups = tuple(semigroups)
        self._emb = dict(embeddings)
        self._inv: dict[tuple[int, int], LeftInverse] = {}
        self._faces: dict[tuple[int, int], FaceData] = {}
        self._sums: dict[int, Vector] = {}

    def rank(self, s: int) -> int:
        return self.complex.dim_of(s) + 1

    def semigroup(self, s) -> AffineSemigroup:
        return self.semigroups[self.complex.cell(s)]

    def embedding(self, upper: int, lower: int) -> tuple:
        return self._emb[(upper, lower)]

    def embed(self, upper: int, lower: int, x: Sequence[int]) -> Vector:
        if upper == lower:
            return tuple(x)
        m = self._emb[(upper, lower)]
        if not x:
            return tuple([0] * self.rank(upper))
        return matvec(m, x)

    def preimage(self, upper: int, lower: int, x: Sequence[int]) -> Vector | None:
        """Integral preimage of ``x`` under the lifted face map, if any."""
        key = (upper, lower)
        inv = self._inv.get(key)
        if inv is None:
            inv = LeftInverse(self._emb[key], self.rank(lower))
            self._inv[key] = inv
        return inv.solve(x)

    def generator_sum(self, s: int) -> Vector:
        """Sum of the generators of M_s; it lies in the relative interior."""
        if s not in self._sums:
            gens = self.semigroups[s].generators
            self._sums[s] = tuple(map(sum, zip(*gens))) if gens else tuple([0] * self.rank(s))
        return self._sums[s]

    def face_data(self, upper: int, lower: int) -> FaceData:
        key = (upper, lower)
        fd = self._faces.get(key)
        if fd is None:
            M = self.semigroups[upper]
            img = [self.embed(upper, lower, g) for g in self.semigroups[lower].generators]
            star = tuple(n for n in M.facets if all(dot(n, v) == 0 for v in img))
            other = tuple(n for n in M.facets if n not in star)
            func = tuple(map(sum, zip(*star))) if star else tuple([0] * M.rank)
            off = tuple(g for g in M.generators if dot(func, g) > 0)
            fd = FaceData(
                upper, lower, self.embed(upper, lower, self.generator_sum(lower)), star, func, off,
                LeftInverse(self._emb[key] if upper != lower else _identity(M.rank), self.rank(lower)),
                M.is_normal(),
            )
            fd._other_normals = other
            self._faces[key] = fd
        return fd

    def is_cone_wise_normal(self) -> bool:
        return all(M.is_normal() for M in self.semigroups)

    def normalization(self) -> "MonoidalComplex":
        """Same complex with every semigroup replaced by its saturation."""
        return MonoidalComplex(self.complex, [M.hilbert_basis() for M in self.semigroups], self._emb)

    def to_raw(self) -> dict:
        cx = self.complex
        raw = cx.to_raw()
        raw["semigroups"] = {
            cx.cells[s].id: {"generators": [list(g) for g in M.generators]}
            for s, M in enumerate(self.semigroups)
        }
        raw["embeddings"] = [
            {"lower": cx.cells[t].id, "upper": cx.cells[s].id, "matrix": [list(r) for r in self._emb[(s, t)]]}
            for s in range(len(cx))
            for t in cx.covers_down[s]
            if t != cx.empty
        ]
        return raw


def _identity(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _check_ints(values, where):
    for v in values:
        if abs(v) >= INT64:
            raise CoordinateOverflow("coordinate does not fit in 64 bits", where)


def _max_minor_gcd(gens: Sequence[Vector], r: int) -> int:
    g = 0
    for sub in combinations(gens, r):
        g = gcd(g, linalg.det([list(v) for v in sub]))
        if g == 1:
            return 1
    return g


def validate_monoidal(
    complex: CellComplex,
    semigroups: Mapping[str, Sequence[Sequence[int]]],
    embeddings: Iterable[tuple[str, str, Sequence[Sequence[int]]]],
) -> MonoidalComplex:
    """Check the monoidal-complex axioms and return the validated object.

    ``semigroups`` maps cell id to a generator list (the empty cell may be
    omitted); ``embeddings`` yields ``(lower, upper, matrix)`` with ``matrix``
    of shape (dim upper + 1) x (dim lower + 1). Covering pairs must be
    present (maps out of the empty cell are implicit); longer pairs are
    composed and any explicitly given ones must agree with the composite.
    """
    cx = complex
    ids = [c.id for c in cx.cells]
    sgs = []
    for c in cx.cells:
        r = c.dim + 1
        gens = semigroups.get(c.id)
        if gens is None:
            if c.index != cx.empty:
                raise ValidationError("cell has no semigroup", [c.id])
            gens = []
        gens = [tuple(int(x) for x in g) for g in gens]
        for g in gens:
            _check_ints(g, [c.id])
            if len(g) != r:
                raise RankMismatch(f"generator {list(g)} has length {len(g)}, expected {r}", [c.id])
        M = AffineSemigroup(gens, r)
        if r > 0 and (not M.generators or _max_minor_gcd(M.generators, r) != 1):
            raise GroupNotSaturated("generators do not generate the full lattice", [c.id])
        if not M.is_pointed():
            raise NotPointed("cone contains a line", [c.id])
        sgs.append(M)

    given: dict[tuple[int, int], tuple] = {}
    for lo, hi, mat in embeddings:
        s, t = cx.cell(str(hi)), cx.cell(str(lo))
        if not cx.leq(t, s) or s == t:
            raise ValidationError("embedding between non-comparable cells", [ids[t], ids[s]])
        rows, cols = cx.dim_of(s) + 1, cx.dim_of(t) + 1
        m = tuple(tuple(int(x) for x in row) for row in mat)
        if cols == 0:
            m = tuple(() for _ in range(rows))
        if len(m) != rows or any(len(row) != cols for row in m):
            raise RankMismatch(f"embedding matrix must be {rows}x{cols}", [ids[t], ids[s]])
        for row in m:
            _check_ints(row, [ids[t], ids[s]])
        if cols and linalg.rank([list(r) for r in m]) != cols:
            raise FaceConditionFails("embedding is not injective", [ids[t], ids[s]])
        given[(s, t)] = m

    emb: dict[tuple[int, int], tuple] = {}
    order = sorted(range(len(cx)), key=cx.sort_key)
    for s in order:
        rows = cx.dim_of(s) + 1
        emb[(s, s)] = _identity(rows)
        emb[(s, cx.empty)] = tuple(() for _ in range(rows))
        for t in cx.covers_down[s]:
            if t == cx.empty:
                continue
            if (s, t) not in given:
                raise ValidationError("covering pair has no embedding", [ids[t], ids[s]])
            emb[(s, t)] = given[(s, t)]
        below = sorted((u for u in cx.le[s] if u != s and u not in cx.covers_down[s] and u != cx.empty),
                       key=cx.sort_key, reverse=True)
        for u in below:
            found = None
            for t in cx.covers_down[s]:
                if u in cx.le[t]:
                    comp = linalg.matmul(emb[(s, t)], emb[(t, u)], cx.dim_of(t) + 1)
                    if found is None:
                        found = comp
                    elif comp != found:
                        raise FunctorialityFails("composites along two chains differ", [ids[s], ids[t], ids[u]])
            if (s, u) in given and given[(s, u)] != found:
                raise FunctorialityFails("given embedding differs from the composite", [ids[s], ids[u]])
            emb[(s, u)] = found

    mc = MonoidalComplex(cx, sgs, emb)

    for s in order:
        Ms = sgs[s]
        face_owner: dict[frozenset, int] = {}
        for t in cx.le[s]:
            Mt = sgs[t]
            img_gens = [mc.embed(s, t, g) for g in Mt.generators]
            for g, v in zip(Mt.generators, img_gens):
                if not Ms.contains(v):
                    raise FaceConditionFails(f"image of generator {list(g)} is not in the upper semigroup",
                                             [ids[t], ids[s]])
            img_rays = frozenset(primitive(mc.embed(s, t, v)) for v in Mt.extreme_rays)
            face_rays, cut = Ms.minimal_face(img_gens)
            if img_rays != face_rays:
                raise FaceConditionFails("image of the lower cone is not a face", [ids[t], ids[s]])
            for g in Ms.generators:
                if all(dot(n, g) == 0 for n in cut):
                    pre = mc.preimage(s, t, g)
                    if pre is None or not Mt.contains(pre):
                        raise FaceConditionFails(
                            f"generator {list(g)} on the face has no preimage in the lower semigroup",
                            [ids[t], ids[s]])
            if face_rays in face_owner:
                raise FaceWithoutCell("two cells map onto the same face",
                                      [ids[face_owner[face_rays]], ids[t], ids[s]])
            face_owner[face_rays] = t
        for f in Ms.faces():
            if f not in face_owner:
                raise FaceWithoutCell(f"face with rays {sorted(map(list, f))} has no cell", [ids[s]])
    return mc
