"""Degree arithmetic on the colimit sets |M| ⊂ Z|M| and the toric face ring k[M].

A degree element is an equivalence class of pairs ``(cell, coords)`` under
``(lower, x) ~ (upper, ĩ(x))``. Classes are computed exactly by closing a
representative under face maps and integral preimages; the canonical
representative is the least pair by (cell dimension, cell index, coords).
Descending along facets alone is not enough: on cone complexes that are
not fans a class can have incomparable minimal cells (two opposite edges
of a square cone span planes meeting in a line).

When the gluing has monodromy a class may meet one lattice ``Z M_σ`` in
several points (on the Moebius strip ``z - w`` comes back as ``w - z``
after one turn). Classes of elements of |M| never do. Localizations see
the finer local degrees returned by :meth:`ToricFaceRing.star_components`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import AmbiguousColimit, NotInM
from .semigroup import MonoidalComplex


@dataclass(frozen=True, order=True)
class DegreeElem:
    """Canonical representative of an element of Z|M|."""

    dim: int
    cell: int
    coords: tuple

    def to_json(self, complex) -> dict:
        return {"cell": complex.cells[self.cell].id, "coords": list(self.coords)}


_MAX_CLASS = 100_000


def _norm(x) -> int:
    return max((abs(v) for v in x), default=0)


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


class ToricFaceRing:
    """The toric face ring of a validated monoidal complex.

    All degree computations are memoized; every method is a pure function
    of the (immutable) monoidal complex.
    """

    def __init__(self, mc: MonoidalComplex, labels: Mapping[str, tuple] | None = None):
        self.mc = mc
        self.complex = mc.complex
        self._canon: dict[tuple[int, tuple], DegreeElem] = {}
        self._reps: dict[DegreeElem, dict[int, tuple]] = {}
        self._supp: dict[DegreeElem, int | None] = {}
        self._prod: dict[tuple[DegreeElem, DegreeElem], DegreeElem | None] = {}
        self._star: dict[tuple[DegreeElem, int], tuple] = {}
        self.labels = dict(labels or {})
        self.zero = self.canonicalize(self.complex.empty, ())

    # ---- colimit classes -------------------------------------------------

    def degree(self, cell, coords: Sequence[int]) -> DegreeElem:
        return self.canonicalize(self.complex.cell(cell), coords)

    def canonicalize(self, cell: int, coords: Sequence[int]) -> DegreeElem:
        """Canonical representative of the class of ``(cell, coords)``."""
        key = (cell, tuple(int(v) for v in coords))
        hit = self._canon.get(key)
        if hit is not None:
            return hit
        if len(key[1]) != self.mc.rank(cell):
            raise ValueError(f"coordinates {list(coords)} have wrong length for cell "
                             f"{self.complex.cells[cell].id}")
        pairs = self._close(*key)
        cx = self.complex
        c, x = min(pairs, key=lambda p: (cx.dim_of(p[0]), p[0], p[1]))
        elem = DegreeElem(cx.dim_of(c), c, x)
        reps: dict[int, list] = {}
        for s, y in sorted(pairs):
            reps.setdefault(s, []).append(y)
            self._canon[(s, y)] = elem
        self._reps[elem] = {s: tuple(ys) for s, ys in reps.items()}
        return elem

    def _close(self, cell: int, coords: tuple) -> set[tuple[int, tuple]]:
        cx, mc = self.complex, self.mc
        seen = {(cell, coords)}
        stack = [(cell, coords)]
        while stack:
            s, x = stack.pop()
            moves = [(u, mc.embed(u, s, x)) for u in cx.covers_up[s]]
            for t in cx.covers_down[s]:
                y = mc.preimage(s, t, x)
                if y is not None:
                    moves.append((t, y))
            for p in moves:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
            if len(seen) > _MAX_CLASS:
                raise AmbiguousColimit(f"class of {cx.cells[cell].id}:{list(coords)} is unbounded")
        return seen

    def reps(self, a: DegreeElem) -> dict[int, tuple]:
        """All representatives of ``a``: cell index -> tuple of coordinate vectors.

        A cell carries more than one representative only when the gluing
        has monodromy (the Moebius fixture); elements of |M| never do.
        """
        if a not in self._reps:
            self.canonicalize(a.cell, a.coords)
        return self._reps[a]

    def rep(self, a: DegreeElem, s: int) -> tuple | None:
        """The representative of ``a`` in cell ``s`` (None if absent)."""
        ys = self.reps(a).get(s)
        if not ys:
            return None
        if len(ys) > 1:
            raise AmbiguousColimit(f"{a} has {len(ys)} representatives in {self.complex.cells[s].id}")
        return ys[0]

    def pairs(self, a: DegreeElem) -> list[tuple[int, tuple]]:
        return [(s, y) for s, ys in sorted(self.reps(a).items()) for y in ys]

    def is_tame(self, a: DegreeElem) -> bool:
        """Every cell holds at most one representative."""
        return all(len(ys) == 1 for ys in self.reps(a).values())

    def star_components(self, a: DegreeElem, s: int) -> tuple[tuple, ...]:
        """Representatives of ``a`` in cells above ``s``, split into face-map components.

        Each component is a sorted tuple of ``(cell, coords)`` pairs; these
        are the local degrees seen by the localizations at ``s``. Sorted by
        least pair.
        """
        key = (a, s)
        hit = self._star.get(key)
        if hit is not None:
            return hit
        cx, mc = self.complex, self.mc
        nodes = [(t, y) for t, y in self.pairs(a) if cx.leq(s, t)]
        parent = {p: p for p in nodes}

        def find(p):
            while parent[p] != p:
                parent[p] = parent[parent[p]]
                p = parent[p]
            return p

        for t, y in nodes:
            for u in cx.covers_up[t]:
                q = (u, mc.embed(u, t, y))
                ra, rb = find((t, y)), find(q)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        groups: dict = {}
        for p in nodes:
            groups.setdefault(find(p), []).append(p)
        out = tuple(sorted(tuple(sorted(g)) for g in groups.values()))
        self._star[key] = out
        return out

    def component_of(self, a: DegreeElem, s: int, pair: tuple[int, tuple]) -> tuple | None:
        for comp in self.star_components(a, s):
            if pair in comp:
                return comp
        return None

    def descend(self, cell: int, coords: Sequence[int], rng: random.Random | None = None) -> tuple[int, tuple]:
        """Walk down along facets admitting integral preimages until stuck.

        The facet is chosen by ``rng`` (first admissible if None); the end
        point is a minimal representative in the same class.
        """
        x = tuple(coords)
        while True:
            opts = []
            for t in self.complex.covers_down[cell]:
                y = self.mc.preimage(cell, t, x)
                if y is not None:
                    opts.append((t, y))
            if not opts:
                return cell, x
            cell, x = rng.choice(opts) if rng else opts[0]

    def negate(self, a: DegreeElem) -> DegreeElem:
        return self.canonicalize(a.cell, tuple(-v for v in a.coords))

    def norm(self, a: DegreeElem) -> int:
        """Least sup-norm over all representatives."""
        return min(_norm(x) for _, x in self.pairs(a))

    def box_degrees(self, box: int) -> list[DegreeElem]:
        """All classes having a representative of sup-norm at most ``box``."""
        out = set()
        for c in self.complex.cells:
            for x in product(range(-box, box + 1), repeat=c.dim + 1):
                out.add(self.canonicalize(c.index, x))
        return sorted(out)

    def box_monomials(self, box: int) -> list[DegreeElem]:
        """Elements of |M| having a representative of sup-norm at most ``box``."""
        out = set()
        for c in self.complex.cells:
            M = self.mc.semigroups[c.index]
            for x in product(range(-box, box + 1), repeat=c.dim + 1):
                if M.contains(x):
                    out.add(self.canonicalize(c.index, x))
        return sorted(out)

    # ---- partial addition -----------------------------------------------

    def common_cells(self, a: DegreeElem, b: DegreeElem) -> list[int]:
        ra, rb = self.reps(a), self.reps(b)
        return [s for s in ra if s in rb]

    def _combine(self, a: DegreeElem, b: DegreeElem, sign: int) -> DegreeElem | None:
        cx = self.complex
        common = self.common_cells(a, b)
        if not common:
            return None
        minimal = [s for s in common if not any(t != s and cx.leq(t, s) for t in common)]
        ra, rb = self.reps(a), self.reps(b)
        results = {
            self.canonicalize(s, tuple(x + sign * y for x, y in zip(xa, xb)))
            for s in minimal for xa in ra[s] for xb in rb[s]
        }
        if len(results) != 1:
            raise AmbiguousColimit(f"{'sum' if sign > 0 else 'difference'} of {a} and {b} "
                                   "is not well defined")
        return results.pop()

    def add_degrees(self, a: DegreeElem, b: DegreeElem) -> DegreeElem | None:
        """``a + b`` computed in a minimal common cell, or None if it does not exist."""
        return self._combine(a, b, 1)

    def sub_degrees(self, a: DegreeElem, b: DegreeElem) -> DegreeElem | None:
        return self._combine(a, b, -1)

    def scale(self, a: DegreeElem, n: int) -> DegreeElem:
        return self.canonicalize(a.cell, tuple(n * v for v in a.coords))

    # ---- the monoid part |M| --------------------------------------------

    def cells_containing(self, a: DegreeElem) -> list[int]:
        """Cells whose semigroup contains (the representative of) ``a``."""
        sgs = self.mc.semigroups
        return sorted({s for s, x in self.pairs(a) if sgs[s].contains(x)})

    def in_M(self, a: DegreeElem) -> bool:
        return self.supp_or_none(a) is not None

    def supp_or_none(self, a: DegreeElem) -> int | None:
        if a not in self._supp:
            cells = self.cells_containing(a)
            if not cells:
                self._supp[a] = None
            else:
                cx = self.complex
                if not self.is_tame(a):
                    raise AmbiguousColimit(f"{a} lies in |M| but has several representatives in one cell")
                low = min(cells, key=cx.sort_key)
                if not all(cx.leq(low, s) for s in cells):
                    raise AmbiguousColimit(f"{a} has no unique minimal supporting cell")
                self._supp[a] = low
        return self._supp[a]

    def supp(self, a: DegreeElem) -> int:
        """The unique minimal cell whose semigroup contains ``a``."""
        s = self.supp_or_none(a)
        if s is None:
            raise NotInM(f"{a} is not in |M|")
        return s

    def in_cell(self, a: DegreeElem, s: int) -> bool:
        """``a ∈ M_s``."""
        return any(self.mc.semigroups[s].contains(x) for x in self.reps(a).get(s, ()))

    def monomial_product(self, a: DegreeElem, b: DegreeElem) -> DegreeElem | None:
        """Degree of ``t^a · t^b`` for ``a, b ∈ |M|``; None when the product is 0."""
        key = (a, b) if a <= b else (b, a)
        if key in self._prod:
            return self._prod[key]
        res = self.add_degrees(a, b)
        if res is not None and not self.in_M(res):
            raise AmbiguousColimit(f"sum of monomials {a} and {b} left |M|")
        self._prod[key] = res
        return res

    def generator_degree(self, s: int) -> DegreeElem:
        """Degree of the generator sum of M_s (its support is ``s``)."""
        return self.canonicalize(s, self.mc.generator_sum(s))

    # ---- ring structure --------------------------------------------------

    @property
    def dim(self) -> int:
        """Krull dimension: the largest ``dim σ + 1`` over maximal cells."""
        return max(self.complex.dim_of(s) + 1 for s in self.complex.maximal)

    def monomial(self, a: DegreeElem, coeff=1) -> "RingElem":
        if not self.in_M(a):
            raise NotInM(f"{a} is not in |M|")
        return RingElem(self, {a: Fraction(coeff)} if coeff else {})

    def one(self) -> "RingElem":
        return self.monomial(self.zero)

    def multiply(self, x: "RingElem", y: "RingElem") -> "RingElem":
        out: dict[DegreeElem, Fraction] = {}
        for a, ca in x.terms.items():
            for b, cb in y.terms.items():
                d = self.monomial_product(a, b)
                if d is None:
                    continue
                v = out.get(d, 0) + ca * cb
                if v:
                    out[d] = v
                else:
                    out.pop(d, None)
        return RingElem(self, out)

    def variables(self) -> list[DegreeElem]:
        """Minimal monomial generators of the maximal monomial ideal."""
        out = set()
        for s in self.complex.maximal:
            for g in self.mc.semigroups[s].minimal_generators():
                out.add(self.canonicalize(s, g))
        return sorted(out)

    def labelled_variables(self) -> list[tuple[str, DegreeElem]]:
        """Variables with names: fixture labels when given, else ``t0, t1, ...``."""
        vs = self.variables()
        if not self.labels:
            return [(f"t{i}", v) for i, v in enumerate(vs)]
        named = [(name, self.degree(cell, coords)) for name, (cell, coords) in self.labels.items()]
        if sorted(d for _, d in named) != vs:
            raise ValueError("labels do not match the minimal generators of the ring")
        return named

    def presentation(self, degree_bound: int = 3) -> "Presentation":
        return _presentation(self, degree_bound)

    # ---- monomial primes -------------------------------------------------

    def monomial_prime(self, s) -> "MonomialIdeal":
        """``p_s``: generated by the variables outside M_s."""
        s = self.complex.cell(s)
        return MonomialIdeal(self, tuple(v for v in self.variables() if not self.in_cell(v, s)), prime_of=s)

    def quotient_ring(self, s) -> "QuotientRing":
        return QuotientRing(self, self.complex.cell(s))

    def maximal_ideal(self) -> "MonomialIdeal":
        return self.monomial_prime(self.complex.empty)

    def minimal_primes(self) -> list["MonomialIdeal"]:
        """One prime per maximal cell; every variable lies outside at least one... and inside one."""
        primes = [self.monomial_prime(s) for s in self.complex.maximal]
        for v in self.variables():
            # a monomial in every minimal prime would be nilpotent
            assert any(self.in_cell(v, s) for s in self.complex.maximal)
        return primes


class RingElem:
    """Finite k-linear combination of monomials ``t^a`` with ``a ∈ |M|``."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: ToricFaceRing, terms: Mapping[DegreeElem, Fraction]):
        self.ring = ring
        self.terms = {a: Fraction(c) for a, c in terms.items() if c}

    def __add__(self, other: "RingElem") -> "RingElem":
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return RingElem(self.ring, out)

    def __neg__(self) -> "RingElem":
        return RingElem(self.ring, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "RingElem") -> "RingElem":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RingElem):
            return self.ring.multiply(self, other)
        return RingElem(self.ring, {a: c * other for a, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, RingElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        cx = self.ring.complex
        return " + ".join(f"{c}*t^{cx.cells[a.cell].id}{list(a.coords)}" for a, c in sorted(self.terms.items()))


@dataclass(frozen=True)
class MonomialIdeal:
    ring: ToricFaceRing
    generators: tuple
    prime_of: int | None = None

    def contains(self, a: DegreeElem) -> bool:
        """Whether ``t^a`` lies in the ideal (some generator divides it)."""
        R = self.ring
        if not R.in_M(a):
            return False
        sa = R.supp(a)
        for g in self.generators:
            if not R.complex.leq(R.supp(g), sa):
                continue
            rest = R.sub_degrees(a, g)
            if rest is not None and R.in_M(rest) and R.monomial_product(rest, g) == a:
                return True
        return False

    def __contains__(self, a) -> bool:
        return self.contains(a)


@dataclass(frozen=True)
class QuotientRing:
    """The affine semigroup ring ``k[σ] = R / p_σ`` seen inside R's grading."""

    ring: ToricFaceRing
    cell: int

    def contains(self, a: DegreeElem) -> bool:
        return self.ring.in_cell(a, self.cell)

    def surjection(self, lower: int, a: DegreeElem) -> int:
        """Coefficient of ``f_{lower,cell}`` on ``t^a``: 1 if it survives in ``k[lower]``."""
        if not self.ring.complex.leq(lower, self.cell):
            raise ValueError("surjections go to lower cells only")
        return int(self.contains(a) and self.ring.in_cell(a, lower))


# ---- presentations ---------------------------------------------------------

@dataclass
class Presentation:
    variables: list[str]
    degrees: list[DegreeElem]
    relations: list[dict[tuple, Fraction]]
    degree_bound: int
    bound_reached: bool

    def relation_strings(self) -> list[str]:
        return [format_polynomial(r, self.variables) for r in self.relations]

    def to_json(self, complex) -> dict:
        return {
            "schema": 1,
            "variables": [
                {"name": n, "degree": d.to_json(complex)} for n, d in zip(self.variables, self.degrees)
            ],
            "relations": self.relation_strings(),
            "degree_bound": self.degree_bound,
            "bound_reached": self.bound_reached,
        }


def _mono_key(e: tuple) -> tuple:
    # graded lexicographic: larger keys are larger monomials
    return (sum(e), e)


def format_monomial(e: tuple, names: Sequence[str]) -> str:
    parts = []
    for n, k in zip(names, e):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return "*".join(parts) if parts else "1"


def format_polynomial(p: Mapping[tuple, Fraction], names: Sequence[str]) -> str:
    out = []
    for i, e in enumerate(sorted(p, key=_mono_key, reverse=True)):
        c = p[e]
        mono = format_monomial(e, names)
        mag = abs(c)
        body = mono if mag == 1 and mono != "1" else (f"{mag}" if mono == "1" else f"{mag}*{mono}")
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out) if out else "0"


def _monomials_up_to(nvars: int, bound: int) -> list[tuple]:
    out = []

    def rec(prefix, left, i):
        if i == nvars:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k, i + 1)

    rec([], bound, 0)
    return out


def _presentation(R: ToricFaceRing, bound: int) -> Presentation:
    named = R.labelled_variables()
    names = [n for n, _ in named]
    vdeg = [d for _, d in named]
    n = len(vdeg)
    monos = sorted(_monomials_up_to(n, bound), key=_mono_key)
    deg: dict[tuple, DegreeElem | None] = {}
    for e in monos:
        if not any(e):
            deg[e] = R.zero
            continue
        i = max(k for k in range(n) if e[k])
        prev = e[:i] + (e[i] - 1,) + e[i + 1:]
        d = deg[prev]
        deg[e] = None if d is None else R.monomial_product(d, vdeg[i])

    # kernel of k[x] -> R restricted to words of length <= bound
    groups: dict[DegreeElem, list[tuple]] = {}
    zero_words = []
    for e in monos:
        if deg[e] is None:
            zero_words.append(e)
        else:
            groups.setdefault(deg[e], []).append(e)
    kernel: list[dict[tuple, Fraction]] = [{e: Fraction(1)} for e in zero_words]
    for ws in groups.values():
        for w in ws[1:]:
            kernel.append({ws[0]: Fraction(1), w: Fraction(-1)})

    def length(p):
        return max(sum(e) for e in p)

    gens: list[dict[tuple, Fraction]] = []
    found_at_bound = False
    for d in range(1, bound + 1):
        cols = sorted((e for e in monos if sum(e) <= d), key=_mono_key, reverse=True)
        col_of = {e: j for j, e in enumerate(cols)}
        ideal_rows = []
        for g in gens:
            for m in monos:
                if sum(m) + length(g) <= d:
                    row = [Fraction(0)] * len(cols)
                    for e, c in g.items():
                        row[col_of[tuple(a + b for a, b in zip(e, m))]] += c
                    ideal_rows.append(row)
        red, piv = linalg.rref(ideal_rows)
        residuals = []
        for k in kernel:
            if length(k) > d:
                continue
            row = [Fraction(0)] * len(cols)
            for e, c in k.items():
                row[col_of[e]] += c
            for prow, pc in zip(red, piv):
                f = row[pc]
                if f:
                    row = [x - f * y for x, y in zip(row, prow)]
            if any(row):
                residuals.append(row)
        new, _ = linalg.rref(residuals)
        for row in new:
            gens.append({cols[j]: c for j, c in enumerate(row) if c})
            if d == bound:
                found_at_bound = True
    return Presentation(names, vdeg, gens, bound, found_at_bound)
