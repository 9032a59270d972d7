"""Monomial localizations ``T_σ^{-1}R`` and their graded Matlis duals ``E_σ(M)``.

Every basis vector of ``T_σ^{-1}R`` is ``t^b / t^c`` for a local degree:
a component of the representatives of a class in cells above σ (see
:meth:`~torface.toricring.ToricFaceRing.star_components`). For fans a
class has at most one such component per cell and the local degree is
just the class.

Write ``s`` for the generator sum of ``M_σ``. A local degree with
representative ``x`` in a maximal cell ``τ ≥ σ`` is a degree of
``T_σ^{-1}R`` iff ``x + n·s ∈ M_τ`` for some ``n ≥ 0``, i.e.
``x ∈ M_τ + Z·M_σ``. This needs ``x`` in the star cone ``C_τ + R·C_σ``;
for normal ``M_τ`` that is the whole answer, otherwise shifts are
searched up to a cap and past it
:meth:`~torface.semigroup.AffineSemigroup.quotient_member` decides
exactly. Degrees of ``E_σ(M)`` are the negatives of those of
``T_σ^{-1}R``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import AmbiguousColimit, UndecidedAtCap
from .toricring import DegreeElem, ToricFaceRing

DEFAULT_CAP = 64

Component = tuple  # sorted tuple of (cell, coords) pairs


def negate_component(comp: Component) -> Component:
    return tuple(sorted((s, tuple(-v for v in x)) for s, x in comp))


@dataclass(frozen=True)
class MonomialFraction:
    """``t^num / t^den`` in ``T_site^{-1}R`` with ``den ∈ M_site``."""

    num: DegreeElem
    den: DegreeElem
    site: int


@dataclass(frozen=True, order=True)
class DualBasisElem:
    """The basis vector ``t_site^degree`` of ``E_site(M)``.

    ``component`` selects the local degree when the class has several
    above ``site``; None means the unique one.
    """

    site: int
    degree: DegreeElem
    component: Component | None = None


class Localizer:
    """Degree-set predicates, fraction arithmetic and the maps ``g_{τ,σ}``.

    Parameters
    ----------
    ring : ToricFaceRing
    cap : int
        Number of shifts ``n`` examined past the cone bound before falling
        back to the exact quotient test.
    """

    def __init__(self, ring: ToricFaceRing, cap: int = DEFAULT_CAP):
        self.ring = ring
        self.mc = ring.mc
        self.complex = ring.complex
        self.cap = cap
        self._slots: dict[tuple[DegreeElem, int, bool], tuple] = {}
        self._sums: dict[int, DegreeElem] = {}
        self._shift: dict[tuple, int | None] = {}

    # ---- degree sets -----------------------------------------------------

    def site_sum(self, s: int) -> DegreeElem:
        """``s_σ``, the generator sum of ``M_σ`` as an element of |M|."""
        if s not in self._sums:
            self._sums[s] = self.ring.generator_degree(s)
        return self._sums[s]

    def cell_shift(self, c: tuple, upper: int, lower: int) -> int | None:
        """Least ``n`` with ``c + n·s_lower ∈ M_upper`` (coordinates of ``upper``), or None.

        ``lower ≤ upper``. None means ``c ∉ M_upper − M_lower``.
        """
        key = (c, upper, lower)
        if key in self._shift:
            return self._shift[key]
        fd = self.mc.face_data(upper, lower)
        n0 = fd.min_shift(c)
        res = n0
        if n0 is not None and not fd.normal_upper:
            res = self._search_shift(c, fd, n0)
        self._shift[key] = res
        return res

    def _search_shift(self, c, fd, n0) -> int | None:
        M = self.mc.semigroups[fd.upper]

        def shifted(n):
            return tuple(x + n * y for x, y in zip(c, fd.s))

        for n in range(n0, n0 + self.cap + 1):
            if M.contains(shifted(n)):
                return n
        if not M.quotient_member(c, fd):
            return None
        # c is in M + Z·M_lower, so some shift lands in M; keep looking
        for n in range(n0 + self.cap + 1, n0 + 64 * (self.cap + 1)):
            if M.contains(shifted(n)):
                return n
        raise UndecidedAtCap(c, self.complex.cells[fd.upper].id)

    def _component_witness(self, comp: Component, s: int, sign: int):
        """``(τ, x, n)`` for a maximal cell of the component, or None.

        All maximal cells of a component give the same verdict (the face
        condition); this is asserted.
        """
        cx = self.complex
        found, verdicts = None, set()
        for t, x in comp:
            if t not in cx.maximal:
                continue
            y = tuple(sign * v for v in x)
            n = self.cell_shift(y, t, s)
            verdicts.add(n is not None)
            if n is not None and found is None:
                found = (t, x, n)
        assert len(verdicts) <= 1, "maximal cells of one local degree disagree"
        return found

    def _slots_for(self, a: DegreeElem, s: int, sign: int) -> tuple:
        key = (a, s, sign > 0)
        hit = self._slots.get(key)
        if hit is None:
            hit = tuple(
                (comp, w)
                for comp in self.ring.star_components(a, s)
                if (w := self._component_witness(comp, s, sign)) is not None
            )
            self._slots[key] = hit
        return hit

    def loc_slots(self, a: DegreeElem, s) -> tuple[Component, ...]:
        """Local degrees of class ``a`` that are degrees of ``T_σ^{-1}R``."""
        return tuple(c for c, _ in self._slots_for(a, self.complex.cell(s), 1))

    def dual_slots(self, a: DegreeElem, s) -> tuple[Component, ...]:
        """Local degrees of class ``a`` that are degrees of ``E_σ(M)``."""
        return tuple(c for c, _ in self._slots_for(a, self.complex.cell(s), -1))

    def loc_member(self, a: DegreeElem, s) -> bool:
        """``a ∈ M − M_σ``: the degree set of ``T_σ^{-1}R``."""
        return bool(self._slots_for(a, self.complex.cell(s), 1))

    def dual_member(self, a: DegreeElem, s) -> bool:
        """``a ∈ M_σ − M``: the degree set of ``E_σ(M)``."""
        return bool(self._slots_for(a, self.complex.cell(s), -1))

    def loc_witness(self, a: DegreeElem, s, comp: Component | None = None) -> tuple[int, int] | None:
        """``(τ, n)`` with ``a + n·s_σ ∈ M_τ``, τ maximal above σ; None if ``a ∉ M − M_σ``."""
        w = self._witness(a, self.complex.cell(s), comp)
        return None if w is None else (w[0], w[2])

    def _witness(self, a, s, comp):
        slots = self._slots_for(a, s, 1)
        if comp is None:
            return slots[0][1] if slots else None
        for c, w in slots:
            if c == comp:
                return w
        return None

    # ---- fractions -------------------------------------------------------

    def fraction(self, a: DegreeElem, s, comp: Component | None = None, n_extra: int = 0) -> MonomialFraction:
        """A fraction representing the basis vector ``t^a`` of ``T_σ^{-1}R``."""
        s = self.complex.cell(s)
        w = self._witness(a, s, comp)
        if w is None:
            raise ValueError(f"{a} is not a degree of the localization at {self.complex.cells[s].id}")
        t, x, n = w
        n += n_extra
        fd = self.mc.face_data(t, s)
        num = self.ring.canonicalize(t, tuple(u + n * v for u, v in zip(x, fd.s)))
        den = self.ring.scale(self.site_sum(s), n)
        return MonomialFraction(num, den, s)

    def fraction_is_zero(self, x: MonomialFraction) -> bool:
        # If t^num·t^d = 0 for some d ∈ M_σ then already t^num·t^{s_σ} = 0:
        # a cell holding num and s_σ contains σ, hence all of M_σ.
        return self.ring.monomial_product(x.num, self.site_sum(x.site)) is None

    def equal_fractions(self, x: MonomialFraction, y: MonomialFraction) -> bool:
        """``x = y`` in the localization: ``t^s (t^{b} t^{c'} − t^{b'} t^{c}) = 0``."""
        if x.site != y.site:
            raise ValueError("fractions live at different sites")
        zx, zy = self.fraction_is_zero(x), self.fraction_is_zero(y)
        if zx or zy:
            return zx and zy
        R, s = self.ring, self.site_sum(x.site)

        def cross(b, c):
            p = R.monomial_product(b, c)
            return None if p is None else R.monomial_product(p, s)

        return cross(x.num, y.den) == cross(y.num, x.den)

    def at_site(self, x: MonomialFraction, t: int) -> MonomialFraction:
        """Image under ``g_{t,σ}``: the same fraction read in ``T_t^{-1}R``."""
        if not self.complex.leq(x.site, t):
            raise ValueError("localization maps go to larger cells")
        return MonomialFraction(x.num, x.den, t)

    def fraction_degree(self, x: MonomialFraction) -> tuple[DegreeElem, Component] | None:
        """Class and local degree of a nonzero fraction; None for zero."""
        if self.fraction_is_zero(x):
            return None
        R, cx = self.ring, self.complex
        mu = R.supp(x.num)
        above = [t for t in cx.ge[mu] if cx.leq(x.site, t)]
        t = min(above, key=cx.sort_key)
        assert all(cx.leq(t, u) for u in above), "no least cell above numerator support and site"
        b = R.rep(x.num, t)
        c = R.rep(x.den, t)
        pair = (t, tuple(u - v for u, v in zip(b, c)))
        a = R.canonicalize(*pair)
        return a, R.component_of(a, x.site, pair)

    def image_component(self, a: DegreeElem, s: int, comp: Component, t: int) -> Component | None:
        """Local degree hit by ``g_{t,s}`` from the basis vector ``(a, comp)`` at ``s``."""
        x = self.fraction(a, s, comp)
        img = self.fraction_degree(self.at_site(x, t))
        y = self.fraction(a, s, comp, n_extra=1)
        assert self.equal_fractions(x, y)
        assert img == self.fraction_degree(self.at_site(y, t)), "localization map depends on the fraction"
        if img is None:
            return None
        assert img[0] == a
        return img[1]

    def loc_map_coeff(self, a: DegreeElem, s, t) -> int:
        """Coefficient of ``g_{τ,σ}`` in degree ``a``: 1 if ``t^a`` survives, else 0."""
        s, t = self.complex.cell(s), self.complex.cell(t)
        slots = self.loc_slots(a, s)
        if not slots:
            raise ValueError("degree is not present at the source site")
        if len(slots) > 1:
            raise AmbiguousColimit(f"{a} has several local degrees at {self.complex.cells[s].id}")
        if s == t:
            return 1
        return int(self.image_component(a, s, slots[0], t) is not None)

    # ---- the dual modules ------------------------------------------------

    def _dual_component(self, x: DualBasisElem) -> Component:
        if x.component is not None:
            return x.component
        slots = self.dual_slots(x.degree, x.site)
        if len(slots) != 1:
            raise AmbiguousColimit(f"{x.degree} has {len(slots)} local degrees in the dual at this site")
        return slots[0]

    def e_action(self, b: DegreeElem, x: DualBasisElem) -> DualBasisElem | None:
        """``t^b · t_σ^c``: ``t_σ^{b+c}`` when ``b, c`` share a cell above σ and ``b+c ∈ M_σ − M``."""
        R = self.ring
        comp = self._dual_component(x)
        brep = R.reps(b)
        out = set()
        for t, y in comp:
            if t not in brep:
                continue
            z = tuple(u + v for u, v in zip(y, brep[t][0]))
            total = R.canonicalize(t, z)
            k = R.component_of(total, x.site, (t, z))
            if k in self.dual_slots(total, x.site):
                out.add(DualBasisElem(x.site, total, k))
        assert len(out) <= 1, "module action is not single valued"
        return out.pop() if out else None

    def hom_from_quotient(self, t, s) -> Callable[[DegreeElem], tuple]:
        """Degree predicate of ``Hom_R(k[τ], E_σ(M))``.

        Empty unless σ ≤ τ; then the degrees are ``M_σ − M_τ``, decided in
        the single cell τ. The predicate returns the matching local degrees
        (empty tuple for none).
        """
        t, s = self.complex.cell(t), self.complex.cell(s)
        if not self.complex.leq(s, t):
            return lambda a: ()

        def pred(a: DegreeElem) -> tuple:
            return tuple(
                comp
                for comp in self.ring.star_components(a, s)
                if any(u == t and self.cell_shift(tuple(-v for v in x), t, s) is not None for u, x in comp)
            )

        return pred

    def annihilated_by_prime(self, a: DegreeElem, t, s) -> tuple:
        """Direct computation: local degrees of ``E_σ(M)`` at ``a`` killed by ``p_τ``.

        ``p_τ`` is generated by the variables outside ``M_τ``, so it is
        enough to test those.
        """
        t, s = self.complex.cell(t), self.complex.cell(s)
        gens = self.ring.monomial_prime(t).generators
        return tuple(
            comp
            for comp in self.dual_slots(a, s)
            if all(self.e_action(b, DualBasisElem(s, a, comp)) is None for b in gens)
        )
