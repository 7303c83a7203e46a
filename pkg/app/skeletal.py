"""Concrete finite Gr-categories.

A skeletal Gr-category of type (Π, A, h) has the elements of Π as objects,
only automorphisms (s, u) with u in A, composition by addition in A and
tensor (s, u) ⊗ (t, v) = (st, u + s·v). Its associator at (x, y, z) is the
arrow X(YZ) -> (XY)Z with value h(x, y, z).

Strict categories (Aut_G and pullbacks of it) are reduced to a skeletal type
by choosing the smallest object of every isomorphism class as its stick.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, Hashable, List, Optional, Sequence, Tuple

from app.cohomology import (
    Cochain,
    PiModule,
    Verdict,
    class_solve,
    is_cocycle,
    module_isomorphisms,
    pullback,
    pushforward,
)
from app.config import settings
from app.errors import (
    CapExceeded,
    CoherenceMismatch,
    InvalidModule,
    NotACocycle,
    PsiNotIntoPi0,
    RealizationMismatch,
)
from app.models.abelian import AbelianHom, Element, FiniteAbelianGroup
from app.models.groups import (
    AbelianStructure,
    FiniteGroup,
    GroupHom,
    abelian_structure,
    automorphisms,
    compose_maps,
    conjugation_map,
    generating_set,
    quotient_group,
)

if TYPE_CHECKING:
    from app.functors import GrFunctorData

logger = logging.getLogger(__name__)

Arrow = Tuple[int, Element]


class SkeletalCategory:
    """Literal arrows of a skeletal Gr-category, used to evaluate coherence diagrams."""

    def __init__(self, module: PiModule, h: Cochain, eta: Optional[Dict[Tuple[int, int], Element]] = None):
        self.module = module
        self.pi = module.pi
        self.coeff = module.coeff
        self.h = h
        self.eta = eta or {}

    def identity(self, s: int) -> Arrow:
        return (s, self.coeff.zero)

    def compose(self, g: Arrow, f: Arrow) -> Arrow:
        if g[0] != f[0]:
            raise InvalidModule("arrows between different objects do not compose", witness=(g[0], f[0]))
        return (f[0], self.coeff.add(g[1], f[1]))

    def tensor(self, f: Arrow, g: Arrow) -> Arrow:
        s, u = f
        t, v = g
        return (self.pi.mul(s, t), self.coeff.add(u, self.module.act(s, v)))

    def associator(self, x: int, y: int, z: int) -> Arrow:
        """X(YZ) -> (XY)Z"""
        return (self.pi.product(x, y, z), self.h(x, y, z))

    def associator_inverse(self, x: int, y: int, z: int) -> Arrow:
        """(XY)Z -> X(YZ)"""
        return (self.pi.product(x, y, z), self.coeff.neg(self.h(x, y, z)))

    def braiding(self, x: int, y: int) -> Arrow:
        """XY -> YX"""
        return (self.pi.mul(x, y), self.eta.get((x, y), self.coeff.zero))

    def chain(self, *arrows: Arrow) -> Arrow:
        """Composite of arrows listed in the order they are applied."""
        result = arrows[0]
        for arrow in arrows[1:]:
            result = self.compose(arrow, result)
        return result

    def pentagon_holds(self, w: int, x: int, y: int, z: int) -> bool:
        a = self.associator_inverse
        i = self.identity
        left = self.chain(a(self.pi.mul(w, x), y, z), a(w, x, self.pi.mul(y, z)))
        right = self.chain(
            self.tensor(a(w, x, y), i(z)),
            a(w, self.pi.mul(x, y), z),
            self.tensor(i(w), a(x, y, z)),
        )
        return left == right

    def first_hexagon_holds(self, x: int, y: int, z: int) -> bool:
        # (XY)Z -> X(YZ) -> (YZ)X -> Y(ZX)  against  (XY)Z -> (YX)Z -> Y(XZ) -> Y(ZX)
        a = self.associator_inverse
        c = self.braiding
        i = self.identity
        pi = self.pi
        left = self.chain(a(x, y, z), c(x, pi.mul(y, z)), a(y, z, x))
        right = self.chain(self.tensor(c(x, y), i(z)), a(y, x, z), self.tensor(i(y), c(x, z)))
        return left == right

    def second_hexagon_holds(self, x: int, y: int, z: int) -> bool:
        # X(YZ) -> (XY)Z -> Z(XY) -> (ZX)Y  against  X(YZ) -> X(ZY) -> (XZ)Y -> (ZX)Y
        a = self.associator
        c = self.braiding
        i = self.identity
        pi = self.pi
        left = self.chain(a(x, y, z), c(pi.mul(x, y), z), a(z, x, y))
        right = self.chain(self.tensor(i(x), c(y, z)), a(x, z, y), self.tensor(c(x, z), i(y)))
        return left == right


def check_pentagon(module: PiModule, h: Cochain) -> Verdict:
    category = SkeletalCategory(module, h)
    elements = module.pi.elements
    for w in elements:
        for x in elements:
            for y in elements:
                for z in elements:
                    if not category.pentagon_holds(w, x, y, z):
                        return Verdict(False, (w, x, y, z))
    return Verdict(True)


@dataclass(frozen=True)
class GrType:
    """A skeletal Gr-category of type (Π, A, h)."""

    module: PiModule
    h: Cochain

    @property
    def pi(self) -> FiniteGroup:
        return self.module.pi

    @property
    def coeff(self) -> FiniteAbelianGroup:
        return self.module.coeff

    def category(self) -> SkeletalCategory:
        return SkeletalCategory(self.module, self.h)


def make_gr_type(module: PiModule, h: Cochain) -> GrType:
    if h.degree != 3 or h.module != module:
        raise InvalidModule("h must be a 3-cochain with coefficients in the given module")
    cocycle = is_cocycle(h)
    pentagon = check_pentagon(module, h)
    if bool(cocycle) != bool(pentagon):
        raise CoherenceMismatch("pentagon and cocycle condition disagree",
                                witness=cocycle.witness or pentagon.witness)
    if not pentagon:
        raise NotACocycle("h violates the pentagon axiom", witness=pentagon.witness)
    return GrType(module, h)


def dis(pi: FiniteGroup) -> GrType:
    """The discrete Gr-category Dis Π, of type (Π, 0, 0)."""
    module = PiModule.trivial(pi, FiniteAbelianGroup(()))
    return GrType(module, Cochain.zero(module, 3))


# Strict Gr-categories

@dataclass(frozen=True, order=True)
class Morphism:
    src: int
    tgt: int
    label: Hashable


class StrictGrCat:
    """A strict Gr-category whose objects form the group ``objects`` under tensor.

    Subclasses provide hom sets and the composition and tensor of morphisms.
    """

    objects: FiniteGroup

    def hom(self, a: int, b: int) -> Tuple[Hashable, ...]:
        raise NotImplementedError

    def identity(self, a: int) -> Morphism:
        raise NotImplementedError

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """g ∘ f"""
        raise NotImplementedError

    def tensor(self, f: Morphism, g: Morphism) -> Morphism:
        raise NotImplementedError

    def inverse(self, f: Morphism) -> Morphism:
        raise NotImplementedError

    def morphisms(self, a: int, b: int) -> List[Morphism]:
        return [Morphism(a, b, label) for label in self.hom(a, b)]


class AutCategory(StrictGrCat):
    """Aut_G: objects are automorphisms of G, Hom(α, β) = {c : α = μ_c ∘ β}.

    Composition d ∘ c = c·d and tensor (c: α -> α') ⊗ (d: β -> β') = c·α'(d).
    """

    def __init__(self, group: FiniteGroup, cap: Optional[int] = None):
        self.group = group
        self.data = automorphisms(group, cap)
        self.objects = self.data.aut
        self._conjugations = [conjugation_map(group, c) for c in group.elements]

    def hom(self, a: int, b: int) -> Tuple[int, ...]:
        target = self.data.maps[a]
        beta = self.data.maps[b]
        return tuple(c for c in self.group.elements if compose_maps(self._conjugations[c], beta) == target)

    def identity(self, a: int) -> Morphism:
        return Morphism(a, a, 0)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.tgt != g.src:
            raise InvalidModule("morphisms are not composable", witness=(f.tgt, g.src))
        return Morphism(f.src, g.tgt, self.group.mul(f.label, g.label))

    def tensor(self, f: Morphism, g: Morphism) -> Morphism:
        alpha_prime = self.data.maps[f.tgt]
        label = self.group.mul(f.label, alpha_prime[g.label])
        return Morphism(self.objects.mul(f.src, g.src), self.objects.mul(f.tgt, g.tgt), label)

    def inverse(self, f: Morphism) -> Morphism:
        return Morphism(f.tgt, f.src, self.group.inv(f.label))


def check_strict(category: StrictGrCat, objects: Optional[Sequence[int]] = None) -> Verdict:
    """Interchange law, unit and associativity of tensor on morphisms out of ``objects``.

    With ``objects`` None every object is checked.
    """
    group = category.objects
    sources = list(group.elements if objects is None else objects)
    arrows = []
    for a in sources:
        for b in group.elements:
            arrows.extend(category.morphisms(a, b))
    unit = category.identity(0)
    for f in arrows:
        if category.tensor(unit, f) != f or category.tensor(f, unit) != f:
            return Verdict(False, (f.src, f.tgt, f.label))
        if category.compose(category.inverse(f), f) != category.identity(f.src):
            return Verdict(False, (f.src, f.tgt, f.label))
    for f in arrows:
        for g in arrows:
            for f2 in category.morphisms(f.tgt, f.tgt):
                for g2 in category.morphisms(g.tgt, g.tgt):
                    left = category.compose(category.tensor(f2, g2), category.tensor(f, g))
                    right = category.tensor(category.compose(f2, f), category.compose(g2, g))
                    if left != right:
                        return Verdict(False, (f.label, g.label, f2.label, g2.label))
            for k in arrows:
                left = category.tensor(category.tensor(f, g), k)
                right = category.tensor(f, category.tensor(g, k))
                if left != right:
                    return Verdict(False, (f.label, g.label, k.label))
    return Verdict(True)


def aut_g_category(group: FiniteGroup, cap: Optional[int] = None) -> AutCategory:
    """Aut_G for ``group``, after a strictness check.

    Categories with at most ``STRICT_CHECK_OBJECTS`` objects are checked on
    every object. Larger ones are checked on arrows out of a generating set
    of Aut(G) only, which does not prove strictness on its own.
    """
    cap = settings.GROUP_ORDER_CAP if cap is None else cap
    if group.order > cap:
        raise CapExceeded(f"|G| = {group.order} exceeds the group order cap {cap}")
    category = AutCategory(group, cap)
    if category.objects.order <= settings.STRICT_CHECK_OBJECTS:
        verdict = check_strict(category)
    else:
        verdict = check_strict(category, generating_set(category.objects) or (0,))
    if not verdict:
        raise CoherenceMismatch("Aut_G failed a strictness check", witness=verdict.witness)
    logger.debug("Aut_G for %s has %d objects", group.label, category.objects.order)
    return category


@dataclass(frozen=True)
class ReductionResult:
    """The skeletal type (π₀, π₁, h) of a strict category with the chosen stick.

    ``class_of[X]`` is the π₀ element of object X, ``stick[s]`` the chosen
    object of class s, ``comparisons[(s, t)]`` the chosen arrow
    X_s ⊗ X_t -> X_st and ``units`` identifies π₁ = End(I) with ``pi1``.
    """

    category: StrictGrCat = field(repr=False)
    pi0: FiniteGroup
    pi1: FiniteAbelianGroup
    action: PiModule
    h: Cochain
    stick: Tuple[int, ...]
    class_of: Tuple[int, ...]
    comparisons: Dict[Tuple[int, int], Hashable] = field(repr=False)
    units: AbelianStructure = field(repr=False)
    unit_labels: Tuple[Hashable, ...] = field(repr=False)

    def label_of(self, v: Sequence[int]) -> Hashable:
        """The endomorphism of the unit object with π₁ coordinates v."""
        return self.unit_labels[self.units.element(v)]

    @property
    def gr_type(self) -> GrType:
        return GrType(self.action, self.h)


def _endomorphism_structure(category: StrictGrCat) -> Tuple[List[Hashable], AbelianStructure]:
    unit = category.identity(0).label
    labels = [unit] + sorted(label for label in category.hom(0, 0) if label != unit)
    index = {label: i for i, label in enumerate(labels)}
    table = [[index[category.compose(Morphism(0, 0, v), Morphism(0, 0, u)).label] for v in labels] for u in labels]
    return labels, abelian_structure(FiniteGroup(table, label="End(I)"))


def reduce_strict(category: StrictGrCat, cap: Optional[int] = None) -> ReductionResult:
    cap = settings.GROUP_ORDER_CAP if cap is None else cap
    objects = category.objects
    unit_class = [x for x in objects.elements if category.hom(x, 0)]
    quotient = quotient_group(objects, unit_class, label="π₀")
    pi0 = quotient.group
    stick = quotient.reps
    class_of = quotient.coset_of

    labels, structure = _endomorphism_structure(category)
    pi1 = structure.group
    if pi1.order > cap:
        raise CapExceeded(f"|π₁| = {pi1.order} exceeds the group order cap {cap}")

    def unit_arrow(v: Sequence[int]) -> Morphism:
        return Morphism(0, 0, labels[structure.element(v)])

    def gamma_inverse(x: int) -> Dict[Hashable, Element]:
        # u ⊗ id_X  ↦  u
        table = {}
        for i, label in enumerate(labels):
            table[category.tensor(Morphism(0, 0, label), category.identity(x)).label] = structure.vector(i)
        return table

    gamma = {x: gamma_inverse(x) for x in stick}
    images = []
    for s in pi0.elements:
        x = stick[s]
        images.append(tuple(
            gamma[x][category.tensor(category.identity(x), unit_arrow(pi1.unit(j))).label]
            for j in range(pi1.rank)
        ))
    action = PiModule(pi0, pi1, tuple(AbelianHom.from_images(pi1, pi1, cols) for cols in images))

    comparisons = {}
    for s in pi0.elements:
        for t in pi0.elements:
            src = objects.mul(stick[s], stick[t])
            comparisons[(s, t)] = min(category.hom(src, stick[pi0.mul(s, t)]))

    def comparison(s: int, t: int) -> Morphism:
        return Morphism(objects.mul(stick[s], stick[t]), stick[pi0.mul(s, t)], comparisons[(s, t)])

    trivial = all(
        objects.mul(stick[s], stick[t]) == stick[pi0.mul(s, t)]
        and comparisons[(s, t)] == category.identity(0).label
        for s in pi0.elements for t in pi0.elements
    )
    if trivial:
        h = Cochain.zero(action, 3)
    else:
        def value(r: int, s: int, t: int) -> Element:
            left = category.compose(comparison(pi0.mul(r, s), t),
                                    category.tensor(comparison(r, s), category.identity(stick[t])))
            right = category.compose(comparison(r, pi0.mul(s, t)),
                                     category.tensor(category.identity(stick[r]), comparison(s, t)))
            loop = category.compose(left, category.inverse(right))
            return gamma[stick[pi0.product(r, s, t)]][loop.label]

        h = Cochain.from_function(action, 3, value)
        verdict = is_cocycle(h)
        if not verdict:
            raise CoherenceMismatch("reduced associator is not a 3-cocycle", witness=verdict.witness)
    logger.debug("reduced strict category: |π₀| = %d, π₁ = %s, h has %d non-zero values",
                 pi0.order, pi1, len(h.entries))
    return ReductionResult(category, pi0, pi1, action, h, tuple(stick), tuple(class_of), comparisons, structure,
                           tuple(labels))


@lru_cache(maxsize=32)
def reduced_aut_category(group: FiniteGroup, cap: Optional[int] = None) -> ReductionResult:
    """The reduced type of Aut_G, built once per (G, cap)."""
    return reduce_strict(aut_g_category(group, cap), cap)


class PullbackCategory(StrictGrCat):
    """Objects (x, X) with X in the class ψ(x); arrows only between equal x."""

    def __init__(self, base: StrictGrCat, psi: GroupHom, class_of: Sequence[int]):
        self.base = base
        self.psi = psi
        pi = psi.source
        self.pairs = sorted((x, X) for x in pi.elements for X in base.objects.elements if class_of[X] == psi(x))
        self.index = {pair: i for i, pair in enumerate(self.pairs)}
        table = [[self.index[(pi.mul(x, y), base.objects.mul(X, Y))] for (y, Y) in self.pairs]
                 for (x, X) in self.pairs]
        names = [f"({pi.name(x)},{base.objects.name(X)})" for x, X in self.pairs]
        self.objects = FiniteGroup(table, names=names, label=f"pullback along {pi.label}")

    def project(self, a: int) -> int:
        return self.pairs[a][1]

    def _lift(self, f: Morphism, src: int, tgt: int) -> Morphism:
        return Morphism(src, tgt, f.label)

    def hom(self, a: int, b: int) -> Tuple[Hashable, ...]:
        (x, X), (y, Y) = self.pairs[a], self.pairs[b]
        if x != y:
            return ()
        return self.base.hom(X, Y)

    def identity(self, a: int) -> Morphism:
        return self._lift(self.base.identity(self.project(a)), a, a)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        inner = self.base.compose(Morphism(self.project(g.src), self.project(g.tgt), g.label),
                                  Morphism(self.project(f.src), self.project(f.tgt), f.label))
        return self._lift(inner, f.src, g.tgt)

    def tensor(self, f: Morphism, g: Morphism) -> Morphism:
        inner = self.base.tensor(Morphism(self.project(f.src), self.project(f.tgt), f.label),
                                 Morphism(self.project(g.src), self.project(g.tgt), g.label))
        return self._lift(inner, self.objects.mul(f.src, g.src), self.objects.mul(f.tgt, g.tgt))

    def inverse(self, f: Morphism) -> Morphism:
        inner = self.base.inverse(Morphism(self.project(f.src), self.project(f.tgt), f.label))
        return self._lift(inner, f.tgt, f.src)


def check_pullback_class(pulled: ReductionResult, base: ReductionResult, psi: GroupHom) -> None:
    """Raise CoherenceMismatch unless the pulled type is (Π, ψ*π₁, [ψ*h])."""
    if pulled.pi0 != psi.source or pulled.pi1 != base.pi1:
        raise CoherenceMismatch("the pullback does not have components Π and π₁ of the base")
    expected = pullback(psi, base.h)
    module = PiModule(psi.source, pulled.pi1, pulled.action.action)
    if module != expected.module:
        raise CoherenceMismatch("the pullback acts on π₁ differently from ψ*")
    if class_solve(Cochain(module, 3, pulled.h.entries) - expected, zero_target=False) is None:
        raise CoherenceMismatch("the pullback has associator class different from ψ*h")


def pullback_strict(category: StrictGrCat, psi: GroupHom, reduction: Optional[ReductionResult] = None,
                    cap: Optional[int] = None, verify: bool = True) -> PullbackCategory:
    """The pullback of ``category`` along ψ: Π -> π₀.

    With ``verify`` the pullback is reduced and its associator class checked
    against ψ*h.
    """
    reduction = reduction or reduce_strict(category, cap)
    if psi.target != reduction.pi0:
        raise PsiNotIntoPi0("ψ does not land in the group of isomorphism classes")
    pulled = PullbackCategory(category, psi, reduction.class_of)
    logger.debug("pullback along %s has %d objects", psi.source.label, pulled.objects.order)
    if verify:
        check_pullback_class(reduce_strict(pulled, cap), reduction, psi)
    return pulled


@dataclass(frozen=True)
class Strictification:
    category: PullbackCategory = field(repr=False)
    reduction: ReductionResult = field(repr=False)
    functor: "GrFunctorData"


def strictify(gr_type: GrType, group: FiniteGroup, psi: GroupHom, cap: Optional[int] = None) -> Strictification:
    """A strict model of ``gr_type`` from a realization (G, ψ: Π -> Out G).

    Returns the pullback of Aut_G along ψ and a functor (id, f, g) from the
    given type to the reduced type of that pullback.
    """
    from app.functors import GrFunctorData

    base = reduced_aut_category(group, cap)
    category = base.category
    if psi.source != gr_type.pi:
        raise RealizationMismatch("ψ is not defined on π₀ of the type")
    if psi.target != category.data.out:
        raise PsiNotIntoPi0("ψ does not land in Out(G)")
    along = GroupHom(psi.source, base.pi0, psi.map)
    pulled = pullback_strict(category, along, base, cap, verify=False)
    reduction = reduce_strict(pulled, cap)
    check_pullback_class(reduction, base, along)
    reduced_module = PiModule(gr_type.pi, reduction.pi1, reduction.action.action)
    isomorphisms = module_isomorphisms(gr_type.module, reduced_module)
    if not isomorphisms:
        raise RealizationMismatch("the center of G is not isomorphic to the coefficients as a Π-module")
    h_reduced = Cochain(reduced_module, 3, reduction.h.entries)
    for f in isomorphisms:
        g = class_solve(h_reduced - pushforward(f, gr_type.h, reduced_module), zero_target=False)
        if g is not None:
            functor = GrFunctorData(gr_type, GrType(reduced_module, h_reduced), GroupHom.identity(gr_type.pi), f, g)
            logger.info("strictified type over %s through %s", gr_type.pi.label, group.label)
            return Strictification(pulled, reduction, functor)
    raise RealizationMismatch("the realization has a different obstruction class")
