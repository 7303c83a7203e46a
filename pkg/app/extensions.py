"""Group extensions G -> B -> Π through factor sets.

An abstract kernel (Π, G, ψ) fixes ψ: Π -> Out(G). A factor set (φ, f) lifts
ψ to automorphisms φ(x) and a normalized map f: Π² -> G with

    φ(x)∘φ(y) = μ_{f(x,y)}∘φ(xy)                         (composition)
    φ(x)(f(y,z))·f(x,yz) = f(x,y)·f(xy,z)                (cocycle)
    φ(1) = id, f(x,1) = f(1,y) = 1                       (normalization)

and B_F is the set G × Π with (a,x)(b,y) = (a·φ(x)(b)·f(x,y), xy), indexed
as x·|G| + a. The centre ZG is a Π-module through ψ and is written
additively through ``abelian_structure``.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from app.cohomology import (
    Cochain,
    CohomologyGroup,
    PiModule,
    Verdict,
    class_solve,
    cohomology_group,
    is_cocycle,
    pullback,
    pushforward,
)
from app.config import settings
from app.errors import (
    CapExceeded,
    CoherenceMismatch,
    FactorSetInvalid,
    IncompatibleKernels,
    InvalidInput,
    NotAHomomorphism,
    SourceTargetMismatch,
)
from app.models.abelian import AbelianHom, Element
from app.models.groups import (
    AbelianStructure,
    AutData,
    FiniteGroup,
    GroupHom,
    abelian_structure,
    automorphisms,
    center,
    compose_maps,
    generating_set,
    homomorphisms,
    identify,
    make_hom,
    validate_group,
)
from app.skeletal import AutCategory, Morphism, reduced_aut_category

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbstractKernel:
    pi: FiniteGroup
    g: FiniteGroup
    psi: GroupHom
    aut: AutData = field(repr=False, compare=False)

    def lift(self, x: int) -> Tuple[int, ...]:
        """The chosen automorphism in the outer class ψ(x)."""
        return self.aut.lift(self.psi(x))


def make_kernel(pi: FiniteGroup, g: FiniteGroup, psi: Sequence[int], cap: Optional[int] = None) -> AbstractKernel:
    """ψ is given as the Out(G) index of every element of Π."""
    cap = settings.GROUP_ORDER_CAP if cap is None else cap
    if pi.order > cap:
        raise CapExceeded(f"|Π| = {pi.order} exceeds the group order cap {cap}")
    aut = automorphisms(g, cap)
    if len(psi) != pi.order or any(not 0 <= s < aut.out.order for s in psi):
        raise InvalidInput(f"ψ must list one Out({g.label}) index per element of Π")
    return AbstractKernel(pi, g, make_hom(pi, aut.out, psi), aut)


def kernels(pi: FiniteGroup, g: FiniteGroup, cap: Optional[int] = None) -> List[AbstractKernel]:
    """Every abstract kernel (Π, G, ψ)."""
    aut = automorphisms(g, cap)
    return [AbstractKernel(pi, g, psi, aut) for psi in homomorphisms(pi, aut.out)]


@dataclass(frozen=True)
class CentreModule:
    module: PiModule
    structure: AbelianStructure = field(repr=False)

    def vector(self, a: int) -> Element:
        return self.structure.vector(a)

    def element(self, v: Sequence[int]) -> int:
        return self.structure.element(v)


def centre_module(kernel: AbstractKernel) -> CentreModule:
    """ZG with x acting by φ(x), which does not depend on the lift."""
    structure = abelian_structure(kernel.g, center(kernel.g))
    coeff = structure.group
    action = []
    for x in kernel.pi.elements:
        phi = kernel.lift(x)
        images = [structure.vector(phi[structure.element(coeff.unit(j))]) for j in range(coeff.rank)]
        action.append(AbelianHom.from_images(coeff, coeff, images))
    return CentreModule(PiModule(kernel.pi, coeff, tuple(action)), structure)


@dataclass(frozen=True)
class FactorSet:
    """``phi[x]`` is an automorphism image tuple, ``f[x][y]`` an element of G."""

    phi: Tuple[Tuple[int, ...], ...]
    f: Tuple[Tuple[int, ...], ...]

    def __call__(self, x: int, y: int) -> int:
        return self.f[x][y]

    @classmethod
    def from_function(cls, pi: FiniteGroup, phi: Sequence[Sequence[int]], f) -> "FactorSet":
        return cls(tuple(tuple(m) for m in phi), tuple(tuple(f(x, y) for y in pi.elements) for x in pi.elements))


def check_factor_set(pi: FiniteGroup, g: FiniteGroup, factor_set: FactorSet) -> None:
    """Raises FactorSetInvalid naming the failed equation."""
    phi, f = factor_set.phi, factor_set.f
    if len(phi) != pi.order or len(f) != pi.order or any(len(row) != pi.order for row in f):
        raise FactorSetInvalid("factor set has the wrong shape", equation="normalization")
    for x, m in enumerate(phi):
        if sorted(m) != list(g.elements) or any(m[g.mul(a, b)] != g.mul(m[a], m[b])
                                                for a in g.elements for b in g.elements):
            raise FactorSetInvalid(f"φ({x}) is not an automorphism", witness=(x,), equation="composition")
    if phi[0] != tuple(g.elements):
        raise FactorSetInvalid("φ(1) is not the identity", witness=(0,), equation="normalization")
    for x in pi.elements:
        for y in pi.elements:
            if not 0 <= f[x][y] < g.order:
                raise FactorSetInvalid("f takes a value outside G", witness=(x, y), equation="normalization")
        if f[x][0] != 0 or f[0][x] != 0:
            raise FactorSetInvalid("f is not normalized", witness=(x,), equation="normalization")
    for x in pi.elements:
        for y in pi.elements:
            xy = pi.mul(x, y)
            c = f[x][y]
            for a in g.elements:
                if phi[x][phi[y][a]] != g.conjugate(c, phi[xy][a]):
                    raise FactorSetInvalid("φ(x)φ(y) differs from μ_f(x,y) φ(xy)", witness=(x, y, a),
                                           equation="composition")
    for x in pi.elements:
        for y in pi.elements:
            for z in pi.elements:
                left = g.mul(phi[x][f[y][z]], f[x][pi.mul(y, z)])
                right = g.mul(f[x][y], f[pi.mul(x, y)][z])
                if left != right:
                    raise FactorSetInvalid("factor set cocycle condition fails", witness=(x, y, z),
                                           equation="cocycle")


def factor_set_functor(pi: FiniteGroup, g: FiniteGroup, factor_set: FactorSet,
                       cap: Optional[int] = None) -> Verdict:
    """Checks the factor set as a monoidal functor Dis Π -> Aut_G.

    x goes to φ(x) and the structure arrow φ(x)⊗φ(y) -> φ(xy) is labelled
    f(x,y); both ends of the coherence square are evaluated in Aut_G.
    """
    category = AutCategory(g, cap)
    data = category.data
    objects = [data.index(m) for m in factor_set.phi]
    if objects[0] != 0:
        return Verdict(False, (0,))

    def structure(x: int, y: int) -> Morphism:
        src = category.objects.mul(objects[x], objects[y])
        arrow = Morphism(src, objects[pi.mul(x, y)], factor_set(x, y))
        return arrow

    for x in pi.elements:
        for y in pi.elements:
            arrow = structure(x, y)
            if arrow.label not in category.hom(arrow.src, arrow.tgt):
                return Verdict(False, (x, y))
    for x in pi.elements:
        for y in pi.elements:
            for z in pi.elements:
                left = category.compose(structure(pi.mul(x, y), z),
                                        category.tensor(structure(x, y), category.identity(objects[z])))
                right = category.compose(structure(x, pi.mul(y, z)),
                                         category.tensor(category.identity(objects[x]), structure(y, z)))
                if left != right:
                    return Verdict(False, (x, y, z))
    return Verdict(True)


@dataclass(frozen=True)
class Extension:
    b: FiniteGroup
    i: GroupHom
    p: GroupHom
    psi_induced: GroupHom

    @property
    def pi(self) -> FiniteGroup:
        return self.p.target

    @property
    def g(self) -> FiniteGroup:
        return self.i.source

    @cached_property
    def sections(self) -> Tuple[int, ...]:
        """u_x, the smallest element of B over x."""
        smallest: Dict[int, int] = {}
        for e in self.b.elements:
            smallest.setdefault(self.p(e), e)
        return tuple(smallest[x] for x in self.pi.elements)

    @cached_property
    def preimage(self) -> Dict[int, int]:
        return {self.i(a): a for a in self.g.elements}

    @property
    def profile(self) -> str:
        return identify(self.b)


def _induced_psi(b: FiniteGroup, i: GroupHom, p: GroupHom, aut: AutData, sections: Sequence[int]) -> GroupHom:
    preimage = {i(a): a for a in i.source.elements}
    images = []
    for u in sections:
        images.append(aut.out_class([preimage[b.conjugate(u, i(a))] for a in i.source.elements]))
    return make_hom(p.target, aut.out, images)


def make_extension(b: FiniteGroup, i: GroupHom, p: GroupHom, cap: Optional[int] = None) -> Extension:
    """Checks exactness of G -> B -> Π and computes the induced ψ."""
    if i.target != b or p.source != b:
        raise SourceTargetMismatch("i must land in B and p must start at B")
    if not i.is_injective():
        raise InvalidInput("i is not injective")
    if not p.is_surjective():
        raise InvalidInput("p is not surjective")
    if sorted(i.image()) != sorted(p.kernel()):
        raise InvalidInput("the image of i is not the kernel of p")
    aut = automorphisms(i.source, cap)
    smallest: Dict[int, int] = {}
    for e in b.elements:
        smallest.setdefault(p(e), e)
    sections = [smallest[x] for x in p.target.elements]
    return Extension(b, i, p, _induced_psi(b, i, p, aut, sections))


def build_extension(pi: FiniteGroup, g: FiniteGroup, factor_set: FactorSet, cap: Optional[int] = None,
                    ext_cap: Optional[int] = None) -> Extension:
    ext_cap = settings.EXTENSION_ORDER_CAP if ext_cap is None else ext_cap
    n = g.order
    if n * pi.order > ext_cap:
        raise CapExceeded(f"|G|·|Π| = {n * pi.order} exceeds the extension order cap {ext_cap}")
    check_factor_set(pi, g, factor_set)
    phi, f = factor_set.phi, factor_set.f

    def product(a: int, x: int, b: int, y: int) -> int:
        return pi.mul(x, y) * n + g.product(a, phi[x][b], f[x][y])

    pairs = [(idx % n, idx // n) for idx in range(n * pi.order)]
    table = [[product(a, x, c, y) for (c, y) in pairs] for (a, x) in pairs]
    names = [f"({g.name(a)},{pi.name(x)})" for a, x in pairs]
    b = validate_group(table, names=names, label=f"B({g.label} by {pi.label})")
    i = GroupHom(g, b, tuple(g.elements))
    p = GroupHom(b, pi, tuple(x for _, x in pairs))
    aut = automorphisms(g, cap)
    sections = [x * n for x in pi.elements]
    psi = _induced_psi(b, i, p, aut, sections)
    for x in pi.elements:
        if psi(x) != aut.out_class(phi[x]):
            raise CoherenceMismatch("induced ψ differs from the class of φ", witness=(x,))
    logger.debug("built extension of order %d: %s", b.order, identify(b))
    return Extension(b, i, p, psi)


def factor_set_of(extension: Extension) -> FactorSet:
    """φ(x) = conjugation by u_x, f(x,y) = i⁻¹(u_x u_y u_xy⁻¹)."""
    b, pi, g = extension.b, extension.pi, extension.g
    u = extension.sections
    preimage = extension.preimage
    i = extension.i
    phi = [tuple(preimage[b.conjugate(u[x], i(a))] for a in g.elements) for x in pi.elements]

    def f(x: int, y: int) -> int:
        return preimage[b.product(u[x], u[y], b.inv(u[pi.mul(x, y)]))]

    return FactorSet.from_function(pi, phi, f)


def _same_ends(first: Extension, second: Extension) -> None:
    if first.pi != second.pi or first.g != second.g:
        raise SourceTargetMismatch("extensions have different kernels or quotients")
    if first.psi_induced.map != second.psi_induced.map:
        raise IncompatibleKernels("extensions induce different ψ", witness=(first.psi_induced.map,
                                                                            second.psi_induced.map))


def congruent_factor_sets(pi: FiniteGroup, g: FiniteGroup, first: FactorSet, second: FactorSet) -> Optional[Tuple[int, ...]]:
    """t with φ(x) = μ_t(x)∘φ'(x) and f(x,y)·t(xy) = t(x)·φ'(x)(t(y))·f'(x,y).

    Such a t gives the congruence (a, x) ↦ (a·t(x), x) from B_F to B_F'. The
    second equation determines t on all of Π from its values on generators.
    """
    candidates = []
    for x in pi.elements:
        candidates.append([c for c in g.elements
                           if all(first.phi[x][a] == g.conjugate(c, second.phi[x][a]) for a in g.elements)])
        if not candidates[-1]:
            return None
    generators = generating_set(pi)

    def extend(assignment: Dict[int, int]) -> Optional[Tuple[int, ...]]:
        t = {0: 0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for s in generators:
                xs = pi.mul(x, s)
                value = g.product(g.inv(first(x, s)), t[x], second.phi[x][assignment[s]], second(x, s))
                if xs in t:
                    if t[xs] != value:
                        return None
                else:
                    t[xs] = value
                    queue.append(xs)
        return tuple(t[x] for x in pi.elements)

    def search(position: int, assignment: Dict[int, int]) -> Optional[Tuple[int, ...]]:
        if position == len(generators):
            t = extend(assignment)
            return t if t is not None and _is_congruence(pi, g, first, second, t) else None
        s = generators[position]
        for c in candidates[s]:
            assignment[s] = c
            found = search(position + 1, assignment)
            if found is not None:
                return found
        assignment.pop(s, None)
        return None

    return search(0, {})


def _is_congruence(pi: FiniteGroup, g: FiniteGroup, first: FactorSet, second: FactorSet,
                   t: Sequence[int]) -> bool:
    if t[0] != 0:
        return False
    for x in pi.elements:
        if any(first.phi[x][a] != g.conjugate(t[x], second.phi[x][a]) for a in g.elements):
            return False
        for y in pi.elements:
            left = g.mul(first(x, y), t[pi.mul(x, y)])
            right = g.product(t[x], second.phi[x][t[y]], second(x, y))
            if left != right:
                return False
    return True


def congruent(first: Extension, second: Extension) -> Optional[Tuple[int, ...]]:
    """A witness t: Π -> G of a congruence first ≅ second, or None."""
    _same_ends(first, second)
    return congruent_factor_sets(first.pi, first.g, factor_set_of(first), factor_set_of(second))


def congruence_map(first: Extension, second: Extension, t: Sequence[int]) -> GroupHom:
    """The isomorphism B -> B' over G and Π carried by the witness t."""
    b = first.b
    u, u2 = first.sections, second.sections
    images = []
    for e in b.elements:
        x = first.p(e)
        a = first.preimage[b.mul(e, b.inv(u[x]))]
        images.append(second.b.mul(second.i(first.g.mul(a, t[x])), u2[x]))
    try:
        beta = make_hom(b, second.b, images)
    except NotAHomomorphism as exc:
        raise CoherenceMismatch("congruence witness does not give a homomorphism", witness=exc.witness)
    if not beta.is_isomorphism():
        raise CoherenceMismatch("congruence witness does not give an isomorphism")
    return beta


@dataclass(frozen=True)
class KernelObstruction:
    """k ∈ Z³(Π, ZG) for the chosen lifts and f.

    The class of k in H³ is computed on first use; ``vanishes`` only needs a
    primitive of k.
    """

    kernel: AbstractKernel
    centre: CentreModule = field(repr=False)
    lifts: Tuple[Tuple[int, ...], ...]
    f: Tuple[Tuple[int, ...], ...]
    k: Cochain
    cap: Optional[int] = field(default=None, repr=False)

    @cached_property
    def primitive(self) -> Optional[Cochain]:
        """Some t with ∂t = k, or None."""
        return class_solve(self.k, zero_target=False)

    @cached_property
    def cohomology(self) -> CohomologyGroup:
        return cohomology_group(self.centre.module, 3, self.cap)

    @cached_property
    def coordinates(self) -> Element:
        return self.cohomology.project(self.k)

    @property
    def vanishes(self) -> bool:
        return self.primitive is not None


def _smallest_conjugators(g: FiniteGroup, aut: AutData) -> Dict[int, int]:
    first: Dict[int, int] = {}
    for c in g.elements:
        first.setdefault(aut.inner_of[c], c)
    return first


def kernel_obstruction(kernel: AbstractKernel, cap: Optional[int] = None) -> KernelObstruction:
    """k(x,y,z) = φ(x)(f(y,z))·f(x,yz)·(f(x,y)·f(xy,z))⁻¹ for lifts φ(x) from ``out_reps``.

    f(x,y) is the smallest c with φ(x)φ(y) = μ_c φ(xy).
    """
    pi, g, aut = kernel.pi, kernel.g, kernel.aut
    lifts = tuple(kernel.lift(x) for x in pi.elements)
    conjugator = _smallest_conjugators(g, aut)
    inverse = {a: [0] * g.order for a in range(len(aut.maps))}
    for index, m in enumerate(aut.maps):
        for a, image in enumerate(m):
            inverse[index][image] = a

    def solve(x: int, y: int) -> int:
        target = compose_maps(compose_maps(lifts[x], lifts[y]), inverse[aut.index(lifts[pi.mul(x, y)])])
        inner = aut.index(target)
        if inner not in conjugator:
            raise CoherenceMismatch("ψ is not multiplicative on the chosen lifts", witness=(x, y))
        return conjugator[inner]

    f = tuple(tuple(solve(x, y) for y in pi.elements) for x in pi.elements)
    centre = centre_module(kernel)
    members = set(centre.structure.to_vector)

    def value(x: int, y: int, z: int) -> Element:
        left = g.mul(lifts[x][f[y][z]], f[x][pi.mul(y, z)])
        right = g.mul(f[x][y], f[pi.mul(x, y)][z])
        k = g.mul(left, g.inv(right))
        if k not in members:
            raise CoherenceMismatch("kernel obstruction leaves the centre", witness=(x, y, z))
        return centre.vector(k)

    k = Cochain.from_function(centre.module, 3, value)
    verdict = is_cocycle(k)
    if not verdict:
        raise CoherenceMismatch("kernel obstruction is not a 3-cocycle", witness=verdict.witness)
    logger.info("obstruction of (%s, %s, ψ) computed, %d non-zero values", pi.label, g.label, len(k.entries))
    return KernelObstruction(kernel, centre, lifts, f, k, cap)


def enumerate_extensions(kernel: AbstractKernel, cap: Optional[int] = None,
                         ext_cap: Optional[int] = None) -> List[Extension]:
    """One extension per congruence class; empty when the obstruction is non-zero."""
    ext_cap = settings.EXTENSION_ORDER_CAP if ext_cap is None else ext_cap
    pi, g = kernel.pi, kernel.g
    if pi.order * g.order > ext_cap:
        raise CapExceeded(f"|G|·|Π| = {pi.order * g.order} exceeds the extension order cap {ext_cap}")
    data = kernel_obstruction(kernel, cap)
    t = data.primitive
    if t is None:
        logger.info("no extensions: the obstruction of %s by %s is non-zero", g.label, pi.label)
        return []
    centre = data.centre
    h2 = cohomology_group(centre.module, 2, cap)
    factor_sets = []
    for _, z in h2.classes():
        shift = z - t

        def f(x: int, y: int, shift: Cochain = shift) -> int:
            return g.mul(data.f[x][y], centre.element(shift(x, y)))

        factor_sets.append(FactorSet.from_function(pi, data.lifts, f))
    extensions = [build_extension(pi, g, factor_set, cap, ext_cap) for factor_set in factor_sets]
    for j, first in enumerate(factor_sets):
        for second in factor_sets[j + 1:]:
            if congruent_factor_sets(pi, g, first, second) is not None:
                raise CoherenceMismatch("distinct cohomology classes gave congruent extensions")
    logger.info("%d extensions of %s by %s", len(extensions), g.label, pi.label)
    return extensions


@dataclass(frozen=True)
class ReductionComparison:
    """[k] against [ψ*h] with h from the reduction of Aut_G; each class test runs on first use."""

    k: Cochain
    pulled: Cochain

    @cached_property
    def same_class(self) -> bool:
        return class_solve(self.k - self.pulled, zero_target=False) is not None

    @cached_property
    def opposite_class(self) -> bool:
        return class_solve(self.k + self.pulled, zero_target=False) is not None


def compare_with_reduction(kernel: AbstractKernel, cap: Optional[int] = None) -> ReductionComparison:
    data = kernel_obstruction(kernel, cap)
    reduction = reduced_aut_category(kernel.g, cap)
    if reduction.pi0 != kernel.aut.out:
        raise CoherenceMismatch("π₀ of Aut_G differs from Out(G)")
    centre = data.centre
    coeff = centre.module.coeff
    transport = AbelianHom.from_images(
        reduction.pi1, coeff,
        [centre.vector(reduction.label_of(reduction.pi1.unit(j))) for j in range(reduction.pi1.rank)],
    )
    if not transport.is_isomorphism():
        raise CoherenceMismatch("End(I) of Aut_G is not the centre of G")
    psi = GroupHom(kernel.pi, reduction.pi0, kernel.psi.map)
    pulled = pushforward(transport, pullback(psi, reduction.h), centre.module)
    return ReductionComparison(data.k, pulled)
