"""Gr-functors of type (φ, f) between skeletal Gr-categories.

A functor S -> S' is a triple (φ, f, g) with φ: Π -> Π', f: A -> A' a
φ-equivariant map and g a normalized 2-cochain in C²(Π, A'_φ) satisfying
φ*h' - f_*h = ∂g. Its obstruction is the 3-cocycle φ*h' - f_*h.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from app.cohomology import (
    Cochain,
    CohomologyGroup,
    PiModule,
    Verdict,
    check_equivariant,
    class_solve,
    coboundary_value,
    cocycle_group,
    cohomology_group,
    module_isomorphisms,
    pullback,
    pushforward,
)
from app.errors import CoherenceMismatch, InvalidModule, ObstructionNonzero, SourceTargetMismatch
from app.models.abelian import AbelianHom, Element
from app.models.groups import GroupHom
from app.skeletal import GrType

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GrFunctorData:
    source: GrType
    target: GrType
    phi: GroupHom
    f: AbelianHom
    g: Cochain

    @property
    def module(self) -> PiModule:
        """A' as a Π-module through φ; the home of g."""
        return self.target.module.restrict(self.phi)


@dataclass(frozen=True)
class Homotopy:
    """t with g' = g + ∂t."""

    t: Cochain


@dataclass(frozen=True)
class Obstruction:
    k: Cochain
    cohomology: CohomologyGroup
    coordinates: Element

    @property
    def vanishes(self) -> bool:
        return not any(self.coordinates)


def _check_ends(phi: GroupHom, f: AbelianHom, source: GrType, target: GrType) -> PiModule:
    if phi.source != source.pi or phi.target != target.pi:
        raise SourceTargetMismatch("φ does not go from π₀ of the source to π₀ of the target")
    check_equivariant(f, source.module, target.module, phi)
    return target.module.restrict(phi)


def obstruction(phi: GroupHom, f: AbelianHom, source: GrType, target: GrType) -> Cochain:
    """k = φ*h' - f_*h in Z³(Π, A'_φ)."""
    module = _check_ends(phi, f, source, target)
    return pullback(phi, target.h) - pushforward(f, source.h, module)


def obstruction_class(phi: GroupHom, f: AbelianHom, source: GrType, target: GrType,
                      cap: Optional[int] = None) -> Obstruction:
    k = obstruction(phi, f, source, target)
    h3 = cohomology_group(k.module, 3, cap)
    return Obstruction(k, h3, h3.project(k))


def realize(phi: GroupHom, f: AbelianHom, source: GrType, target: GrType,
            cap: Optional[int] = None) -> GrFunctorData:
    """A functor of type (φ, f), raising ObstructionNonzero when none exists."""
    k = obstruction(phi, f, source, target)
    g = class_solve(k, zero_target=False)
    if g is None:
        coordinates = cohomology_group(k.module, 3, cap).project(k)
        raise ObstructionNonzero("obstruction class is non-zero", coordinates)
    return GrFunctorData(source, target, phi, f, g)


def is_gr_functor(functor: GrFunctorData) -> Verdict:
    module = functor.module
    if functor.g.module != module or functor.g.degree != 2:
        return Verdict(False, ("g",))
    source, target, phi = functor.source, functor.target, functor.phi
    coeff = module.coeff
    elements = source.pi.elements
    for x in elements:
        for y in elements:
            for z in elements:
                left = coeff.sub(target.h(phi(x), phi(y), phi(z)), functor.f(source.h(x, y, z)))
                if left != coboundary_value(functor.g, (x, y, z)):
                    return Verdict(False, (x, y, z))
    return Verdict(True)


def classify(phi: GroupHom, f: AbelianHom, source: GrType, target: GrType,
             cap: Optional[int] = None) -> List[GrFunctorData]:
    """One functor per homotopy class, g₀ + z for z over representatives of H²(Π, A'_φ)."""
    base = realize(phi, f, source, target, cap)
    h2 = cohomology_group(base.module, 2, cap)
    functors = [GrFunctorData(source, target, phi, f, base.g + z) for _, z in h2.classes()]
    logger.info("%d homotopy classes of functors over %s", len(functors), source.pi.label)
    return functors


def are_homotopic(first: GrFunctorData, second: GrFunctorData) -> Optional[Homotopy]:
    if first.source != second.source or first.target != second.target:
        raise SourceTargetMismatch("functors have different sources or targets")
    if first.phi != second.phi or first.f != second.f:
        return None
    t = class_solve(second.g - first.g)
    return Homotopy(t) if t is not None else None


def functor_automorphisms(functor: GrFunctorData, cap: Optional[int] = None) -> List[Cochain]:
    """Monoidal automorphisms of F, which are exactly Z¹(Π, A'_φ)."""
    return list(cocycle_group(functor.module, 1, cap).elements())


def compose(second: GrFunctorData, first: GrFunctorData) -> GrFunctorData:
    """second ∘ first, with g''(x, y) = f'(g(x, y)) + g'(φx, φy)."""
    if first.target != second.source:
        raise SourceTargetMismatch("the first functor does not land in the source of the second")
    phi = second.phi.after(first.phi)
    f = second.f.after(first.f)
    module = second.target.module.restrict(phi)
    coeff = module.coeff

    def value(x: int, y: int) -> Element:
        return coeff.add(second.f(first.g(x, y)), second.g(first.phi(x), first.phi(y)))

    result = GrFunctorData(first.source, second.target, phi, f, Cochain.from_function(module, 2, value))
    verdict = is_gr_functor(result)
    if not verdict:
        raise CoherenceMismatch("composite functor fails the functor identity", witness=verdict.witness)
    return result


def identity_functor(gr_type: GrType) -> GrFunctorData:
    phi = GroupHom.identity(gr_type.pi)
    return GrFunctorData(gr_type, gr_type, phi, AbelianHom.identity(gr_type.coeff),
                         Cochain.zero(gr_type.module.restrict(phi), 2))


def braided_compatible(functor: GrFunctorData, eta: Cochain, eta_prime: Cochain) -> Verdict:
    """η'(φx, φy) - f(η(x, y)) = g(x, y) - g(y, x) everywhere, on top of the functor identity."""
    verdict = is_gr_functor(functor)
    if not verdict:
        return verdict
    if eta.module != functor.source.module or eta_prime.module != functor.target.module:
        raise InvalidModule("braidings must take values in the coefficients of their types")
    coeff = functor.target.coeff
    phi, f, g = functor.phi, functor.f, functor.g
    for x in functor.source.pi.elements:
        for y in functor.source.pi.elements:
            left = coeff.sub(eta_prime(phi(x), phi(y)), f(eta(x, y)))
            if left != coeff.sub(g(x, y), g(y, x)):
                return Verdict(False, (x, y))
    return Verdict(True)


@dataclass(frozen=True)
class ClassifyingData:
    """d(S) = (Π, A, [h])."""

    gr_type: GrType
    cohomology: CohomologyGroup
    coordinates: Element


def classifying_data(gr_type: GrType, cap: Optional[int] = None) -> ClassifyingData:
    h3 = cohomology_group(gr_type.module, 3, cap)
    return ClassifyingData(gr_type, h3, h3.project(gr_type.h))


def equivalence(source: GrType, target: GrType) -> Optional[GrFunctorData]:
    """A functor (id, f, g) with f a module isomorphism, when the classes of h agree through f."""
    if source.pi != target.pi:
        return None
    phi = GroupHom.identity(source.pi)
    for f in module_isomorphisms(source.module, target.module):
        k = target.h - pushforward(f, source.h, target.module)
        g = class_solve(k, zero_target=False)
        if g is not None:
            return GrFunctorData(source, target, phi, f, Cochain(target.module.restrict(phi), 2, g.entries))
    return None


def homotopy_classes(functors: List[GrFunctorData]) -> List[Tuple[int, ...]]:
    """Partition of a list of functors into homotopy classes, as index tuples."""
    classes: List[List[int]] = []
    for i, functor in enumerate(functors):
        for members in classes:
            if are_homotopic(functors[members[0]], functor) is not None:
                members.append(i)
                break
        else:
            classes.append([i])
    return [tuple(members) for members in classes]
