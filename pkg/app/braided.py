"""Abelian 3-cocycles (h, η) for finite abelian M with coefficients in N.

A pair is an abelian cocycle when, with trivial action,

    ∂h = 0
    h(x,y,z) - h(y,x,z) + h(y,z,x) - η(x,y+z) + η(x,y) + η(x,z) = 0
    h(x,y,z) - h(x,z,y) + h(z,x,y) + η(x+y,z) - η(y,z) - η(x,z) = 0

The last two are the hexagons of the skeletal braided category with
associator X(YZ) -> (XY)Z of value h and braiding XY -> YX of value η, and
∂_ab(g) = (∂g, g - gᵀ) solves all three.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from app.cohomology import (
    Cochain,
    PiModule,
    Verdict,
    coboundary,
    coboundary_value,
    cochain_dimension,
    cochain_moduli,
    normalized_tuples,
)
from app.config import settings
from app.errors import CapExceeded, CoherenceMismatch, InvalidModule, MismatchFound, NotACocycle, NotAbelianCocycle
from app.models.abelian import (
    Element,
    FiniteAbelianGroup,
    LatticeQuotient,
    lattice_quotient,
    modular_kernel_lattice,
    modular_solve,
    scaled_units,
)
from app.models.groups import FiniteGroup
from app.skeletal import GrType, SkeletalCategory, make_gr_type

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def abelian_module(m: FiniteAbelianGroup, n: FiniteAbelianGroup) -> PiModule:
    """N as a trivial module over M, with M's elements indexed by ``m.index``."""
    return PiModule.trivial(m.as_group(), n)


@dataclass(frozen=True)
class AbelianCocycle:
    h: Cochain
    eta: Cochain

    @property
    def module(self) -> PiModule:
        return self.h.module

    def __add__(self, other: "AbelianCocycle") -> "AbelianCocycle":
        return AbelianCocycle(self.h + other.h, self.eta + other.eta)

    def __sub__(self, other: "AbelianCocycle") -> "AbelianCocycle":
        return AbelianCocycle(self.h - other.h, self.eta - other.eta)

    def vector(self) -> List[int]:
        return self.h.vector() + self.eta.vector()


@dataclass(frozen=True)
class QuadraticMap:
    """ν: M -> N as a tuple of values indexed like the elements of M."""

    m: FiniteGroup
    n: FiniteAbelianGroup
    values: Tuple[Element, ...]

    def __call__(self, x: int) -> Element:
        return self.values[x]

    def __add__(self, other: "QuadraticMap") -> "QuadraticMap":
        return QuadraticMap(self.m, self.n, tuple(self.n.add(a, b) for a, b in zip(self.values, other.values)))

    def is_zero(self) -> bool:
        return all(v == self.n.zero for v in self.values)


def _require_abelian_trivial(module: PiModule) -> None:
    if not module.pi.is_abelian or not module.is_trivial:
        raise InvalidModule("braidings need an abelian group acting trivially")


def second_identity(h: Cochain, eta: Cochain, x: int, y: int, z: int) -> Element:
    coeff = h.module.coeff
    add = h.module.pi.mul
    total = coeff.total([h(x, y, z), coeff.neg(h(y, x, z)), h(y, z, x),
                         coeff.neg(eta(x, add(y, z))), eta(x, y), eta(x, z)])
    return total


def third_identity(h: Cochain, eta: Cochain, x: int, y: int, z: int) -> Element:
    coeff = h.module.coeff
    add = h.module.pi.mul
    total = coeff.total([h(x, y, z), coeff.neg(h(x, z, y)), h(z, x, y),
                         eta(add(x, y), z), coeff.neg(eta(y, z)), coeff.neg(eta(x, z))])
    return total


def is_abelian_cocycle(h: Cochain, eta: Cochain) -> Verdict:
    """Exhaustive check; the witness is (identity number, x, y, z[, w])."""
    module = h.module
    _require_abelian_trivial(module)
    if eta.module != module or h.degree != 3 or eta.degree != 2:
        raise InvalidModule("h and η must be 3- and 2-cochains over the same module")
    zero = module.coeff.zero
    elements = module.pi.elements
    for xs in itertools.product(elements, repeat=4):
        if coboundary_value(h, xs) != zero:
            return Verdict(False, (1,) + xs)
    for x, y, z in itertools.product(elements, repeat=3):
        if second_identity(h, eta, x, y, z) != zero:
            return Verdict(False, (2, x, y, z))
        if third_identity(h, eta, x, y, z) != zero:
            return Verdict(False, (3, x, y, z))
    return Verdict(True)


def transpose_cochain(g: Cochain) -> Cochain:
    return Cochain(g.module, 2, tuple(sorted(((y, x), v) for (x, y), v in g.entries)))


def d_ab(g: Cochain) -> AbelianCocycle:
    """∂_ab(g) = (∂g, g - gᵀ)."""
    if g.degree != 2:
        raise InvalidModule("∂_ab takes a 2-cochain")
    _require_abelian_trivial(g.module)
    return AbelianCocycle(coboundary(g), g - transpose_cochain(g))


def trace(c: AbelianCocycle) -> QuadraticMap:
    """x ↦ η(x, x)"""
    module = c.module
    return QuadraticMap(module.pi, module.coeff, tuple(c.eta(x, x) for x in module.pi.elements))


def _bilinearity_failure(nu: QuadraticMap) -> Optional[Tuple[int, int, int]]:
    m, n = nu.m, nu.n

    def cross(a: int, b: int) -> Element:
        return n.sub(n.sub(nu(m.mul(a, b)), nu(a)), nu(b))

    for a, b, c in itertools.product(m.elements, repeat=3):
        if cross(m.mul(a, b), c) != n.add(cross(a, c), cross(b, c)):
            return (a, b, c)
    return None


def is_quadratic(nu: QuadraticMap) -> Verdict:
    """ν(-x) = ν(x) and the cross-effect ν(x+y) - ν(x) - ν(y) is bilinear."""
    for a in nu.m.elements:
        if nu(nu.m.inv(a)) != nu(a):
            return Verdict(False, (a,))
    failure = _bilinearity_failure(nu)
    return Verdict(True) if failure is None else Verdict(False, failure)


def _check_enumeration_cap(m: FiniteAbelianGroup, n: FiniteAbelianGroup) -> None:
    if m.order > settings.GROUP_ORDER_CAP:
        raise CapExceeded(f"|M| = {m.order} exceeds the group order cap {settings.GROUP_ORDER_CAP}")
    if n.order ** m.order > settings.QUAD_ENUMERATION_CAP:
        raise CapExceeded(f"|N|^|M| = {n.order ** m.order} exceeds {settings.QUAD_ENUMERATION_CAP}")


@lru_cache(maxsize=None)
def _quadratic_maps(m: FiniteAbelianGroup, n: FiniteAbelianGroup, even: bool) -> Tuple[QuadraticMap, ...]:
    group = abelian_module(m, n).pi
    found = []
    for values in itertools.product(list(n.elements()), repeat=m.order - 1):
        nu = QuadraticMap(group, n, (n.zero,) + tuple(values))
        if (is_quadratic(nu) if even else _bilinearity_failure(nu) is None):
            found.append(nu)
    logger.debug("%d maps %s -> %s with bilinear cross-effect (even=%s)", len(found), m, n, even)
    return tuple(found)


def quadratic_maps(m: FiniteAbelianGroup, n: FiniteAbelianGroup, even: bool = True) -> List[QuadraticMap]:
    """Quad(M, N) by brute force; ``even=False`` drops the condition ν(-x) = ν(x)."""
    _check_enumeration_cap(m, n)
    return list(_quadratic_maps(m, n, even))


def _identity_vector(h: Cochain, eta: Cochain) -> List[int]:
    module = h.module
    order = module.pi.order
    values: List[int] = []
    for xs in normalized_tuples(order, 4):
        values.extend(coboundary_value(h, xs))
    for x, y, z in normalized_tuples(order, 3):
        values.extend(second_identity(h, eta, x, y, z))
        values.extend(third_identity(h, eta, x, y, z))
    return values


def _unit_cochains(module: PiModule, degree: int) -> List[Cochain]:
    dimension = cochain_dimension(module, degree)
    return [Cochain.from_vector(module, degree, [1 if i == j else 0 for i in range(dimension)])
            for j in range(dimension)]


@dataclass(frozen=True)
class AbelianCohomologyGroup:
    """H³_ab(M, N) with representative abelian cocycles."""

    m: FiniteAbelianGroup
    n: FiniteAbelianGroup
    group: FiniteAbelianGroup
    representatives: Tuple[AbelianCocycle, ...]
    quotient: LatticeQuotient = field(repr=False)

    @property
    def module(self) -> PiModule:
        return abelian_module(self.m, self.n)

    @property
    def order(self) -> int:
        return self.group.order

    def project(self, c: AbelianCocycle) -> Element:
        verdict = is_abelian_cocycle(c.h, c.eta)
        if not verdict:
            raise NotAbelianCocycle("cannot take the class of a non-cocycle", witness=verdict.witness[1:],
                                    identity=verdict.witness[0])
        return self.quotient.project(c.vector())

    def cocycle(self, element: Sequence[int]) -> AbelianCocycle:
        module = self.module
        result = AbelianCocycle(Cochain.zero(module, 3), Cochain.zero(module, 2))
        for k, rep in zip(self.group.reduce(element), self.representatives):
            if k:
                result = result + AbelianCocycle(rep.h.scale(k), rep.eta.scale(k))
        return result


def h3_ab(m: FiniteAbelianGroup, n: FiniteAbelianGroup, cap: Optional[int] = None) -> AbelianCohomologyGroup:
    cap = settings.GROUP_ORDER_CAP if cap is None else cap
    if m.order > cap:
        raise CapExceeded(f"|M| = {m.order} exceeds the group order cap {cap}")
    return _h3_ab(m, n)


@lru_cache(maxsize=None)
def _h3_ab(m: FiniteAbelianGroup, n: FiniteAbelianGroup) -> AbelianCohomologyGroup:
    module = abelian_module(m, n)
    zero_h = Cochain.zero(module, 3)
    zero_eta = Cochain.zero(module, 2)
    h_units = _unit_cochains(module, 3)
    eta_units = _unit_cochains(module, 2)
    columns = [_identity_vector(u, zero_eta) for u in h_units] + [_identity_vector(zero_h, u) for u in eta_units]
    row_count = len(columns[0]) if columns else 0
    matrix = [[column[i] for column in columns] for i in range(row_count)]
    moduli = cochain_moduli(module, 3) + cochain_moduli(module, 2)
    row_moduli = list(n.invariant_factors) * (row_count // n.rank if n.rank else 0)
    dimension = len(moduli)
    cocycles = modular_kernel_lattice(matrix, moduli, row_moduli)
    boundaries = [d_ab(u).vector() for u in _unit_cochains(module, 2)] + scaled_units(moduli)
    quotient = lattice_quotient(dimension, cocycles, boundaries)
    split = cochain_dimension(module, 3)
    representatives = tuple(
        AbelianCocycle(Cochain.from_vector(module, 3, gen[:split]), Cochain.from_vector(module, 2, gen[split:]))
        for gen in quotient.generators
    )
    for rep in representatives:
        verdict = is_abelian_cocycle(rep.h, rep.eta)
        if not verdict:
            raise CoherenceMismatch("abelian cohomology representative is not a cocycle", witness=verdict.witness)
    logger.debug("H3_ab(%s, %s) = %s", m, n, quotient.group)
    return AbelianCohomologyGroup(m, n, quotient.group, representatives, quotient)


@dataclass(frozen=True)
class EMReport:
    m: FiniteAbelianGroup
    n: FiniteAbelianGroup
    h3_ab_factors: Tuple[int, ...]
    h3_ab_order: int
    quad_order: int
    quad_order_without_evenness: int
    matching: Tuple[Tuple[Element, Tuple[Element, ...]], ...]
    bijective: bool


def em_check(m: FiniteAbelianGroup, n: FiniteAbelianGroup, cap: Optional[int] = None) -> EMReport:
    """Check that traces induce an isomorphism H³_ab(M, N) -> Quad(M, N)."""
    _check_enumeration_cap(m, n)
    h3 = h3_ab(m, n, cap)
    module = h3.module
    quad = quadratic_maps(m, n)
    quad_values = {nu.values for nu in quad}

    for g in _unit_cochains(module, 2):
        t = trace(d_ab(g))
        if not t.is_zero():
            raise MismatchFound("trace of a coboundary is non-zero", witness=t.values)

    traces: Dict[Element, QuadraticMap] = {}
    for element in h3.group.elements():
        cocycle = h3.cocycle(element)
        t = trace(cocycle)
        verdict = is_quadratic(t)
        if not verdict:
            raise MismatchFound("trace of an abelian cocycle is not quadratic", witness=element)
        traces[element] = t
    for a in h3.group.elements():
        for b in h3.group.elements():
            if traces[h3.group.add(a, b)] != traces[a] + traces[b]:
                raise MismatchFound("trace is not additive on classes", witness=a + b)
    images = {t.values for t in traces.values()}
    if len(images) != len(traces):
        raise MismatchFound("two classes share a trace", witness=(len(images), len(traces)))
    if images != quad_values:
        missing = sorted(quad_values - images)
        raise MismatchFound("some quadratic map is not a trace", witness=missing[0] if missing else ())
    loose = len(quadratic_maps(m, n, even=False))
    logger.info("trace map H3_ab(%s, %s) -> Quad is a bijection of order %d", m, n, len(quad))
    return EMReport(
        m=m,
        n=n,
        h3_ab_factors=h3.group.invariant_factors,
        h3_ab_order=h3.order,
        quad_order=len(quad),
        quad_order_without_evenness=loose,
        matching=tuple((element, traces[element].values) for element in h3.group.elements()),
        bijective=True,
    )


@dataclass(frozen=True)
class BraidedGrType:
    base: GrType
    eta: Cochain
    symmetric: bool

    @property
    def cocycle(self) -> AbelianCocycle:
        return AbelianCocycle(self.base.h, self.eta)


def check_hexagons(module: PiModule, h: Cochain, eta: Cochain) -> Tuple[Verdict, Verdict]:
    category = SkeletalCategory(module, h, eta.table)
    first = second = Verdict(True)
    zero = module.coeff.zero
    for x, y, z in itertools.product(module.pi.elements, repeat=3):
        holds = category.first_hexagon_holds(x, y, z)
        if holds != (second_identity(h, eta, x, y, z) == zero):
            raise CoherenceMismatch("first hexagon disagrees with its identity", witness=(x, y, z))
        if not holds and first:
            first = Verdict(False, (x, y, z))
        holds = category.second_hexagon_holds(x, y, z)
        if holds != (third_identity(h, eta, x, y, z) == zero):
            raise CoherenceMismatch("second hexagon disagrees with its identity", witness=(x, y, z))
        if not holds and second:
            second = Verdict(False, (x, y, z))
    return first, second


def is_symmetric(eta: Cochain) -> bool:
    coeff = eta.module.coeff
    elements = eta.module.pi.elements
    return all(coeff.add(eta(x, y), eta(y, x)) == coeff.zero for x in elements for y in elements)


def make_braided(module: PiModule, h: Cochain, eta: Cochain) -> BraidedGrType:
    _require_abelian_trivial(module)
    if eta.module != module or eta.degree != 2:
        raise InvalidModule("η must be a 2-cochain over the module")
    try:
        base = make_gr_type(module, h)
    except NotACocycle as exc:
        raise NotAbelianCocycle("h violates the pentagon axiom", witness=exc.witness, identity=1) from exc
    first, second = check_hexagons(module, h, eta)
    if not first:
        raise NotAbelianCocycle("η violates the first hexagon", witness=first.witness, identity=2)
    if not second:
        raise NotAbelianCocycle("η violates the second hexagon", witness=second.witness, identity=3)
    return BraidedGrType(base, eta, is_symmetric(eta))


def braided_equivalence(first: BraidedGrType, second: BraidedGrType) -> Optional[Cochain]:
    """g with ∂_ab(g) = (h' - h, η' - η), or None when the braided types are not equivalent this way."""
    module = first.base.module
    if second.base.module != module:
        return None
    difference = second.cocycle - first.cocycle
    if not difference.h.entries and not difference.eta.entries:
        return Cochain.zero(module, 2)
    units = _unit_cochains(module, 2)
    columns = [d_ab(u).vector() for u in units]
    rows = len(difference.vector())
    matrix = [[column[i] for column in columns] for i in range(rows)]
    solution = modular_solve(matrix, cochain_moduli(module, 2),
                             cochain_moduli(module, 3) + cochain_moduli(module, 2), difference.vector())
    if solution is None:
        return None
    g = Cochain.from_vector(module, 2, solution)
    if d_ab(g) != difference:
        raise CoherenceMismatch("linear solve returned a wrong primitive for ∂_ab")
    return g
