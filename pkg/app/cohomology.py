"""Normalized group cochains with coefficients in a finite Π-module.

Coboundary convention, for every degree n including 0:

    (∂c)(x1, ..., x_{n+1}) = x1·c(x2, ..., x_{n+1})
                             + Σ_i (-1)^i c(x1, ..., x_i x_{i+1}, ..., x_{n+1})
                             + (-1)^{n+1} c(x1, ..., x_n)

Cocycle and coboundary lattices are computed on integer lifts of the
coboundary matrices, so Hⁿ is exact and never enumerated.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from app.config import settings
from app.errors import (
    CapExceeded,
    CoherenceMismatch,
    DegreeTooHigh,
    InvalidModule,
    NotACocycle,
    NotEquivariant,
    NotNormalized,
)
from app.models.abelian import (
    AbelianHom,
    Element,
    FiniteAbelianGroup,
    LatticeQuotient,
    lattice_quotient,
    modular_kernel_lattice,
    modular_solve,
    scaled_units,
)
from app.models.groups import FiniteGroup, GroupHom

logger = logging.getLogger(__name__)

MAX_DEGREE = 3


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exhaustive check; falsy with a witness on failure."""

    ok: bool
    witness: Optional[Tuple] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class PiModule:
    pi: FiniteGroup
    coeff: FiniteAbelianGroup
    action: Tuple[AbelianHom, ...]

    def __post_init__(self):
        if len(self.action) != self.pi.order:
            raise InvalidModule(f"expected {self.pi.order} action maps, got {len(self.action)}")
        for x, a in enumerate(self.action):
            if a.source != self.coeff or a.target != self.coeff:
                raise InvalidModule(f"action of element {x} is not an endomorphism of {self.coeff}", witness=(x,))
        if self.action[0] != AbelianHom.identity(self.coeff):
            raise InvalidModule("the identity must act trivially", witness=(0,))
        for x in self.pi.elements:
            for y in self.pi.elements:
                if self.action[x].after(self.action[y]) != self.action[self.pi.mul(x, y)]:
                    raise InvalidModule("action is not multiplicative", witness=(x, y))

    @classmethod
    def trivial(cls, pi: FiniteGroup, coeff: FiniteAbelianGroup) -> "PiModule":
        return cls(pi, coeff, (AbelianHom.identity(coeff),) * pi.order)

    @classmethod
    def from_matrices(cls, pi: FiniteGroup, coeff: FiniteAbelianGroup,
                      matrices: Sequence[Sequence[Sequence[int]]]) -> "PiModule":
        return cls(pi, coeff, tuple(AbelianHom(coeff, coeff, tuple(tuple(row) for row in m)) for m in matrices))

    @cached_property
    def is_trivial(self) -> bool:
        identity = AbelianHom.identity(self.coeff)
        return all(a == identity for a in self.action)

    def act(self, x: int, a: Sequence[int]) -> Element:
        return self.action[x](a)

    def restrict(self, phi: GroupHom) -> "PiModule":
        """The same coefficients seen as a module over phi.source, acting through phi."""
        if phi.target != self.pi:
            raise InvalidModule("homomorphism does not land in the acting group")
        return PiModule(phi.source, self.coeff, tuple(self.action[phi(x)] for x in phi.source.elements))

    def with_coefficients_of(self, other: "PiModule") -> bool:
        return self.pi == other.pi and self.coeff == other.coeff


@lru_cache(maxsize=None)
def normalized_tuples(order: int, degree: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(itertools.product(range(1, order), repeat=degree))


@lru_cache(maxsize=None)
def _tuple_index(order: int, degree: int) -> Dict[Tuple[int, ...], int]:
    return {t: i for i, t in enumerate(normalized_tuples(order, degree))}


def cochain_dimension(module: PiModule, degree: int) -> int:
    return len(normalized_tuples(module.pi.order, degree)) * module.coeff.rank


def cochain_moduli(module: PiModule, degree: int) -> List[int]:
    return list(module.coeff.invariant_factors) * len(normalized_tuples(module.pi.order, degree))


@dataclass(frozen=True)
class Cochain:
    """A normalized map Πⁿ -> A stored sparsely; absent tuples are zero."""

    module: PiModule
    degree: int
    entries: Tuple[Tuple[Tuple[int, ...], Element], ...] = ()

    @cached_property
    def table(self) -> Dict[Tuple[int, ...], Element]:
        return dict(self.entries)

    @classmethod
    def zero(cls, module: PiModule, degree: int) -> "Cochain":
        return cls(module, degree, ())

    @classmethod
    def from_mapping(cls, module: PiModule, degree: int,
                     mapping: Mapping[Tuple[int, ...], Sequence[int]]) -> "Cochain":
        if not 0 <= degree <= MAX_DEGREE:
            raise DegreeTooHigh(f"degree {degree} is outside 0..{MAX_DEGREE}")
        entries = {}
        for key, value in mapping.items():
            key = tuple(int(x) for x in key)
            if len(key) != degree or any(not 0 <= x < module.pi.order for x in key):
                raise InvalidModule(f"{key} is not a {degree}-tuple of group elements", witness=key)
            value = module.coeff.reduce(value)
            if value == module.coeff.zero:
                continue
            if 0 in key:
                raise NotNormalized("cochain is non-zero on a tuple containing the identity", witness=key)
            entries[key] = value
        return cls(module, degree, tuple(sorted(entries.items())))

    @classmethod
    def from_function(cls, module: PiModule, degree: int,
                      function: Callable[..., Sequence[int]]) -> "Cochain":
        """Evaluate ``function`` on every tuple of non-identity elements."""
        coeff = module.coeff
        entries = []
        for key in normalized_tuples(module.pi.order, degree):
            value = coeff.reduce(function(*key))
            if value != coeff.zero:
                entries.append((key, value))
        return cls(module, degree, tuple(entries))

    @classmethod
    def from_vector(cls, module: PiModule, degree: int, vector: Sequence[int]) -> "Cochain":
        r = module.coeff.rank
        entries = []
        for i, key in enumerate(normalized_tuples(module.pi.order, degree)):
            value = module.coeff.reduce(vector[i * r:(i + 1) * r])
            if value != module.coeff.zero:
                entries.append((key, value))
        return cls(module, degree, tuple(entries))

    def vector(self) -> List[int]:
        r = self.module.coeff.rank
        result = [0] * cochain_dimension(self.module, self.degree)
        index = _tuple_index(self.module.pi.order, self.degree)
        for key, value in self.entries:
            result[index[key] * r:(index[key] + 1) * r] = value
        return result

    def __call__(self, *args: int) -> Element:
        return self.table.get(tuple(args), self.module.coeff.zero)

    def _combine(self, other: "Cochain", sign: int) -> "Cochain":
        if other.module != self.module or other.degree != self.degree:
            raise InvalidModule("cochains live in different groups")
        coeff = self.module.coeff
        values = dict(self.table)
        for key, value in other.entries:
            values[key] = coeff.add(values.get(key, coeff.zero), coeff.scale(sign, value))
        return Cochain(self.module, self.degree,
                       tuple(sorted((k, v) for k, v in values.items() if v != coeff.zero)))

    def __add__(self, other: "Cochain") -> "Cochain":
        return self._combine(other, 1)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self._combine(other, -1)

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def scale(self, k: int) -> "Cochain":
        coeff = self.module.coeff
        return Cochain(self.module, self.degree,
                       tuple((key, coeff.scale(k, v)) for key, v in self.entries if coeff.scale(k, v) != coeff.zero))

    def is_zero(self) -> bool:
        return not self.entries


def coboundary_value(c: Cochain, xs: Sequence[int]) -> Element:
    """(∂c)(xs) evaluated pointwise; valid for every degree."""
    module = c.module
    coeff = module.coeff
    pi = module.pi
    n = c.degree
    total = module.act(xs[0], c(*xs[1:]))
    for i in range(1, n + 1):
        merged = tuple(xs[:i - 1]) + (pi.mul(xs[i - 1], xs[i]),) + tuple(xs[i + 1:])
        term = c(*merged)
        total = coeff.add(total, term) if i % 2 == 0 else coeff.sub(total, term)
    last = c(*xs[:n])
    return coeff.add(total, last) if (n + 1) % 2 == 0 else coeff.sub(total, last)


def coboundary(c: Cochain) -> Cochain:
    if c.degree > 2:
        raise DegreeTooHigh("coboundaries are taken of cochains of degree at most 2")
    return Cochain.from_function(c.module, c.degree + 1, lambda *xs: coboundary_value(c, xs))


def is_cocycle(c: Cochain) -> Verdict:
    zero = c.module.coeff.zero
    for xs in normalized_tuples(c.module.pi.order, c.degree + 1):
        if coboundary_value(c, xs) != zero:
            return Verdict(False, xs)
    return Verdict(True)


@lru_cache(maxsize=32)
def coboundary_matrix(module: PiModule, degree: int) -> Tuple[Tuple[int, ...], ...]:
    """Integer matrix of ∂ from degree to degree + 1 in cochain coordinates."""
    order = module.pi.order
    r = module.coeff.rank
    rows = normalized_tuples(order, degree + 1)
    index = _tuple_index(order, degree)
    columns = len(index) * r
    matrix = []
    for xs in rows:
        block = [[0] * columns for _ in range(r)]

        def add(key: Tuple[int, ...], coefficients: Sequence[Sequence[int]]) -> None:
            if 0 in key:
                return
            base = index[key] * r
            for a in range(r):
                for b in range(r):
                    block[a][base + b] += coefficients[a][b]

        identity = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
        negative = [[-v for v in row] for row in identity]
        add(tuple(xs[1:]), module.action[xs[0]].matrix)
        for i in range(1, degree + 1):
            merged = tuple(xs[:i - 1]) + (module.pi.mul(xs[i - 1], xs[i]),) + tuple(xs[i + 1:])
            add(merged, identity if i % 2 == 0 else negative)
        add(tuple(xs[:degree]), identity if (degree + 1) % 2 == 0 else negative)
        matrix.extend(tuple(row) for row in block)
    logger.debug("coboundary matrix in degree %d is %dx%d", degree, len(matrix), columns)
    return tuple(matrix)


def _check_cap(module: PiModule, cap: Optional[int]) -> None:
    cap = settings.GROUP_ORDER_CAP if cap is None else cap
    if module.pi.order > cap:
        raise CapExceeded(f"|Π| = {module.pi.order} exceeds the group order cap {cap}")


def _cocycle_lattice(module: PiModule, degree: int) -> List[List[int]]:
    matrix = coboundary_matrix(module, degree)
    return modular_kernel_lattice(matrix, cochain_moduli(module, degree), cochain_moduli(module, degree + 1))


def _coboundary_lattice(module: PiModule, degree: int) -> List[List[int]]:
    generators = scaled_units(cochain_moduli(module, degree))
    if degree > 0:
        matrix = coboundary_matrix(module, degree - 1)
        columns = cochain_dimension(module, degree - 1)
        generators += [[row[j] for row in matrix] for j in range(columns)]
    return generators


@dataclass(frozen=True)
class CohomologyGroup:
    """Hⁿ(Π, A) with one representative cocycle per invariant factor."""

    module: PiModule
    degree: int
    group: FiniteAbelianGroup
    representatives: Tuple[Cochain, ...]
    quotient: LatticeQuotient = field(repr=False)

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return self.group.invariant_factors

    @property
    def order(self) -> int:
        return self.group.order

    def project(self, c: Cochain) -> Element:
        """Class coordinates of a cocycle."""
        if c.module != self.module or c.degree != self.degree:
            raise InvalidModule("cocycle lives in a different cochain group")
        verdict = is_cocycle(c)
        if not verdict:
            raise NotACocycle("cannot take the class of a non-cocycle", witness=verdict.witness)
        return self.quotient.project(c.vector())

    def cocycle(self, element: Sequence[int]) -> Cochain:
        """The combination of representatives with the given class coordinates."""
        result = Cochain.zero(self.module, self.degree)
        for k, rep in zip(self.group.reduce(element), self.representatives):
            if k:
                result = result + rep.scale(k)
        return result

    def classes(self) -> Iterator[Tuple[Element, Cochain]]:
        for element in self.group.elements():
            yield element, self.cocycle(element)


def cohomology_group(module: PiModule, degree: int, cap: Optional[int] = None) -> CohomologyGroup:
    if not 0 <= degree <= MAX_DEGREE:
        raise DegreeTooHigh(f"cohomology is computed in degrees 0..{MAX_DEGREE}")
    _check_cap(module, cap)
    return _cohomology_group(module, degree)


@lru_cache(maxsize=64)
def _cohomology_group(module: PiModule, degree: int) -> CohomologyGroup:
    dimension = cochain_dimension(module, degree)
    quotient = lattice_quotient(dimension, _cocycle_lattice(module, degree), _coboundary_lattice(module, degree))
    representatives = tuple(Cochain.from_vector(module, degree, gen) for gen in quotient.generators)
    for rep in representatives:
        verdict = is_cocycle(rep)
        if not verdict:
            raise CoherenceMismatch("cohomology representative is not a cocycle", witness=verdict.witness)
    logger.debug("H^%d over %s with coefficients %s is %s", degree, module.pi.label, module.coeff, quotient.group)
    return CohomologyGroup(module, degree, quotient.group, representatives, quotient)


def class_solve(c: Cochain, zero_target: bool = True) -> Optional[Cochain]:
    """Some t with ∂t = c, or None when the class of c is non-zero.

    With ``zero_target`` the input is first checked to be a cocycle; callers
    that already know it is may pass False.
    """
    if c.degree == 0 or c.degree > MAX_DEGREE:
        raise DegreeTooHigh(f"no primitive for a cochain of degree {c.degree}")
    if zero_target:
        verdict = is_cocycle(c)
        if not verdict:
            raise NotACocycle("only cocycles can be coboundaries", witness=verdict.witness)
    module = c.module
    if c.is_zero():
        return Cochain.zero(module, c.degree - 1)
    solution = modular_solve(
        coboundary_matrix(module, c.degree - 1),
        cochain_moduli(module, c.degree - 1),
        cochain_moduli(module, c.degree),
        c.vector(),
    )
    if solution is None:
        return None
    t = Cochain.from_vector(module, c.degree - 1, solution)
    if coboundary(t) != c:
        raise CoherenceMismatch("linear solve returned a wrong primitive", witness=(c.degree,))
    return t


@dataclass(frozen=True)
class CocycleGroup:
    """Zⁿ(Π, A) as a finite abelian group with generator cocycles."""

    module: PiModule
    degree: int
    group: FiniteAbelianGroup
    generators: Tuple[Cochain, ...]

    def cocycle(self, element: Sequence[int]) -> Cochain:
        result = Cochain.zero(self.module, self.degree)
        for k, gen in zip(self.group.reduce(element), self.generators):
            if k:
                result = result + gen.scale(k)
        return result

    def elements(self) -> Iterator[Cochain]:
        for element in self.group.elements():
            yield self.cocycle(element)


def cocycle_group(module: PiModule, degree: int, cap: Optional[int] = None) -> CocycleGroup:
    if not 0 <= degree <= MAX_DEGREE:
        raise DegreeTooHigh(f"cocycles are computed in degrees 0..{MAX_DEGREE}")
    _check_cap(module, cap)
    quotient = lattice_quotient(
        cochain_dimension(module, degree),
        _cocycle_lattice(module, degree),
        scaled_units(cochain_moduli(module, degree)),
    )
    generators = tuple(Cochain.from_vector(module, degree, gen) for gen in quotient.generators)
    return CocycleGroup(module, degree, quotient.group, generators)


def check_equivariant(f: AbelianHom, source: PiModule, target: PiModule, phi: Optional[GroupHom] = None) -> None:
    """f(x·a) = φ(x)·f(a) on generators of A; raises NotEquivariant."""
    if f.source != source.coeff or f.target != target.coeff:
        raise NotEquivariant("coefficient map has the wrong source or target")
    for x in source.pi.elements:
        y = phi(x) if phi is not None else x
        for j in range(source.coeff.rank):
            a = source.coeff.unit(j)
            if f(source.act(x, a)) != target.act(y, f(a)):
                raise NotEquivariant("coefficient map does not commute with the action", witness=(x, j))


def pushforward(f: AbelianHom, c: Cochain, target: Optional[PiModule] = None) -> Cochain:
    """f_*c(xs) = f(c(xs)); ``target`` is the module over the same Π receiving the values."""
    if target is None:
        if not c.module.is_trivial:
            raise NotEquivariant("a target module is required for a non-trivial action")
        target = PiModule.trivial(c.module.pi, f.target)
    if target.pi != c.module.pi:
        raise NotEquivariant("target module is over a different group")
    check_equivariant(f, c.module, target)
    return Cochain.from_mapping(target, c.degree, {key: f(value) for key, value in c.entries})


def pullback(phi: GroupHom, c: Cochain) -> Cochain:
    """φ*c(xs) = c(φxs), a cochain over the module restricted along φ."""
    module = c.module.restrict(phi)
    return Cochain.from_function(module, c.degree, lambda *xs: c(*(phi(x) for x in xs)))


def module_isomorphisms(source: PiModule, target: PiModule) -> List[AbelianHom]:
    """All isomorphisms of Π-modules source -> target (same Π)."""
    if source.pi != target.pi or source.coeff.order != target.coeff.order:
        return []
    candidates = []
    for d in source.coeff.invariant_factors:
        candidates.append([b for b in target.coeff.elements() if target.coeff.scale(d, b) == target.coeff.zero])
    result = []
    for images in itertools.product(*candidates):
        f = AbelianHom.from_images(source.coeff, target.coeff, images)
        if not f.is_isomorphism():
            continue
        try:
            check_equivariant(f, source, target)
        except NotEquivariant:
            continue
        result.append(f)
    return result
