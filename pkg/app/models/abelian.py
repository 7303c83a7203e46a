"""Finite abelian groups in invariant-factor form and the maps between them.

Elements are coordinate tuples reduced modulo the invariant factors. All
kernels, cokernels and subquotients are computed on integer lifts with the
Hermite and Smith normal forms, never by enumeration.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy import igcd, ilcm
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as smith_invariants

from app.errors import InvalidModule, NotAHomomorphism
from app.models.linalg import Matrix, column_hermite_form, hermite_coordinates, integer_solve, smith_normal_form

logger = logging.getLogger(__name__)

Element = Tuple[int, ...]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        for d in factors:
            if d < 2:
                raise InvalidModule(f"invariant factor {d} must be at least 2")
        for d, e in zip(factors, factors[1:]):
            if e % d:
                raise InvalidModule(f"invariant factors must form a divisor chain, got {d} then {e}")

    @classmethod
    def from_orders(cls, *orders: int) -> "FiniteAbelianGroup":
        """Z/n1 x Z/n2 x ... rewritten in invariant-factor form."""
        if not orders:
            return cls(())
        factors = smith_invariants(DomainMatrix.diag([ZZ(n) for n in orders], ZZ))
        return cls(tuple(int(d) for d in factors if d != 1))

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        result = 1
        for d in self.invariant_factors:
            result *= d
        return result

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def reduce(self, vector: Sequence[int]) -> Element:
        if len(vector) != self.rank:
            raise InvalidModule(f"expected {self.rank} coordinates, got {len(vector)}")
        return tuple(int(x) % d for x, d in zip(vector, self.invariant_factors))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg(self, a: Element) -> Element:
        return tuple(-x % d for x, d in zip(a, self.invariant_factors))

    def scale(self, k: int, a: Element) -> Element:
        return tuple(k * x % d for x, d in zip(a, self.invariant_factors))

    def total(self, elements: Sequence[Element]) -> Element:
        result = self.zero
        for a in elements:
            result = self.add(result, a)
        return result

    def elements(self) -> Iterator[Element]:
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def index(self, a: Element) -> int:
        result = 0
        for x, d in zip(a, self.invariant_factors):
            result = result * d + x
        return result

    def element(self, index: int) -> Element:
        coordinates = []
        for d in reversed(self.invariant_factors):
            index, x = divmod(index, d)
            coordinates.append(x)
        return tuple(reversed(coordinates))

    def element_order(self, a: Element) -> int:
        k = 1
        while any(k * x % d for x, d in zip(a, self.invariant_factors)):
            k += 1
        return k

    def unit(self, j: int) -> Element:
        return tuple(1 if i == j else 0 for i in range(self.rank))

    def as_group(self, label: Optional[str] = None):
        """The same group as a Cayley table, element i = self.element(i)."""
        from app.models.groups import FiniteGroup

        elements = list(self.elements())
        table = tuple(tuple(self.index(self.add(a, b)) for b in elements) for a in elements)
        names = tuple(",".join(map(str, a)) if a else "0" for a in elements)
        return FiniteGroup(table, names=names, label=label or str(self))

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class LatticeQuotient:
    """L/R for lattices R ⊆ L ⊆ Z^n with L/R finite.

    ``generators`` holds one vector of L per invariant factor of the
    quotient; ``project`` maps a vector of L to quotient coordinates.
    Vectors are written in the Hermite basis of L first; relations with a
    unit pivot only remove a basis vector, so the Smith form is taken of
    what remains.
    """

    dimension: int
    group: FiniteAbelianGroup
    generators: Tuple[Tuple[int, ...], ...]
    basis: Matrix = field(repr=False)
    relations: Matrix = field(repr=False)
    unit_pivots: Tuple[int, ...] = field(repr=False)
    free: Tuple[int, ...] = field(repr=False)
    quotient_rows: Matrix = field(repr=False)

    def project(self, vector: Sequence[int]) -> Element:
        found = hermite_coordinates(self.basis, vector)
        if found is None:
            raise InvalidModule("vector does not lie in the numerator lattice")
        coordinates = list(found)
        for j in self.unit_pivots:
            q = coordinates[j]
            if q:
                for i, x in enumerate(self.relations[j][:j + 1]):
                    coordinates[i] -= q * x
        reduced = [coordinates[j] for j in self.free]
        return self.group.reduce([sum(c * x for c, x in zip(row, reduced)) for row in self.quotient_rows])

    def lift(self, element: Sequence[int]) -> Tuple[int, ...]:
        result = [0] * self.dimension
        for k, gen in zip(element, self.generators):
            if k:
                for i, x in enumerate(gen):
                    result[i] += k * x
        return tuple(result)


def lattice_quotient(
    dimension: int, numerator: Sequence[Sequence[int]], denominator: Sequence[Sequence[int]]
) -> LatticeQuotient:
    """Quotient of the lattice spanned by ``numerator`` by the one spanned by ``denominator``.

    Both are lists of vectors in Z^dimension, the denominator lattice must lie
    inside the numerator lattice and have full rank.
    """
    if dimension == 0:
        return LatticeQuotient(0, FiniteAbelianGroup(()), (), [], [], (), (), [])
    basis = column_hermite_form(numerator, dimension)
    if len(basis) < dimension:
        raise InvalidModule("numerator lattice is not of full rank")
    coordinates = []
    for vector in denominator:
        found = hermite_coordinates(basis, vector)
        if found is None:
            raise InvalidModule("denominator lattice is not contained in the numerator lattice")
        coordinates.append(found)
    relations = column_hermite_form(coordinates, dimension)
    if len(relations) < dimension:
        raise InvalidModule("quotient is infinite")
    # pivots run down the diagonal; a unit pivot's row is a unit vector
    unit_pivots = tuple(j for j in reversed(range(dimension)) if relations[j][j] == 1)
    free = tuple(j for j in range(dimension) if relations[j][j] != 1)
    block = [[relations[k][j] for k in free] for j in free]
    form = smith_normal_form(block, len(free))
    moduli = form.diagonal
    kept = [i for i, d in enumerate(moduli) if d != 1]
    group = FiniteAbelianGroup(tuple(moduli[i] for i in kept))
    generators = []
    for k in kept:
        weights = [form.u_inv[position][k] for position in range(len(free))]
        generators.append(tuple(
            sum(w * basis[j][r] for w, j in zip(weights, free) if w) for r in range(dimension)
        ))
    logger.debug("lattice quotient in Z^%d has %d free pivots and invariant factors %s",
                 dimension, len(free), group.invariant_factors)
    return LatticeQuotient(
        dimension=dimension,
        group=group,
        generators=tuple(generators),
        basis=basis,
        relations=relations,
        unit_pivots=unit_pivots,
        free=free,
        quotient_rows=[form.u[i] for i in kept],
    )


def unit_vectors(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for i in range(n)] for j in range(n)]


def scaled_units(moduli: Sequence[int]) -> List[List[int]]:
    n = len(moduli)
    return [[moduli[j] if i == j else 0 for i in range(n)] for j in range(n)]


def modular_kernel_lattice(
    matrix: Sequence[Sequence[int]], source_moduli: Sequence[int], target_moduli: Sequence[int]
) -> List[List[int]]:
    """Generators of {x in Z^n : matrix·x = 0 modulo target_moduli}.

    Row i is scaled by e/d_i for the exponent e of the moduli, so the
    condition becomes matrix·x in eZ^m; that only depends on the row lattice,
    whose Hermite basis has at most n rows.
    """
    n = len(source_moduli)
    if not target_moduli:
        return unit_vectors(n)
    exponent = reduce(ilcm, target_moduli, 1)
    scaled = [[exponent // d * x for x in row] for row, d in zip(matrix, target_moduli)]
    rows = column_hermite_form(scaled, n)
    form = smith_normal_form(rows, n)
    diagonal = form.diagonal + [0] * (n - len(form.diagonal))
    kernel = [
        [form.v[i][j] * (exponent // igcd(d, exponent)) for i in range(n)]
        for j, d in enumerate(diagonal)
    ]
    return kernel + scaled_units(source_moduli)


def modular_solve(
    matrix: Sequence[Sequence[int]],
    source_moduli: Sequence[int],
    target_moduli: Sequence[int],
    b: Sequence[int],
) -> Optional[Tuple[int, ...]]:
    """Some x with matrix·x = b modulo target_moduli, reduced modulo source_moduli.

    Solutions are the kernel vectors (x, t) of [matrix | -b] with t = 1
    modulo the exponent of the target.
    """
    n = len(source_moduli)
    if not target_moduli:
        return (0,) * n
    exponent = reduce(ilcm, target_moduli, 1)
    augmented = [list(row) + [-value] for row, value in zip(matrix, b)]
    kernel = modular_kernel_lattice(augmented, list(source_moduli) + [exponent], target_moduli)
    weights = integer_solve([[vector[n] for vector in kernel]], [1])
    if weights is None:
        return None
    solution = [sum(w * vector[i] for w, vector in zip(weights, kernel) if w) for i in range(n)]
    return tuple(x % d for x, d in zip(solution, source_moduli))


@dataclass(frozen=True)
class AbelianHom:
    """Additive map given by a matrix acting on coordinate columns."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(
            tuple(int(x) % e for x in row)
            for row, e in zip(self.matrix, self.target.invariant_factors)
        )
        if len(self.matrix) != self.target.rank or any(len(row) != self.source.rank for row in rows):
            raise NotAHomomorphism(
                f"matrix must be {self.target.rank}x{self.source.rank} for {self.source} -> {self.target}"
            )
        for j, d in enumerate(self.source.invariant_factors):
            for i, e in enumerate(self.target.invariant_factors):
                if d * rows[i][j] % e:
                    raise NotAHomomorphism(
                        f"generator {j} of order {d} cannot map to an element of order not dividing {d}",
                        witness=(j,),
                    )
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def identity(cls, group: FiniteAbelianGroup) -> "AbelianHom":
        return cls(group, group, tuple(group.unit(i) for i in range(group.rank)))

    @classmethod
    def zero(cls, source: FiniteAbelianGroup, target: FiniteAbelianGroup) -> "AbelianHom":
        return cls(source, target, tuple((0,) * source.rank for _ in range(target.rank)))

    @classmethod
    def from_images(cls, source: FiniteAbelianGroup, target: FiniteAbelianGroup,
                    images: Sequence[Sequence[int]]) -> "AbelianHom":
        """The map sending the j-th unit vector of the source to images[j]."""
        return cls(source, target, tuple(tuple(images[j][i] for j in range(source.rank))
                                         for i in range(target.rank)))

    def __call__(self, a: Sequence[int]) -> Element:
        return self.target.reduce([sum(c * x for c, x in zip(row, a)) for row in self.matrix])

    def after(self, other: "AbelianHom") -> "AbelianHom":
        """self ∘ other"""
        if other.target != self.source:
            raise NotAHomomorphism("maps are not composable")
        images = [self(other(other.source.unit(j))) for j in range(other.source.rank)]
        return AbelianHom.from_images(other.source, self.target, images)

    def kernel(self) -> LatticeQuotient:
        lattice = modular_kernel_lattice(self.matrix, self.source.invariant_factors,
                                         self.target.invariant_factors)
        return lattice_quotient(self.source.rank, lattice, scaled_units(self.source.invariant_factors))

    def cokernel(self) -> Tuple[FiniteAbelianGroup, "AbelianHom"]:
        """Cokernel invariant factors with the projection from the target."""
        r = self.target.rank
        columns = [[self.matrix[i][j] for i in range(r)] for j in range(self.source.rank)]
        quotient = lattice_quotient(r, unit_vectors(r), columns + scaled_units(self.target.invariant_factors))
        images = [quotient.project(self.target.unit(i)) for i in range(r)]
        return quotient.group, AbelianHom.from_images(self.target, quotient.group, images)

    def is_injective(self) -> bool:
        return self.kernel().group.order == 1

    def is_surjective(self) -> bool:
        return self.cokernel()[0].order == 1

    def is_isomorphism(self) -> bool:
        return self.source.order == self.target.order and self.is_injective()


def solve_abelian(hom: AbelianHom, target: Sequence[int]) -> Optional[Element]:
    """A preimage of ``target`` under ``hom``, or None when there is none."""
    solution = modular_solve(hom.matrix, hom.source.invariant_factors, hom.target.invariant_factors,
                             hom.target.reduce(target))
    if solution is None:
        return None
    return hom.source.reduce(solution)
