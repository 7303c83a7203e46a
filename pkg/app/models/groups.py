"""Finite groups given by Cayley tables.

The identity is always element 0. Groups are immutable and hashable on their
table, so derived data (automorphisms, generating sets) is cached per table.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import isprime

from app.config import settings
from app.errors import (
    CapExceeded,
    InvalidInput,
    NoIdentityAtZero,
    NoInverse,
    NotAHomomorphism,
    NotAssociative,
    NotClosed,
)
from app.models.abelian import FiniteAbelianGroup, lattice_quotient, unit_vectors

logger = logging.getLogger(__name__)


class FiniteGroup:
    """A group on 0..n-1 with multiplication table ``table[a][b] = a·b``.

    The constructor trusts its input; use ``validate_group`` for anything
    coming from outside the package.
    """

    def __init__(self, table: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None, label: str = ""):
        self.table: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.names: Tuple[str, ...] = tuple(names) if names else tuple("e" if i == 0 else str(i) for i in range(self.order))
        self.label = label or f"group of order {self.order}"
        self._inverse = tuple(row.index(0) for row in self.table)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, *factors: int) -> int:
        result = 0
        for a in factors:
            result = self.table[result][a]
        return result

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def power(self, a: int, k: int) -> int:
        base = a if k >= 0 else self.inv(a)
        result = 0
        for _ in range(abs(k)):
            result = self.table[result][base]
        return result

    def conjugate(self, c: int, a: int) -> int:
        """c·a·c⁻¹"""
        return self.table[self.table[c][a]][self._inverse[c]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def name(self, a: int) -> str:
        return self.names[a]

    @cached_property
    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in range(a))

    @cached_property
    def order_profile(self) -> Tuple[Tuple[int, int], ...]:
        counts: Dict[int, int] = {}
        for a in self.elements:
            k = self.element_order(a)
            counts[k] = counts.get(k, 0) + 1
        return tuple(sorted(counts.items()))


def validate_group(table: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None, label: str = "") -> FiniteGroup:
    """Check the group axioms on a Cayley table and build the group."""
    n = len(table)
    if n == 0:
        raise NotClosed("table is empty")
    for i, row in enumerate(table):
        if len(row) != n:
            raise NotClosed(f"row {i} has {len(row)} entries, expected {n}", witness=(i,))
        for j, value in enumerate(row):
            if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < n:
                raise NotClosed(f"entry {value!r} is not an element index", witness=(i, j))
    if names is not None and len(names) != n:
        raise InvalidInput(f"{len(names)} element names given for a group of order {n}")
    for j in range(n):
        if table[0][j] != j or table[j][0] != j:
            raise NoIdentityAtZero("element 0 does not act as the identity", witness=(j,))
    for a in range(n):
        if not any(table[a][b] == 0 and table[b][a] == 0 for b in range(n)):
            raise NoInverse(f"element {a} has no two-sided inverse", witness=(a,))
    for a in range(n):
        row_a = table[a]
        for b in range(n):
            ab = row_a[b]
            row_ab = table[ab]
            row_b = table[b]
            for c in range(n):
                if row_ab[c] != row_a[row_b[c]]:
                    raise NotAssociative("multiplication is not associative", witness=(a, b, c))
    group = FiniteGroup(table, names=names, label=label)
    logger.debug("validated %s", group)
    return group


def center(group: FiniteGroup) -> List[int]:
    table = group.table
    return [z for z in group.elements if all(table[z][a] == table[a][z] for a in group.elements)]


def subgroup_generated(group: FiniteGroup, generators: Iterable[int]) -> List[int]:
    generators = list(generators)
    seen = {0}
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for s in generators:
            b = group.mul(a, s)
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return sorted(seen)


@lru_cache(maxsize=None)
def generating_set(group: FiniteGroup, elements: Optional[Tuple[int, ...]] = None) -> Tuple[int, ...]:
    """Greedy generating set of ``elements`` (default: the whole group), smallest indices first."""
    pool = group.elements if elements is None else elements
    generators: List[int] = []
    span = {0}
    for a in pool:
        if a not in span:
            generators.append(a)
            span = set(subgroup_generated(group, generators))
    return tuple(generators)


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    map: Tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    @classmethod
    def identity(cls, group: FiniteGroup) -> "GroupHom":
        return cls(group, group, tuple(group.elements))

    @classmethod
    def trivial(cls, source: FiniteGroup, target: FiniteGroup) -> "GroupHom":
        return cls(source, target, (0,) * source.order)

    def after(self, other: "GroupHom") -> "GroupHom":
        """self ∘ other"""
        if other.target != self.source:
            raise NotAHomomorphism("maps are not composable")
        return GroupHom(other.source, self.target, tuple(self.map[x] for x in other.map))

    def kernel(self) -> List[int]:
        return [a for a in self.source.elements if self.map[a] == 0]

    def image(self) -> List[int]:
        return sorted(set(self.map))

    def is_injective(self) -> bool:
        return len(set(self.map)) == self.source.order

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.order

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def make_hom(source: FiniteGroup, target: FiniteGroup, images: Sequence[int]) -> GroupHom:
    """Build a homomorphism from its full list of images, checking every product."""
    if len(images) != source.order:
        raise NotAHomomorphism(f"expected {source.order} images, got {len(images)}")
    if any(not 0 <= x < target.order for x in images):
        raise NotAHomomorphism("image index out of range")
    if images[0] != 0:
        raise NotAHomomorphism("the identity must map to the identity", witness=(0,))
    for a in source.elements:
        for b in source.elements:
            if images[source.mul(a, b)] != target.mul(images[a], images[b]):
                raise NotAHomomorphism("map does not preserve products", witness=(a, b))
    return GroupHom(source, target, tuple(int(x) for x in images))


def _extend(source: FiniteGroup, target: FiniteGroup, generators: Sequence[int],
            assignment: Sequence[int]) -> Optional[Tuple[int, ...]]:
    # breadth-first over the Cayley graph; a consistent labelling of every edge is a homomorphism
    image: List[Optional[int]] = [None] * source.order
    image[0] = 0
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for s, t in zip(generators, assignment):
            b = source.mul(a, s)
            value = target.mul(image[a], t)
            if image[b] is None:
                image[b] = value
                queue.append(b)
            elif image[b] != value:
                return None
    return tuple(image)


def homomorphisms(source: FiniteGroup, target: FiniteGroup, bijective: bool = False) -> List[GroupHom]:
    """Every homomorphism source -> target, sorted by image tuple."""
    if bijective and source.order != target.order:
        return []
    generators = generating_set(source)
    candidates = []
    for s in generators:
        k = source.element_order(s)
        if bijective:
            candidates.append([t for t in target.elements if target.element_order(t) == k])
        else:
            candidates.append([t for t in target.elements if k % target.element_order(t) == 0])
    found = set()
    for assignment in itertools.product(*candidates):
        image = _extend(source, target, generators, assignment)
        if image is None:
            continue
        if bijective and len(set(image)) != source.order:
            continue
        found.add(image)
    logger.debug("%d homomorphisms %s -> %s", len(found), source.label, target.label)
    return [GroupHom(source, target, image) for image in sorted(found)]


@dataclass(frozen=True)
class Quotient:
    group: FiniteGroup
    coset_of: Tuple[int, ...]
    reps: Tuple[int, ...]

    def projection(self, source: FiniteGroup) -> GroupHom:
        return GroupHom(source, self.group, self.coset_of)


def quotient_group(group: FiniteGroup, normal: Iterable[int], label: str = "") -> Quotient:
    """G/N with cosets ordered by their smallest element, which is also the chosen representative."""
    subgroup = sorted(set(normal))
    members = set(subgroup)
    if 0 not in members or any(group.mul(a, b) not in members for a in subgroup for b in subgroup):
        raise InvalidInput("elements do not form a subgroup")
    for g in group.elements:
        for n in subgroup:
            if group.conjugate(g, n) not in members:
                raise InvalidInput("subgroup is not normal", witness=(g, n))
    coset_of: List[Optional[int]] = [None] * group.order
    reps: List[int] = []
    for a in group.elements:
        if coset_of[a] is None:
            for n in subgroup:
                coset_of[group.mul(a, n)] = len(reps)
            reps.append(a)
    table = [[coset_of[group.mul(r, s)] for s in reps] for r in reps]
    names = [group.name(r) for r in reps]
    return Quotient(FiniteGroup(table, names=names, label=label or f"{group.label}/N"), tuple(coset_of), tuple(reps))


@dataclass(frozen=True)
class AutData:
    """Aut(G) with In(G) and Out(G) = Aut/In.

    ``maps[i]`` is the i-th automorphism as an image tuple; maps are sorted so
    that index 0 is the identity. ``out_reps[k]`` is the smallest automorphism
    index in the k-th outer class and ``inner_of[c]`` is the index of
    conjugation by c.
    """

    group: FiniteGroup
    maps: Tuple[Tuple[int, ...], ...]
    aut: FiniteGroup
    inner: Tuple[int, ...]
    out: FiniteGroup
    out_reps: Tuple[int, ...]
    coset_of: Tuple[int, ...]
    inner_of: Tuple[int, ...]

    def index(self, image: Sequence[int]) -> int:
        return self.aut_index[tuple(image)]

    @cached_property
    def aut_index(self) -> Dict[Tuple[int, ...], int]:
        return {m: i for i, m in enumerate(self.maps)}

    def out_class(self, image: Sequence[int]) -> int:
        return self.coset_of[self.index(image)]

    def lift(self, out_element: int) -> Tuple[int, ...]:
        return self.maps[self.out_reps[out_element]]

    def hom(self, index: int) -> GroupHom:
        return GroupHom(self.group, self.group, self.maps[index])


def conjugation_map(group: FiniteGroup, c: int) -> Tuple[int, ...]:
    return tuple(group.conjugate(c, a) for a in group.elements)


def compose_maps(outer: Sequence[int], inner: Sequence[int]) -> Tuple[int, ...]:
    return tuple(outer[x] for x in inner)


@lru_cache(maxsize=64)
def _automorphisms(group: FiniteGroup) -> AutData:
    maps = tuple(h.map for h in homomorphisms(group, group, bijective=True))
    index = {m: i for i, m in enumerate(maps)}
    table = [[index[compose_maps(a, b)] for b in maps] for a in maps]
    names = ["id" if i == 0 else f"a{i}" for i in range(len(maps))]
    aut = FiniteGroup(table, names=names, label=f"Aut({group.label})")
    inner_of = tuple(index[conjugation_map(group, c)] for c in group.elements)
    inner = tuple(sorted(set(inner_of)))
    quotient = quotient_group(aut, inner, label=f"Out({group.label})")
    out_names = ["id" if k == 0 else f"o{k}" for k in range(len(quotient.reps))]
    out = FiniteGroup(quotient.group.table, names=out_names, label=quotient.group.label)
    logger.debug("|Aut(%s)| = %d, |In| = %d, |Out| = %d", group.label, len(maps), len(inner), out.order)
    return AutData(group, maps, aut, inner, out, quotient.reps, quotient.coset_of, inner_of)


def automorphisms(group: FiniteGroup, cap: Optional[int] = None) -> AutData:
    cap = settings.GROUP_ORDER_CAP if cap is None else cap
    if group.order > cap:
        raise CapExceeded(f"|G| = {group.order} exceeds the group order cap {cap}")
    return _automorphisms(group)


@dataclass(frozen=True)
class AbelianStructure:
    """An abelian subgroup identified with a FiniteAbelianGroup in invariant-factor form."""

    group: FiniteAbelianGroup
    to_vector: Dict[int, Tuple[int, ...]]
    from_vector: Dict[Tuple[int, ...], int]

    def vector(self, a: int) -> Tuple[int, ...]:
        return self.to_vector[a]

    def element(self, v: Sequence[int]) -> int:
        return self.from_vector[self.group.reduce(v)]


def abelian_structure(group: FiniteGroup, elements: Optional[Iterable[int]] = None) -> AbelianStructure:
    """Invariant factors of an abelian subgroup via the Smith form of its table presentation."""
    members = sorted(set(group.elements if elements is None else elements))
    if not members or members[0] != 0:
        raise InvalidInput("an abelian subgroup must contain the identity")
    member_set = set(members)
    for a in members:
        for b in members:
            if group.mul(a, b) not in member_set:
                raise InvalidInput("elements are not closed under multiplication", witness=(a, b))
            if group.mul(a, b) != group.mul(b, a):
                raise InvalidInput("elements do not commute", witness=(a, b))
    nonzero = members[1:]
    position = {a: i for i, a in enumerate(nonzero)}
    k = len(nonzero)

    def unit(a: int) -> List[int]:
        v = [0] * k
        if a:
            v[position[a]] += 1
        return v

    generators = generating_set(group, tuple(members))
    relations = []
    for a in members:
        for s in generators:
            relation = unit(a)
            for i, x in enumerate(unit(s)):
                relation[i] += x
            for i, x in enumerate(unit(group.mul(a, s))):
                relation[i] -= x
            relations.append(relation)
    quotient = lattice_quotient(k, unit_vectors(k), relations)
    to_vector = {a: quotient.project(unit(a)) for a in members}
    from_vector = {v: a for a, v in to_vector.items()}
    if quotient.group.order != len(members) or len(from_vector) != len(members):
        raise InvalidInput("presentation does not recover the subgroup")
    return AbelianStructure(quotient.group, to_vector, from_vector)


# Small groups

def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], label=f"Z{n}")


def direct_product(left: FiniteGroup, right: FiniteGroup) -> FiniteGroup:
    """Element (a, b) has index a·|right| + b."""
    m = right.order
    pairs = [(a, b) for a in left.elements for b in right.elements]
    table = [[left.mul(a, c) * m + right.mul(b, d) for (c, d) in pairs] for (a, b) in pairs]
    names = [f"({left.name(a)},{right.name(b)})" for a, b in pairs]
    return FiniteGroup(table, names=names, label=f"{left.label} x {right.label}")


def abelian_group(*orders: int) -> FiniteGroup:
    return FiniteAbelianGroup.from_orders(*orders).as_group()


def from_permutations(permutations: Sequence[Sequence[int]], label: str = "") -> FiniteGroup:
    """The group generated by permutations of 0..d-1, elements sorted so the identity comes first."""
    degree = len(permutations[0])
    identity = tuple(range(degree))
    seen = {identity}
    queue = deque([identity])
    while queue:
        p = queue.popleft()
        for s in permutations:
            q = tuple(p[s[i]] for i in range(degree))
            if q not in seen:
                seen.add(q)
                queue.append(q)
    perms = sorted(seen)
    index = {p: i for i, p in enumerate(perms)}
    # (p·q)(i) = p(q(i))
    table = [[index[tuple(p[q[i]] for i in range(degree))] for q in perms] for p in perms]
    names = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(table, names=names, label=label)


def symmetric_group(n: int) -> FiniteGroup:
    if n < 2:
        return cyclic_group(1)
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return from_permutations([cycle, swap], label=f"S{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; r^k s^e has index e·n + k."""

    def mul(a: int, b: int) -> int:
        e, k = divmod(a, n)
        f, l = divmod(b, n)
        # s r^l = r^-l s
        shift = (k - l) % n if e else (k + l) % n
        return ((e + f) % 2) * n + shift

    names = [("r" if k else "") + (str(k) if k > 1 else "") + ("s" if e else "") or "e"
             for e in range(2) for k in range(n)]
    return FiniteGroup([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)], names=names, label=f"D{n}")


def quaternion_group() -> FiniteGroup:
    units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    # products of the basis units ±1, i, j, k as (sign, unit)
    basis = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}

    def split(u: str) -> Tuple[int, str]:
        return (-1, u[1:]) if u.startswith("-") else (1, u)

    def mul(u: str, v: str) -> str:
        su, bu = split(u)
        sv, bv = split(v)
        sign, base = basis[(bu, bv)]
        return base if su * sv * sign == 1 else "-" + base

    table = [[units.index(mul(u, v)) for v in units] for u in units]
    return FiniteGroup(table, names=units, label="Q8")


def identify(group: FiniteGroup) -> str:
    """Order-profile description; not an isomorphism test."""
    n = group.order
    if n == 1:
        return "trivial group"
    if group.is_abelian:
        structure = abelian_structure(group).group
        factors = structure.invariant_factors
        if len(factors) == 1:
            return f"cyclic of order {n}"
        if len(set(factors)) == 1 and isprime(factors[0]):
            return f"elementary abelian of order {n}"
        return f"abelian {structure} of order {n}"
    profile = ", ".join(f"{count} of order {k}" for k, count in group.order_profile)
    return f"non-abelian of order {n} ({profile})"
