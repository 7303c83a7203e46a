import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.errors import InvalidModule, NotAHomomorphism
from app.models.abelian import (
    AbelianHom,
    FiniteAbelianGroup,
    lattice_quotient,
    modular_kernel_lattice,
    modular_solve,
    scaled_units,
    solve_abelian,
    unit_vectors,
)


@pytest.mark.parametrize(
    "orders, factors",
    [((2, 3), (6,)), ((2, 2), (2, 2)), ((4, 6), (2, 12)), ((1,), ()), ((2, 4, 8), (2, 4, 8)), ((3, 5), (15,))],
)
def test_invariant_factor_form(orders, factors):
    assert FiniteAbelianGroup.from_orders(*orders).invariant_factors == factors


def test_rejects_bad_factors():
    with pytest.raises(InvalidModule):
        FiniteAbelianGroup((1,))
    with pytest.raises(InvalidModule):
        FiniteAbelianGroup((4, 6))


def test_arithmetic_and_enumeration():
    group = FiniteAbelianGroup((2, 4))
    assert group.order == 8
    assert group.exponent == 4
    assert group.add((1, 3), (1, 2)) == (0, 1)
    assert group.neg((1, 1)) == (1, 3)
    assert len(set(group.elements())) == 8
    assert [group.index(a) for a in group.elements()] == list(range(8))
    assert group.element_order((1, 2)) == 2
    assert group.element_order((0, 1)) == 4
    assert str(group) == "Z2 x Z4"
    assert str(FiniteAbelianGroup(())) == "0"


def test_as_group_is_abelian_of_same_order():
    group = FiniteAbelianGroup((2, 2)).as_group()
    assert group.order == 4
    assert group.is_abelian


def test_lattice_quotient_of_z_by_6z():
    quotient = lattice_quotient(1, unit_vectors(1), [[6]])
    assert quotient.group.invariant_factors == (6,)
    assert quotient.project([7]) == quotient.project([1])
    assert quotient.project(list(quotient.lift((1,)))) == (1,)


def test_homomorphism_must_respect_orders():
    with pytest.raises(NotAHomomorphism):
        AbelianHom(FiniteAbelianGroup((2,)), FiniteAbelianGroup((3,)), ((1,),))


def test_kernel_and_cokernel_of_doubling_on_z4():
    z4 = FiniteAbelianGroup((4,))
    doubling = AbelianHom(z4, z4, ((2,),))
    assert doubling.kernel().group.invariant_factors == (2,)
    cokernel, projection = doubling.cokernel()
    assert cokernel.invariant_factors == (2,)
    assert projection((2,)) == (0,)
    assert not doubling.is_injective()
    assert not doubling.is_surjective()


def test_isomorphism_between_z6_presentations():
    z6 = FiniteAbelianGroup((6,))
    assert AbelianHom(z6, z6, ((5,),)).is_isomorphism()
    assert not AbelianHom(z6, z6, ((2,),)).is_isomorphism()


@given(st.integers(min_value=0, max_value=11))
def test_solve_abelian(value):
    z12 = FiniteAbelianGroup((12,))
    tripling = AbelianHom(z12, z12, ((3,),))
    solution = solve_abelian(tripling, (value,))
    if value % 3:
        assert solution is None
    else:
        assert tripling(solution) == (value,)


def test_lattice_quotient_with_unit_pivots():
    quotient = lattice_quotient(3, unit_vectors(3), [[1, 1, 0], [0, 2, 0], [0, 0, 3]])
    assert quotient.group.invariant_factors == (6,)
    assert quotient.project([1, 0, 0]) == quotient.project([0, -1, 0])
    assert quotient.project([0, 2, 0]) == (0,)
    for element in quotient.group.elements():
        assert quotient.project(list(quotient.lift(element))) == element


def test_lattice_quotient_rejects_vectors_outside_the_numerator():
    quotient = lattice_quotient(1, [[2]], [[6]])
    assert quotient.group.invariant_factors == (3,)
    with pytest.raises(InvalidModule):
        quotient.project([1])
    with pytest.raises(InvalidModule):
        lattice_quotient(2, unit_vectors(2), [[2, 0]])


def test_modular_kernel_and_solve():
    kernel = modular_kernel_lattice([[1, 1]], (2, 2), (2,))
    assert all((x + y) % 2 == 0 for x, y in kernel)
    assert lattice_quotient(2, kernel, scaled_units((2, 2))).group.invariant_factors == (2,)
    assert modular_solve([[2]], (4,), (4,), (2,)) in ((1,), (3,))
    assert modular_solve([[2]], (4,), (4,), (1,)) is None
    x, y = modular_solve([[1, 0], [0, 3]], (2, 6), (2, 6), (1, 3))
    assert x % 2 == 1
    assert 3 * y % 6 == 3
