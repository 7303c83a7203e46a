import pytest

from app.errors import CapExceeded, InvalidInput, NoIdentityAtZero, NoInverse, NotAHomomorphism, NotAssociative, NotClosed
from app.models.groups import (
    abelian_group,
    abelian_structure,
    automorphisms,
    center,
    cyclic_group,
    direct_product,
    generating_set,
    homomorphisms,
    identify,
    make_hom,
    quotient_group,
    subgroup_generated,
    validate_group,
)


def test_validate_accepts_cyclic_table(z4):
    group = validate_group([list(row) for row in z4.table], label="Z4")
    assert group == z4
    assert group.label == "Z4"


def test_validate_rejects_bad_entry():
    with pytest.raises(NotClosed):
        validate_group([[0, 1], [1, 2]])


def test_validate_rejects_ragged_table():
    with pytest.raises(NotClosed):
        validate_group([[0, 1], [1]])


def test_validate_requires_identity_at_zero():
    with pytest.raises(NoIdentityAtZero):
        validate_group([[1, 0], [0, 1]])


def test_validate_requires_inverses():
    with pytest.raises(NoInverse):
        validate_group([[0, 1, 2], [1, 1, 1], [2, 1, 0]])


def test_validate_reports_associativity_witness():
    with pytest.raises(NotAssociative) as info:
        validate_group([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert info.value.witness == (1, 1, 2)


@pytest.mark.parametrize("fixture", ["z1", "z2", "z3", "z4", "z6", "v4", "s3", "d4", "q8"])
def test_catalog_groups_are_groups(fixture, request):
    group = request.getfixturevalue(fixture)
    assert validate_group([list(row) for row in group.table]) == group


def test_group_operations(s3):
    for a in s3.elements:
        assert s3.mul(a, s3.inv(a)) == 0
        assert s3.power(a, s3.element_order(a)) == 0
    assert not s3.is_abelian
    assert sorted(s3.element_order(a) for a in s3.elements) == [1, 2, 2, 2, 3, 3]


@pytest.mark.parametrize(
    "fixture, order",
    [("z1", 1), ("z2", 1), ("z3", 2), ("z4", 2), ("z6", 2), ("v4", 6), ("s3", 6), ("d4", 8), ("q8", 24)],
)
def test_automorphism_group_orders(fixture, order, request):
    assert automorphisms(request.getfixturevalue(fixture)).aut.order == order


def test_s3_is_complete(s3):
    data = automorphisms(s3)
    assert len(data.inner) == 6
    assert data.out.order == 1


def test_outer_automorphisms_of_d4_and_q8(d4, q8):
    assert automorphisms(d4).out.order == 2
    assert len(automorphisms(d4).inner) == 4
    assert automorphisms(q8).out.order == 6


def test_aut_data_conventions(d4):
    data = automorphisms(d4)
    assert data.maps[0] == tuple(d4.elements)
    assert all(data.coset_of[i] == 0 for i in data.inner)
    for k, rep in enumerate(data.out_reps):
        assert data.coset_of[rep] == k
        assert rep == min(i for i in range(len(data.maps)) if data.coset_of[i] == k)


def test_automorphism_cap(z4):
    with pytest.raises(CapExceeded):
        automorphisms(direct_product(z4, z4), cap=12)


@pytest.mark.parametrize("fixture, order", [("s3", 1), ("d4", 2), ("q8", 2), ("z6", 6), ("v4", 4)])
def test_center_orders(fixture, order, request):
    assert len(center(request.getfixturevalue(fixture))) == order


def test_subgroups(d4):
    assert sorted(subgroup_generated(d4, [1])) == [0, 1, 2, 3]
    assert sorted(subgroup_generated(d4, generating_set(d4))) == list(d4.elements)


@pytest.mark.parametrize(
    "source, target, count",
    [("z2", "z4", 2), ("z4", "z2", 2), ("v4", "z2", 4), ("z3", "s3", 3), ("s3", "z2", 2), ("z2", "v4", 4)],
)
def test_homomorphism_counts(source, target, count, request):
    homs = homomorphisms(request.getfixturevalue(source), request.getfixturevalue(target))
    assert len(homs) == count
    assert [h.map for h in homs] == sorted(h.map for h in homs)


def test_make_hom_checks_products(z2, z4):
    assert make_hom(z2, z4, [0, 2]).map == (0, 2)
    with pytest.raises(NotAHomomorphism):
        make_hom(z2, z4, [0, 1])


def test_quotient_of_d4_by_center(d4):
    quotient = quotient_group(d4, center(d4))
    assert quotient.group.order == 4
    assert quotient.group.is_abelian
    assert list(quotient.reps) == sorted(quotient.reps)
    assert quotient.projection(d4).map == quotient.coset_of


def test_quotient_requires_normal_subgroup(s3):
    transposition = next(a for a in s3.elements if s3.element_order(a) == 2)
    with pytest.raises(InvalidInput):
        quotient_group(s3, [0, transposition])


@pytest.mark.parametrize("n, factors", [(4, (4,)), (6, (6,))])
def test_abelian_structure_of_cyclic(n, factors):
    structure = abelian_structure(cyclic_group(n))
    assert structure.group.invariant_factors == factors
    assert structure.vector(0) == structure.group.zero


def test_abelian_structure_is_additive(v4):
    structure = abelian_structure(v4)
    assert structure.group.invariant_factors == (2, 2)
    for a in v4.elements:
        for b in v4.elements:
            assert structure.vector(v4.mul(a, b)) == structure.group.add(structure.vector(a), structure.vector(b))


def test_abelian_structure_of_center(q8):
    assert abelian_structure(q8, center(q8)).group.invariant_factors == (2,)


@pytest.mark.parametrize(
    "fixture, description",
    [
        ("z1", "trivial group"),
        ("z4", "cyclic of order 4"),
        ("v4", "elementary abelian of order 4"),
        ("z6", "cyclic of order 6"),
    ],
)
def test_identify(fixture, description, request):
    assert identify(request.getfixturevalue(fixture)) == description


def test_identify_non_abelian(s3, d4, q8):
    assert identify(s3).startswith("non-abelian of order 6")
    assert identify(d4) != identify(q8)


def test_identify_elementary_abelian_needs_a_prime():
    assert identify(abelian_group(2, 2, 2)) == "elementary abelian of order 8"
    assert identify(abelian_group(3, 3)) == "elementary abelian of order 9"
    assert identify(abelian_group(4, 4)).startswith("abelian ")
