import itertools

import pytest

from app.cohomology import Cochain, PiModule, check_equivariant, class_solve, coboundary, cohomology_group
from app.errors import NotEquivariant, ObstructionNonzero, SourceTargetMismatch
from app.functors import (
    GrFunctorData,
    are_homotopic,
    braided_compatible,
    classify,
    classifying_data,
    compose,
    equivalence,
    functor_automorphisms,
    homotopy_classes,
    identity_functor,
    is_gr_functor,
    obstruction,
    obstruction_class,
    realize,
)
from app.models.abelian import AbelianHom, FiniteAbelianGroup
from app.models.groups import GroupHom, cyclic_group, homomorphisms, make_hom
from app.skeletal import GrType, make_gr_type

Z2 = FiniteAbelianGroup((2,))
Z3 = FiniteAbelianGroup((3,))


def plain(pi, coeff) -> GrType:
    module = PiModule.trivial(pi, coeff)
    return make_gr_type(module, Cochain.zero(module, 3))


def twisted_z2() -> GrType:
    module = PiModule.trivial(cyclic_group(2), Z2)
    return make_gr_type(module, Cochain.from_mapping(module, 3, {(1, 1, 1): [1]}))


def generator_type(order: int, multiple: int = 1) -> GrType:
    module = PiModule.trivial(cyclic_group(order), FiniteAbelianGroup((order,)))
    h = cohomology_group(module, 3).cocycle((1,))
    return make_gr_type(module, h.scale(multiple))


@pytest.mark.parametrize("order, count", [(2, 2), (3, 3), (4, 4)])
def test_classify_counts_h2(order, count):
    gr_type = plain(cyclic_group(order), FiniteAbelianGroup((order,)))
    phi = GroupHom.identity(gr_type.pi)
    functors = classify(phi, AbelianHom.identity(gr_type.coeff), gr_type, gr_type)
    assert len(functors) == count
    assert all(is_gr_functor(f) for f in functors)
    assert len(homotopy_classes(functors)) == count


def test_automorphisms_are_one_cocycles():
    gr_type = plain(cyclic_group(2), Z2)
    functor = identity_functor(gr_type)
    automorphisms = functor_automorphisms(functor)
    assert len(automorphisms) == 2
    assert all(coboundary(t).is_zero() for t in automorphisms)


def test_twisted_to_trivial_is_obstructed():
    source = twisted_z2()
    target = plain(cyclic_group(2), Z2)
    phi = GroupHom.identity(source.pi)
    f = AbelianHom.identity(Z2)
    result = obstruction_class(phi, f, source, target)
    assert not result.vanishes
    assert result.coordinates == (1,)
    with pytest.raises(ObstructionNonzero) as info:
        realize(phi, f, source, target)
    assert info.value.coordinates == (1,)


def test_zero_map_kills_the_obstruction():
    source = twisted_z2()
    target = plain(cyclic_group(2), Z2)
    functor = realize(GroupHom.identity(source.pi), AbelianHom.zero(Z2, Z2), source, target)
    assert is_gr_functor(functor)


def test_trivial_phi_pulls_back_to_zero(z4):
    # the generator of H³(Z2, Z2) inflates to zero along Z4 -> Z2
    target = twisted_z2()
    source = plain(z4, Z2)
    phi = make_hom(z4, target.pi, [0, 1, 0, 1])
    functor = realize(phi, AbelianHom.zero(Z2, Z2), source, target)
    assert is_gr_functor(functor)


def test_ends_are_checked(z3):
    source = plain(cyclic_group(2), Z2)
    target = plain(z3, Z2)
    with pytest.raises(SourceTargetMismatch):
        obstruction_class(GroupHom.identity(source.pi), AbelianHom.identity(Z2), source, target)


def test_equivariance_is_checked():
    sign = PiModule.from_matrices(cyclic_group(2), Z3, [[[1]], [[2]]])
    source = make_gr_type(sign, Cochain.zero(sign, 3))
    target = plain(cyclic_group(2), Z3)
    with pytest.raises(NotEquivariant):
        realize(GroupHom.identity(source.pi), AbelianHom.identity(Z3), source, target)


def test_compose_with_identity():
    gr_type = generator_type(3)
    functors = classify(GroupHom.identity(gr_type.pi), AbelianHom.identity(Z3), gr_type, gr_type)
    unit = identity_functor(gr_type)
    for functor in functors:
        left = compose(unit, functor)
        right = compose(functor, unit)
        assert (left.phi, left.f, left.g) == (functor.phi, functor.f, functor.g)
        assert (right.phi, right.f, right.g) == (functor.phi, functor.f, functor.g)


def test_compose_checks_ends():
    first = identity_functor(plain(cyclic_group(2), Z2))
    second = identity_functor(plain(cyclic_group(3), Z2))
    with pytest.raises(SourceTargetMismatch):
        compose(second, first)


def test_homotopic_by_coboundary():
    gr_type = plain(cyclic_group(3), Z3)
    functor = identity_functor(gr_type)
    t = Cochain.from_mapping(functor.module, 1, {(1,): [1]})
    shifted = GrFunctorData(gr_type, gr_type, functor.phi, functor.f, functor.g + coboundary(t))
    assert is_gr_functor(shifted)
    homotopy = are_homotopic(functor, shifted)
    assert homotopy is not None
    assert coboundary(homotopy.t) == shifted.g - functor.g


def test_different_classes_are_not_homotopic():
    gr_type = plain(cyclic_group(2), Z2)
    first, second = classify(GroupHom.identity(gr_type.pi), AbelianHom.identity(Z2), gr_type, gr_type)
    assert are_homotopic(first, second) is None
    assert are_homotopic(first, first) is not None


def test_wrong_g_is_rejected():
    gr_type = plain(cyclic_group(2), Z2)
    functor = identity_functor(gr_type)
    broken = GrFunctorData(gr_type, twisted_z2(), functor.phi, functor.f, functor.g)
    verdict = is_gr_functor(broken)
    assert not verdict
    assert verdict.witness == (1, 1, 1)


def test_multiples_of_the_generator_are_equivalent():
    source = generator_type(3)
    target = generator_type(3, 2)
    functor = equivalence(source, target)
    assert functor is not None
    assert functor.f.matrix == ((2,),)
    assert is_gr_functor(functor)


def test_inequivalent_types():
    assert equivalence(plain(cyclic_group(2), Z2), twisted_z2()) is None
    assert equivalence(plain(cyclic_group(2), Z2), plain(cyclic_group(3), Z2)) is None


def test_classifying_data():
    data = classifying_data(generator_type(3))
    assert data.cohomology.invariant_factors == (3,)
    assert data.coordinates == (1,)
    assert classifying_data(twisted_z2()).coordinates == (1,)
    assert classifying_data(plain(cyclic_group(2), Z2)).coordinates == (0,)


def test_braided_compatibility():
    gr_type = plain(cyclic_group(2), Z2)
    functor = identity_functor(gr_type)
    zero = Cochain.zero(gr_type.module, 2)
    eta = Cochain.from_mapping(gr_type.module, 2, {(1, 1): [1]})
    assert braided_compatible(functor, eta, eta)
    verdict = braided_compatible(functor, zero, eta)
    assert not verdict
    assert verdict.witness == (1, 1)


V4 = FiniteAbelianGroup((2, 2))
Z4 = FiniteAbelianGroup((4,))
ROTATION = [[0, 1], [1, 1]]


def acting_modules():
    z2, z3 = cyclic_group(2), cyclic_group(3)
    identity = [[1, 0], [0, 1]]
    return [
        PiModule.trivial(z2, Z2),
        PiModule.from_matrices(z2, Z3, [[[1]], [[2]]]),
        PiModule.from_matrices(z2, Z4, [[[1]], [[3]]]),
        PiModule.from_matrices(z2, V4, [identity, [[0, 1], [1, 0]]]),
        PiModule.trivial(z3, Z3),
        PiModule.from_matrices(z3, V4, [identity, ROTATION, [[1, 1], [1, 0]]]),
    ]


def acting_types():
    types = []
    for module in acting_modules():
        types.append(make_gr_type(module, Cochain.zero(module, 3)))
        h3 = cohomology_group(module, 3)
        if h3.order > 1:
            generator = [1] + [0] * (len(h3.invariant_factors) - 1)
            types.append(make_gr_type(module, h3.cocycle(generator)))
    return types


def coefficient_maps(source: FiniteAbelianGroup, target: FiniteAbelianGroup):
    choices = [[b for b in target.elements() if target.scale(d, b) == target.zero] for d in source.invariant_factors]
    return [AbelianHom.from_images(source, target, images) for images in itertools.product(*choices)]


def equivariant_types(source: GrType, target: GrType):
    for phi in homomorphisms(source.pi, target.pi):
        for f in coefficient_maps(source.coeff, target.coeff):
            try:
                check_equivariant(f, source.module, target.module, phi)
            except NotEquivariant:
                continue
            yield phi, f


def crossed_homomorphisms(module: PiModule) -> int:
    pi, coeff = module.pi, module.coeff
    count = 0
    for values in itertools.product(list(coeff.elements()), repeat=pi.order - 1):
        t = (coeff.zero,) + tuple(values)
        if all(t[pi.mul(x, y)] == coeff.add(t[x], module.act(x, t[y])) for x in pi.elements for y in pi.elements):
            count += 1
    return count


def test_realize_and_classify_over_acting_modules():
    types = acting_types()
    realized = obstructed = 0
    for source, target in itertools.product(types, repeat=2):
        for phi, f in equivariant_types(source, target):
            k = obstruction(phi, f, source, target)
            if class_solve(k, zero_target=False) is None:
                with pytest.raises(ObstructionNonzero):
                    realize(phi, f, source, target)
                obstructed += 1
                continue
            functor = realize(phi, f, source, target)
            assert is_gr_functor(functor)
            functors = classify(phi, f, source, target)
            assert len(functors) == cohomology_group(functor.module, 2).order
            assert len(homotopy_classes(functors)) == len(functors)
            assert len(functor_automorphisms(functor)) == crossed_homomorphisms(functor.module)
            realized += 1
    assert realized > 0
    assert obstructed > 0


def test_composite_of_realized_functors():
    types = [t for t in acting_types() if t.pi.order == 2]
    realizable = {}
    for i, j in itertools.product(range(len(types)), repeat=2):
        realizable[(i, j)] = [(phi, f) for phi, f in equivariant_types(types[i], types[j])
                              if class_solve(obstruction(phi, f, types[i], types[j]), zero_target=False) is not None]
    composed = 0
    for i, j, k in itertools.product(range(len(types)), repeat=3):
        if not realizable[(i, j)] or not realizable[(j, k)]:
            continue
        first_source, middle, last = types[i], types[j], types[k]
        first = realize(*realizable[(i, j)][-1], first_source, middle)
        second = realize(*realizable[(j, k)][-1], middle, last)
        composite = compose(second, first)
        assert is_gr_functor(composite)
        assert composite.phi == second.phi.after(first.phi)
        assert composite.f == second.f.after(first.f)
        classes = classify(composite.phi, composite.f, first_source, last)
        assert sum(are_homotopic(composite, other) is not None for other in classes) == 1
        composed += 1
    assert composed > 0
