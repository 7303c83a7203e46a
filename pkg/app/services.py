"""Service layer shared by the CLI and the HTTP API.

Loads input files, runs the computations and returns report models. A
``NegativeAnswer`` becomes a report with ``outcome = "negative"``; invalid
input propagates as ``InvalidInput``.
"""
import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from app.braided import BraidedGrType, em_check, make_braided
from app.cohomology import Cochain, PiModule, cocycle_group, cohomology_group
from app.errors import FileFormatError, InvalidInput, NotACocycle, ObstructionNonzero
from app.extensions import (
    AbstractKernel,
    Extension,
    compare_with_reduction,
    enumerate_extensions,
    factor_set_of,
    kernel_obstruction,
    make_kernel,
)
from app.functors import GrFunctorData, classify, is_gr_functor, obstruction_class
from app.models.abelian import AbelianHom, FiniteAbelianGroup
from app.models.groups import FiniteGroup, automorphisms, center, identify, make_hom, validate_group
from app.schemas.files import (
    CochainFile,
    FunctorFile,
    GrTypeFile,
    GroupFile,
    KernelFile,
    ModuleFile,
    parse_key,
)
from app.schemas.reports import (
    AutReport,
    ClassifyReport,
    CochainModel,
    CohomologyReport,
    EMCheckReport,
    ExtensionModel,
    ExtensionsReport,
    GroupCheckReport,
    GroupModel,
    KernelObstructionReport,
    ObstructionReport,
    StrictifyReport,
)
from app.skeletal import GrType, make_gr_type, strictify

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)


# Loading

@contextmanager
def _located(path: Optional[Path]) -> Iterator[None]:
    """Prefix validation failures with the file they came from."""
    try:
        yield
    except InvalidInput as exc:
        if path is not None and not isinstance(exc, FileFormatError):
            exc.message = f"{path}: {exc.message}"
            exc.args = (exc.message,)
        raise


def read_model(path: Path, model: Type[Model]) -> Model:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise FileFormatError(f"cannot read file ({exc.strerror})", str(path))
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}", str(path))
    return parse_model(data, model, path)


def parse_model(data, model: Type[Model], path: Optional[Path] = None) -> Model:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        raise FileFormatError(error["msg"], str(path) if path else None, field)


def _resolve(ref: Union[BaseModel, str], model: Type[Model], base: Optional[Path]) -> Tuple[Model, Optional[Path]]:
    if not isinstance(ref, str):
        return ref, base
    if base is None:
        raise FileFormatError(f"file references are not allowed here: {ref!r}")
    path = (base / ref) if not Path(ref).is_absolute() else Path(ref)
    return read_model(path, model), path.parent


def group_from(ref: Union[GroupFile, str], base: Optional[Path] = None) -> FiniteGroup:
    model, _ = _resolve(ref, GroupFile, base)
    return validate_group(model.table, names=model.elements, label=model.name)


def group_to_file(group: FiniteGroup) -> GroupFile:
    return GroupFile(name=group.label, elements=[group.name(a) for a in group.elements],
                     table=[list(row) for row in group.table])


def module_from(ref: Union[ModuleFile, str], base: Optional[Path] = None) -> PiModule:
    model, base = _resolve(ref, ModuleFile, base)
    pi = group_from(model.group, base)
    coeff = FiniteAbelianGroup(tuple(model.invariant_factors))
    if model.action is None:
        return PiModule.trivial(pi, coeff)
    for x, matrix in enumerate(model.action):
        if len(matrix) != coeff.rank or any(len(row) != coeff.rank for row in matrix):
            raise FileFormatError(f"action matrix of element {x} must be {coeff.rank}x{coeff.rank}",
                                  field=f"action.{x}")
    return PiModule.from_matrices(pi, coeff, model.action)


def module_to_file(module: PiModule) -> ModuleFile:
    action = None if module.is_trivial else [[list(row) for row in a.matrix] for a in module.action]
    return ModuleFile(group=group_to_file(module.pi), invariant_factors=list(module.coeff.invariant_factors),
                      action=action)


def cochain_from(module: PiModule, degree: int, entries) -> Cochain:
    mapping = {}
    for key, value in (entries or {}).items():
        if len(value) != module.coeff.rank:
            raise FileFormatError(f"value of {key!r} must have {module.coeff.rank} coordinates", field=key)
        mapping[parse_key(key)] = value
    return Cochain.from_mapping(module, degree, mapping)


def cochain_model(c: Cochain) -> CochainModel:
    return CochainModel(degree=c.degree,
                        entries={",".join(str(x) for x in key): list(value) for key, value in c.entries})


def gr_type_from(ref: Union[GrTypeFile, str], base: Optional[Path] = None) -> Union[GrType, BraidedGrType]:
    """A Gr-type, or a braided one when the file carries η."""
    model, base = _resolve(ref, GrTypeFile, base)
    module = module_from(ModuleFile(group=model.group, invariant_factors=model.invariant_factors,
                                    action=model.action), base)
    h = cochain_from(module, 3, model.h)
    if model.eta is None:
        return make_gr_type(module, h)
    return make_braided(module, h, cochain_from(module, 2, model.eta))


def _plain(gr_type: Union[GrType, BraidedGrType]) -> GrType:
    return gr_type.base if isinstance(gr_type, BraidedGrType) else gr_type


def kernel_from(ref: Union[KernelFile, str], base: Optional[Path] = None, cap: Optional[int] = None) -> AbstractKernel:
    model, base = _resolve(ref, KernelFile, base)
    return make_kernel(group_from(model.pi, base), group_from(model.g, base), model.psi, cap)


def functor_from(model: FunctorFile, base: Optional[Path] = None):
    source = _plain(gr_type_from(model.source, base))
    target = _plain(gr_type_from(model.target, base))
    if len(model.phi) != source.pi.order:
        raise FileFormatError("phi must list one image per element of π₀ of the source", field="phi")
    phi = make_hom(source.pi, target.pi, model.phi)
    if len(model.f) != source.coeff.rank or any(len(v) != target.coeff.rank for v in model.f):
        raise FileFormatError("f must give one image in A' per coordinate generator of A", field="f")
    f = AbelianHom.from_images(source.coeff, target.coeff, model.f)
    g = None
    if model.g is not None:
        g = cochain_from(target.module.restrict(phi), 2, model.g)
    return source, target, phi, f, g


# Reports
#
# Each report has a file entry point taking a path and an inline one taking a
# parsed model, in which string references are rejected.

def group_check_report(model: GroupFile, base: Optional[Path] = None) -> GroupCheckReport:
    group = group_from(model, base)
    return GroupCheckReport(name=group.label, order=group.order, abelian=group.is_abelian,
                            profile=identify(group), element_orders=[group.element_order(a) for a in group.elements])


def check_group(path: Path) -> GroupCheckReport:
    with _located(path):
        return group_check_report(read_model(path, GroupFile), Path(path).parent)


def aut_report(model: GroupFile, base: Optional[Path] = None, cap: Optional[int] = None) -> AutReport:
    group = group_from(model, base)
    data = automorphisms(group, cap)
    return AutReport(
        name=group.label,
        aut_order=data.aut.order,
        inner_order=len(data.inner),
        out_order=data.out.order,
        center=center(group),
        automorphisms=[list(m) for m in data.maps],
        out_representatives=list(data.out_reps),
        aut_table=[list(row) for row in data.aut.table],
        out_table=[list(row) for row in data.out.table],
    )


def group_automorphisms(path: Path, cap: Optional[int] = None) -> AutReport:
    with _located(path):
        return aut_report(read_model(path, GroupFile), Path(path).parent, cap)


def cohomology_report(model: ModuleFile, degree: int, base: Optional[Path] = None, cap: Optional[int] = None,
                      emit: Optional[Path] = None) -> CohomologyReport:
    module = module_from(model, base)
    group = cohomology_group(module, degree, cap)
    if emit is not None:
        _emit(emit, "cocycle", [
            CochainFile(module=module_to_file(module), degree=degree, entries=cochain_model(rep).entries)
            for rep in group.representatives
        ])
    return CohomologyReport(
        group=module.pi.label,
        coefficients=str(module.coeff),
        degree=degree,
        invariant_factors=list(group.invariant_factors),
        order=group.order,
        representatives=[cochain_model(rep) for rep in group.representatives],
    )


def cohomology(path: Path, degree: int, cap: Optional[int] = None, emit: Optional[Path] = None) -> CohomologyReport:
    with _located(path):
        return cohomology_report(read_model(path, ModuleFile), degree, Path(path).parent, cap, emit)


def obstruction_report(model: FunctorFile, base: Optional[Path] = None, cap: Optional[int] = None) -> ObstructionReport:
    source, target, phi, f, _ = functor_from(model, base)
    result = obstruction_class(phi, f, source, target, cap)
    report = ObstructionReport(k=cochain_model(result.k), cohomology=list(result.cohomology.invariant_factors),
                               coordinates=list(result.coordinates), vanishes=result.vanishes)
    if not result.vanishes:
        report.outcome = "negative"
        report.message = "obstruction class is non-zero: no functor of this type exists"
    return report


def functor_obstruction(path: Path, cap: Optional[int] = None) -> ObstructionReport:
    with _located(path):
        return obstruction_report(read_model(path, FunctorFile), Path(path).parent, cap)


def classify_report(model: FunctorFile, base: Optional[Path] = None, cap: Optional[int] = None) -> ClassifyReport:
    source, target, phi, f, g = functor_from(model, base)
    if g is not None:
        verdict = is_gr_functor(GrFunctorData(source, target, phi, f, g))
        if not verdict:
            raise NotACocycle("the given g does not satisfy φ*h' - f_*h = ∂g", witness=verdict.witness)
    module = target.module.restrict(phi)
    h2 = cohomology_group(module, 2, cap)
    try:
        functors = classify(phi, f, source, target, cap)
    except ObstructionNonzero as exc:
        logger.info("classification is empty: %s", exc)
        return ClassifyReport(outcome="negative", h2=list(h2.invariant_factors), count=0, representatives=[],
                              automorphisms=0, message=exc.message, coordinates=list(exc.coordinates))
    return ClassifyReport(
        h2=list(h2.invariant_factors),
        count=len(functors),
        representatives=[cochain_model(functor.g) for functor in functors],
        automorphisms=cocycle_group(module, 1, cap).group.order,
    )


def functor_classify(path: Path, cap: Optional[int] = None) -> ClassifyReport:
    with _located(path):
        return classify_report(read_model(path, FunctorFile), Path(path).parent, cap)


def kernel_report(model: KernelFile, base: Optional[Path] = None, cap: Optional[int] = None,
                  compare: bool = True) -> KernelObstructionReport:
    kernel = kernel_from(model, base, cap)
    data = kernel_obstruction(kernel, cap)
    report = KernelObstructionReport(
        lifts=[list(m) for m in data.lifts],
        f=[list(row) for row in data.f],
        centre=str(data.centre.module.coeff),
        k=cochain_model(data.k),
        cohomology=list(data.cohomology.invariant_factors),
        coordinates=list(data.coordinates),
        has_extensions=data.vanishes,
    )
    if compare:
        comparison = compare_with_reduction(kernel, cap)
        report.same_class = comparison.same_class
        report.opposite_class = comparison.opposite_class
    if not data.vanishes:
        report.outcome = "negative"
    return report


def kernel_obstruction_file(path: Path, cap: Optional[int] = None, compare: bool = True) -> KernelObstructionReport:
    with _located(path):
        return kernel_report(read_model(path, KernelFile), Path(path).parent, cap, compare)


def extension_model(extension: Extension) -> ExtensionModel:
    factor_set = factor_set_of(extension)
    return ExtensionModel(
        group=GroupModel(**group_to_file(extension.b).model_dump()),
        profile=extension.profile,
        psi_induced=list(extension.psi_induced.map),
        phi=[list(m) for m in factor_set.phi],
        f=[list(row) for row in factor_set.f],
    )


def extensions_report(model: KernelFile, base: Optional[Path] = None, cap: Optional[int] = None,
                      ext_cap: Optional[int] = None, emit: Optional[Path] = None) -> ExtensionsReport:
    kernel = kernel_from(model, base, cap)
    found = enumerate_extensions(kernel, cap, ext_cap)
    h2 = cohomology_group(kernel_obstruction(kernel, cap).centre.module, 2, cap)
    if emit is not None:
        _emit(emit, "extension", [group_to_file(extension.b) for extension in found])
    report = ExtensionsReport(h2=list(h2.invariant_factors), count=len(found),
                              extensions=[extension_model(extension) for extension in found])
    if not found:
        report.outcome = "negative"
        report.message = "obstruction class is non-zero: no extensions"
    return report


def extensions(path: Path, cap: Optional[int] = None, ext_cap: Optional[int] = None,
               emit: Optional[Path] = None) -> ExtensionsReport:
    with _located(path):
        return extensions_report(read_model(path, KernelFile), Path(path).parent, cap, ext_cap, emit)


def em_report(m_orders: Sequence[int], n_orders: Sequence[int], cap: Optional[int] = None) -> EMCheckReport:
    m = FiniteAbelianGroup.from_orders(*m_orders)
    n = FiniteAbelianGroup.from_orders(*n_orders)
    result = em_check(m, n, cap)
    return EMCheckReport(
        m=str(m),
        n=str(n),
        h3_ab=list(result.h3_ab_factors),
        h3_ab_order=result.h3_ab_order,
        quad_order=result.quad_order,
        quad_order_without_evenness=result.quad_order_without_evenness,
        bijective=result.bijective,
        traces={",".join(str(x) for x in element) or "0": [list(v) for v in values]
                for element, values in result.matching},
    )


def strictify_report(gr_type_model: GrTypeFile, kernel_model: KernelFile, gr_type_base: Optional[Path] = None,
                     kernel_base: Optional[Path] = None, cap: Optional[int] = None) -> StrictifyReport:
    gr_type = _plain(gr_type_from(gr_type_model, gr_type_base))
    kernel = kernel_from(kernel_model, kernel_base, cap)
    if kernel.pi != gr_type.pi:
        raise FileFormatError("the realization's Π differs from π₀ of the Gr-type", field="pi")
    result = strictify(gr_type, kernel.g, kernel.psi, cap)
    functor = result.functor
    coeff = gr_type.coeff
    return StrictifyReport(
        objects=result.category.objects.order,
        stick=list(result.reduction.stick),
        pi1=str(result.reduction.pi1),
        h_reduced=cochain_model(result.reduction.h),
        f=[list(functor.f(coeff.unit(j))) for j in range(coeff.rank)],
        g=cochain_model(functor.g),
    )


def strictify_files(gr_type_path: Path, kernel_path: Path, cap: Optional[int] = None) -> StrictifyReport:
    with _located(gr_type_path):
        gr_type_model = read_model(gr_type_path, GrTypeFile)
    with _located(kernel_path):
        kernel_model = read_model(kernel_path, KernelFile)
    return strictify_report(gr_type_model, kernel_model, Path(gr_type_path).parent, Path(kernel_path).parent, cap)


def _emit(directory: Path, stem: str, models: List[BaseModel]) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for i, model in enumerate(models):
        target = directory / f"{stem}_{i}.json"
        target.write_text(model.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8")
    logger.info("wrote %d %s files to %s", len(models), stem, directory)
