import logging
from typing import Callable, List, TypeVar

from fastapi import APIRouter, Depends, HTTPException, Query, status

from app import services
from app.config import Settings, get_settings
from app.errors import InvalidInput, MismatchFound, NegativeAnswer
from app.schemas.files import FunctorFile, GroupFile, KernelFile, ModuleFile, StrictifyRequest
from app.schemas.reports import (
    AutReport,
    ClassifyReport,
    CohomologyReport,
    EMCheckReport,
    ExtensionsReport,
    GroupCheckReport,
    KernelObstructionReport,
    ObstructionReport,
    StrictifyReport,
)

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api", tags=["Categorical groups"])

Report = TypeVar("Report")


def _run(compute: Callable[[], Report]) -> Report:
    """Run a computation, mapping library errors onto HTTP errors."""
    try:
        return compute()
    except InvalidInput as e:
        logger.error(f"Invalid input: {str(e)}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    except NegativeAnswer as e:
        logger.error(f"Negative answer: {str(e)}")
        raise HTTPException(status_code=status.HTTP_409_CONFLICT, detail=str(e))
    except MismatchFound as e:
        logger.error(f"Consistency check failed: {str(e)}")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


def _orders(text: str) -> List[int]:
    try:
        orders = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
                            detail=f"expected comma-separated orders, got {text!r}")
    if any(d < 1 for d in orders):
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail="orders must be positive")
    return orders


@router.post(
    "/groups/check",
    response_model=GroupCheckReport,
    operation_id="check_group",
    summary="Validate a group",
    description="Check the group axioms on a multiplication table and identify the group by its order profile"
)
def check_group(group: GroupFile):
    return _run(lambda: services.group_check_report(group))


@router.post(
    "/groups/aut",
    response_model=AutReport,
    operation_id="group_automorphisms",
    summary="Automorphisms of a group",
    description="Aut(G), In(G), Out(G) with their tables, and the centre of G"
)
def group_automorphisms(group: GroupFile, settings: Settings = Depends(get_settings)):
    return _run(lambda: services.aut_report(group, cap=settings.GROUP_ORDER_CAP))


@router.post(
    "/cohomology",
    response_model=CohomologyReport,
    operation_id="cohomology",
    summary="Group cohomology",
    description="Invariant factors and representative cocycles of Hⁿ(Π, A) for n = 0..3"
)
def cohomology(
    module: ModuleFile,
    degree: int = Query(..., ge=0, le=3, description="Cohomological degree"),
    settings: Settings = Depends(get_settings)
):
    return _run(lambda: services.cohomology_report(module, degree, cap=settings.GROUP_ORDER_CAP))


@router.post(
    "/functors/obstruction",
    response_model=ObstructionReport,
    operation_id="functor_obstruction",
    summary="Obstruction of a functor type",
    description="The 3-cocycle φ*h' - f_*h and its class; the outcome is negative when the class is non-zero"
)
def functor_obstruction(functor: FunctorFile, settings: Settings = Depends(get_settings)):
    return _run(lambda: services.obstruction_report(functor, cap=settings.GROUP_ORDER_CAP))


@router.post(
    "/functors/classify",
    response_model=ClassifyReport,
    operation_id="functor_classify",
    summary="Functors up to homotopy",
    description="One representative g per homotopy class of functors of the given type (φ, f)"
)
def functor_classify(functor: FunctorFile, settings: Settings = Depends(get_settings)):
    return _run(lambda: services.classify_report(functor, cap=settings.GROUP_ORDER_CAP))


@router.post(
    "/kernels/obstruction",
    response_model=KernelObstructionReport,
    operation_id="kernel_obstruction",
    summary="Obstruction of an abstract kernel",
    description="The 3-cocycle in Z³(Π, ZG) of a kernel (Π, G, ψ) and whether extensions exist"
)
def kernel_obstruction(
    kernel: KernelFile,
    compare: bool = Query(True, description="Also compare with the reduction of Aut_G"),
    settings: Settings = Depends(get_settings)
):
    return _run(lambda: services.kernel_report(kernel, cap=settings.GROUP_ORDER_CAP, compare=compare))


@router.post(
    "/extensions",
    response_model=ExtensionsReport,
    operation_id="enumerate_extensions",
    summary="Extensions of a kernel",
    description="One extension G -> B -> Π per congruence class, with tables and factor sets"
)
def enumerate_extensions(kernel: KernelFile, settings: Settings = Depends(get_settings)):
    return _run(lambda: services.extensions_report(kernel, cap=settings.GROUP_ORDER_CAP,
                                                   ext_cap=settings.EXTENSION_ORDER_CAP))


@router.get(
    "/braided/emcheck",
    response_model=EMCheckReport,
    operation_id="em_check",
    summary="Trace map to quadratic maps",
    description="Checks that the trace H³_ab(M, N) -> Quad(M, N) is a group isomorphism"
)
def em_check(
    m: str = Query(..., description="Orders of the cyclic factors of M", example="2,2"),
    n: str = Query(..., description="Orders of the cyclic factors of N", example="2"),
    settings: Settings = Depends(get_settings)
):
    return _run(lambda: services.em_report(_orders(m), _orders(n), cap=settings.GROUP_ORDER_CAP))


@router.post(
    "/strictify",
    response_model=StrictifyReport,
    operation_id="strictify",
    summary="Strict model of a Gr-type",
    description="Pulls Aut_G back along ψ and returns an equivalence from the given type to its reduction"
)
def strictify(request: StrictifyRequest, settings: Settings = Depends(get_settings)):
    return _run(lambda: services.strictify_report(request.gr_type, request.realization,
                                                  cap=settings.GROUP_ORDER_CAP))
