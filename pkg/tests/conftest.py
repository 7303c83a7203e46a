import os
from pathlib import Path

import hypothesis
import pytest

from app.models.groups import (
    abelian_group,
    cyclic_group,
    dihedral_group,
    quaternion_group,
    symmetric_group,
)

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("dev", max_examples=25, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture
def samples() -> Path:
    return SAMPLES


@pytest.fixture
def z1():
    return cyclic_group(1)


@pytest.fixture
def z2():
    return cyclic_group(2)


@pytest.fixture
def z3():
    return cyclic_group(3)


@pytest.fixture
def z4():
    return cyclic_group(4)


@pytest.fixture
def z6():
    return cyclic_group(6)


@pytest.fixture
def v4():
    return abelian_group(2, 2)


@pytest.fixture
def s3():
    return symmetric_group(3)


@pytest.fixture
def d4():
    return dihedral_group(4)


@pytest.fixture
def q8():
    return quaternion_group()
