import copy
from typing import Generator

from pytest import fixture

import locus.conf  # noqa: F401
from locus.core.field import FieldSpec, field_create
from locus.core.oracle import Budget
from locus.core.singleton import Singleton


@fixture(scope="function", autouse=True)
def locus_restore_singletons() -> Generator[None, None, None]:
    """
    Restore singletons state after the function returns
    """
    state = copy.deepcopy(Singleton.get_state())
    yield
    Singleton.set_state(state)


@fixture(scope="session")
def gf9() -> FieldSpec:
    return field_create(3, 2)


@fixture(scope="session")
def gf13() -> FieldSpec:
    return field_create(13)


@fixture(scope="session")
def gf97() -> FieldSpec:
    return field_create(97)


@fixture(scope="session")
def gf163() -> FieldSpec:
    return field_create(163)


@fixture(scope="function")
def small_budget() -> Budget:
    return Budget(max_enumerations=10**5, max_patterns=1000, chunk_size=4096)
