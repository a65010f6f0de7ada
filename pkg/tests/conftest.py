"""Shared algebra fixtures; cutoffs are kept small so the suite stays quick."""

from pathlib import Path

import pytest

from dglm.core.exactlin import ONE, ChainComplex
from dglm.core.gla_free import FreeGradedLie, LieElement, LieMorphism
from dglm.models import cp_inclusion, cp_model, disk_pairs, sphere_model

FIXTURES = Path(__file__).parent / "fixtures"


def two_term(differential: bool) -> ChainComplex:
    """``Q b -> Q a`` in degrees 1 and 0, with ``d b = a`` or ``d = 0``."""
    images = {1: {"b": {"a": ONE}}} if differential else {}
    return ChainComplex.build({0: ["a"], 1: ["b"]}, images, -1, 2, "acyclic" if differential else "split")


def gen(name: str, degree: int) -> LieElement:
    return LieElement(degree, {(name,): ONE})


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def cp1() -> FreeGradedLie:
    return cp_model(1).build(6)


@pytest.fixture
def cp2() -> FreeGradedLie:
    return cp_model(2).build(8)


@pytest.fixture
def s3() -> FreeGradedLie:
    return sphere_model(4).build(8)


@pytest.fixture
def cp1_cp2() -> LieMorphism:
    return cp_inclusion(1, 2).build_map(6)


@pytest.fixture
def disk1() -> LieMorphism:
    return disk_pairs()[0].file.build_map(8)


@pytest.fixture
def disk2() -> LieMorphism:
    return disk_pairs()[1].file.build_map(6)


@pytest.fixture
def ab() -> FreeGradedLie:
    """``L(a, b)``, ``|a| = 1``, ``|b| = 2``, ``db = a``."""
    return FreeGradedLie({"a": 1, "b": 2}, {"b": gen("a", 1)}, 6, name="X")
