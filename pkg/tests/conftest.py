from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from app.services.groups import catalog_group, group_order, sign_lattice, trivial_lattice
from app.services.lattices import make_lattice, regular_lattice
from app.services.linalg import RMatrix
from app.services.witt import make_context

TESTDATA = Path(__file__).resolve().parent.parent / "testdata"


def testdata_path(*parts: str) -> Path:
    return TESTDATA.joinpath(*parts)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def ctx2():
    """W_6(F_2) = Z/64."""
    return make_context(2, 1, 6)


@pytest.fixture
def c2():
    return catalog_group("C2")


@pytest.fixture
def oc2(c2, ctx2):
    """O C_2 over Z/64 with basis ((), (1 2))."""
    return group_order(c2, ctx2)


@pytest.fixture
def regular(oc2):
    return regular_lattice(oc2)


@pytest.fixture
def plus(oc2):
    return trivial_lattice(oc2)


@pytest.fixture
def minus(c2, oc2):
    return sign_lattice(c2, oc2)


@pytest.fixture
def diagonal(oc2):
    """O₊ ⊕ O₋ written directly: Δ(g) = diag(1, -1)."""
    ctx = oc2.ctx
    return make_lattice(oc2, [RMatrix.identity(ctx, 2), RMatrix.diagonal(ctx, [1, -1])], name="L_d")
