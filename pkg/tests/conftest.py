"""Shared fixture algebras and module tables used across the test suite.

Two small bound quiver algebras over F2 drive most tests:

* ``ka2``   — path algebra of  1 --alpha--> 2  (hereditary, dim 3).
* ``ka3r``  — path algebra of  1 --alpha--> 2 --beta--> 3  modulo the
  composite ``alpha.beta`` (radical square zero, dim 5).

Both are self-opposite up to relabelling, which several duality tests use.
"""

import pytest

from tiltkit.algebra import Quiver, path_algebra
from tiltkit.linalg import Field
from tiltkit.modules import from_representation

F2 = Field.GF(2)


@pytest.fixture(scope="session")
def ka2():
    return path_algebra(Quiver(("1", "2"), (("alpha", "1", "2"),)), [], F2)


@pytest.fixture(scope="session")
def ka3r():
    q = Quiver(("1", "2", "3"), (("alpha", "1", "2"), ("beta", "2", "3")))
    return path_algebra(q, ["alpha.beta"], F2)


@pytest.fixture(scope="session")
def a3r_mods(ka3r):
    """The five indecomposables over ka3r keyed by conventional names."""
    return {
        "S1": from_representation(ka3r, (1, 0, 0), {}),
        "S2": from_representation(ka3r, (0, 1, 0), {}),
        "S3": from_representation(ka3r, (0, 0, 1), {}),
        "P1": from_representation(ka3r, (1, 1, 0), {"alpha": [[1]]}),
        "P2": from_representation(ka3r, (0, 1, 1), {"beta": [[1]]}),
    }


@pytest.fixture(scope="session")
def a2_mods(ka2):
    """Indecomposables over ka2: two simples and the projective cover of S1."""
    return {
        "S1": from_representation(ka2, (1, 0), {}),
        "S2": from_representation(ka2, (0, 1), {}),
        "P1": from_representation(ka2, (1, 1), {"alpha": [[1]]}),
    }


@pytest.fixture(scope="session")
def tilt_a2(ka2, a2_mods):
    """P1 (+) S1 over ka2: homological dimension 1."""
    from tiltkit.tilting import validate_tilting

    return validate_tilting(ka2, [a2_mods["P1"], a2_mods["S1"]], labels=("P1", "S1"))


@pytest.fixture(scope="session")
def tilt_a3r(ka3r, a3r_mods):
    """P1 (+) P2 (+) S1 over ka3r: homological dimension 2."""
    from tiltkit.tilting import validate_tilting

    return validate_tilting(
        ka3r,
        [a3r_mods["P1"], a3r_mods["P2"], a3r_mods["S1"]],
        labels=("P1", "P2", "S1"),
    )
