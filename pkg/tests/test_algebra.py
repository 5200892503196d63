"""Quivers, path algebras with relations, and abstract algebra validation.

Frozen oracles: hand-computed multiplication tables for the two fixture
algebras (kA2, and kA3 modulo the composite of the two arrows), plus small
degenerate cases (loop quivers) worked out by hand.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiltkit.algebra import (
    FinDimAlgebra,
    Quiver,
    parse_path_expression,
    path_algebra,
)
from tiltkit.linalg import Field

F2 = Field.GF(2)
F3 = Field.GF(3)


def a2_quiver():
    return Quiver(vertices=("1", "2"), arrows=(("alpha", "1", "2"),))


def a3_quiver():
    return Quiver(vertices=("1", "2", "3"), arrows=(("alpha", "1", "2"), ("beta", "2", "3")))


def test_quiver_validation():
    with pytest.raises(ValueError):
        Quiver(vertices=("1", "1"), arrows=())
    with pytest.raises(ValueError):
        Quiver(vertices=("1",), arrows=(("a", "1", "2"),))
    with pytest.raises(ValueError):
        Quiver(vertices=("1",), arrows=(("a", "1", "1"), ("a", "1", "1")))


def test_path_algebra_a2_table():
    lam = path_algebra(a2_quiver(), [], F2)
    assert lam.dim == 3
    assert lam.basis_labels == ("e_1", "e_2", "alpha")
    e1, e2, al = range(3)
    def mul(i, j):
        return lam.mul_coords(lam.basis_coords(i), lam.basis_coords(j))
    # hand table: e1*e1=e1, e2*e2=e2, e1*alpha=alpha=alpha*e2, all else 0
    assert mul(e1, e1) == lam.basis_coords(e1)
    assert mul(e2, e2) == lam.basis_coords(e2)
    assert mul(e1, al) == lam.basis_coords(al)
    assert mul(al, e2) == lam.basis_coords(al)
    for i, j in [(e1, e2), (e2, e1), (e2, al), (al, e1), (al, al)]:
        assert all(x == 0 for x in mul(i, j))
    assert lam.idempotent_indices == (0, 1)


def test_path_algebra_a3_full_has_dim_6():
    lam = path_algebra(a3_quiver(), [], F2)
    assert lam.dim == 6
    assert "alpha.beta" in lam.basis_labels
    al = lam.basis_labels.index("alpha")
    be = lam.basis_labels.index("beta")
    ab = lam.basis_labels.index("alpha.beta")
    assert lam.mul_coords(lam.basis_coords(al), lam.basis_coords(be)) == lam.basis_coords(ab)
    # non-composable and reverse-order products vanish
    assert all(x == 0 for x in lam.mul_coords(lam.basis_coords(be), lam.basis_coords(al)))


def test_path_algebra_a3_with_radical_square_zero():
    lam = path_algebra(a3_quiver(), ["alpha.beta"], F2)
    assert lam.dim == 5
    assert lam.basis_labels == ("e_1", "e_2", "e_3", "alpha", "beta")
    al, be = 3, 4
    assert all(x == 0 for x in lam.mul_coords(lam.basis_coords(al), lam.basis_coords(be)))
    assert lam.radical_dim == 2
    assert lam.radical_power_dim(2) == 0


def test_path_algebra_a3_radical_filtration_without_relations():
    lam = path_algebra(a3_quiver(), [], F2)
    assert lam.radical_dim == 3
    assert lam.radical_power_dim(2) == 1
    assert lam.radical_power_dim(3) == 0


def test_loop_without_relations_is_rejected():
    q = Quiver(vertices=("1",), arrows=(("a", "1", "1"),))
    with pytest.raises(ValueError):
        path_algebra(q, [], F2)


def test_loop_with_square_zero_relation():
    q = Quiver(vertices=("1",), arrows=(("a", "1", "1"),))
    lam = path_algebra(q, ["a.a"], F2)
    assert lam.dim == 2
    a = lam.basis_labels.index("a")
    assert all(x == 0 for x in lam.mul_coords(lam.basis_coords(a), lam.basis_coords(a)))


def test_commutative_square_with_commutativity_relation():
    q = Quiver(
        vertices=("1", "2", "3", "4"),
        arrows=(("a", "1", "2"), ("b", "1", "3"), ("c", "2", "4"), ("d", "3", "4")),
    )
    lam = path_algebra(q, ["a.c - b.d"], F3)
    # paths: 4 trivial + 4 arrows + 2 length-2 paths identified into 1 class
    assert lam.dim == 9
    ac = lam.basis_labels.index("a.c")
    a, c, b, d = (lam.basis_labels.index(x) for x in "acbd")
    assert lam.mul_coords(lam.basis_coords(a), lam.basis_coords(c)) == lam.basis_coords(ac)
    # b.d is not a basis path; it reduces to the class of a.c
    assert lam.mul_coords(lam.basis_coords(b), lam.basis_coords(d)) == lam.basis_coords(ac)


def test_inhomogeneous_and_nonparallel_relations_rejected():
    q = a3_quiver()
    with pytest.raises(ValueError):
        path_algebra(q, ["alpha"], F2)  # length 1: not admissible
    with pytest.raises(ValueError):
        path_algebra(q, ["alpha.beta - alpha"], F2)  # mixed lengths
    q2 = Quiver(
        vertices=("1", "2", "3"),
        arrows=(("a", "1", "2"), ("b", "2", "3"), ("c", "1", "2"), ("d", "2", "1")),
    )
    with pytest.raises(ValueError):
        path_algebra(q2, ["a.b - a.d"], F2)  # terms not parallel


def test_parse_path_expression():
    q = a3_quiver()
    terms = parse_path_expression(q, "alpha.beta")
    assert terms == [(1, ("alpha", "beta"))]
    terms = parse_path_expression(q, "2*alpha.beta - alpha.beta")
    assert terms == [(2, ("alpha", "beta")), (-1, ("alpha", "beta"))]
    with pytest.raises(ValueError):
        parse_path_expression(q, "alpha.gamma")
    with pytest.raises(ValueError):
        parse_path_expression(q, "beta.alpha")  # not composable


def test_right_and_left_mult_matrices():
    lam = path_algebra(a2_quiver(), [], F2)
    al = lam.basis_coords(2)
    r = lam.right_mult_matrix(al)
    # e1*alpha = alpha, e2*alpha = 0, alpha*alpha = 0
    assert r.row(0) == (0, 0, 1)
    assert r.row(1) == (0, 0, 0)
    assert r.row(2) == (0, 0, 0)
    l = lam.left_mult_matrix(al)
    # alpha*e1 = 0, alpha*e2 = alpha, alpha*alpha = 0
    assert l.row(0) == (0, 0, 0)
    assert l.row(1) == (0, 0, 1)
    assert l.row(2) == (0, 0, 0)


def test_unit_coordinates():
    lam = path_algebra(a3_quiver(), ["alpha.beta"], F2)
    u = lam.unit_coords
    for i in range(lam.dim):
        assert lam.mul_coords(u, lam.basis_coords(i)) == lam.basis_coords(i)
        assert lam.mul_coords(lam.basis_coords(i), u) == lam.basis_coords(i)


def test_opposite_algebra_flips_products():
    lam = path_algebra(a3_quiver(), [], F2)
    op = lam.opposite()
    assert op.dim == lam.dim
    for i in range(lam.dim):
        for j in range(lam.dim):
            assert op.mul_coords(op.basis_coords(i), op.basis_coords(j)) == lam.mul_coords(
                lam.basis_coords(j), lam.basis_coords(i)
            )
    assert op.idempotent_indices == lam.idempotent_indices
    assert op.radical_dim == lam.radical_dim
    # graded pieces transpose
    assert op.basis_piece(lam.basis_labels.index("alpha")) == tuple(
        reversed(lam.basis_piece(lam.basis_labels.index("alpha")))
    )


def test_associativity_is_validated():
    # structure constants for a fake 2-dim "algebra" where (b*b)*b != b*(b*b)
    labels = ("e", "b")
    structure = [
        [(1, 0), (0, 1)],
        [(0, 1), (1, 0)],
    ]
    # e is unit, b*b = e: this IS associative (group algebra of Z/2 over F2,
    # local with radical spanned by e+b):
    FinDimAlgebra(F2, labels, structure, idempotent_indices=(0,), radical_rows=[[1, 1]])
    bad = [
        [(1, 0), (0, 1)],
        [(0, 1), (0, 1)],
    ]
    # b*b = b but e unit: (b*b)*b = b*b = b; b*(b*b) = b*b = b: associative too;
    # but b idempotent not listed and b = unit fails; instead break associativity:
    worse = [
        [(1, 0), (0, 1)],
        [(1, 1), (1, 0)],
    ]
    with pytest.raises(ValueError):
        FinDimAlgebra(F2, labels, worse, idempotent_indices=(0,), radical_rows=[])
    del bad


def test_split_basic_validation_rejects_bad_radical():
    lam = path_algebra(a2_quiver(), [], F2)
    # wrong radical (zero) for kA2: diagonal dim count fails at validation
    with pytest.raises(ValueError):
        FinDimAlgebra(
            lam.field,
            lam.basis_labels,
            [[lam.mul_coords(lam.basis_coords(i), lam.basis_coords(j)) for j in range(3)] for i in range(3)],
            idempotent_indices=(0, 1),
            radical_rows=[],
        )


@given(st.integers(min_value=0, max_value=2**15 - 1), st.integers(min_value=0, max_value=2**15 - 1), st.integers(min_value=0, max_value=2**15 - 1))
@settings(max_examples=30)
def test_random_elements_multiply_associatively(xi, yi, zi):
    lam = path_algebra(a3_quiver(), ["alpha.beta"], F2)
    def coords(n):
        return tuple((n >> k) & 1 for k in range(lam.dim))
    x, y, z = coords(xi), coords(yi), coords(zi)
    left = lam.mul_coords(lam.mul_coords(x, y), z)
    right = lam.mul_coords(x, lam.mul_coords(y, z))
    assert left == right
