from __future__ import annotations

import itertools

import numpy as np
import pytest

from drsp_orth.canonical import (
    MappingTable,
    column_operators,
    conjugate,
    feasibility,
    generate_ordered_type,
    order_mapping_table,
    ordered_generators,
    simplify_to_ordered,
)
from drsp_orth.core_types import SymbolicMatrix, validate_special_orthogonal
from drsp_orth.errors import NotCooperative, NotGeneratorSet, NotSemiOrthogonal
from drsp_orth.operators import SignedPermutation, compose

ORDERED_4 = [
    [0, 1, 2, 3],
    [1, 0, 3, 2],
    [2, 3, 0, 1],
    [3, 2, 1, 0],
]

ORDERED_8 = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 0, 1, 6, 7, 4, 5],
    [3, 2, 1, 0, 7, 6, 5, 4],
    [4, 5, 6, 7, 0, 1, 2, 3],
    [5, 4, 7, 6, 1, 0, 3, 2],
    [6, 7, 4, 5, 2, 3, 0, 1],
    [7, 6, 5, 4, 3, 2, 1, 0],
]


def test_ordered_type_literal():
    assert generate_ordered_type(1).indices.tolist() == [[0, 1], [1, 0]]
    assert generate_ordered_type(2).indices.tolist() == ORDERED_4
    assert generate_ordered_type(3).indices.tolist() == ORDERED_8


def test_ordered_type_nests():
    big = generate_ordered_type(5).indices
    for n in range(1, 5):
        N = 2 ** n
        assert big[:N, :N].tolist() == generate_ordered_type(n).indices.tolist()


def direct_table(gens):
    """``t_i`` = product of the generators selected by the bits of ``i``, applied to 0."""
    N = gens[0].order
    out = []
    for i in range(N):
        x = 0
        for m, g in enumerate(gens):
            if i >> m & 1:
                x = g.perm[x]
        out.append(x)
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_identity_table_for_ordered_generators(n):
    assert order_mapping_table(ordered_generators(n)).table == tuple(range(2 ** n))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_conjugated_generators(n, rng):
    for _ in range(20):
        pi = rng.permutation(2 ** n)
        gens = [conjugate(g, pi) for g in ordered_generators(n)]
        order = rng.permutation(n)
        gens = [gens[k] for k in order]
        t = order_mapping_table(gens)
        assert t.is_mapping_table(gens)
        assert t.is_ordered(gens)
        assert t.is_strongly_ordered(gens)
        assert list(t.table) == direct_table(gens)


def test_shared_couple_not_cooperative():
    g = ordered_generators(3)
    # shares the couple <0,1> with XOR 1
    other = SignedPermutation([1, 0, 4, 5, 2, 3, 7, 6], None, False)
    with pytest.raises(NotCooperative):
        order_mapping_table([g[0], other, g[2]])


def test_dependent_set_rejected():
    g = ordered_generators(3)
    with pytest.raises(NotGeneratorSet):
        order_mapping_table([g[0], g[1], compose(g[0], g[1])])


def test_wrong_size_rejected():
    with pytest.raises(NotGeneratorSet):
        order_mapping_table(ordered_generators(2)[:1])


def test_simplify_identity():
    s = simplify_to_ordered(generate_ordered_type(3))
    assert s.row_perm == s.col_perm == tuple(range(8))


def test_simplify_rotated_columns():
    m = generate_ordered_type(3)
    rot = [(c + 3) % 8 for c in range(8)]
    rotated = m.permuted(range(8), rot)
    s = simplify_to_ordered(rotated)
    assert s.row_perm == tuple(range(8))
    assert s.apply(rotated) == m
    # rotation undone, then columns sorted by where they send row 0
    assert [(rot[c] ^ 3) for c in s.col_perm] == list(range(8))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_simplify_scrambled(n, rng):
    N = 2 ** n
    base = generate_ordered_type(n)
    for _ in range(25):
        rows, cols = rng.permutation(N), rng.permutation(N)
        names = rng.permutation(N)
        m = base.permuted(rows, cols).relabeled(names)
        s = simplify_to_ordered(m)
        assert s.apply(m) == base
        dense = m.indices
        E, F = s.row_matrix(), s.col_matrix()
        assert np.array_equal(E @ dense @ F, s.apply(m).relabeled(np.argsort(s.relabel)).indices)


def test_simplify_rejects_non_semi():
    m = SymbolicMatrix.semi(np.array([[0, 0, 1, 2], [1, 1, 0, 3], [2, 2, 3, 0], [3, 3, 2, 1]]))
    with pytest.raises(NotSemiOrthogonal):
        simplify_to_ordered(m)


def test_column_operators_form_group():
    n = 3
    ops = column_operators(generate_ordered_type(n))
    table = {op: i for i, op in enumerate(ops)}
    for a, b in itertools.product(ops, repeat=2):
        ab = compose(a, b)
        assert ab in table
        assert ab == compose(b, a)
    assert all(compose(a, a).perm == tuple(range(8)) for a in ops)


@pytest.mark.parametrize("n,ok", [(1, True), (2, True), (3, True), (4, False), (6, False)])
def test_feasibility(n, ok):
    f = feasibility(n)
    assert f.feasible is ok
    if ok:
        assert validate_special_orthogonal(f.witness)
    if n == 6:
        assert f.method == "nesting"
