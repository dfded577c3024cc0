from __future__ import annotations

import numpy as np
import pytest

from drsp_orth.canonical import generate_ordered_type
from drsp_orth.core_types import SymbolicMatrix, validate_special_orthogonal
from drsp_orth.errors import BrokenPath, NotSemiOrthogonal, SolutionMismatch
from drsp_orth.operators import Couple, Division
from drsp_orth.sign_solver import (
    DivisionTable,
    assign_signs,
    build_equations,
    compute_divisions,
    equation_rows,
    find_solution,
    trace_equation,
)


def test_divisions_of_ordered_four():
    T = compute_divisions(generate_ordered_type(2))
    pairs = [[(c.lo, c.hi) for c in d.couples] for d in T.divisions]
    assert pairs == [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]]
    assert all(v is None for v in T.values())


def test_divisions_of_two():
    T = compute_divisions(SymbolicMatrix.from_cells([[1, 2], [2, -1]]))
    assert T.divisions[0].couples == (Couple(0, 1, 1),)
    T = compute_divisions(SymbolicMatrix.from_cells([[1, 2], [2, 1]]))
    assert T.divisions[0].couples == (Couple(0, 1, None),)


def test_divisions_reject_unpairable():
    m = SymbolicMatrix.semi(np.array([[0, 1, 2, 3], [1, 2, 3, 0], [2, 3, 0, 1], [3, 0, 1, 2]]))
    with pytest.raises(NotSemiOrthogonal):
        compute_divisions(m)


def test_equations_for_two_are_empty():
    sys_ = build_equations(compute_divisions(generate_ordered_type(1)))
    assert sys_.n_rows == 0 and sys_.n_cols == 2


def test_four_equation_for_first_pair():
    T = compute_divisions(generate_ordered_type(2))
    rows = equation_rows(T)
    assert len(rows) == 3
    vars_, c, _ = next(r for r in rows if r[2][:2] == (0, 1))
    # op1: <0,1> -> 0, <2,3> -> 1; op2: <0,2> -> 2, <1,3> -> 3
    assert vars_ == (0, 1, 2, 3) and c == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_every_start_gives_the_same_row(n):
    T = compute_divisions(generate_ordered_type(n))
    N = T.order
    for a in range(N - 1):
        for b in range(a + 1, N - 1):
            seen = {}
            for i in range(N):
                vars_, c = trace_equation(T, a, b, i)
                seen.setdefault(frozenset(vars_), set()).add(c)
            assert len(seen) == N // 4
            assert all(len(cs) == 1 for cs in seen.values())


@pytest.mark.parametrize("n,shape", [(2, (3, 7)), (3, (42, 29)), (4, (420, 121))])
def test_system_shapes(n, shape):
    sys_ = build_equations(compute_divisions(generate_ordered_type(n)))
    assert sys_.shape == shape
    assert all(len(sys_.row_vars(r)) == 4 for r in range(sys_.n_rows))


def test_broken_path():
    N = 8
    d1 = Division([Couple(0, 1), Couple(2, 3), Couple(4, 5), Couple(6, 7)], N)
    d2 = Division([Couple(0, 2), Couple(1, 4), Couple(3, 6), Couple(5, 7)], N)
    # bypass the constructor: two operators whose couples do not form 4-cycles
    T = DivisionTable.__new__(DivisionTable)
    T.divisions = (d1, d2)
    T.order = N
    with pytest.raises(BrokenPath):
        trace_equation(T, 0, 1, 0)


def test_assign_two():
    m = generate_ordered_type(1)
    T = compute_divisions(m)
    assert assign_signs(m, T, [0]) == SymbolicMatrix.from_cells([[1, -2], [2, 1]])
    assert assign_signs(m, T, [1]) == SymbolicMatrix.from_cells([[1, 2], [2, -1]])


def test_assign_rejects_bad_solution():
    m = generate_ordered_type(2)
    T = compute_divisions(m)
    with pytest.raises(SolutionMismatch):
        assign_signs(m, T, [0] * 6)


def test_round_trip_through_divisions():
    m = generate_ordered_type(3)
    res = find_solution(m)
    T = compute_divisions(res.matrix)
    assert T.values() == tuple(res.solution)
    assert assign_signs(m, T, T.values()) == res.matrix


@pytest.mark.parametrize("n,found", [(1, True), (2, True), (3, True), (4, False)])
def test_find_solution(n, found):
    res = find_solution(generate_ordered_type(n))
    assert res.found is found
    if found:
        assert validate_special_orthogonal(res.matrix)
        assert res.matrix.strip_signs() == generate_ordered_type(n)
        assert res.rank_full == res.rank_coeff
    else:
        assert res.matrix is None and res.rank_full > res.rank_coeff


def test_find_solution_ignores_input_signs(quaternion4):
    assert find_solution(quaternion4).found


def test_find_solution_rejects_non_semi():
    m = SymbolicMatrix.semi(np.array([[0, 0, 1, 2], [1, 1, 0, 3], [2, 2, 3, 0], [3, 3, 2, 1]]))
    with pytest.raises(NotSemiOrthogonal):
        find_solution(m)
